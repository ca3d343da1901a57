#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <vector>

#include "circattn/analysis.hpp"
#include "circattn/attention.hpp"
#include "circattn/rng.hpp"
#include "circattn/structured.hpp"

using namespace circattn;

namespace {

std::filesystem::path temp_file(const char* stem) {
  return std::filesystem::temp_directory_path() /
         (std::string(stem) + "-" + std::to_string(::getpid()) + ".pgm");
}

}  // namespace

TEST_CASE("similarity of a materialized BCCB matrix is one") {
  SplitMix64 rng(31);
  const GridShape s{3, 4};
  structured::BccbKernel k{std::vector<double>(static_cast<std::size_t>(s.n())), s};
  for (auto& v : k.b) v = rng.uniform(-1.0, 1.0);
  const auto rep =
      analysis::bccb_similarity_report(structured::bccb_materialize(k), s);
  CHECK(rep.similarity == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.residual_fro <= 1e-12);
}

TEST_CASE("similarity of the upper-shift matrix on a 1x2 grid") {
  DenseMatrix a(2, 2);
  a.at(0, 1) = 1.0;
  const auto rep = analysis::bccb_similarity_report(a, GridShape{1, 2});
  CHECK(rep.similarity == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("row-softmaxed random matrix on a 14x14 grid scores in (0, 1]") {
  SplitMix64 rng(14);
  const GridShape s{14, 14};
  const int n = s.n();
  DenseMatrix a(n, n);
  for (int i = 0; i < n; ++i) {
    double m = -1e300;
    for (int j = 0; j < n; ++j) {
      a.at(i, j) = rng.uniform(-2.0, 2.0);
      m = std::max(m, a.at(i, j));
    }
    double denom = 0.0;
    for (int j = 0; j < n; ++j) {
      a.at(i, j) = std::exp(a.at(i, j) - m);
      denom += a.at(i, j);
    }
    for (int j = 0; j < n; ++j) a.at(i, j) /= denom;
  }
  const auto rep = analysis::bccb_similarity_report(a, s);
  CHECK(rep.similarity > 0.0);
  CHECK(rep.similarity <= 1.0);
  MESSAGE("14x14-grid softmaxed similarity = ", rep.similarity);
}

TEST_CASE("equivalent kernel of zero queries is uniform") {
  const GridShape s{2, 3};
  SequenceTensor q(s, 2), k(s, 2);
  const auto kern = analysis::extract_equivalent_kernel(q, k);
  for (double v : kern.b)
    CHECK(v == doctest::Approx(1.0 / s.n()).epsilon(1e-13));
}

TEST_CASE("equivalent kernel of a single token is [[1]]") {
  SequenceTensor q(GridShape{1, 1}, 3), k(GridShape{1, 1}, 3);
  q.at(0, 0) = 0.3;
  k.at(0, 1) = -2.0;
  const auto kern = analysis::extract_equivalent_kernel(q, k);
  REQUIRE(kern.b.size() == 1);
  CHECK(kern.b[0] == doctest::Approx(1.0));
}

TEST_CASE("equivalent kernel equals the first row of the dense softmax") {
  SplitMix64 rng(44);
  const GridShape s{4, 4};
  SequenceTensor q(s, 2), k(s, 2);
  for (auto& v : q.data) v = rng.uniform(-1.0, 1.0);
  for (auto& v : k.data) v = rng.uniform(-1.0, 1.0);
  const auto kern = analysis::extract_equivalent_kernel(q, k);

  const auto naive = attention::circulant_scores_naive(q, k);
  const auto dense =
      structured::bccb_materialize(attention::softmax_first_row(naive));
  double total = 0.0;
  for (int j = 0; j < s.n(); ++j) {
    CHECK(std::abs(kern.b[j] - dense.at(0, j)) <= 1e-10);
    CHECK(kern.b[j] > 0.0);
    total += kern.b[j];
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("grayscale quantization") {
  SUBCASE("min-max endpoints") {
    CHECK(analysis::quantize_grayscale({0.0, 1.0, 0.0, 0.0}) ==
          std::vector<int>{0, 255, 0, 0});
  }
  SUBCASE("constant maps to mid-gray") {
    CHECK(analysis::quantize_grayscale({0.25, 0.25, 0.25}) ==
          std::vector<int>{128, 128, 128});
  }
  SUBCASE("half rounds up") {
    CHECK(analysis::quantize_grayscale({0.0, 0.5, 1.0}) ==
          std::vector<int>{0, 128, 255});
  }
}

TEST_CASE("PGM export round trip") {
  SplitMix64 rng(3);
  const GridShape s{3, 5};
  structured::BccbKernel k{std::vector<double>(static_cast<std::size_t>(s.n())), s};
  for (auto& v : k.b) v = rng.uniform(0.0, 1.0);

  const auto path = temp_file("kernel-roundtrip");
  analysis::export_kernel_pgm(k, path);
  const auto img = analysis::parse_pgm(path);
  std::filesystem::remove(path);

  CHECK(img.width == s.w);
  CHECK(img.height == s.h);
  CHECK(img.maxval == 255);
  CHECK(img.pixels == analysis::quantize_grayscale(k.b));
}

TEST_CASE("single-pixel kernel exports as mid-gray") {
  const structured::BccbKernel k{{1.0}, GridShape{1, 1}};
  const auto path = temp_file("kernel-1x1");
  analysis::export_kernel_pgm(k, path);
  const auto img = analysis::parse_pgm(path);
  std::filesystem::remove(path);
  CHECK(img.pixels == std::vector<int>{128});
}

TEST_CASE("PGM export to an unwritable path raises IoError") {
  const structured::BccbKernel k{{0.0, 1.0}, GridShape{1, 2}};
  CHECK_THROWS_AS(
      analysis::export_kernel_pgm(k, "/nonexistent-dir/kernel.pgm"), IoError);
}

TEST_CASE("similarity is invariant under simultaneous 2D rolls of A") {
  SplitMix64 rng(9);
  const GridShape s{3, 3};
  const int n = s.n();
  DenseMatrix a(n, n);
  for (auto& v : a.data) v = rng.uniform(-1.0, 1.0);
  const double base = analysis::bccb_similarity_report(a, s).similarity;

  for (int dh = 0; dh < s.h; ++dh) {
    for (int dw = 0; dw < s.w; ++dw) {
      auto moved = [&](int idx) {
        const int ih = idx / s.w, iw = idx % s.w;
        return ((ih + dh) % s.h) * s.w + (iw + dw) % s.w;
      };
      DenseMatrix rolled(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) rolled.at(moved(i), moved(j)) = a.at(i, j);
      const double sim = analysis::bccb_similarity_report(rolled, s).similarity;
      CHECK(sim == doctest::Approx(base).epsilon(1e-12));
    }
  }
}
