#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "circattn/fft.hpp"
#include "circattn/rng.hpp"
#include "circattn/structured.hpp"

using namespace circattn;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Independent O(n^2) summation oracle.
ComplexVector naive_dft(const ComplexVector& x, int sign) {
  const std::size_t n = x.size();
  ComplexVector out(n);
  for (std::size_t k = 0; k < n; ++k) {
    double re = 0.0, im = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double ang = sign * kTwoPi * static_cast<double>((j * k) % n) / static_cast<double>(n);
      re += x.re[j] * std::cos(ang) - x.im[j] * std::sin(ang);
      im += x.re[j] * std::sin(ang) + x.im[j] * std::cos(ang);
    }
    out.re[k] = re;
    out.im[k] = im;
  }
  return out;
}

double max_err(const ComplexVector& a, const ComplexVector& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a.re[i] - b.re[i]));
    m = std::max(m, std::abs(a.im[i] - b.im[i]));
  }
  return m;
}

double max_abs(const ComplexVector& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max({m, std::abs(a.re[i]), std::abs(a.im[i])});
  return m;
}

ComplexVector random_cv(std::size_t n, SplitMix64& rng) {
  ComplexVector v(n);
  for (auto& x : v.re) x = rng.uniform(-1.0, 1.0);
  for (auto& x : v.im) x = rng.uniform(-1.0, 1.0);
  return v;
}

SequenceTensor random_tensor(GridShape s, int d, SplitMix64& rng) {
  SequenceTensor t(s, d);
  for (auto& v : t.data) v = rng.uniform(-1.0, 1.0);
  return t;
}

}  // namespace

TEST_CASE("impulse transforms to constant") {
  ComplexVector x(4);
  x.re = {1, 0, 0, 0};
  const auto spec = fft::dft1d_forward(x);
  for (int i = 0; i < 4; ++i) {
    CHECK(spec.re[i] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(spec.im[i]) < 1e-14);
  }
}

TEST_CASE("constant transforms to scaled impulse") {
  ComplexVector x(4);
  x.re = {1, 1, 1, 1};
  const auto spec = fft::dft1d_forward(x);
  CHECK(spec.re[0] == doctest::Approx(4.0));
  for (int i = 1; i < 4; ++i) {
    CHECK(std::abs(spec.re[i]) < 1e-14);
    CHECK(std::abs(spec.im[i]) < 1e-14);
  }
}

TEST_CASE("inverse of scaled impulse is constant") {
  ComplexVector spec(4);
  spec.re = {4, 0, 0, 0};
  const auto x = fft::dft1d_inverse(spec);
  for (int i = 0; i < 4; ++i)
    CHECK(x.re[i] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("random length-7 forward matches naive oracle") {
  SplitMix64 rng(7);
  const auto x = random_cv(7, rng);
  const auto fast = fft::dft1d_forward(x);
  const auto slow = naive_dft(x, -1);
  CHECK(max_err(fast, slow) / max_abs(slow) <= 1e-12);
}

TEST_CASE("random length-14 inverse matches naive inverse oracle") {
  SplitMix64 rng(14);
  const auto spec = random_cv(14, rng);
  const auto fast = fft::dft1d_inverse(spec);
  auto slow = naive_dft(spec, +1);
  for (std::size_t i = 0; i < slow.size(); ++i) {
    slow.re[i] /= 14.0;
    slow.im[i] /= 14.0;
  }
  CHECK(max_err(fast, slow) / max_abs(slow) <= 1e-12);
}

TEST_CASE("round trip across lengths including primes") {
  SplitMix64 rng(3);
  for (std::size_t n : {1ul, 2ul, 3ul, 5ul, 7ul, 8ul, 11ul, 12ul, 13ul, 16ul,
                        17ul, 24ul, 31ul, 32ul, 53ul, 61ul, 64ul}) {
    const auto x = random_cv(n, rng);
    const auto back = fft::dft1d_inverse(fft::dft1d_forward(x));
    CHECK(max_err(x, back) <= 1e-11 * max_abs(x));
  }
}

TEST_CASE("forced Bluestein agrees with radix-2 on powers of two") {
  SplitMix64 rng(16);
  for (std::size_t n : {1ul, 2ul, 8ul, 16ul, 64ul}) {
    const auto x = random_cv(n, rng);
    std::vector<fft::cplx> xc(n);
    for (std::size_t i = 0; i < n; ++i) xc[i] = {x.re[i], x.im[i]};
    const auto forced = fft::detail::bluestein(xc, -1);
    const auto fast = fft::dft1d_forward(x);
    double err = 0.0, scale = 1e-300;
    for (std::size_t i = 0; i < n; ++i) {
      err = std::max(err, std::abs(forced[i] - fft::cplx{fast.re[i], fast.im[i]}));
      scale = std::max(scale, std::abs(forced[i]));
    }
    CHECK(err / scale <= 1e-11);
  }
}

TEST_CASE("2D impulse at origin gives all-ones spectrum") {
  ComplexGrid g(GridShape{3, 4});
  g.re[0] = 1.0;
  const auto spec = fft::dft2d_forward(g);
  for (std::size_t i = 0; i < spec.re.size(); ++i) {
    CHECK(spec.re[i] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(std::abs(spec.im[i]) < 1e-13);
  }
}

TEST_CASE("random 2x2 grid matches quadruple-loop naive 2D DFT") {
  SplitMix64 rng(22);
  const GridShape s{2, 2};
  ComplexGrid g(s);
  for (auto& v : g.re) v = rng.uniform(-1.0, 1.0);
  for (auto& v : g.im) v = rng.uniform(-1.0, 1.0);
  const auto fast = fft::dft2d_forward(g);
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q) {
      double re = 0.0, im = 0.0;
      for (int h = 0; h < 2; ++h)
        for (int w = 0; w < 2; ++w) {
          const double ang = -kTwoPi * (p * h / 2.0 + q * w / 2.0);
          const double xr = g.re[h * 2 + w], xi = g.im[h * 2 + w];
          re += xr * std::cos(ang) - xi * std::sin(ang);
          im += xr * std::sin(ang) + xi * std::cos(ang);
        }
      CHECK(fast.re[p * 2 + q] == doctest::Approx(re).epsilon(1e-12));
      CHECK(fast.im[p * 2 + q] == doctest::Approx(im).epsilon(1e-12));
    }
}

TEST_CASE("random 14x14 grid round trip") {
  SplitMix64 rng(1414);
  ComplexGrid g(GridShape{14, 14});
  for (auto& v : g.re) v = rng.uniform(-1.0, 1.0);
  for (auto& v : g.im) v = rng.uniform(-1.0, 1.0);
  const auto back = fft::dft2d_inverse(fft::dft2d_forward(g));
  double err = 0.0;
  for (std::size_t i = 0; i < g.re.size(); ++i)
    err = std::max({err, std::abs(g.re[i] - back.re[i]), std::abs(g.im[i] - back.im[i])});
  CHECK(err <= 1e-12);
}

TEST_CASE("Parseval with unnormalized forward") {
  SplitMix64 rng(99);
  for (std::size_t n : {1ul, 6ul, 17ul, 32ul, 45ul}) {
    const auto x = random_cv(n, rng);
    const auto spec = fft::dft1d_forward(x);
    double ex = 0.0, es = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      ex += x.re[i] * x.re[i] + x.im[i] * x.im[i];
      es += spec.re[i] * spec.re[i] + spec.im[i] * spec.im[i];
    }
    CHECK(es == doctest::Approx(static_cast<double>(n) * ex).epsilon(1e-11));
  }
}

TEST_CASE("circorr2d with identity kernel returns the signal") {
  SplitMix64 rng(5);
  const GridShape s{3, 5};
  const auto x = random_tensor(s, 2, rng);
  SequenceTensor b(s, 2);
  b.at(0, 0) = 1.0;
  b.at(0, 1) = 1.0;
  const auto out = fft::circorr2d(b, x);
  for (std::size_t i = 0; i < x.data.size(); ++i)
    CHECK(std::abs(out.data[i] - x.data[i]) <= 1e-13);
}

TEST_CASE("circorr2d with one-hot kernel is a circular shift") {
  SplitMix64 rng(6);
  const GridShape s{3, 5};
  const int flat = 7;  // dh = 1, dw = 2
  const int dh = flat / s.w, dw = flat % s.w;
  const auto x = random_tensor(s, 2, rng);
  SequenceTensor b(s, 2);
  b.at(flat, 0) = 1.0;
  b.at(flat, 1) = 1.0;
  const auto out = fft::circorr2d(b, x);
  for (int ih = 0; ih < s.h; ++ih)
    for (int iw = 0; iw < s.w; ++iw)
      for (int c = 0; c < 2; ++c) {
        const double expect = x.at(((ih + dh) % s.h) * s.w + (iw + dw) % s.w, c);
        CHECK(std::abs(out.at(ih * s.w + iw, c) - expect) <= 1e-13);
      }
}

TEST_CASE("circorr2d matches dense BCCB matrix-vector product per channel") {
  SplitMix64 rng(35);
  const GridShape s{3, 5};
  const auto b = random_tensor(s, 2, rng);
  const auto x = random_tensor(s, 2, rng);
  const auto out = fft::circorr2d(b, x);
  for (int c = 0; c < 2; ++c) {
    structured::BccbKernel kern{std::vector<double>(static_cast<std::size_t>(s.n())), s};
    std::vector<double> xc(static_cast<std::size_t>(s.n()));
    for (int t = 0; t < s.n(); ++t) {
      kern.b[t] = b.at(t, c);
      xc[t] = x.at(t, c);
    }
    const auto dense = structured::bccb_materialize(kern);
    for (int i = 0; i < s.n(); ++i) {
      double acc = 0.0;
      for (int j = 0; j < s.n(); ++j) acc += dense.at(i, j) * xc[j];
      CHECK(std::abs(out.at(i, c) - acc) <= 1e-10);
    }
  }
}

TEST_CASE("circorr2d rejects mismatched operands") {
  SequenceTensor a(GridShape{2, 3}, 2);
  SequenceTensor b(GridShape{3, 2}, 2);
  SequenceTensor c(GridShape{2, 3}, 1);
  CHECK_THROWS_AS((void)fft::circorr2d(a, b), ShapeMismatch);
  CHECK_THROWS_AS((void)fft::circorr2d(a, c), ShapeMismatch);
}

TEST_CASE("non-finite input propagates without throwing") {
  ComplexVector x(4);
  x.re = {std::nan(""), 0, 0, 0};
  const auto spec = fft::dft1d_forward(x);
  bool any_nan = false;
  for (double v : spec.re) any_nan = any_nan || std::isnan(v);
  CHECK(any_nan);
}
