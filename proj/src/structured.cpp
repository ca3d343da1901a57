#include "circattn/structured.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "circattn/fft.hpp"
#include "circattn/rng.hpp"

namespace circattn::structured {

namespace {

constexpr int kDenseGuard = 4096;

void check_dense_guard(int n, bool allow_large) {
  if (n > kDenseGuard && !allow_large)
    throw DomainError("dense N x N materialization refused for N > 4096 "
                      "(pass allow_large to override)");
}

}  // namespace

int bccb_offset_index(GridShape shape, int i, int j) {
  const int ih = i / shape.w, iw = i % shape.w;
  const int jh = j / shape.w, jw = j % shape.w;
  const int kh = ((jh - ih) % shape.h + shape.h) % shape.h;
  const int kw = ((jw - iw) % shape.w + shape.w) % shape.w;
  return kh * shape.w + kw;
}

DenseMatrix circulant_materialize(const CirculantKernel& k) {
  const int n = static_cast<int>(k.c.size());
  if (n < 1) throw ShapeMismatch("circulant kernel must be non-empty");
  DenseMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.at(i, j) = k.c[static_cast<std::size_t>(((j - i) % n + n) % n)];
  return m;
}

std::vector<double> circulant_matvec_naive(const CirculantKernel& k,
                                           const std::vector<double>& x) {
  const std::size_t n = k.c.size();
  if (n == 0 || x.size() != n)
    throw ShapeMismatch("circulant matvec: kernel and vector lengths differ");
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t kk = 0; kk < n; ++kk) acc += k.c[kk] * x[(i + kk) % n];
    y[i] = acc;
  }
  return y;
}

DenseMatrix bccb_materialize(const BccbKernel& k, bool allow_large) {
  k.validate();
  const int n = k.shape.n();
  check_dense_guard(n, allow_large);
  DenseMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m.at(i, j) = k.b[static_cast<std::size_t>(bccb_offset_index(k.shape, i, j))];
  return m;
}

std::vector<double> bccb_matvec_naive(const BccbKernel& k,
                                      const std::vector<double>& x) {
  k.validate();
  const int h = k.shape.h, w = k.shape.w, n = k.shape.n();
  if (x.size() != static_cast<std::size_t>(n))
    throw ShapeMismatch("BCCB matvec: vector length must equal H*W");
  std::vector<double> y(static_cast<std::size_t>(n), 0.0);
  for (int ih = 0; ih < h; ++ih) {
    for (int iw = 0; iw < w; ++iw) {
      double acc = 0.0;
      for (int kh = 0; kh < h; ++kh)
        for (int kw = 0; kw < w; ++kw)
          acc += k.b[static_cast<std::size_t>(kh * w + kw)] *
                 x[static_cast<std::size_t>(((ih + kh) % h) * w + (iw + kw) % w)];
      y[static_cast<std::size_t>(ih * w + iw)] = acc;
    }
  }
  return y;
}

std::vector<double> bccb_matvec_fft(const BccbKernel& k,
                                    const std::vector<double>& x) {
  k.validate();
  if (x.size() != static_cast<std::size_t>(k.shape.n()))
    throw ShapeMismatch("BCCB matvec: vector length must equal H*W");
  SequenceTensor xs(k.shape, 1);
  xs.data = x;
  return fft::circorr2d_kernel(k.b, k.shape, xs).data;
}

ProjectionResult project_to_bccb(const DenseMatrix& a, GridShape shape) {
  shape.validate();
  const int n = shape.n();
  if (a.rows != n || a.cols != n)
    throw ShapeMismatch("projection target must be N x N with N = H*W");

  // Pass 1: class sums. Every offset class holds exactly N entries.
  BccbKernel kernel{std::vector<double>(static_cast<std::size_t>(n), 0.0), shape};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      kernel.b[static_cast<std::size_t>(bccb_offset_index(shape, i, j))] += a.at(i, j);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (auto& v : kernel.b) v *= inv_n;

  // Pass 2: residual against the projected matrix, entry by entry.
  double residual_sq = 0.0;
  double norm_a_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double aij = a.at(i, j);
      const double diff = aij - kernel.b[static_cast<std::size_t>(bccb_offset_index(shape, i, j))];
      residual_sq += diff * diff;
      norm_a_sq += aij * aij;
    }
  }

  double proj_sq = 0.0;
  for (double v : kernel.b) proj_sq += v * v;
  proj_sq *= static_cast<double>(n);

  ProjectionResult out;
  out.kernel = std::move(kernel);
  out.residual_fro = std::sqrt(std::max(0.0, residual_sq));
  out.similarity = norm_a_sq == 0.0 ? 1.0 : std::clamp(proj_sq / norm_a_sq, 0.0, 1.0);
  return out;
}

bool nearest_bccb_distance_check(const DenseMatrix& a, GridShape shape,
                                 int trials, std::uint64_t seed) {
  shape.validate();
  const int n = shape.n();
  if (a.rows != n || a.cols != n)
    throw ShapeMismatch("distance check target must be N x N with N = H*W");

  const ProjectionResult proj = project_to_bccb(a, shape);
  const double best = proj.residual_fro;

  double scale = 1.0;
  for (double v : a.data) scale = std::max(scale, std::abs(v));

  SplitMix64 rng(seed);
  std::vector<double> b(static_cast<std::size_t>(n));
  for (int t = 0; t < trials; ++t) {
    for (auto& v : b) v = rng.uniform(-scale, scale);
    double dist_sq = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double diff = a.at(i, j) - b[static_cast<std::size_t>(bccb_offset_index(shape, i, j))];
        dist_sq += diff * diff;
      }
    }
    if (best > std::sqrt(dist_sq) + 1e-9) return false;
  }
  return true;
}

}  // namespace circattn::structured
