#include "circattn/fft.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace circattn::fft {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t ceil_pow2(std::size_t n) {
  std::size_t m = 1;
  while (m < n) m <<= 1;
  return m;
}

// w[j] = exp(i * phi * j). Repeated multiplication from a single root,
// re-anchored with a direct evaluation every 32 steps to bound phase drift.
std::vector<cplx> phase_table(std::size_t count, double phi) {
  std::vector<cplx> w(count);
  const cplx root = std::polar(1.0, phi);
  cplx cur{1.0, 0.0};
  for (std::size_t j = 0; j < count; ++j) {
    if ((j & 31u) == 0) cur = std::polar(1.0, phi * static_cast<double>(j));
    w[j] = cur;
    cur *= root;
  }
  return w;
}

std::vector<cplx> to_complex(const ComplexVector& v) {
  std::vector<cplx> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = {v.re[i], v.im[i]};
  return out;
}

ComplexVector from_complex(const std::vector<cplx>& v) {
  ComplexVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.re[i] = v[i].real();
    out.im[i] = v[i].imag();
  }
  return out;
}

// Row-then-column application of the 1D transform on a row-major H x W grid.
void transform2d_inplace(std::vector<cplx>& g, int h, int w, int sign) {
  if (w > 1) {
    std::vector<cplx> row(static_cast<std::size_t>(w));
    for (int r = 0; r < h; ++r) {
      auto* base = g.data() + static_cast<std::size_t>(r) * w;
      std::copy(base, base + w, row.begin());
      row = detail::transform(std::move(row), sign);
      std::copy(row.begin(), row.end(), base);
    }
  }
  if (h > 1) {
    std::vector<cplx> col(static_cast<std::size_t>(h));
    for (int c = 0; c < w; ++c) {
      for (int r = 0; r < h; ++r) col[static_cast<std::size_t>(r)] = g[static_cast<std::size_t>(r) * w + c];
      col = detail::transform(std::move(col), sign);
      for (int r = 0; r < h; ++r) g[static_cast<std::size_t>(r) * w + c] = col[static_cast<std::size_t>(r)];
    }
  }
}

double linf(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Shared driver for circorr2d / circonv2d: per channel,
//   out = F2D^-1( op(F2D(b)) .* F2D(x) )
// where op is conj for correlation and identity for convolution.
SequenceTensor corr_like(const SequenceTensor& b, const SequenceTensor& x,
                         bool conjugate_kernel) {
  if (!b.same_layout(x))
    throw ShapeMismatch("circular correlation operands must share N x d layout");
  b.shape.validate();

  const int h = x.shape.h, w = x.shape.w, n = x.shape.n(), d = x.dim;
  const double tol = 1e-9 * linf(x.data);
  const double inv_n = 1.0 / static_cast<double>(n);

  SequenceTensor out(x.shape, d);
  std::vector<cplx> bg(static_cast<std::size_t>(n)), xg(static_cast<std::size_t>(n));
  for (int c = 0; c < d; ++c) {
    for (int t = 0; t < n; ++t) {
      bg[static_cast<std::size_t>(t)] = b.at(t, c);
      xg[static_cast<std::size_t>(t)] = x.at(t, c);
    }
    transform2d_inplace(bg, h, w, -1);
    transform2d_inplace(xg, h, w, -1);
    for (int t = 0; t < n; ++t) {
      const auto i = static_cast<std::size_t>(t);
      xg[i] *= conjugate_kernel ? std::conj(bg[i]) : bg[i];
    }
    transform2d_inplace(xg, h, w, +1);
    for (int t = 0; t < n; ++t) {
      const cplx y = xg[static_cast<std::size_t>(t)] * inv_n;
      if (std::abs(y.imag()) > tol)
        throw std::logic_error("imaginary residue above tolerance: transform bug");
      out.at(t, c) = y.real();
    }
  }
  return out;
}

SequenceTensor kernel_corr_like(std::span<const double> kernel, GridShape shape,
                                const SequenceTensor& x, bool conjugate_kernel) {
  shape.validate();
  if (!(x.shape == shape) || kernel.size() != static_cast<std::size_t>(shape.n()))
    throw ShapeMismatch("kernel length must equal the operand's token count");

  const int h = shape.h, w = shape.w, n = shape.n(), d = x.dim;
  const double tol = 1e-9 * linf(x.data);
  const double inv_n = 1.0 / static_cast<double>(n);

  std::vector<cplx> kg(kernel.begin(), kernel.end());
  transform2d_inplace(kg, h, w, -1);
  if (conjugate_kernel)
    for (auto& v : kg) v = std::conj(v);

  SequenceTensor out(shape, d);
  std::vector<cplx> xg(static_cast<std::size_t>(n));
  for (int c = 0; c < d; ++c) {
    for (int t = 0; t < n; ++t) xg[static_cast<std::size_t>(t)] = x.at(t, c);
    transform2d_inplace(xg, h, w, -1);
    for (int t = 0; t < n; ++t) xg[static_cast<std::size_t>(t)] *= kg[static_cast<std::size_t>(t)];
    transform2d_inplace(xg, h, w, +1);
    for (int t = 0; t < n; ++t) {
      const cplx y = xg[static_cast<std::size_t>(t)] * inv_n;
      if (std::abs(y.imag()) > tol)
        throw std::logic_error("imaginary residue above tolerance: transform bug");
      out.at(t, c) = y.real();
    }
  }
  return out;
}

}  // namespace

namespace detail {

void fft_pow2_inplace(std::vector<cplx>& a, int sign) {
  const std::size_t n = a.size();
  if (n <= 1) return;

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  const auto w = phase_table(n / 2, sign * kTwoPi / static_cast<double>(n));
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len >> 1;
    const std::size_t stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const cplx u = a[i + k];
        const cplx v = a[i + k + half] * w[k * stride];
        a[i + k] = u + v;
        a[i + k + half] = u - v;
      }
    }
  }
}

std::vector<cplx> bluestein(const std::vector<cplx>& x, int sign) {
  const std::size_t n = x.size();
  if (n <= 1) return x;

  // Chirp c[j] = exp(i * sign * pi * j^2 / n); j^2 reduced mod 2n keeps the
  // angle argument small.
  std::vector<cplx> chirp(n);
  const double base = sign * (kTwoPi / 2.0) / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t q = (j * j) % (2 * n);
    chirp[j] = std::polar(1.0, base * static_cast<double>(q));
  }

  const std::size_t m = ceil_pow2(2 * n - 1);
  std::vector<cplx> a(m, cplx{}), b(m, cplx{});
  for (std::size_t j = 0; j < n; ++j) a[j] = x[j] * chirp[j];
  b[0] = std::conj(chirp[0]);
  for (std::size_t j = 1; j < n; ++j) b[j] = b[m - j] = std::conj(chirp[j]);

  fft_pow2_inplace(a, -1);
  fft_pow2_inplace(b, -1);
  for (std::size_t j = 0; j < m; ++j) a[j] *= b[j];
  fft_pow2_inplace(a, +1);

  const double inv_m = 1.0 / static_cast<double>(m);
  std::vector<cplx> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * inv_m * chirp[k];
  return out;
}

std::vector<cplx> transform(std::vector<cplx> x, int sign) {
  if (is_pow2(x.size())) {
    fft_pow2_inplace(x, sign);
    return x;
  }
  return bluestein(x, sign);
}

}  // namespace detail

ComplexVector dft1d_forward(const ComplexVector& x) {
  if (x.re.size() != x.im.size() || x.re.empty())
    throw ShapeMismatch("ComplexVector planes must share length n >= 1");
  return from_complex(detail::transform(to_complex(x), -1));
}

ComplexVector dft1d_inverse(const ComplexVector& X) {
  if (X.re.size() != X.im.size() || X.re.empty())
    throw ShapeMismatch("ComplexVector planes must share length n >= 1");
  auto out = detail::transform(to_complex(X), +1);
  const double inv_n = 1.0 / static_cast<double>(out.size());
  for (auto& v : out) v *= inv_n;
  return from_complex(out);
}

ComplexGrid dft2d_forward(const ComplexGrid& x) {
  x.validate();
  std::vector<cplx> g(static_cast<std::size_t>(x.shape.n()));
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = {x.re[i], x.im[i]};
  transform2d_inplace(g, x.shape.h, x.shape.w, -1);
  ComplexGrid out(x.shape);
  for (std::size_t i = 0; i < g.size(); ++i) {
    out.re[i] = g[i].real();
    out.im[i] = g[i].imag();
  }
  return out;
}

ComplexGrid dft2d_inverse(const ComplexGrid& X) {
  X.validate();
  std::vector<cplx> g(static_cast<std::size_t>(X.shape.n()));
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = {X.re[i], X.im[i]};
  transform2d_inplace(g, X.shape.h, X.shape.w, +1);
  const double inv_n = 1.0 / static_cast<double>(X.shape.n());
  ComplexGrid out(X.shape);
  for (std::size_t i = 0; i < g.size(); ++i) {
    out.re[i] = g[i].real() * inv_n;
    out.im[i] = g[i].imag() * inv_n;
  }
  return out;
}

SequenceTensor circorr2d(const SequenceTensor& b, const SequenceTensor& x) {
  return corr_like(b, x, /*conjugate_kernel=*/true);
}

SequenceTensor circonv2d(const SequenceTensor& b, const SequenceTensor& x) {
  return corr_like(b, x, /*conjugate_kernel=*/false);
}

SequenceTensor circorr2d_kernel(std::span<const double> kernel, GridShape shape,
                                const SequenceTensor& x) {
  return kernel_corr_like(kernel, shape, x, /*conjugate_kernel=*/true);
}

SequenceTensor circonv2d_kernel(std::span<const double> kernel, GridShape shape,
                                const SequenceTensor& x) {
  return kernel_corr_like(kernel, shape, x, /*conjugate_kernel=*/false);
}

}  // namespace circattn::fft
