#include "circattn/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "circattn/attention.hpp"
#include "circattn/fft.hpp"
#include "circattn/gradients.hpp"
#include "circattn/rng.hpp"
#include "circattn/structured.hpp"
#include "circattn/types.hpp"

namespace circattn::verify {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double linf(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double linf_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double cv_err(const ComplexVector& a, const ComplexVector& b) {
  return std::max(linf_diff(a.re, b.re), linf_diff(a.im, b.im));
}

double cv_linf(const ComplexVector& a) {
  return std::max(linf(a.re), linf(a.im));
}

ComplexVector random_cv(std::size_t n, SplitMix64& rng) {
  ComplexVector v(n);
  for (auto& x : v.re) x = rng.uniform(-1.0, 1.0);
  for (auto& x : v.im) x = rng.uniform(-1.0, 1.0);
  return v;
}

SequenceTensor random_tensor(GridShape shape, int d, SplitMix64& rng) {
  SequenceTensor t(shape, d);
  for (auto& v : t.data) v = rng.uniform(-1.0, 1.0);
  return t;
}

// Independent O(n^2) oracle; angle argument reduced mod n.
ComplexVector naive_dft_1d(const ComplexVector& x, int sign) {
  const std::size_t n = x.size();
  ComplexVector out(n);
  for (std::size_t k = 0; k < n; ++k) {
    double re = 0.0, im = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double ang = sign * kTwoPi * static_cast<double>((j * k) % n) / static_cast<double>(n);
      const double c = std::cos(ang), s = std::sin(ang);
      re += x.re[j] * c - x.im[j] * s;
      im += x.re[j] * s + x.im[j] * c;
    }
    out.re[k] = re;
    out.im[k] = im;
  }
  return out;
}

// Spatial-domain circular cross-correlation, quadruple loop per channel.
SequenceTensor naive_circorr2d(const SequenceTensor& b, const SequenceTensor& x) {
  const int h = x.shape.h, w = x.shape.w, d = x.dim;
  SequenceTensor out(x.shape, d);
  for (int c = 0; c < d; ++c)
    for (int ih = 0; ih < h; ++ih)
      for (int iw = 0; iw < w; ++iw) {
        double acc = 0.0;
        for (int kh = 0; kh < h; ++kh)
          for (int kw = 0; kw < w; ++kw)
            acc += b.at(kh * w + kw, c) *
                   x.at(((ih + kh) % h) * w + (iw + kw) % w, c);
        out.at(ih * w + iw, c) = acc;
      }
  return out;
}

SequenceTensor roll_tokens(const SequenceTensor& t, int dh, int dw) {
  const int h = t.shape.h, w = t.shape.w;
  SequenceTensor out(t.shape, t.dim);
  for (int ih = 0; ih < h; ++ih)
    for (int iw = 0; iw < w; ++iw)
      for (int c = 0; c < t.dim; ++c)
        out.at(((ih + dh) % h) * w + (iw + dw) % w, c) = t.at(ih * w + iw, c);
  return out;
}

double frob_inner(const DenseMatrix& a, const DenseMatrix& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) acc += a.data[i] * b.data[i];
  return acc;
}

attention::Reweighting mode_of(int i) {
  switch (i % 3) {
    case 0: return attention::Reweighting::none;
    case 1: return attention::Reweighting::pre;
    default: return attention::Reweighting::post;
  }
}

}  // namespace

std::string format_result(const PropertyResult& r) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%s %s max_err=%.3e",
                r.pass ? "PASS" : "FAIL", r.name.c_str(), r.max_err);
  return buf;
}

PropertyResult check_roundtrip_1d() {
  SplitMix64 rng(0x5eedu);
  double worst = 0.0;
  for (std::size_t n = 1; n <= 64; ++n) {
    const auto x = random_cv(n, rng);
    const auto back = fft::dft1d_inverse(fft::dft1d_forward(x));
    worst = std::max(worst, cv_err(x, back) / cv_linf(x));
  }
  return {"fft-roundtrip-1d", worst <= 1e-11, worst};
}

PropertyResult check_parseval_1d() {
  SplitMix64 rng(0x9a11u);
  double worst = 0.0;
  for (std::size_t n = 1; n <= 64; ++n) {
    const auto x = random_cv(n, rng);
    const auto spec = fft::dft1d_forward(x);
    double ex = 0.0, es = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      ex += x.re[i] * x.re[i] + x.im[i] * x.im[i];
      es += spec.re[i] * spec.re[i] + spec.im[i] * spec.im[i];
    }
    worst = std::max(worst, std::abs(es - static_cast<double>(n) * ex) /
                                (static_cast<double>(n) * ex));
  }
  return {"fft-parseval-1d", worst <= 1e-11, worst};
}

PropertyResult check_naive_dft_agreement(std::uint64_t seed, int cases) {
  SplitMix64 rng(seed);
  // Always exercise primes; fill the remaining cases with random lengths.
  std::vector<std::size_t> lengths = {2, 3, 5, 7, 13, 31, 53, 61};
  while (static_cast<int>(lengths.size()) < std::max(cases, 8))
    lengths.push_back(1 + rng.next() % 64);

  double worst = 0.0;
  for (std::size_t n : lengths) {
    const auto x = random_cv(n, rng);
    const auto fast = fft::dft1d_forward(x);
    const auto slow = naive_dft_1d(x, -1);
    worst = std::max(worst, cv_err(fast, slow) / cv_linf(slow));
  }
  return {"fft-naive-dft-1d", worst <= 1e-12, worst};
}

namespace {

PropertyResult check_roundtrip_2d() {
  SplitMix64 rng(0x2du);
  const int dims[] = {1, 2, 3, 4, 5, 7, 8, 9, 12, 13, 16, 28, 31, 32, 61, 64};
  double worst = 0.0;
  for (int h : dims) {
    for (int w : dims) {
      ComplexGrid g(GridShape{h, w});
      for (auto& v : g.re) v = rng.uniform(-1.0, 1.0);
      for (auto& v : g.im) v = rng.uniform(-1.0, 1.0);
      const auto back = fft::dft2d_inverse(fft::dft2d_forward(g));
      double scale = std::max(linf(g.re), linf(g.im));
      double err = std::max(linf_diff(g.re, back.re), linf_diff(g.im, back.im));
      worst = std::max(worst, err / scale);
    }
  }
  return {"fft-roundtrip-2d", worst <= 1e-11, worst};
}

PropertyResult check_linearity(std::uint64_t seed, int cases) {
  SplitMix64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < cases; ++i) {
    const std::size_t n = 1 + rng.next() % 64;
    const auto x = random_cv(n, rng);
    const auto y = random_cv(n, rng);
    const double alpha = rng.uniform(-2.0, 2.0), beta = rng.uniform(-2.0, 2.0);
    ComplexVector mix(n);
    for (std::size_t j = 0; j < n; ++j) {
      mix.re[j] = alpha * x.re[j] + beta * y.re[j];
      mix.im[j] = alpha * x.im[j] + beta * y.im[j];
    }
    const auto lhs = fft::dft1d_forward(mix);
    const auto fx = fft::dft1d_forward(x);
    const auto fy = fft::dft1d_forward(y);
    ComplexVector rhs(n);
    for (std::size_t j = 0; j < n; ++j) {
      rhs.re[j] = alpha * fx.re[j] + beta * fy.re[j];
      rhs.im[j] = alpha * fx.im[j] + beta * fy.im[j];
    }
    worst = std::max(worst, cv_err(lhs, rhs) / std::max(cv_linf(lhs), 1e-300));
  }
  return {"fft-linearity-1d", worst <= 1e-11, worst};
}

PropertyResult check_naive_idft_agreement(std::uint64_t seed, int cases) {
  SplitMix64 rng(seed ^ 0xabcdu);
  double worst = 0.0;
  for (int i = 0; i < cases; ++i) {
    const std::size_t n = 1 + rng.next() % 64;
    const auto spec = random_cv(n, rng);
    const auto fast = fft::dft1d_inverse(spec);
    auto slow = naive_dft_1d(spec, +1);
    for (std::size_t j = 0; j < n; ++j) {
      slow.re[j] /= static_cast<double>(n);
      slow.im[j] /= static_cast<double>(n);
    }
    worst = std::max(worst, cv_err(fast, slow) / std::max(cv_linf(slow), 1e-300));
  }
  return {"fft-naive-idft-1d", worst <= 1e-12, worst};
}

PropertyResult check_naive_dft_2d(std::uint64_t seed) {
  SplitMix64 rng(seed ^ 0x2d2du);
  const GridShape shapes[] = {{2, 2}, {3, 4}, {4, 3}, {5, 7}, {8, 8}};
  double worst = 0.0;
  for (const auto& s : shapes) {
    ComplexGrid g(s);
    for (auto& v : g.re) v = rng.uniform(-1.0, 1.0);
    for (auto& v : g.im) v = rng.uniform(-1.0, 1.0);
    const auto fast = fft::dft2d_forward(g);

    ComplexGrid slow(s);
    for (int p = 0; p < s.h; ++p)
      for (int q = 0; q < s.w; ++q) {
        double re = 0.0, im = 0.0;
        for (int h = 0; h < s.h; ++h)
          for (int w = 0; w < s.w; ++w) {
            const double ang = -kTwoPi * (static_cast<double>((p * h) % s.h) / s.h +
                                          static_cast<double>((q * w) % s.w) / s.w);
            const double c = std::cos(ang), sn = std::sin(ang);
            const double xr = g.re[static_cast<std::size_t>(h * s.w + w)];
            const double xi = g.im[static_cast<std::size_t>(h * s.w + w)];
            re += xr * c - xi * sn;
            im += xr * sn + xi * c;
          }
        slow.re[static_cast<std::size_t>(p * s.w + q)] = re;
        slow.im[static_cast<std::size_t>(p * s.w + q)] = im;
      }
    const double scale = std::max(linf(slow.re), linf(slow.im));
    const double err = std::max(linf_diff(fast.re, slow.re), linf_diff(fast.im, slow.im));
    worst = std::max(worst, err / scale);
  }
  return {"fft-naive-dft-2d", worst <= 1e-12, worst};
}

PropertyResult check_bluestein_pow2_agreement(std::uint64_t seed) {
  SplitMix64 rng(seed ^ 0xb1u);
  double worst = 0.0;
  for (std::size_t n = 1; n <= 64; n <<= 1) {
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
    worst = std::max(worst, err / scale);
  }
  return {"fft-bluestein-pow2-agreement", worst <= 1e-11, worst};
}

PropertyResult check_crosscorr_theorem(std::uint64_t seed, int cases) {
  SplitMix64 rng(seed ^ 0xccu);
  double worst = 0.0;
  for (int i = 0; i < cases; ++i) {
    const GridShape s{1 + static_cast<int>(rng.next() % 8),
                      1 + static_cast<int>(rng.next() % 8)};
    const int d = 1 + static_cast<int>(rng.next() % 3);
    const auto b = random_tensor(s, d, rng);
    const auto x = random_tensor(s, d, rng);
    const auto fast = fft::circorr2d(b, x);
    const auto slow = naive_circorr2d(b, x);
    worst = std::max(worst, linf_diff(fast.data, slow.data));
  }
  return {"fft-crosscorr-theorem-2d", worst <= 1e-10, worst};
}

}  // namespace

Suite run_fft_suite(std::uint64_t seed, int cases) {
  return {
      check_roundtrip_1d(),
      check_roundtrip_2d(),
      check_parseval_1d(),
      check_linearity(seed, cases),
      check_naive_dft_agreement(seed, std::max(cases, 20)),
      check_naive_idft_agreement(seed, cases),
      check_naive_dft_2d(seed),
      check_bluestein_pow2_agreement(seed),
      check_crosscorr_theorem(seed, std::max(cases, 10)),
  };
}

PropertyResult check_basis_orthogonality() {
  double worst = 0.0;
  for (int h = 1; h <= 4; ++h) {
    for (int w = 1; w <= 4; ++w) {
      const GridShape s{h, w};
      const int n = s.n();
      std::vector<DenseMatrix> basis;
      for (int k = 0; k < n; ++k) {
        structured::BccbKernel kern{std::vector<double>(static_cast<std::size_t>(n), 0.0), s};
        kern.b[static_cast<std::size_t>(k)] = 1.0;
        basis.push_back(structured::bccb_materialize(kern));
      }
      for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) {
          const double expect = k == j ? static_cast<double>(n) : 0.0;
          worst = std::max(worst, std::abs(frob_inner(basis[static_cast<std::size_t>(k)],
                                                      basis[static_cast<std::size_t>(j)]) -
                                           expect));
        }
    }
  }
  return {"bccb-basis-orthogonality", worst == 0.0, worst};
}

PropertyResult check_projection_idempotence(std::uint64_t seed, int cases) {
  SplitMix64 rng(seed ^ 0x1de9u);
  double worst = 0.0;
  for (int i = 0; i < cases; ++i) {
    const GridShape s{1 + static_cast<int>(rng.next() % 4),
                      1 + static_cast<int>(rng.next() % 4)};
    const int n = s.n();
    DenseMatrix a(n, n);
    for (auto& v : a.data) v = rng.uniform(-1.0, 1.0);
    const auto once = structured::project_to_bccb(a, s);
    const auto twice = structured::project_to_bccb(
        structured::bccb_materialize(once.kernel), s);
    worst = std::max(worst, linf_diff(once.kernel.b, twice.kernel.b));
  }
  return {"bccb-projection-idempotence", worst <= 1e-12, worst};
}

PropertyResult check_pythagoras(std::uint64_t seed, int cases) {
  SplitMix64 rng(seed ^ 0x9717u);
  double worst = 0.0;
  for (int i = 0; i < cases; ++i) {
    const GridShape s{1 + static_cast<int>(rng.next() % 5),
                      1 + static_cast<int>(rng.next() % 5)};
    const int n = s.n();
    DenseMatrix a(n, n);
    for (auto& v : a.data) v = rng.uniform(-1.0, 1.0);
    const auto proj = structured::project_to_bccb(a, s);
    double norm_a_sq = 0.0;
    for (double v : a.data) norm_a_sq += v * v;
    double proj_sq = 0.0;
    for (double v : proj.kernel.b) proj_sq += v * v;
    proj_sq *= n;
    const double lhs = norm_a_sq;
    const double rhs = proj_sq + proj.residual_fro * proj.residual_fro;
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(lhs, 1e-300));
  }
  return {"bccb-pythagoras", worst <= 1e-9, worst};
}

PropertyResult check_nearest_distance(std::uint64_t seed, int trials) {
  SplitMix64 rng(seed ^ 0xd157u);
  bool ok = true;
  for (int i = 0; i < 4; ++i) {
    const GridShape s{1 + static_cast<int>(rng.next() % 3),
                      1 + static_cast<int>(rng.next() % 3)};
    const int n = s.n();
    DenseMatrix a(n, n);
    for (auto& v : a.data) v = rng.uniform(-2.0, 2.0);
    ok = ok && structured::nearest_bccb_distance_check(a, s, trials, rng.next());
  }
  return {"bccb-nearest-distance", ok, ok ? 0.0 : 1.0};
}

namespace {

PropertyResult check_projection_fixed_point(std::uint64_t seed, int cases) {
  SplitMix64 rng(seed ^ 0xf1fu);
  double worst = 0.0;
  for (int i = 0; i < cases; ++i) {
    const GridShape s{1 + static_cast<int>(rng.next() % 5),
                      1 + static_cast<int>(rng.next() % 5)};
    structured::BccbKernel kern{std::vector<double>(static_cast<std::size_t>(s.n())), s};
    for (auto& v : kern.b) v = rng.uniform(-1.0, 1.0);
    const auto proj = structured::project_to_bccb(structured::bccb_materialize(kern), s);
    worst = std::max(worst, linf_diff(proj.kernel.b, kern.b));
    worst = std::max(worst, proj.residual_fro);
    worst = std::max(worst, std::abs(proj.similarity - 1.0));
  }
  return {"bccb-projection-fixed-point", worst <= 1e-12, worst};
}

PropertyResult check_projection_linearity(std::uint64_t seed, int cases) {
  SplitMix64 rng(seed ^ 0x11eau);
  double worst = 0.0;
  for (int i = 0; i < cases; ++i) {
    const GridShape s{1 + static_cast<int>(rng.next() % 4),
                      1 + static_cast<int>(rng.next() % 4)};
    const int n = s.n();
    DenseMatrix a(n, n), c(n, n);
    for (auto& v : a.data) v = rng.uniform(-1.0, 1.0);
    for (auto& v : c.data) v = rng.uniform(-1.0, 1.0);
    const double alpha = rng.uniform(-2.0, 2.0), beta = rng.uniform(-2.0, 2.0);
    DenseMatrix mix(n, n);
    for (std::size_t j = 0; j < mix.data.size(); ++j)
      mix.data[j] = alpha * a.data[j] + beta * c.data[j];
    const auto pa = structured::project_to_bccb(a, s);
    const auto pc = structured::project_to_bccb(c, s);
    const auto pm = structured::project_to_bccb(mix, s);
    for (int k = 0; k < n; ++k) {
      const auto ki = static_cast<std::size_t>(k);
      worst = std::max(worst, std::abs(pm.kernel.b[ki] -
                                       (alpha * pa.kernel.b[ki] + beta * pc.kernel.b[ki])));
    }
  }
  return {"bccb-projection-linearity", worst <= 1e-11, worst};
}

PropertyResult check_row_col_permutation(std::uint64_t seed, int cases) {
  SplitMix64 rng(seed ^ 0x9e9au);
  double worst = 0.0;
  bool exact_ok = true;
  for (int i = 0; i < cases; ++i) {
    const GridShape s{1 + static_cast<int>(rng.next() % 4),
                      1 + static_cast<int>(rng.next() % 4)};
    const int n = s.n();
    structured::BccbKernel kern{std::vector<double>(static_cast<std::size_t>(n)), s};
    for (auto& v : kern.b) v = rng.uniform(-1.0, 1.0);
    const auto m = structured::bccb_materialize(kern);

    std::vector<double> sorted_b = kern.b;
    std::sort(sorted_b.begin(), sorted_b.end());
    double total = 0.0;
    for (double v : kern.b) total += v;

    for (int r = 0; r < n; ++r) {
      std::vector<double> row(static_cast<std::size_t>(n)), col(static_cast<std::size_t>(n));
      double rs = 0.0, cs = 0.0;
      for (int j = 0; j < n; ++j) {
        row[static_cast<std::size_t>(j)] = m.at(r, j);
        col[static_cast<std::size_t>(j)] = m.at(j, r);
        rs += m.at(r, j);
        cs += m.at(j, r);
      }
      std::sort(row.begin(), row.end());
      std::sort(col.begin(), col.end());
      exact_ok = exact_ok && row == sorted_b && col == sorted_b;
      worst = std::max({worst, std::abs(rs - total), std::abs(cs - total)});
    }
  }
  return {"bccb-row-col-permutation", exact_ok && worst <= 1e-12, worst};
}

PropertyResult check_shift_classes() {
  // Entries (i,j), (i',j') share a kernel class iff their 2D offsets agree.
  const GridShape s{3, 4};
  const int n = s.n();
  bool ok = true;
  for (int i = 0; i < n && ok; ++i)
    for (int j = 0; j < n && ok; ++j)
      for (int i2 = 0; i2 < n && ok; ++i2)
        for (int j2 = 0; j2 < n && ok; ++j2) {
          const int dh1 = (((j / s.w) - (i / s.w)) % s.h + s.h) % s.h;
          const int dw1 = (((j % s.w) - (i % s.w)) % s.w + s.w) % s.w;
          const int dh2 = (((j2 / s.w) - (i2 / s.w)) % s.h + s.h) % s.h;
          const int dw2 = (((j2 % s.w) - (i2 % s.w)) % s.w + s.w) % s.w;
          const bool same_offset = dh1 == dh2 && dw1 == dw2;
          const bool same_class = structured::bccb_offset_index(s, i, j) ==
                                  structured::bccb_offset_index(s, i2, j2);
          ok = same_offset == same_class;
        }
  return {"bccb-shift-classes", ok, ok ? 0.0 : 1.0};
}

}  // namespace

Suite run_bccb_suite(std::uint64_t seed, int cases) {
  return {
      check_basis_orthogonality(),
      check_projection_fixed_point(seed, cases),
      check_projection_idempotence(seed, cases),
      check_pythagoras(seed, cases),
      check_projection_linearity(seed, cases),
      check_row_col_permutation(seed, cases),
      check_shift_classes(),
      check_nearest_distance(seed, 100),
  };
}

PropertyResult check_fast_naive_equivalence(std::uint64_t seed, int cases) {
  SplitMix64 rng(seed ^ 0xfa57u);
  const int dims[] = {1, 2, 8};
  double worst = 0.0;
  for (int i = 0; i < cases; ++i) {
    const GridShape s{1 + static_cast<int>(rng.next() % 8),
                      1 + static_cast<int>(rng.next() % 8)};
    const int d = dims[i % 3];
    const auto mode = mode_of(i);
    const auto q = random_tensor(s, d, rng);
    const auto k = random_tensor(s, d, rng);
    const auto v = random_tensor(s, d, rng);
    const auto t = random_tensor(s, d, rng);
    const SequenceTensor* tp =
        mode == attention::Reweighting::none ? nullptr : &t;
    const auto fast = attention::circulant_attention(q, k, v, mode, tp);
    const auto slow = attention::circulant_attention_naive(q, k, v, mode, tp);
    worst = std::max(worst, linf_diff(fast.data, slow.data));
  }
  return {"attention-fast-naive-equivalence", worst <= 1e-9, worst};
}

PropertyResult check_double_stochasticity(std::uint64_t seed, int cases) {
  SplitMix64 rng(seed ^ 0xd0b5u);
  double worst = 0.0;
  for (int i = 0; i < cases; ++i) {
    const GridShape s{1 + static_cast<int>(rng.next() % 6),
                      1 + static_cast<int>(rng.next() % 6)};
    const int d = 1 + static_cast<int>(rng.next() % 4);
    const auto q = random_tensor(s, d, rng);
    const auto k = random_tensor(s, d, rng);
    const auto smax = attention::softmax_first_row(attention::circulant_scores(q, k));
    const auto m = structured::bccb_materialize(smax);
    const int n = s.n();
    for (int r = 0; r < n; ++r) {
      double rs = 0.0, cs = 0.0;
      for (int j = 0; j < n; ++j) {
        rs += m.at(r, j);
        cs += m.at(j, r);
      }
      worst = std::max({worst, std::abs(rs - 1.0), std::abs(cs - 1.0)});
    }
  }
  return {"attention-double-stochasticity", worst <= 1e-12, worst};
}

PropertyResult check_shift_equivariance(std::uint64_t seed, int cases) {
  SplitMix64 rng(seed ^ 0x5417u);
  double worst = 0.0;
  for (int i = 0; i < cases; ++i) {
    const GridShape s{1 + static_cast<int>(rng.next() % 8),
                      1 + static_cast<int>(rng.next() % 8)};
    const int d = 1 + static_cast<int>(rng.next() % 3);
    const int dh = static_cast<int>(rng.next() % static_cast<std::uint64_t>(s.h));
    const int dw = static_cast<int>(rng.next() % static_cast<std::uint64_t>(s.w));
    const auto q = random_tensor(s, d, rng);
    const auto k = random_tensor(s, d, rng);
    const auto v = random_tensor(s, d, rng);
    const auto rolled = attention::circulant_attention(
        roll_tokens(q, dh, dw), roll_tokens(k, dh, dw), roll_tokens(v, dh, dw));
    const auto expect = roll_tokens(attention::circulant_attention(q, k, v), dh, dw);
    worst = std::max(worst, linf_diff(rolled.data, expect.data));
  }
  return {"attention-shift-equivariance", worst <= 1e-10, worst};
}

namespace {

PropertyResult check_convexity(std::uint64_t seed, int cases) {
  SplitMix64 rng(seed ^ 0xc0feu);
  double worst = 0.0;
  for (int i = 0; i < cases; ++i) {
    const GridShape s{1 + static_cast<int>(rng.next() % 6),
                      1 + static_cast<int>(rng.next() % 6)};
    const int d = 1 + static_cast<int>(rng.next() % 3);
    const auto q = random_tensor(s, d, rng);
    const auto k = random_tensor(s, d, rng);
    const auto v = random_tensor(s, d, rng);
    const auto out = attention::circulant_attention(q, k, v);
    for (int c = 0; c < d; ++c) {
      double lo = v.at(0, c), hi = v.at(0, c);
      for (int t = 1; t < v.tokens(); ++t) {
        lo = std::min(lo, v.at(t, c));
        hi = std::max(hi, v.at(t, c));
      }
      for (int t = 0; t < v.tokens(); ++t) {
        worst = std::max(worst, std::max(lo - out.at(t, c), out.at(t, c) - hi));
      }
    }
  }
  return {"attention-convexity", worst <= 1e-12, worst};
}

PropertyResult check_degenerate_grid(std::uint64_t seed, int cases) {
  SplitMix64 rng(seed ^ 0x1e1u);
  double worst = 0.0;
  for (int i = 0; i < cases; ++i) {
    const int d = 1 + static_cast<int>(rng.next() % 8);
    const GridShape s{1, 1};
    const auto q = random_tensor(s, d, rng);
    const auto k = random_tensor(s, d, rng);
    const auto v = random_tensor(s, d, rng);
    const auto out = attention::circulant_attention(q, k, v);
    worst = std::max(worst, linf_diff(out.data, v.data));
  }
  return {"attention-degenerate-1x1", worst <= 1e-15, worst};
}

PropertyResult check_scores_roll_invariance(std::uint64_t seed, int cases) {
  SplitMix64 rng(seed ^ 0x8011u);
  double worst = 0.0;
  for (int i = 0; i < cases; ++i) {
    const GridShape s{1 + static_cast<int>(rng.next() % 8),
                      1 + static_cast<int>(rng.next() % 8)};
    const int d = 1 + static_cast<int>(rng.next() % 3);
    const int dh = static_cast<int>(rng.next() % static_cast<std::uint64_t>(s.h));
    const int dw = static_cast<int>(rng.next() % static_cast<std::uint64_t>(s.w));
    const auto q = random_tensor(s, d, rng);
    const auto k = random_tensor(s, d, rng);
    const auto a = attention::circulant_scores(q, k);
    const auto rolled =
        attention::circulant_scores(roll_tokens(q, dh, dw), roll_tokens(k, dh, dw));
    worst = std::max(worst, linf_diff(a.b, rolled.b));
  }
  return {"attention-scores-roll-invariance", worst <= 1e-10, worst};
}

PropertyResult check_softmax_first_row_dense(std::uint64_t seed, int cases) {
  SplitMix64 rng(seed ^ 0x50f7u);
  double worst = 0.0;
  for (int i = 0; i < cases; ++i) {
    const GridShape s{3, 3};
    structured::BccbKernel a{std::vector<double>(static_cast<std::size_t>(s.n())), s};
    for (auto& v : a.b) v = rng.uniform(-2.0, 2.0);
    const auto from_kernel = structured::bccb_materialize(attention::softmax_first_row(a));

    auto dense = structured::bccb_materialize(a);
    for (int r = 0; r < dense.rows; ++r) {
      double m = dense.at(r, 0);
      for (int j = 1; j < dense.cols; ++j) m = std::max(m, dense.at(r, j));
      double denom = 0.0;
      for (int j = 0; j < dense.cols; ++j) {
        dense.at(r, j) = std::exp(dense.at(r, j) - m);
        denom += dense.at(r, j);
      }
      for (int j = 0; j < dense.cols; ++j) dense.at(r, j) /= denom;
    }
    worst = std::max(worst, linf_diff(from_kernel.data, dense.data));
  }
  return {"attention-softmax-first-row-dense", worst <= 1e-12, worst};
}

PropertyResult check_post_ones_identity(std::uint64_t seed, int cases) {
  SplitMix64 rng(seed ^ 0x0e5u);
  double worst = 0.0;
  for (int i = 0; i < cases; ++i) {
    const GridShape s{1 + static_cast<int>(rng.next() % 5),
                      1 + static_cast<int>(rng.next() % 5)};
    const int d = 1 + static_cast<int>(rng.next() % 3);
    const auto q = random_tensor(s, d, rng);
    const auto k = random_tensor(s, d, rng);
    const auto v = random_tensor(s, d, rng);
    SequenceTensor ones(s, d);
    std::fill(ones.data.begin(), ones.data.end(), 1.0);
    const auto plain = attention::circulant_attention(q, k, v);
    const auto post = attention::circulant_attention(q, k, v,
                                                     attention::Reweighting::post, &ones);
    worst = std::max(worst, linf_diff(plain.data, post.data));
  }
  return {"attention-post-ones-identity", worst == 0.0, worst};
}

}  // namespace

Suite run_attention_suite(std::uint64_t seed, int cases) {
  return {
      check_fast_naive_equivalence(seed, cases),
      check_double_stochasticity(seed, cases),
      check_shift_equivariance(seed, cases),
      check_convexity(seed, cases),
      check_degenerate_grid(seed, std::min(cases, 8)),
      check_scores_roll_invariance(seed, cases),
      check_softmax_first_row_dense(seed, std::min(cases, 10)),
      check_post_ones_identity(seed, std::min(cases, 10)),
  };
}

namespace {

PropertyResult check_adjoint_identity(std::uint64_t seed, int cases) {
  SplitMix64 rng(seed ^ 0xadu);
  double worst = 0.0;
  for (int i = 0; i < cases; ++i) {
    const GridShape s{1 + static_cast<int>(rng.next() % 6),
                      1 + static_cast<int>(rng.next() % 6)};
    const int d = 1 + static_cast<int>(rng.next() % 3);
    const auto b = random_tensor(s, d, rng);
    const auto x = random_tensor(s, d, rng);
    const auto y = random_tensor(s, d, rng);
    const auto bx = fft::circorr2d(b, x);
    const auto adj = fft::circonv2d(b, y);
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t j = 0; j < bx.data.size(); ++j) {
      lhs += bx.data[j] * y.data[j];
      rhs += x.data[j] * adj.data[j];
    }
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(std::abs(lhs), 1e-300));
  }
  return {"grad-adjoint-identity", worst <= 1e-10, worst};
}

PropertyResult check_softmax_jacobian_rowsum(std::uint64_t seed, int cases) {
  SplitMix64 rng(seed ^ 0x50f2u);
  double worst = 0.0;
  for (int i = 0; i < cases; ++i) {
    const int n = 2 + static_cast<int>(rng.next() % 15);
    structured::BccbKernel a{std::vector<double>(static_cast<std::size_t>(n)), GridShape{1, n}};
    for (auto& v : a.b) v = rng.uniform(-3.0, 3.0);
    const auto s = attention::softmax_first_row(a);
    // Row i of diag(s) - s s^T sums to s_i (1 - sum(s)).
    double total = 0.0;
    for (double v : s.b) total += v;
    for (double v : s.b) worst = std::max(worst, std::abs(v * (1.0 - total)));
  }
  return {"grad-softmax-jacobian-rowsum", worst <= 1e-12, worst};
}

double grad_rel_err(const SequenceTensor& analytic, const SequenceTensor& fd) {
  double scale = 1e-8;
  for (double v : analytic.data) scale = std::max(scale, std::abs(v));
  double err = 0.0;
  for (std::size_t i = 0; i < analytic.data.size(); ++i)
    err = std::max(err, std::abs(analytic.data[i] - fd.data[i]));
  return err / scale;
}

PropertyResult gradcheck_mode(attention::Reweighting mode, std::uint64_t seed,
                              const char* name) {
  constexpr double kEps = 1e-5;
  const int dims[] = {1, 2, 4};
  const GridShape grids[] = {{2, 2}, {3, 4}, {4, 4}};
  double worst = 0.0;

  for (int d : dims) {
    for (const GridShape& s : grids) {
      for (int trial = 0; trial < 5; ++trial) {
        SplitMix64 rng(seed ^ (static_cast<std::uint64_t>(d) << 32) ^
                       (static_cast<std::uint64_t>(s.n()) << 16) ^
                       static_cast<std::uint64_t>(trial));
        const auto q = random_tensor(s, d, rng);
        const auto k = random_tensor(s, d, rng);
        const auto v = random_tensor(s, d, rng);
        const auto t = random_tensor(s, d, rng);
        const auto up = random_tensor(s, d, rng);
        const SequenceTensor* tp =
            mode == attention::Reweighting::none ? nullptr : &t;

        const auto analytic =
            gradients::circulant_attention_backward(q, k, v, tp, mode, up);

        auto loss = [&](const SequenceTensor& qq, const SequenceTensor& kk,
                        const SequenceTensor& vv, const SequenceTensor* tt) {
          const auto out = attention::circulant_attention(qq, kk, vv, mode, tt);
          double acc = 0.0;
          for (std::size_t j = 0; j < out.data.size(); ++j)
            acc += out.data[j] * up.data[j];
          return acc;
        };

        const auto fd_q = gradients::finite_difference_gradient(
            [&](const SequenceTensor& x) { return loss(x, k, v, tp); }, q, kEps);
        const auto fd_k = gradients::finite_difference_gradient(
            [&](const SequenceTensor& x) { return loss(q, x, v, tp); }, k, kEps);
        const auto fd_v = gradients::finite_difference_gradient(
            [&](const SequenceTensor& x) { return loss(q, k, x, tp); }, v, kEps);

        worst = std::max({worst, grad_rel_err(analytic.dq, fd_q),
                          grad_rel_err(analytic.dk, fd_k),
                          grad_rel_err(analytic.dv, fd_v)});
        if (mode != attention::Reweighting::none) {
          const auto fd_t = gradients::finite_difference_gradient(
              [&](const SequenceTensor& x) { return loss(q, k, v, &x); }, t, kEps);
          worst = std::max(worst, grad_rel_err(*analytic.dt, fd_t));
        }
      }
    }
  }
  return {name, worst <= 1e-6, worst};
}

}  // namespace

Suite run_gradcheck_matrix(std::uint64_t seed) {
  return {
      gradcheck_mode(attention::Reweighting::none, seed, "grad-check-none"),
      gradcheck_mode(attention::Reweighting::pre, seed, "grad-check-pre"),
      gradcheck_mode(attention::Reweighting::post, seed, "grad-check-post"),
  };
}

Suite run_grad_suite(std::uint64_t seed, int cases) {
  Suite out = {
      check_adjoint_identity(seed, cases),
      check_softmax_jacobian_rowsum(seed, cases),
  };
  for (auto& r : run_gradcheck_matrix(seed)) out.push_back(std::move(r));
  return out;
}

}  // namespace circattn::verify
