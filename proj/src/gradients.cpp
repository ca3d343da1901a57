#include "circattn/gradients.hpp"

#include <cmath>
#include <cstddef>

#include "circattn/fft.hpp"

namespace circattn::gradients {

using attention::Reweighting;

namespace {

SequenceTensor hadamard(const SequenceTensor& a, const SequenceTensor& b) {
  SequenceTensor out = a;
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] *= b.data[i];
  return out;
}

// N x d tensor whose every channel equals the given length-N vector.
SequenceTensor broadcast_channels(const std::vector<double>& v, GridShape shape,
                                  int dim) {
  SequenceTensor out(shape, dim);
  for (int t = 0; t < shape.n(); ++t)
    for (int c = 0; c < dim; ++c) out.at(t, c) = v[static_cast<std::size_t>(t)];
  return out;
}

}  // namespace

HeadGradients circulant_attention_backward(const SequenceTensor& q,
                                           const SequenceTensor& k,
                                           const SequenceTensor& v,
                                           const SequenceTensor* reweight,
                                           Reweighting mode,
                                           const SequenceTensor& upstream) {
  if (!q.same_layout(k) || !q.same_layout(v) || !q.same_layout(upstream))
    throw ShapeMismatch("backward: Q, K, V, upstream must share N x d layout");
  if (mode != Reweighting::none) {
    if (reweight == nullptr)
      throw MissingReweight("backward: reweighting tensor required for pre/post modes");
    if (!reweight->same_layout(v))
      throw ShapeMismatch("backward: reweighting tensor must share V's layout");
  }
  q.shape.validate();

  const int n = q.tokens(), d = q.dim;
  const double scale = 1.0 / (static_cast<double>(n) * std::sqrt(static_cast<double>(d)));

  // Replay the forward pass pieces needed by the adjoints.
  const auto scores = attention::circulant_scores(q, k);
  const auto smax = attention::softmax_first_row(scores);
  const SequenceTensor values =
      (mode == Reweighting::pre) ? hadamard(v, *reweight) : v;

  HeadGradients g;
  if (mode != Reweighting::none) g.dt = SequenceTensor(q.shape, d);

  SequenceTensor up = upstream;
  if (mode == Reweighting::post) {
    const SequenceTensor out_pre =
        fft::circorr2d_kernel(smax.b, smax.shape, values);
    *g.dt = hadamard(upstream, out_pre);
    up = hadamard(upstream, *reweight);
  }

  // O_pre = corr(s, V'): signal adjoint and kernel adjoint.
  SequenceTensor d_values = fft::circonv2d_kernel(smax.b, smax.shape, up);
  const SequenceTensor ds_per_channel = fft::circorr2d(up, values);
  std::vector<double> ds(static_cast<std::size_t>(n), 0.0);
  for (int t = 0; t < n; ++t)
    for (int c = 0; c < d; ++c) ds[static_cast<std::size_t>(t)] += ds_per_channel.at(t, c);

  if (mode == Reweighting::pre) {
    *g.dt = hadamard(d_values, v);
    g.dv = hadamard(d_values, *reweight);
  } else {
    g.dv = std::move(d_values);
  }

  // Softmax Jacobian on the first-row vector: da = s .* (ds - <s, ds>).
  double dot = 0.0;
  for (int t = 0; t < n; ++t) dot += smax.b[static_cast<std::size_t>(t)] * ds[static_cast<std::size_t>(t)];
  std::vector<double> da(static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t) {
    const auto i = static_cast<std::size_t>(t);
    da[i] = smax.b[i] * (ds[i] - dot) * scale;
  }

  // a = scale * rowsum(corr(Q, K)); same per-channel upstream for Q and K.
  const SequenceTensor d_corr = broadcast_channels(da, q.shape, d);
  g.dq = fft::circorr2d(d_corr, k);
  g.dk = fft::circonv2d(q, d_corr);
  return g;
}

SequenceTensor finite_difference_gradient(
    const std::function<double(const SequenceTensor&)>& f,
    const SequenceTensor& x, double eps) {
  if (eps <= 0.0) throw DomainError("finite difference step must be positive");
  SequenceTensor grad(x.shape, x.dim);
  SequenceTensor probe = x;
  for (std::size_t i = 0; i < x.data.size(); ++i) {
    const double saved = probe.data[i];
    probe.data[i] = saved + eps;
    const double hi = f(probe);
    probe.data[i] = saved - eps;
    const double lo = f(probe);
    probe.data[i] = saved;
    grad.data[i] = (hi - lo) / (2.0 * eps);
  }
  return grad;
}

}  // namespace circattn::gradients
