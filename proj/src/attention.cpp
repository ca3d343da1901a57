#include "circattn/attention.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "circattn/fft.hpp"
#include "circattn/rng.hpp"

namespace circattn::attention {

namespace {

void check_qkv(const SequenceTensor& q, const SequenceTensor& k,
               const SequenceTensor& v) {
  q.shape.validate();
  if (!q.same_layout(k) || !q.same_layout(v))
    throw ShapeMismatch("Q, K, V must share N x d layout");
}

const SequenceTensor* check_reweight(const SequenceTensor& v, Reweighting mode,
                                     const SequenceTensor* t) {
  if (mode == Reweighting::none) return nullptr;
  if (t == nullptr)
    throw MissingReweight("reweighting tensor required for pre/post modes");
  if (!t->same_layout(v))
    throw ShapeMismatch("reweighting tensor must share V's N x d layout");
  return t;
}

SequenceTensor hadamard(const SequenceTensor& a, const SequenceTensor& b) {
  SequenceTensor out = a;
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] *= b.data[i];
  return out;
}

std::vector<double> softmax_stable(const std::vector<double>& v) {
  const double m = *std::max_element(v.begin(), v.end());
  std::vector<double> out(v.size());
  double denom = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = std::exp(v[i] - m);
    denom += out[i];
  }
  for (auto& e : out) e /= denom;
  return out;
}

}  // namespace

void AttentionConfig::validate() const {
  shape.validate();
  if (heads < 1 || head_dim < 1 || model_dim < 1)
    throw DomainError("heads, head_dim, model_dim must be >= 1");
  if (model_dim != heads * head_dim)
    throw ShapeMismatch("model_dim must equal heads * head_dim");
}

ProjectionWeights random_projection_weights(const AttentionConfig& config) {
  config.validate();
  const int c = config.model_dim, d = config.head_dim;
  const double bound = 1.0 / std::sqrt(static_cast<double>(c));
  SplitMix64 rng(config.seed);

  auto draw = [&](int rows, int cols) {
    DenseMatrix m(rows, cols);
    for (auto& v : m.data) v = rng.uniform(-bound, bound);
    return m;
  };

  ProjectionWeights w;
  for (int h = 0; h < config.heads; ++h) w.wq.push_back(draw(c, d));
  for (int h = 0; h < config.heads; ++h) w.wk.push_back(draw(c, d));
  for (int h = 0; h < config.heads; ++h) w.wv.push_back(draw(c, d));
  for (int h = 0; h < config.heads; ++h) w.wt.push_back(draw(c, d));
  w.wo = draw(c, c);
  return w;
}

SequenceTensor apply_projection(const SequenceTensor& x, const DenseMatrix& w) {
  if (x.dim != w.rows)
    throw ShapeMismatch("projection: x channel count must equal weight rows");
  SequenceTensor out(x.shape, w.cols);
  const int n = x.tokens();
  for (int t = 0; t < n; ++t) {
    for (int j = 0; j < w.cols; ++j) {
      double acc = 0.0;
      for (int i = 0; i < w.rows; ++i) acc += x.at(t, i) * w.at(i, j);
      out.at(t, j) = acc;
    }
  }
  return out;
}

SequenceTensor self_attention_reference(const SequenceTensor& q,
                                        const SequenceTensor& k,
                                        const SequenceTensor& v) {
  check_qkv(q, k, v);
  const int n = q.tokens(), d = q.dim;
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));

  SequenceTensor out(q.shape, d);
  std::vector<double> row(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double dot = 0.0;
      for (int c = 0; c < d; ++c) dot += q.at(i, c) * k.at(j, c);
      row[static_cast<std::size_t>(j)] = dot * scale;
    }
    const auto wts = softmax_stable(row);
    for (int c = 0; c < d; ++c) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) acc += wts[static_cast<std::size_t>(j)] * v.at(j, c);
      out.at(i, c) = acc;
    }
  }
  return out;
}

structured::BccbKernel circulant_scores(const SequenceTensor& q,
                                        const SequenceTensor& k) {
  if (!q.same_layout(k)) throw ShapeMismatch("Q and K must share N x d layout");
  q.shape.validate();
  const int n = q.tokens(), d = q.dim;
  const SequenceTensor corr = fft::circorr2d(q, k);
  const double scale = 1.0 / (static_cast<double>(n) * std::sqrt(static_cast<double>(d)));

  structured::BccbKernel a{std::vector<double>(static_cast<std::size_t>(n), 0.0), q.shape};
  for (int t = 0; t < n; ++t) {
    double acc = 0.0;
    for (int c = 0; c < d; ++c) acc += corr.at(t, c);
    a.b[static_cast<std::size_t>(t)] = acc * scale;
  }
  return a;
}

structured::BccbKernel circulant_scores_naive(const SequenceTensor& q,
                                              const SequenceTensor& k,
                                              bool allow_large) {
  if (!q.same_layout(k)) throw ShapeMismatch("Q and K must share N x d layout");
  q.shape.validate();
  const int n = q.tokens(), d = q.dim;
  if (n > 4096 && !allow_large)
    throw DomainError("dense score matrix refused for N > 4096 "
                      "(pass allow_large to override)");

  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  DenseMatrix a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double dot = 0.0;
      for (int c = 0; c < d; ++c) dot += q.at(i, c) * k.at(j, c);
      a.at(i, j) = dot * scale;
    }
  }
  return structured::project_to_bccb(a, q.shape).kernel;
}

structured::BccbKernel softmax_first_row(const structured::BccbKernel& a) {
  a.validate();
  return {softmax_stable(a.b), a.shape};
}

SequenceTensor circulant_attention(const SequenceTensor& q,
                                   const SequenceTensor& k,
                                   const SequenceTensor& v,
                                   Reweighting mode,
                                   const SequenceTensor* reweight) {
  check_qkv(q, k, v);
  const SequenceTensor* t = check_reweight(v, mode, reweight);

  const auto weights = softmax_first_row(circulant_scores(q, k));
  const SequenceTensor& values = (mode == Reweighting::pre) ? hadamard(v, *t) : v;
  SequenceTensor out = fft::circorr2d_kernel(weights.b, weights.shape, values);
  if (mode == Reweighting::post) out = hadamard(out, *t);
  return out;
}

SequenceTensor circulant_attention_naive(const SequenceTensor& q,
                                         const SequenceTensor& k,
                                         const SequenceTensor& v,
                                         Reweighting mode,
                                         const SequenceTensor* reweight,
                                         bool allow_large) {
  check_qkv(q, k, v);
  const SequenceTensor* t = check_reweight(v, mode, reweight);

  const auto weights = softmax_first_row(circulant_scores_naive(q, k, allow_large));
  const DenseMatrix dense = structured::bccb_materialize(weights, allow_large);
  const SequenceTensor& values = (mode == Reweighting::pre) ? hadamard(v, *t) : v;

  const int n = v.tokens(), d = v.dim;
  SequenceTensor out(v.shape, d);
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < d; ++c) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) acc += dense.at(i, j) * values.at(j, c);
      out.at(i, c) = acc;
    }
  }
  if (mode == Reweighting::post) out = hadamard(out, *t);
  return out;
}

SequenceTensor compute_reweighting(const SequenceTensor& x, const DenseMatrix& wt) {
  SequenceTensor t = apply_projection(x, wt);
  for (auto& z : t.data) z = z / (1.0 + std::exp(-z));
  return t;
}

SequenceTensor multihead_circulant_attention(const SequenceTensor& x,
                                             const ProjectionWeights& weights,
                                             const AttentionConfig& config) {
  config.validate();
  const int c = config.model_dim, d = config.head_dim, heads = config.heads;
  if (x.dim != c || !(x.shape == config.shape))
    throw ShapeMismatch("input tensor must be N x model_dim over the configured grid");
  if (static_cast<int>(weights.wq.size()) != heads ||
      static_cast<int>(weights.wk.size()) != heads ||
      static_cast<int>(weights.wv.size()) != heads)
    throw ShapeMismatch("one Wq/Wk/Wv matrix required per head");
  if (config.mode != Reweighting::none && static_cast<int>(weights.wt.size()) != heads)
    throw MissingReweight("one Wt matrix required per head for pre/post modes");

  const int n = x.tokens();
  SequenceTensor concat(x.shape, c);
  for (int h = 0; h < heads; ++h) {
    const SequenceTensor q = apply_projection(x, weights.wq[static_cast<std::size_t>(h)]);
    const SequenceTensor k = apply_projection(x, weights.wk[static_cast<std::size_t>(h)]);
    const SequenceTensor v = apply_projection(x, weights.wv[static_cast<std::size_t>(h)]);

    SequenceTensor head_out;
    if (config.mode == Reweighting::none) {
      head_out = circulant_attention(q, k, v);
    } else {
      const SequenceTensor t = compute_reweighting(x, weights.wt[static_cast<std::size_t>(h)]);
      head_out = circulant_attention(q, k, v, config.mode, &t);
    }
    for (int tok = 0; tok < n; ++tok)
      for (int j = 0; j < d; ++j) concat.at(tok, h * d + j) = head_out.at(tok, j);
  }

  if (weights.wo.rows != c || weights.wo.cols != c)
    throw ShapeMismatch("output projection must be model_dim x model_dim");
  return apply_projection(concat, weights.wo);
}

}  // namespace circattn::attention
