#pragma once

#include <cstdint>
#include <vector>

#include "circattn/structured.hpp"
#include "circattn/types.hpp"

namespace circattn::attention {

enum class Reweighting { none, pre, post };

struct AttentionConfig {
  GridShape shape;
  int heads{1};
  int head_dim{1};
  int model_dim{1};
  Reweighting mode{Reweighting::post};
  std::uint64_t seed{0};

  void validate() const;
};

// Per-head projection matrices (each C x d) plus the C x C output projection.
struct ProjectionWeights {
  std::vector<DenseMatrix> wq, wk, wv, wt;
  DenseMatrix wo;
};

// Deterministic weights, uniform in [-1/sqrt(C), 1/sqrt(C)), drawn from
// SplitMix64(config.seed) in the order wq[0..], wk[0..], wv[0..], wt[0..], wo.
ProjectionWeights random_projection_weights(const AttentionConfig& config);

// x (N x C) times w (C x d) -> N x d over the same grid.
SequenceTensor apply_projection(const SequenceTensor& x, const DenseMatrix& w);

// Dense O(N^2 d) baseline: A = Q K^T / sqrt(d), O = rowsoftmax(A) V.
SequenceTensor self_attention_reference(const SequenceTensor& q,
                                        const SequenceTensor& k,
                                        const SequenceTensor& v);

// First row of the projected score matrix via the DFT path:
//   a = (1/(N sqrt(d))) * rowsum_channels(circorr2d(Q, K)).
structured::BccbKernel circulant_scores(const SequenceTensor& q,
                                        const SequenceTensor& k);

// Same kernel through the dense route: form Q K^T / sqrt(d) and project onto
// the BCCB subspace. O(N^2 d); exists as the equivalence oracle.
structured::BccbKernel circulant_scores_naive(const SequenceTensor& q,
                                              const SequenceTensor& k,
                                              bool allow_large = false);

// Softmax over the first-row kernel; equals the row-wise softmax of the full
// matrix because every row is a permutation of the first.
structured::BccbKernel softmax_first_row(const structured::BccbKernel& a);

// O = softmax(scores) applied to V as a shared 2D kernel, O(N log N * d).
// mode pre multiplies V by T before, mode post multiplies the output by T.
SequenceTensor circulant_attention(const SequenceTensor& q,
                                   const SequenceTensor& k,
                                   const SequenceTensor& v,
                                   Reweighting mode = Reweighting::none,
                                   const SequenceTensor* reweight = nullptr);

// Projection-then-dense-multiply route with identical contract; the oracle
// for circulant_attention and the timed "naive" benchmark path.
SequenceTensor circulant_attention_naive(const SequenceTensor& q,
                                         const SequenceTensor& k,
                                         const SequenceTensor& v,
                                         Reweighting mode = Reweighting::none,
                                         const SequenceTensor* reweight = nullptr,
                                         bool allow_large = false);

// T = SiLU(x Wt), SiLU(z) = z / (1 + exp(-z)).
SequenceTensor compute_reweighting(const SequenceTensor& x, const DenseMatrix& wt);

// Per-head projections, circulant attention per head, concat, then Wo.
SequenceTensor multihead_circulant_attention(const SequenceTensor& x,
                                             const ProjectionWeights& weights,
                                             const AttentionConfig& config);

}  // namespace circattn::attention
