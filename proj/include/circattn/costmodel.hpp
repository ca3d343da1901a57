#pragma once

#include <cstdint>

namespace circattn::costmodel {

// Analytic per-layer attention cost in multiply-accumulate pairs, counting
// each length-N DFT as N log2 N:
//   flops_ca = heads * (N log2(N) (4d + 2) + 4 N d)
//   flops_sa = heads * 2 N^2 d
struct FlopReport {
  std::int64_t n{0};
  std::int64_t d{0};
  std::int64_t heads{0};
  double flops_ca{0.0};
  double flops_sa{0.0};
  double ratio{0.0};  // flops_sa / flops_ca
};

FlopReport attention_flops(std::int64_t n, std::int64_t d, std::int64_t heads);

enum class AttentionKind { self_attention, circulant };

// Uniform-block transformer estimate. Per block: QKV projections 3NC^2,
// output projection NC^2, MLP 2*mlp_ratio*NC^2, the attention term above,
// and NC^2 + N*d*heads when token reweighting is enabled. Patch embedding
// and classifier head are excluded.
struct BlockModelSpec {
  int blocks{1};
  int model_dim{1};
  int heads{1};
  int head_dim{1};
  double mlp_ratio{4.0};
  AttentionKind kind{AttentionKind::self_attention};
  bool reweighting{false};
};

double model_flops(const BlockModelSpec& spec, std::int64_t n_tokens);

// Presets: 12-block ViT-tiny layouts at model_dim 192, head partitions
// 3x64 (dense baseline) and 192x1 with reweighting (circulant variant).
BlockModelSpec deit_tiny_spec();
BlockModelSpec ca_deit_tiny_spec();

// Token count for a square input at the given resolution, patch size 16.
std::int64_t tokens_for_resolution(int resolution);

}  // namespace circattn::costmodel
