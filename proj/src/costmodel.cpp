#include "circattn/costmodel.hpp"

#include <cmath>

#include "circattn/errors.hpp"

namespace circattn::costmodel {

FlopReport attention_flops(std::int64_t n, std::int64_t d, std::int64_t heads) {
  if (n < 1 || d < 1 || heads < 1)
    throw DomainError("attention_flops: N, d, heads must be >= 1");

  const double nn = static_cast<double>(n);
  const double dd = static_cast<double>(d);
  const double hh = static_cast<double>(heads);
  const double log_n = std::log2(nn);

  FlopReport r;
  r.n = n;
  r.d = d;
  r.heads = heads;
  r.flops_ca = hh * (nn * log_n * (4.0 * dd + 2.0) + 4.0 * nn * dd);
  r.flops_sa = hh * 2.0 * nn * nn * dd;
  r.ratio = r.flops_sa / r.flops_ca;
  return r;
}

double model_flops(const BlockModelSpec& spec, std::int64_t n_tokens) {
  if (spec.blocks < 0 || spec.model_dim < 1 || spec.heads < 1 ||
      spec.head_dim < 1 || spec.mlp_ratio < 0.0 || n_tokens < 1)
    throw DomainError("model_flops: invalid block model spec");
  if (spec.model_dim != spec.heads * spec.head_dim)
    throw DomainError("model_flops: model_dim must equal heads * head_dim");

  const double n = static_cast<double>(n_tokens);
  const double c = static_cast<double>(spec.model_dim);
  const double nc2 = n * c * c;

  const FlopReport attn = attention_flops(n_tokens, spec.head_dim, spec.heads);
  const double attn_term =
      spec.kind == AttentionKind::circulant ? attn.flops_ca : attn.flops_sa;

  double per_block = 3.0 * nc2 + nc2 + 2.0 * spec.mlp_ratio * nc2 + attn_term;
  if (spec.reweighting)
    per_block += nc2 + n * static_cast<double>(spec.head_dim) *
                           static_cast<double>(spec.heads);
  return static_cast<double>(spec.blocks) * per_block;
}

BlockModelSpec deit_tiny_spec() {
  return {12, 192, 3, 64, 4.0, AttentionKind::self_attention, false};
}

BlockModelSpec ca_deit_tiny_spec() {
  return {12, 192, 192, 1, 4.0, AttentionKind::circulant, true};
}

std::int64_t tokens_for_resolution(int resolution) {
  if (resolution < 16 || resolution % 16 != 0)
    throw DomainError("resolution must be a positive multiple of the patch size 16");
  const std::int64_t side = resolution / 16;
  return side * side;
}

}  // namespace circattn::costmodel
