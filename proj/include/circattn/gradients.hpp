#pragma once

#include <functional>
#include <optional>

#include "circattn/attention.hpp"
#include "circattn/types.hpp"

namespace circattn::gradients {

struct HeadGradients {
  SequenceTensor dq;
  SequenceTensor dk;
  SequenceTensor dv;
  std::optional<SequenceTensor> dt;
};

// Exact gradients of L = <upstream, circulant_attention(Q, K, V, mode, T)>
// with respect to each input, via hand-derived reverse-mode adjoints. The
// adjoint of x -> corr(b, x) in the signal is the no-conjugate convolution;
// the adjoint in the kernel is the correlation of upstream with the signal,
// summed over channels.
HeadGradients circulant_attention_backward(const SequenceTensor& q,
                                           const SequenceTensor& k,
                                           const SequenceTensor& v,
                                           const SequenceTensor* reweight,
                                           attention::Reweighting mode,
                                           const SequenceTensor& upstream);

// Central differences per coordinate: (f(x+eps e_i) - f(x-eps e_i)) / (2 eps).
SequenceTensor finite_difference_gradient(
    const std::function<double(const SequenceTensor&)>& f,
    const SequenceTensor& x, double eps);

}  // namespace circattn::gradients
