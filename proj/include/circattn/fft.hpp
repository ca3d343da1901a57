#pragma once

#include <complex>
#include <span>
#include <vector>

#include "circattn/types.hpp"

namespace circattn::fft {

using cplx = std::complex<double>;

// Unnormalized forward DFT: X[k] = sum_j x[j] exp(-2*pi*i*j*k/n).
// Radix-2 Cooley-Tukey for power-of-two lengths, Bluestein otherwise,
// so every length runs in O(n log n).
ComplexVector dft1d_forward(const ComplexVector& x);

// Inverse with 1/n normalization: x[j] = (1/n) sum_k X[k] exp(+2*pi*i*j*k/n).
ComplexVector dft1d_inverse(const ComplexVector& X);

// Separable 2D transforms (rows of length W, then columns of length H).
// The inverse carries the full 1/(H*W) normalization.
ComplexGrid dft2d_forward(const ComplexGrid& x);
ComplexGrid dft2d_inverse(const ComplexGrid& X);

// Channel-wise 2D circular cross-correlation:
//   out[:,c] = F2D^-1( conj(F2D(b[:,c])) .* F2D(x[:,c]) )
// b and x must share grid shape and channel count. The imaginary residue of
// the inverse transform is asserted below 1e-9 * max|x| and discarded.
SequenceTensor circorr2d(const SequenceTensor& b, const SequenceTensor& x);

// Channel-wise 2D circular convolution (no conjugation):
//   out[:,c] = F2D^-1( F2D(b[:,c]) .* F2D(x[:,c]) )
// This is the adjoint of x -> circorr2d(b, x) in the signal argument.
SequenceTensor circonv2d(const SequenceTensor& b, const SequenceTensor& x);

// Same two operations with a single real kernel shared by all channels of x;
// the kernel is transformed once.
SequenceTensor circorr2d_kernel(std::span<const double> kernel, GridShape shape,
                                const SequenceTensor& x);
SequenceTensor circonv2d_kernel(std::span<const double> kernel, GridShape shape,
                                const SequenceTensor& x);

namespace detail {

// In-place radix-2 transform; a.size() must be a power of two.
// sign = -1 forward, +1 inverse (unscaled).
void fft_pow2_inplace(std::vector<cplx>& a, int sign);

// Bluestein chirp-z transform for arbitrary length (unscaled), padded to the
// smallest power of two >= 2n-1. Exposed so tests can force this path on
// power-of-two lengths and compare against the radix-2 output.
std::vector<cplx> bluestein(const std::vector<cplx>& x, int sign);

// Dispatch: radix-2 when possible, Bluestein otherwise (unscaled).
std::vector<cplx> transform(std::vector<cplx> x, int sign);

}  // namespace detail

}  // namespace circattn::fft
