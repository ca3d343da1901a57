#pragma once

#include <cstdint>
#include <vector>

#include "circattn/types.hpp"

namespace circattn::structured {

// First row of an n x n circulant matrix C, C[i][j] = c[(j-i) mod n].
struct CirculantKernel {
  std::vector<double> c;
};

// First row of an N x N block-circulant-with-circulant-blocks matrix over an
// H x W token grid: B[i][j] = b[((j_h - i_h) mod H) * W + ((j_w - i_w) mod W)].
struct BccbKernel {
  std::vector<double> b;
  GridShape shape;

  void validate() const {
    shape.validate();
    if (b.size() != static_cast<std::size_t>(shape.n()))
      throw ShapeMismatch("BCCB kernel length must equal H*W");
  }
};

// Orthogonal projection of a dense matrix onto the BCCB subspace.
// similarity = |projection|^2 / |A|^2 in [0, 1] (1 for the zero matrix).
struct ProjectionResult {
  BccbKernel kernel;
  double residual_fro{0.0};
  double similarity{1.0};
};

// Kernel index read by entry (i, j) of the materialized BCCB matrix.
int bccb_offset_index(GridShape shape, int i, int j);

DenseMatrix circulant_materialize(const CirculantKernel& k);

// Exact O(n^2) evaluation (Cx)_i = sum_k c[k] * x[(i+k) mod n]; the oracle
// for the DFT path.
std::vector<double> circulant_matvec_naive(const CirculantKernel& k,
                                           const std::vector<double>& x);

// Dense N x N materialization. Refuses N > 4096 unless allow_large is set.
DenseMatrix bccb_materialize(const BccbKernel& k, bool allow_large = false);

// O(N^2) double-sum y[i] = sum_{kh,kw} b[kh,kw] * x[(ih+kh) mod H, (iw+kw) mod W].
std::vector<double> bccb_matvec_naive(const BccbKernel& k,
                                      const std::vector<double>& x);

// O(N log N) equivalent of bccb_matvec_naive via the 2D DFT.
std::vector<double> bccb_matvec_fft(const BccbKernel& k,
                                    const std::vector<double>& x);

// Class-summation projection: kernel.b[k] = mean of A over the N positions
// sharing grid offset k; one O(N^2) pass, no basis materialization.
ProjectionResult project_to_bccb(const DenseMatrix& a, GridShape shape);

// True iff |A - proj(A)| <= |A - B| + 1e-9 for `trials` random BCCB B.
bool nearest_bccb_distance_check(const DenseMatrix& a, GridShape shape,
                                 int trials, std::uint64_t seed);

}  // namespace circattn::structured
