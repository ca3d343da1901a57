#pragma once

#include <filesystem>
#include <vector>

#include "circattn/structured.hpp"
#include "circattn/types.hpp"

namespace circattn::analysis {

struct SimilarityReport {
  double similarity{1.0};
  double residual_fro{0.0};
  structured::BccbKernel kernel;  // first row, read as an H x W grid row-major
};

// How close an arbitrary N x N attention matrix is to its nearest BCCB
// matrix, as the squared-norm ratio of the orthogonal projection.
SimilarityReport bccb_similarity_report(const DenseMatrix& a, GridShape shape);

// softmax(circulant_scores(Q, K)) reshaped H x W: the global convolution
// kernel the structured attention applies. Entries positive, sum 1.
structured::BccbKernel extract_equivalent_kernel(const SequenceTensor& q,
                                                 const SequenceTensor& k);

// Min-max quantization to [0, 255], rounding half-up; constant grids map to
// mid-gray 128.
std::vector<int> quantize_grayscale(const std::vector<double>& values);

// ASCII PGM (magic P2, maxval 255) of the quantized kernel grid.
void export_kernel_pgm(const structured::BccbKernel& kernel,
                       const std::filesystem::path& path);

struct PgmImage {
  int width{0};
  int height{0};
  int maxval{0};
  std::vector<int> pixels;
};

PgmImage parse_pgm(const std::filesystem::path& path);

}  // namespace circattn::analysis
