#include "circattn/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "circattn/attention.hpp"

namespace circattn::analysis {

SimilarityReport bccb_similarity_report(const DenseMatrix& a, GridShape shape) {
  structured::ProjectionResult proj = structured::project_to_bccb(a, shape);
  return {proj.similarity, proj.residual_fro, std::move(proj.kernel)};
}

structured::BccbKernel extract_equivalent_kernel(const SequenceTensor& q,
                                                 const SequenceTensor& k) {
  return attention::softmax_first_row(attention::circulant_scores(q, k));
}

std::vector<int> quantize_grayscale(const std::vector<double>& values) {
  if (values.empty()) return {};
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it, hi = *hi_it;
  std::vector<int> out(values.size());
  if (hi == lo) {
    std::fill(out.begin(), out.end(), 128);
    return out;
  }
  const double span = hi - lo;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = (values[i] - lo) / span * 255.0;
    out[i] = static_cast<int>(std::floor(v + 0.5));  // half-up
  }
  return out;
}

void export_kernel_pgm(const structured::BccbKernel& kernel,
                       const std::filesystem::path& path) {
  kernel.validate();
  for (double v : kernel.b)
    if (!std::isfinite(v)) throw DomainError("kernel entries must be finite");

  const auto pixels = quantize_grayscale(kernel.b);
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << "P2\n" << kernel.shape.w << ' ' << kernel.shape.h << "\n255\n";
  for (int r = 0; r < kernel.shape.h; ++r) {
    for (int c = 0; c < kernel.shape.w; ++c) {
      if (c > 0) out << ' ';
      out << pixels[static_cast<std::size_t>(r * kernel.shape.w + c)];
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

PgmImage parse_pgm(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  std::string magic;
  in >> magic;
  if (magic != "P2") throw DomainError("expected ASCII PGM magic P2");
  PgmImage img;
  if (!(in >> img.width >> img.height >> img.maxval) || img.width < 1 ||
      img.height < 1)
    throw DomainError("malformed PGM header");
  img.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
  for (auto& p : img.pixels)
    if (!(in >> p)) throw DomainError("truncated PGM pixel data");
  return img;
}

}  // namespace circattn::analysis
