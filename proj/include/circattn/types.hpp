#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "circattn/errors.hpp"

namespace circattn {

// Token grid of H x W positions, flattened row-major to N = H*W tokens.
struct GridShape {
  int h{1};
  int w{1};

  int n() const { return h * w; }
  bool operator==(const GridShape& o) const { return h == o.h && w == o.w; }

  void validate() const {
    if (h < 1 || w < 1) throw DomainError("grid dims must be >= 1");
  }
};

// Complex sequence stored as split real/imaginary planes.
struct ComplexVector {
  std::vector<double> re;
  std::vector<double> im;

  ComplexVector() = default;
  explicit ComplexVector(std::size_t n) : re(n, 0.0), im(n, 0.0) {}
  ComplexVector(std::vector<double> r, std::vector<double> i)
      : re(std::move(r)), im(std::move(i)) {
    if (re.size() != im.size() || re.empty())
      throw ShapeMismatch("ComplexVector planes must share length n >= 1");
  }

  std::size_t size() const { return re.size(); }
};

// Complex H x W grid, planes row-major.
struct ComplexGrid {
  std::vector<double> re;
  std::vector<double> im;
  GridShape shape;

  ComplexGrid() : re(1, 0.0), im(1, 0.0) {}
  explicit ComplexGrid(GridShape s)
      : re(static_cast<std::size_t>(s.n()), 0.0),
        im(static_cast<std::size_t>(s.n()), 0.0),
        shape(s) {
    s.validate();
  }

  void validate() const {
    shape.validate();
    const auto n = static_cast<std::size_t>(shape.n());
    if (re.size() != n || im.size() != n)
      throw ShapeMismatch("ComplexGrid planes must hold H*W entries");
  }
};

// N x d real tensor over a token grid (queries, keys, values, outputs,
// reweighting factors). Row-major: token index varies slowest.
struct SequenceTensor {
  std::vector<double> data;
  GridShape shape;
  int dim{1};

  SequenceTensor() : data(1, 0.0) {}
  SequenceTensor(GridShape s, int d)
      : data(static_cast<std::size_t>(s.n()) * static_cast<std::size_t>(d), 0.0),
        shape(s),
        dim(d) {
    s.validate();
    if (d < 1) throw DomainError("channel dim must be >= 1");
  }

  int tokens() const { return shape.n(); }

  double& at(int token, int c) {
    return data[static_cast<std::size_t>(token) * dim + c];
  }
  double at(int token, int c) const {
    return data[static_cast<std::size_t>(token) * dim + c];
  }

  bool same_layout(const SequenceTensor& o) const {
    return shape == o.shape && dim == o.dim;
  }
};

// Plain dense matrix, row-major.
struct DenseMatrix {
  int rows{0};
  int cols{0};
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(int r, int c)
      : rows(r),
        cols(c),
        data(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), 0.0) {
    if (r < 1 || c < 1) throw DomainError("matrix dims must be >= 1");
  }

  double& at(int i, int j) {
    return data[static_cast<std::size_t>(i) * cols + j];
  }
  double at(int i, int j) const {
    return data[static_cast<std::size_t>(i) * cols + j];
  }
};

}  // namespace circattn
