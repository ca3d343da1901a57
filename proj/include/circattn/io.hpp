#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "circattn/types.hpp"

namespace circattn::io {

// 17 significant digits, round-trip safe for doubles.
std::string format_double(double v);

// Matrix CSV: line 1 "rows,cols", then one comma-separated line per row.
// Parsing accepts scientific notation; parse failures raise DomainError,
// stream/file failures raise IoError.
void write_matrix_csv(std::ostream& out, const DenseMatrix& m);
void write_matrix_csv(const std::filesystem::path& path, const DenseMatrix& m);
DenseMatrix read_matrix_csv(std::istream& in);
DenseMatrix read_matrix_csv(const std::filesystem::path& path);

// Sequence tensor file: line 1 "H W d", then N lines of d comma-separated
// values, token-major row-major over the grid.
void write_sequence_tensor(std::ostream& out, const SequenceTensor& t);
void write_sequence_tensor(const std::filesystem::path& path,
                           const SequenceTensor& t);
SequenceTensor read_sequence_tensor(std::istream& in);
SequenceTensor read_sequence_tensor(const std::filesystem::path& path);

// "HxW" with lowercase x, both sides positive integers.
GridShape parse_grid_flag(const std::string& text);

}  // namespace circattn::io
