#include "circattn/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace circattn::io {

namespace {

double parse_value(const std::string& tok) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  while (end && *end == ' ') ++end;
  if (end == begin || (end && *end != '\0'))
    throw DomainError("unparseable numeric value: '" + tok + "'");
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string tok;
  std::istringstream ss(line);
  while (std::getline(ss, tok, sep)) out.push_back(tok);
  return out;
}

std::string next_nonempty_line(std::istream& in, const char* what) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return line;
  }
  throw DomainError(std::string("unexpected end of input reading ") + what);
}

long parse_positive_int(const std::string& tok, const char* what) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  const long v = std::strtol(begin, &end, 10);
  if (end == begin || (end && *end != '\0') || v < 1)
    throw DomainError(std::string(what) + " must be a positive integer, got '" + tok + "'");
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_matrix_csv(std::ostream& out, const DenseMatrix& m) {
  out << m.rows << ',' << m.cols << '\n';
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) {
      if (j > 0) out << ',';
      out << format_double(m.at(i, j));
    }
    out << '\n';
  }
}

void write_matrix_csv(const std::filesystem::path& path, const DenseMatrix& m) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  write_matrix_csv(out, m);
  if (!out) throw IoError("write failed: " + path.string());
}

DenseMatrix read_matrix_csv(std::istream& in) {
  const auto header = split(next_nonempty_line(in, "matrix CSV header"), ',');
  if (header.size() != 2)
    throw DomainError("matrix CSV header must be 'rows,cols'");
  const long rows = parse_positive_int(header[0], "rows");
  const long cols = parse_positive_int(header[1], "cols");

  DenseMatrix m(static_cast<int>(rows), static_cast<int>(cols));
  for (long i = 0; i < rows; ++i) {
    const auto toks = split(next_nonempty_line(in, "matrix CSV row"), ',');
    if (static_cast<long>(toks.size()) != cols)
      throw DomainError("matrix CSV row has wrong number of values");
    for (long j = 0; j < cols; ++j)
      m.at(static_cast<int>(i), static_cast<int>(j)) = parse_value(toks[static_cast<std::size_t>(j)]);
  }
  return m;
}

DenseMatrix read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  return read_matrix_csv(in);
}

void write_sequence_tensor(std::ostream& out, const SequenceTensor& t) {
  out << t.shape.h << ' ' << t.shape.w << ' ' << t.dim << '\n';
  for (int tok = 0; tok < t.tokens(); ++tok) {
    for (int c = 0; c < t.dim; ++c) {
      if (c > 0) out << ',';
      out << format_double(t.at(tok, c));
    }
    out << '\n';
  }
}

void write_sequence_tensor(const std::filesystem::path& path,
                           const SequenceTensor& t) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  write_sequence_tensor(out, t);
  if (!out) throw IoError("write failed: " + path.string());
}

SequenceTensor read_sequence_tensor(std::istream& in) {
  std::istringstream header(next_nonempty_line(in, "tensor header"));
  std::string hs, ws, ds;
  if (!(header >> hs >> ws >> ds))
    throw DomainError("tensor header must be 'H W d'");
  const long h = parse_positive_int(hs, "H");
  const long w = parse_positive_int(ws, "W");
  const long d = parse_positive_int(ds, "d");

  SequenceTensor t(GridShape{static_cast<int>(h), static_cast<int>(w)},
                   static_cast<int>(d));
  for (int tok = 0; tok < t.tokens(); ++tok) {
    const auto toks = split(next_nonempty_line(in, "tensor row"), ',');
    if (static_cast<long>(toks.size()) != d)
      throw DomainError("tensor row has wrong number of channels");
    for (long c = 0; c < d; ++c)
      t.at(tok, static_cast<int>(c)) = parse_value(toks[static_cast<std::size_t>(c)]);
  }
  return t;
}

SequenceTensor read_sequence_tensor(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  return read_sequence_tensor(in);
}

GridShape parse_grid_flag(const std::string& text) {
  const auto pos = text.find('x');
  if (pos == std::string::npos || pos == 0 || pos + 1 >= text.size())
    throw DomainError("grid must be given as HxW (lowercase x), got '" + text + "'");
  const long h = parse_positive_int(text.substr(0, pos), "grid H");
  const long w = parse_positive_int(text.substr(pos + 1), "grid W");
  return GridShape{static_cast<int>(h), static_cast<int>(w)};
}

}  // namespace circattn::io
