#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "sparsebound/error.hpp"
#include "sparsebound/io.hpp"
#include "text.hpp"

namespace sparsebound {
namespace {

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t b = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// Reads the next line that is neither blank nor a `%` comment.
bool next_data_line(std::istream& in, std::string& line, std::size_t& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = detail::trim(line);
    if (t.empty() || t.front() == '%') continue;
    return true;
  }
  return false;
}

double parse_value(std::string_view tok, std::size_t lineno) {
  const auto v = detail::parse_double(tok);
  if (!v) throw ParseError(lineno, "'" + std::string(tok) + "' is not a number");
  if (!std::isfinite(*v)) throw ParseError(lineno, "non-finite value");
  return *v;
}

std::size_t parse_count(std::string_view tok, std::size_t lineno, const char* what) {
  const auto v = detail::parse_int<std::size_t>(tok);
  if (!v) throw ParseError(lineno, std::string(what) + " '" + std::string(tok) + "' is not a nonnegative integer");
  return *v;
}

enum class Symmetry { General, Symmetric, Skew };

}  // namespace

DenseMatrix read_matrix(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError(1, "empty input, expected a %%MatrixMarket header");
  lineno = 1;
  const auto head = split_ws(line);
  if (head.size() != 5 || head[0] != "%%MatrixMarket" || lower(head[1]) != "matrix")
    throw ParseError(1, "expected '%%MatrixMarket matrix <format> <field> <symmetry>'");
  const std::string format = lower(head[2]);
  const std::string field = lower(head[3]);
  const std::string symmetry = lower(head[4]);
  if (format != "array" && format != "coordinate")
    throw ParseError(1, "unknown format '" + std::string(head[2]) + "'");
  if (field == "complex" || field == "pattern")
    throw UnsupportedField("MatrixMarket field '" + field + "' is not supported");
  if (field != "real" && field != "integer" && field != "double")
    throw ParseError(1, "unknown field '" + std::string(head[3]) + "'");
  Symmetry sym = Symmetry::General;
  if (symmetry == "symmetric") {
    sym = Symmetry::Symmetric;
  } else if (symmetry == "skew-symmetric") {
    sym = Symmetry::Skew;
  } else if (symmetry == "hermitian") {
    throw UnsupportedField("MatrixMarket symmetry 'hermitian' is not supported");
  } else if (symmetry != "general") {
    throw ParseError(1, "unknown symmetry '" + std::string(head[4]) + "'");
  }

  if (!next_data_line(in, line, lineno)) throw ParseError(lineno + 1, "missing size line");
  const auto size = split_ws(line);
  const bool coord = format == "coordinate";
  if (size.size() != (coord ? 3U : 2U))
    throw ParseError(lineno, coord ? "size line must be 'rows cols nonzeros'" : "size line must be 'rows cols'");
  const std::size_t m = parse_count(size[0], lineno, "rows");
  const std::size_t n = parse_count(size[1], lineno, "cols");
  if (m == 0 || n == 0) throw ParseError(lineno, "dimensions must be >= 1");
  if (sym != Symmetry::General && m != n) throw ParseError(lineno, "symmetric storage needs a square matrix");

  std::vector<double> a(m * n, 0.0);
  auto set = [&](std::size_t j, std::size_t k, double v) {
    a[j * n + k] = v;
    if (sym == Symmetry::Symmetric) a[k * n + j] = v;
    if (sym == Symmetry::Skew) a[k * n + j] = -v;
  };

  if (coord) {
    const std::size_t nnz = parse_count(size[2], lineno, "nonzeros");
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (std::size_t e = 0; e < nnz; ++e) {
      if (!next_data_line(in, line, lineno))
        throw ParseError(lineno + 1, "expected " + std::to_string(nnz) + " entries, found " + std::to_string(e));
      const auto tok = split_ws(line);
      if (tok.size() != 3) throw ParseError(lineno, "entry must be 'row col value'");
      const std::size_t j = parse_count(tok[0], lineno, "row");
      const std::size_t k = parse_count(tok[1], lineno, "col");
      if (j < 1 || j > m || k < 1 || k > n)
        throw ParseError(lineno, "coordinate (" + std::string(tok[0]) + ", " + std::string(tok[1]) + ") out of range");
      if (sym == Symmetry::Skew && j == k) throw ParseError(lineno, "skew-symmetric diagonal entries must be omitted");
      const auto key = sym == Symmetry::General ? std::pair{j, k} : std::pair{std::max(j, k), std::min(j, k)};
      if (!seen.insert(key).second) throw ParseError(lineno, "duplicate entry");
      set(j - 1, k - 1, parse_value(tok[2], lineno));
    }
  } else {
    // Column-major; symmetric storage lists the lower triangle only.
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t first = sym == Symmetry::General ? 0 : (sym == Symmetry::Symmetric ? k : k + 1);
      for (std::size_t j = first; j < m; ++j) {
        if (!next_data_line(in, line, lineno)) throw ParseError(lineno + 1, "too few array entries");
        const auto tok = split_ws(line);
        if (tok.size() != 1) throw ParseError(lineno, "array entries must be one value per line");
        set(j, k, parse_value(tok[0], lineno));
      }
    }
  }
  if (next_data_line(in, line, lineno)) throw ParseError(lineno, "unexpected data after the last entry");
  return DenseMatrix(m, n, std::move(a));
}

DenseMatrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return read_matrix(in);
}

void write_matrix(const DenseMatrix& a, std::ostream& out, MatrixFormat format) {
  if (format == MatrixFormat::Array) {
    out << "%%MatrixMarket matrix array real general\n" << a.rows() << ' ' << a.cols() << '\n';
    for (std::size_t k = 0; k < a.cols(); ++k)
      for (std::size_t j = 0; j < a.rows(); ++j) out << detail::format_17(a(j, k)) << '\n';
    return;
  }
  std::size_t nnz = 0;
  for (double v : a.entries())
    if (v != 0.0) ++nnz;
  out << "%%MatrixMarket matrix coordinate real general\n"
      << a.rows() << ' ' << a.cols() << ' ' << nnz << '\n';
  for (std::size_t k = 0; k < a.cols(); ++k)
    for (std::size_t j = 0; j < a.rows(); ++j)
      if (a(j, k) != 0.0) out << j + 1 << ' ' << k + 1 << ' ' << detail::format_17(a(j, k)) << '\n';
}

void write_matrix(const DenseMatrix& a, const std::filesystem::path& path, MatrixFormat format) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_matrix(a, out, format);
  if (!out.flush()) throw IoError("write to '" + path.string() + "' failed");
}

WeightedGraph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::optional<std::size_t> vertices;
  std::size_t max_index = 0;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view body = line;
    if (const auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    const auto tok = split_ws(body);
    if (tok.empty()) continue;
    if (tok[0] == "vertices") {
      if (tok.size() != 2 || vertices || !edges.empty())
        throw ParseError(lineno, "'vertices V' must appear once, before any edge");
      vertices = parse_count(tok[1], lineno, "vertex count");
      continue;
    }
    if (tok.size() != 3) throw ParseError(lineno, "edge must be 'j k weight'");
    Edge e{parse_count(tok[0], lineno, "vertex"), parse_count(tok[1], lineno, "vertex"),
           parse_value(tok[2], lineno)};
    max_index = std::max({max_index, e.j, e.k});
    edges.push_back(e);
  }
  const std::size_t v = vertices.value_or(edges.empty() ? 1 : max_index + 1);
  try {
    return WeightedGraph(v, std::move(edges));
  } catch (const ParameterOutOfRange& ex) {
    throw ParseError(lineno, ex.what());
  }
}

WeightedGraph read_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return read_edge_list(in);
}

}  // namespace sparsebound
