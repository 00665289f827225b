#include "tbbgrad/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tbbgrad/errors.hpp"
#include "tbbgrad/kernels.hpp"

namespace tbbgrad {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

SpdOperator read_matrix_market(std::istream& in, const std::string& origin) {
  std::string line;
  long line_no = 0;

  if (!std::getline(in, line)) throw ParseError(origin + ": empty input", 1);
  ++line_no;
  {
    std::istringstream banner(line);
    std::string tag, object, format, field, symmetry;
    banner >> tag >> object >> format >> field >> symmetry;
    if (lower(tag) != "%%matrixmarket")
      throw ParseError(origin + ": missing %%MatrixMarket banner", line_no);
    if (lower(object) != "matrix")
      throw ParseError(origin + ": unsupported object '" + object + "'", line_no);
    if (lower(format) != "coordinate")
      throw ParseError(origin + ": unsupported format '" + format + "' (coordinate required)",
                       line_no);
    const std::string f = lower(field);
    if (f != "real" && f != "integer")
      throw ParseError(origin + ": unsupported field '" + field + "'", line_no);
    if (lower(symmetry) != "symmetric")
      throw ParseError(origin + ": unsupported symmetry '" + symmetry + "' (symmetric required)",
                       line_no);
  }

  long n_rows = -1, n_cols = -1, nnz = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line[0] == '%') continue;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream size_line(line);
    if (!(size_line >> n_rows >> n_cols >> nnz))
      throw ParseError(origin + ": malformed size line '" + line + "'", line_no);
    std::string rest;
    if (size_line >> rest)
      throw ParseError(origin + ": trailing tokens on size line", line_no);
    break;
  }
  if (n_rows < 0) throw ParseError(origin + ": missing size line", line_no);
  if (n_rows != n_cols)
    throw ParseError(origin + ": matrix must be square, got " + std::to_string(n_rows) + "x" +
                         std::to_string(n_cols),
                     line_no);
  if (n_rows == 0) throw ParseError(origin + ": matrix dimension is zero", line_no);
  if (nnz < 0) throw ParseError(origin + ": negative entry count", line_no);

  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(nnz));
  long seen = 0;
  while (seen < nnz && std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line[0] == '%') continue;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream entry(line);
    long i = 0, j = 0;
    double v = 0.0;
    if (!(entry >> i >> j >> v))
      throw ParseError(origin + ": malformed entry '" + line + "'", line_no);
    std::string rest;
    if (entry >> rest) throw ParseError(origin + ": trailing tokens on entry line", line_no);
    if (i < 1 || i > n_rows || j < 1 || j > n_cols)
      throw ParseError(origin + ": entry index (" + std::to_string(i) + "," + std::to_string(j) +
                           ") out of range",
                       line_no);
    entries.push_back({static_cast<int>(i - 1), static_cast<int>(j - 1), v});
    ++seen;
  }
  if (seen < nnz)
    throw ParseError(origin + ": expected " + std::to_string(nnz) + " entries, found " +
                         std::to_string(seen),
                     line_no);
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line[0] == '%') continue;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    throw ParseError(origin + ": unexpected data past the declared entries", line_no);
  }

  try {
    return SpdOperator::sparse_symmetric(static_cast<int>(n_rows), std::move(entries));
  } catch (const std::invalid_argument& e) {
    throw ParseError(origin + ": " + e.what(), line_no);
  }
}

SpdOperator load_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file '" + path + "'");
  return read_matrix_market(in, path);
}

void write_matrix_market(std::ostream& out, const SpdOperator& a) {
  const auto entries = a.lower_triangle();
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << a.dim() << ' ' << a.dim() << ' ' << entries.size() << "\n";
  char buf[64];
  for (const auto& t : entries) {
    std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", t.row + 1, t.col + 1, t.value);
    out << buf;
  }
}

void write_matrix_market_file(const std::string& path, const SpdOperator& a) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open matrix output file '" + path + "'");
  write_matrix_market(out, a);
}

QuadraticProblem quadratic_from_operator(std::string name, SpdOperator a, double x0_value,
                                         bool scale_by_g0) {
  const auto n = static_cast<std::size_t>(a.dim());
  Vec ones(n, 1.0);
  Vec b = a.apply(ones);
  Vec x0(n, x0_value);
  QuadraticProblem p(std::move(name), std::move(a), std::move(b), std::move(x0), ones);
  if (scale_by_g0) {
    Vec g(n);
    p.gradient(p.x0(), g);
    p.counters().reset();
    const double g0 = kernels::nrm2(g);
    if (g0 > 0.0) return p.scaled(1.0 / g0);
  }
  return p;
}

}  // namespace tbbgrad
