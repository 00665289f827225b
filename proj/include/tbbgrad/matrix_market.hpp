#pragma once

#include <iosfwd>
#include <string>

#include "tbbgrad/problems.hpp"
#include "tbbgrad/spd_operator.hpp"

namespace tbbgrad {

// Reads a coordinate-format symmetric real (or integer) matrix:
//   %%MatrixMarket matrix coordinate real symmetric
// Comment lines start with %. Entries are 1-based triples from one triangle
// (either works); duplicates are summed. Rejects non-square sizes, array
// format, pattern/complex fields, and non-symmetric banners with a ParseError
// carrying the offending 1-based line number.
SpdOperator load_matrix_market(const std::string& path);
SpdOperator read_matrix_market(std::istream& in, const std::string& origin = "<stream>");

// Writes the lower triangle in the same format, full double precision.
void write_matrix_market(std::ostream& out, const SpdOperator& a);
void write_matrix_market_file(const std::string& path, const SpdOperator& a);

// Standard quadratic wrapper for a loaded/assembled operator: b = A e so the
// minimizer is the all-ones vector, x0 = x0_value * e.
QuadraticProblem quadratic_from_operator(std::string name, SpdOperator a,
                                         double x0_value = -10.0, bool scale_by_g0 = false);

}  // namespace tbbgrad
