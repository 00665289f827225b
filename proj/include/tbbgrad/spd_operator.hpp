#pragma once

#include <memory>
#include <span>
#include <vector>

#include "tbbgrad/types.hpp"

namespace tbbgrad {

enum class StorageKind { Dense, Diagonal, SparseCsr };

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

// Symmetric positive definite linear operator behind a single apply()
// interface. Storage (dense row-major, diagonal, or CSR) is immutable and
// shared between copies, so copying is cheap and thread-safe for reads.
//
// Positivity is enforced only for diagonal storage; dense and sparse inputs
// are checked for symmetry (within 1e-12 relative) but definiteness is the
// caller's claim, which the solvers diagnose at runtime via s'y > 0.
class SpdOperator {
 public:
  static SpdOperator dense(int n, Vec row_major);
  static SpdOperator diagonal(Vec d);
  // Accepts either one triangle or a full symmetric pattern; duplicate
  // entries are summed first, then missing mirror entries are filled in.
  // Conflicting (i,j)/(j,i) values beyond 1e-12 relative are rejected.
  static SpdOperator sparse_symmetric(int n, std::vector<Triplet> entries);

  int dim() const { return n_; }
  StorageKind kind() const { return kind_; }

  void apply(std::span<const double> x, std::span<double> y) const;
  Vec apply(const Vec& x) const;

  // Same operator scaled by c > 0.
  SpdOperator scaled(double c) const;

  // Entries of the lower triangle (row >= col), row-major order, zeros
  // dropped for sparse/diagonal storage. Used by the matrix writer.
  std::vector<Triplet> lower_triangle() const;

  std::size_t nnz() const;

 private:
  struct Storage;
  SpdOperator(StorageKind kind, int n, std::shared_ptr<const Storage> st);

  StorageKind kind_;
  int n_;
  std::shared_ptr<const Storage> storage_;
};

// Free-function form of SpdOperator::apply; throws std::invalid_argument on
// dimension mismatch.
void apply_spd(const SpdOperator& a, std::span<const double> x, std::span<double> y);

}  // namespace tbbgrad
