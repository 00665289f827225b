#include "tbbgrad/spd_operator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "tbbgrad/kernels.hpp"

namespace tbbgrad {

struct SpdOperator::Storage {
  // Dense: row-major n*n values. Diagonal: n values. CSR: the usual triple.
  Vec dense;
  Vec diag;
  std::vector<std::size_t> row_ptr;
  std::vector<int> col;
  Vec val;
};

SpdOperator::SpdOperator(StorageKind kind, int n, std::shared_ptr<const Storage> st)
    : kind_(kind), n_(n), storage_(std::move(st)) {}

SpdOperator SpdOperator::dense(int n, Vec row_major) {
  if (n <= 0) throw std::invalid_argument("dense operator: dimension must be positive");
  if (row_major.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
    throw std::invalid_argument("dense operator: expected n*n values");
  double max_abs = 0.0;
  for (double v : row_major) max_abs = std::max(max_abs, std::abs(v));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double a = row_major[static_cast<std::size_t>(i) * n + j];
      const double b = row_major[static_cast<std::size_t>(j) * n + i];
      if (std::abs(a - b) > 1e-12 * std::max(1.0, max_abs))
        throw std::invalid_argument("dense operator: input is not symmetric at (" +
                                    std::to_string(i) + "," + std::to_string(j) + ")");
    }
  // Exact symmetrization so apply() is bit-symmetric.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double m = 0.5 * (row_major[static_cast<std::size_t>(i) * n + j] +
                              row_major[static_cast<std::size_t>(j) * n + i]);
      row_major[static_cast<std::size_t>(i) * n + j] = m;
      row_major[static_cast<std::size_t>(j) * n + i] = m;
    }
  auto st = std::make_shared<Storage>();
  st->dense = std::move(row_major);
  return SpdOperator(StorageKind::Dense, n, std::move(st));
}

SpdOperator SpdOperator::diagonal(Vec d) {
  if (d.empty()) throw std::invalid_argument("diagonal operator: dimension must be positive");
  for (std::size_t i = 0; i < d.size(); ++i)
    if (!(d[i] > 0.0))
      throw std::invalid_argument("diagonal operator: entry " + std::to_string(i) +
                                  " is not strictly positive");
  const int n = static_cast<int>(d.size());
  auto st = std::make_shared<Storage>();
  st->diag = std::move(d);
  return SpdOperator(StorageKind::Diagonal, n, std::move(st));
}

SpdOperator SpdOperator::sparse_symmetric(int n, std::vector<Triplet> entries) {
  if (n <= 0) throw std::invalid_argument("sparse operator: dimension must be positive");
  for (const auto& t : entries)
    if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n)
      throw std::invalid_argument("sparse operator: index (" + std::to_string(t.row) + "," +
                                  std::to_string(t.col) + ") out of range");
  // Sum duplicates.
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<Triplet> merged;
  merged.reserve(entries.size());
  for (const auto& t : entries) {
    if (!merged.empty() && merged.back().row == t.row && merged.back().col == t.col)
      merged.back().value += t.value;
    else
      merged.push_back(t);
  }
  // Mirror-complete: every off-diagonal entry must either have a matching
  // mirror or none, in which case the mirror is added.
  auto find = [&](int r, int c) -> const Triplet* {
    auto it = std::lower_bound(merged.begin(), merged.end(), std::pair{r, c},
                               [](const Triplet& t, const std::pair<int, int>& k) {
                                 return t.row != k.first ? t.row < k.first : t.col < k.second;
                               });
    if (it != merged.end() && it->row == r && it->col == c) return &*it;
    return nullptr;
  };
  double max_abs = 0.0;
  for (const auto& t : merged) max_abs = std::max(max_abs, std::abs(t.value));
  std::vector<Triplet> full;
  full.reserve(2 * merged.size());
  for (const auto& t : merged) {
    full.push_back(t);
    if (t.row == t.col) continue;
    const Triplet* mirror = find(t.col, t.row);
    if (mirror) {
      if (std::abs(mirror->value - t.value) > 1e-12 * std::max(1.0, max_abs))
        throw std::invalid_argument("sparse operator: asymmetric entries at (" +
                                    std::to_string(t.row) + "," + std::to_string(t.col) + ")");
    } else {
      full.push_back({t.col, t.row, t.value});
    }
  }
  std::sort(full.begin(), full.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  auto st = std::make_shared<Storage>();
  st->row_ptr.assign(static_cast<std::size_t>(n) + 1, 0);
  st->col.reserve(full.size());
  st->val.reserve(full.size());
  for (const auto& t : full) {
    ++st->row_ptr[static_cast<std::size_t>(t.row) + 1];
    st->col.push_back(t.col);
    st->val.push_back(t.value);
  }
  for (int i = 0; i < n; ++i) st->row_ptr[i + 1] += st->row_ptr[i];
  return SpdOperator(StorageKind::SparseCsr, n, std::move(st));
}

void SpdOperator::apply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != static_cast<std::size_t>(n_) || y.size() != static_cast<std::size_t>(n_))
    throw std::invalid_argument("apply: dimension mismatch (operator dim " + std::to_string(n_) +
                                ", x " + std::to_string(x.size()) + ", y " +
                                std::to_string(y.size()) + ")");
  switch (kind_) {
    case StorageKind::Dense:
      kernels::matvec_dense(static_cast<std::size_t>(n_), storage_->dense, x, y);
      break;
    case StorageKind::Diagonal:
      kernels::matvec_diag(storage_->diag, x, y);
      break;
    case StorageKind::SparseCsr:
      kernels::matvec_csr(storage_->row_ptr, storage_->col, storage_->val, x, y);
      break;
  }
}

Vec SpdOperator::apply(const Vec& x) const {
  Vec y(x.size());
  apply(std::span<const double>(x), std::span<double>(y));
  return y;
}

SpdOperator SpdOperator::scaled(double c) const {
  if (!(c > 0.0)) throw std::invalid_argument("scaled: factor must be strictly positive");
  auto st = std::make_shared<Storage>(*storage_);
  auto scale = [c](Vec& v) {
    for (auto& e : v) e *= c;
  };
  scale(st->dense);
  scale(st->diag);
  scale(st->val);
  return SpdOperator(kind_, n_, std::move(st));
}

std::vector<Triplet> SpdOperator::lower_triangle() const {
  std::vector<Triplet> out;
  switch (kind_) {
    case StorageKind::Dense:
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j <= i; ++j)
          out.push_back({i, j, storage_->dense[static_cast<std::size_t>(i) * n_ + j]});
      break;
    case StorageKind::Diagonal:
      for (int i = 0; i < n_; ++i)
        if (storage_->diag[i] != 0.0) out.push_back({i, i, storage_->diag[i]});
      break;
    case StorageKind::SparseCsr:
      for (int i = 0; i < n_; ++i)
        for (std::size_t p = storage_->row_ptr[i]; p < storage_->row_ptr[i + 1]; ++p)
          if (storage_->col[p] <= i && storage_->val[p] != 0.0)
            out.push_back({i, storage_->col[p], storage_->val[p]});
      break;
  }
  return out;
}

std::size_t SpdOperator::nnz() const {
  switch (kind_) {
    case StorageKind::Dense:
      return static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_);
    case StorageKind::Diagonal:
      return static_cast<std::size_t>(n_);
    case StorageKind::SparseCsr:
      return storage_->val.size();
  }
  return 0;
}

void apply_spd(const SpdOperator& a, std::span<const double> x, std::span<double> y) {
  a.apply(x, y);
}

}  // namespace tbbgrad
