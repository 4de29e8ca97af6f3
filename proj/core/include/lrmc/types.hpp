#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <utility>
#include <vector>

#include "lrmc/errors.hpp"

namespace lrmc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// A deduplicated set of (row, col) positions within a fixed m-by-n shape.
///
/// Positions are kept in lexicographic (row-major) order, which is the
/// canonical traversal order used by vect / vect_inv and the element-wise
/// proximal maps. Internally each position is packed as row * cols + col.
class IndexSet {
 public:
  IndexSet(Index rows, Index cols);
  IndexSet(Index rows, Index cols, const std::vector<std::pair<Index, Index>>& positions);

  /// Every position of the shape.
  static IndexSet all(Index rows, Index cols);

  /// Internal constructor from pre-packed indices; sorts and deduplicates.
  static IndexSet from_packed(Index rows, Index cols, std::vector<std::uint64_t> packed);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  std::size_t size() const { return idx_.size(); }
  bool empty() const { return idx_.empty(); }

  bool contains(Index i, Index j) const;

  /// All positions of the shape not in this set, same canonical order.
  IndexSet complement() const;

  /// Packed row-major linear indices, strictly increasing.
  const std::vector<std::uint64_t>& packed() const { return idx_; }

  /// Unpack the ord-th position (canonical order).
  std::pair<Index, Index> position(std::size_t ord) const {
    const std::uint64_t key = idx_[ord];
    return {static_cast<Index>(key / static_cast<std::uint64_t>(cols_)),
            static_cast<Index>(key % static_cast<std::uint64_t>(cols_))};
  }

  bool operator==(const IndexSet&) const = default;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<std::uint64_t> idx_;
};

struct Triplet {
  Index row = 0;
  Index col = 0;
  double value = 0.0;

  bool operator==(const Triplet&) const = default;
};

/// Sparse set of observed entries of an m-by-n matrix.
///
/// Triplets are stored sorted lexicographically with per-row offsets, so
/// residual-type loops over the observed set run in O(|observations|).
class ObservedMatrix {
 public:
  ObservedMatrix(Index rows, Index cols, std::vector<Triplet> triplets);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  std::size_t size() const { return triplets_.size(); }

  const std::vector<Triplet>& triplets() const { return triplets_; }
  const IndexSet& index_set() const { return index_set_; }

  /// First triplet index of row i; row_begin(rows()) == size().
  std::size_t row_begin(Index i) const { return row_start_[static_cast<std::size_t>(i)]; }
  std::size_t row_end(Index i) const { return row_start_[static_cast<std::size_t>(i) + 1]; }

  /// Dense m-by-n matrix holding the observed values, zero elsewhere.
  Matrix to_dense() const;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Triplet> triplets_;
  std::vector<std::size_t> row_start_;
  IndexSet index_set_;
};

/// Truncated singular value factorization A ~ u * diag(sigma) * v^T.
struct SvdFactors {
  Matrix u;      // m-by-k, orthonormal columns
  Vector sigma;  // k singular values, non-increasing, >= 0
  Matrix v;      // n-by-k, orthonormal columns

  Index rank(double tol = 0.0) const {
    Index r = 0;
    while (r < sigma.size() && sigma[r] > tol) ++r;
    return r;
  }

  Matrix reconstruct() const {
    if (sigma.size() == 0) return Matrix::Zero(u.rows(), v.rows());
    return u * sigma.asDiagonal() * v.transpose();
  }
};

/// Finite set of admissible entry values, strictly increasing.
class Alphabet {
 public:
  explicit Alphabet(std::vector<double> values);

  static Alphabet integer_range(int lo, int hi);

  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double min() const { return values_.front(); }
  double max() const { return values_.back(); }

  /// Nearest alphabet value; equidistant inputs round to the larger value.
  double quantize(double x) const;

  bool contains(double x) const;

  bool operator==(const Alphabet&) const = default;

 private:
  std::vector<double> values_;
};

}  // namespace lrmc
