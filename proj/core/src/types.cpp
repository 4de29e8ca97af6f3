#include "lrmc/types.hpp"

#include <algorithm>
#include <cmath>

namespace lrmc {

namespace {

void check_shape(Index rows, Index cols) {
  if (rows < 0 || cols < 0) throw ParameterError("negative matrix dimension");
}

}  // namespace

IndexSet::IndexSet(Index rows, Index cols) : rows_(rows), cols_(cols) { check_shape(rows, cols); }

IndexSet::IndexSet(Index rows, Index cols, const std::vector<std::pair<Index, Index>>& positions)
    : rows_(rows), cols_(cols) {
  check_shape(rows, cols);
  idx_.reserve(positions.size());
  for (const auto& [i, j] : positions) {
    if (i < 0 || i >= rows || j < 0 || j >= cols)
      throw DimensionError("index (" + std::to_string(i) + ", " + std::to_string(j) +
                           ") out of bounds for " + std::to_string(rows) + "x" +
                           std::to_string(cols));
    idx_.push_back(static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(cols) +
                   static_cast<std::uint64_t>(j));
  }
  std::sort(idx_.begin(), idx_.end());
  idx_.erase(std::unique(idx_.begin(), idx_.end()), idx_.end());
}

IndexSet IndexSet::all(Index rows, Index cols) {
  check_shape(rows, cols);
  IndexSet s(rows, cols);
  const std::uint64_t total = static_cast<std::uint64_t>(rows) * static_cast<std::uint64_t>(cols);
  s.idx_.resize(total);
  for (std::uint64_t k = 0; k < total; ++k) s.idx_[k] = k;
  return s;
}

IndexSet IndexSet::from_packed(Index rows, Index cols, std::vector<std::uint64_t> packed) {
  check_shape(rows, cols);
  const std::uint64_t total = static_cast<std::uint64_t>(rows) * static_cast<std::uint64_t>(cols);
  std::sort(packed.begin(), packed.end());
  packed.erase(std::unique(packed.begin(), packed.end()), packed.end());
  if (!packed.empty() && packed.back() >= total)
    throw DimensionError("packed index out of bounds");
  IndexSet s(rows, cols);
  s.idx_ = std::move(packed);
  return s;
}

bool IndexSet::contains(Index i, Index j) const {
  if (i < 0 || i >= rows_ || j < 0 || j >= cols_) return false;
  const std::uint64_t key =
      static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(cols_) + static_cast<std::uint64_t>(j);
  return std::binary_search(idx_.begin(), idx_.end(), key);
}

IndexSet IndexSet::complement() const {
  const std::uint64_t total = static_cast<std::uint64_t>(rows_) * static_cast<std::uint64_t>(cols_);
  IndexSet out(rows_, cols_);
  out.idx_.reserve(total - idx_.size());
  std::size_t pos = 0;
  for (std::uint64_t key = 0; key < total; ++key) {
    if (pos < idx_.size() && idx_[pos] == key) {
      ++pos;
    } else {
      out.idx_.push_back(key);
    }
  }
  return out;
}

ObservedMatrix::ObservedMatrix(Index rows, Index cols, std::vector<Triplet> triplets)
    : rows_(rows), cols_(cols), triplets_(std::move(triplets)), index_set_(rows, cols) {
  check_shape(rows, cols);
  std::vector<std::uint64_t> packed;
  packed.reserve(triplets_.size());
  for (const Triplet& t : triplets_) {
    if (t.row < 0 || t.row >= rows_ || t.col < 0 || t.col >= cols_)
      throw DimensionError("observation (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                           ") out of bounds for " + std::to_string(rows_) + "x" +
                           std::to_string(cols_));
    if (!std::isfinite(t.value)) throw DataError("non-finite observed value");
    packed.push_back(static_cast<std::uint64_t>(t.row) * static_cast<std::uint64_t>(cols_) +
                     static_cast<std::uint64_t>(t.col));
  }

  std::sort(triplets_.begin(), triplets_.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  for (std::size_t k = 1; k < triplets_.size(); ++k) {
    if (triplets_[k].row == triplets_[k - 1].row && triplets_[k].col == triplets_[k - 1].col)
      throw DataError("duplicate observation at (" + std::to_string(triplets_[k].row) + ", " +
                      std::to_string(triplets_[k].col) + ")");
  }

  row_start_.assign(static_cast<std::size_t>(rows_) + 1, 0);
  for (const Triplet& t : triplets_) ++row_start_[static_cast<std::size_t>(t.row) + 1];
  for (std::size_t i = 1; i < row_start_.size(); ++i) row_start_[i] += row_start_[i - 1];

  index_set_ = IndexSet::from_packed(rows_, cols_, std::move(packed));
}

Matrix ObservedMatrix::to_dense() const {
  Matrix out = Matrix::Zero(rows_, cols_);
  for (const Triplet& t : triplets_) out(t.row, t.col) = t.value;
  return out;
}

Alphabet::Alphabet(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw ParameterError("alphabet must contain at least one value");
  for (double v : values_)
    if (!std::isfinite(v)) throw ParameterError("alphabet values must be finite");
  std::sort(values_.begin(), values_.end());
  for (std::size_t k = 1; k < values_.size(); ++k)
    if (values_[k] == values_[k - 1])
      throw ParameterError("alphabet values must be distinct");
}

Alphabet Alphabet::integer_range(int lo, int hi) {
  if (hi < lo) throw ParameterError("empty integer range");
  std::vector<double> vals;
  vals.reserve(static_cast<std::size_t>(hi - lo) + 1);
  for (int v = lo; v <= hi; ++v) vals.push_back(static_cast<double>(v));
  return Alphabet(std::move(vals));
}

double Alphabet::quantize(double x) const {
  auto it = std::lower_bound(values_.begin(), values_.end(), x);
  if (it == values_.begin()) return values_.front();
  if (it == values_.end()) return values_.back();
  const double hi = *it;
  const double lo = *(it - 1);
  // ties round up
  return (x - lo < hi - x) ? lo : hi;
}

bool Alphabet::contains(double x) const {
  return std::binary_search(values_.begin(), values_.end(), x);
}

}  // namespace lrmc
