#include "lrmc/masking.hpp"

#include <string>

namespace lrmc {

namespace {

void require_shape(const Matrix& a, Index rows, Index cols, const char* what) {
  if (a.rows() != rows || a.cols() != cols)
    throw DimensionError(std::string(what) + ": matrix is " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + ", expected " + std::to_string(rows) + "x" +
                         std::to_string(cols));
}

}  // namespace

Matrix mask(const Matrix& a, const IndexSet& s) {
  require_shape(a, s.rows(), s.cols(), "mask");
  Matrix out = Matrix::Zero(a.rows(), a.cols());
  for (std::size_t k = 0; k < s.size(); ++k) {
    const auto [i, j] = s.position(k);
    out(i, j) = a(i, j);
  }
  return out;
}

Vector vect(const Matrix& a, const IndexSet& s) {
  require_shape(a, s.rows(), s.cols(), "vect");
  Vector out(static_cast<Index>(s.size()));
  for (std::size_t k = 0; k < s.size(); ++k) {
    const auto [i, j] = s.position(k);
    out[static_cast<Index>(k)] = a(i, j);
  }
  return out;
}

Matrix vect_inv(const Vector& v, const IndexSet& s) {
  if (static_cast<std::size_t>(v.size()) != s.size())
    throw DimensionError("vect_inv: vector length " + std::to_string(v.size()) +
                         " != index set size " + std::to_string(s.size()));
  Matrix out = Matrix::Zero(s.rows(), s.cols());
  for (std::size_t k = 0; k < s.size(); ++k) {
    const auto [i, j] = s.position(k);
    out(i, j) = v[static_cast<Index>(k)];
  }
  return out;
}

double masked_residual_sq(const Matrix& x, const ObservedMatrix& o) {
  require_shape(x, o.rows(), o.cols(), "masked_residual_sq");
  double acc = 0.0;
  for (const Triplet& t : o.triplets()) {
    const double d = x(t.row, t.col) - t.value;
    acc += d * d;
  }
  return 0.5 * acc;
}

Matrix grad_f(const Matrix& x, const ObservedMatrix& o) {
  require_shape(x, o.rows(), o.cols(), "grad_f");
  Matrix out = Matrix::Zero(x.rows(), x.cols());
  for (const Triplet& t : o.triplets()) out(t.row, t.col) = x(t.row, t.col) - t.value;
  return out;
}

Matrix impute(const Matrix& x, const ObservedMatrix& o) {
  require_shape(x, o.rows(), o.cols(), "impute");
  Matrix out = x;
  for (const Triplet& t : o.triplets()) out(t.row, t.col) = t.value;
  return out;
}

}  // namespace lrmc
