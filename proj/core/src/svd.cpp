#include "lrmc/svd.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <string>

#include "rng.hpp"

namespace lrmc {

namespace {

Matrix gaussian_matrix(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  Matrix g(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) g(i, j) = detail::standard_normal(gen);
  return g;
}

// Thin Q factor of a tall matrix.
Matrix thin_q(const Matrix& y) {
  Eigen::HouseholderQR<Matrix> qr(y);
  return qr.householderQ() * Matrix::Identity(y.rows(), std::min(y.rows(), y.cols()));
}

SvdFactors dense_svd(const Matrix& a, Index k) {
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SvdFactors f;
  f.u = svd.matrixU().leftCols(k);
  f.sigma = svd.singularValues().head(k);
  f.v = svd.matrixV().leftCols(k);
  return f;
}

SvdFactors factors_from_subspace(const Matrix& a, const Matrix& q, Index k) {
  const Matrix b = q.transpose() * a;  // p-by-n
  Eigen::BDCSVD<Matrix> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SvdFactors f;
  f.u = q * svd.matrixU().leftCols(k);
  f.sigma = svd.singularValues().head(k);
  f.v = svd.matrixV().leftCols(k);
  return f;
}

}  // namespace

SvdFactors truncated_svd(const Matrix& a, Index k, double tol, const TruncatedSvdOptions& opts) {
  const Index min_dim = std::min(a.rows(), a.cols());
  if (k < 1 || k > min_dim)
    throw ParameterError("truncated_svd: rank " + std::to_string(k) + " out of range [1, " +
                         std::to_string(min_dim) + "]");
  if (tol < 0.0) throw ParameterError("truncated_svd: negative tolerance");

  if (min_dim <= opts.dense_cutoff) return dense_svd(a, k);

  const Index p = std::min(k + opts.oversample, min_dim);
  Matrix q = thin_q(a * gaussian_matrix(a.cols(), p, opts.seed));

  if (tol == 0.0) {
    // Fixed-budget mode: exactly min_passes re-orthonormalized power passes,
    // no stabilization requirement. This is the mode the proximal maps use;
    // their rank adaptation supplies the accuracy safety margin.
    for (int pass = 1; pass <= opts.min_passes; ++pass)
      q = thin_q(a * thin_q(a.transpose() * q));
    return factors_from_subspace(a, q, k);
  }

  Vector prev;
  for (int pass = 1; pass <= opts.max_passes; ++pass) {
    const Matrix qz = thin_q(a.transpose() * q);
    const Matrix y = a * qz;
    Eigen::HouseholderQR<Matrix> qr(y);
    q = qr.householderQ() * Matrix::Identity(y.rows(), p);
    // Singular values of R equal those of A*Qz and estimate the top of A's
    // spectrum; cheap compared with forming Q^T * A every pass.
    const Matrix r = qr.matrixQR().topRows(p).triangularView<Eigen::Upper>();
    Vector est = Eigen::BDCSVD<Matrix>(r).singularValues();

    if (pass >= opts.min_passes && prev.size() == est.size()) {
      const double scale = std::max(est[0], 1e-300);
      const double delta = (est.head(k) - prev.head(k)).cwiseAbs().maxCoeff();
      if (delta <= tol * scale) return factors_from_subspace(a, q, k);
    }
    prev = std::move(est);
  }

  auto best = std::make_shared<const SvdFactors>(factors_from_subspace(a, q, k));
  throw ConvergenceError("truncated_svd: singular values did not stabilize within " +
                             std::to_string(opts.max_passes) + " passes",
                         best);
}

}  // namespace lrmc
