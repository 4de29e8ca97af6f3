#include <doctest.h>

#include <Eigen/QR>

#include "lrmc/svd.hpp"
#include "support/oracles.hpp"

using namespace lrmc;

namespace {

void check_orthonormal(const Matrix& q, double tol = 1e-8) {
  const Matrix gram = q.transpose() * q;
  CHECK((gram - Matrix::Identity(q.cols(), q.cols())).cwiseAbs().maxCoeff() <= tol);
}

}  // namespace

TEST_CASE("truncated_svd on a diagonal matrix") {
  Matrix a = Matrix::Zero(3, 3);
  a(0, 0) = 3.0;
  a(1, 1) = 1.0;
  const SvdFactors f = truncated_svd(a, 2);
  REQUIRE(f.sigma.size() == 2);
  CHECK(f.sigma[0] == doctest::Approx(3.0));
  CHECK(f.sigma[1] == doctest::Approx(1.0));
}

TEST_CASE("truncated_svd recovers an exactly low-rank matrix") {
  const Matrix a = oracle::random_lowrank(20, 15, 5, 31);
  const SvdFactors f = truncated_svd(a, 5);
  const SvdFactors ref = oracle::full_svd_eig(a);
  const Matrix best5 = ref.u.leftCols(5) * ref.sigma.head(5).asDiagonal() *
                       ref.v.leftCols(5).transpose();
  CHECK((f.reconstruct() - best5).norm() <= 1e-8);
}

TEST_CASE("full-rank request matches the Gram-eigendecomposition oracle") {
  const Matrix a = oracle::random_matrix(9, 7, 33);
  const SvdFactors f = truncated_svd(a, 7);
  const SvdFactors ref = oracle::full_svd_eig(a);
  CHECK((f.sigma - ref.sigma).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("truncated_svd rejects out-of-range ranks") {
  const Matrix a = Matrix::Identity(4, 4);
  CHECK_THROWS_AS(truncated_svd(a, 0), ParameterError);
  CHECK_THROWS_AS(truncated_svd(a, 5), ParameterError);
  CHECK_THROWS_AS(truncated_svd(a, 2, -1.0), ParameterError);
}

TEST_CASE("randomized path: exact low rank beyond the dense cutoff") {
  const Matrix a = oracle::random_lowrank(140, 100, 8, 35);
  const SvdFactors f = truncated_svd(a, 8);
  CHECK((f.reconstruct() - a).norm() <= 1e-8 * a.norm());
  check_orthonormal(f.u);
  check_orthonormal(f.v);
  for (Index i = 0; i < f.sigma.size(); ++i) {
    CHECK(f.sigma[i] >= 0.0);
    if (i > 0) CHECK(f.sigma[i] <= f.sigma[i - 1]);
  }
}

TEST_CASE("randomized path: separated spectrum matches the oracle") {
  // Geometric decay keeps the tail well separated from the sketched head.
  const Index m = 120, n = 90, k = 6;
  Eigen::HouseholderQR<Matrix> qr_u(oracle::random_matrix(m, n, 40));
  Eigen::HouseholderQR<Matrix> qr_v(oracle::random_matrix(n, n, 41));
  const Matrix bu = qr_u.householderQ() * Matrix::Identity(m, n);
  const Matrix bv = qr_v.householderQ() * Matrix::Identity(n, n);
  Vector s(n);
  for (Index i = 0; i < n; ++i) s[i] = std::pow(0.5, static_cast<double>(i));
  const Matrix a = bu * s.asDiagonal() * bv.transpose();

  const SvdFactors f = truncated_svd(a, k, 1e-9);
  const SvdFactors ref = oracle::full_svd_eig(a);
  CHECK((f.sigma - ref.sigma.head(k)).cwiseAbs().maxCoeff() <= 1e-7);
}

TEST_CASE("pass-budget exhaustion carries best-effort factors") {
  const Matrix a = oracle::random_matrix(100, 80, 55);
  TruncatedSvdOptions opts;
  opts.min_passes = 2;
  opts.max_passes = 2;
  try {
    truncated_svd(a, 5, 1e-18, opts);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    REQUIRE(e.best_effort() != nullptr);
    CHECK(e.best_effort()->sigma.size() == 5);
    check_orthonormal(e.best_effort()->u);
  }
}

TEST_CASE("zero tolerance selects the fixed pass budget and never throws") {
  const Matrix a = oracle::random_matrix(100, 80, 56);
  TruncatedSvdOptions opts;
  opts.min_passes = 2;
  opts.max_passes = 2;
  const SvdFactors f = truncated_svd(a, 5, 0.0, opts);
  CHECK(f.sigma.size() == 5);
  check_orthonormal(f.u);
  check_orthonormal(f.v);
  // on an exactly low-rank input the fixed budget is already accurate
  const Matrix lr = oracle::random_lowrank(120, 90, 6, 57);
  CHECK((truncated_svd(lr, 6, 0.0).reconstruct() - lr).norm() <= 1e-8 * lr.norm());
}

TEST_CASE("identical inputs give identical factors") {
  const Matrix a = oracle::random_matrix(90, 70, 60);
  const SvdFactors f1 = truncated_svd(a, 4);
  const SvdFactors f2 = truncated_svd(a, 4);
  CHECK(f1.sigma == f2.sigma);
  CHECK(f1.u == f2.u);
  CHECK(f1.v == f2.v);
}
