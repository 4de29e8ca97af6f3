#pragma once

// Test-only reference implementations. Everything here is deliberately
// naive and independent of the library's computation paths: brute-force
// loops, 1-D golden-section searches, and a full SVD assembled from the
// eigendecomposition of the Gram matrix.

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "lrmc/types.hpp"

namespace oracle {

inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& gen, double lo, double hi) {
  return lo + (hi - lo) * uniform01(gen);
}

inline double normal(std::mt19937_64& gen) {
  double u1 = uniform01(gen);
  const double u2 = uniform01(gen);
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793 * u2);
}

inline lrmc::Matrix random_matrix(lrmc::Index rows, lrmc::Index cols, std::uint64_t seed,
                                  double scale = 1.0) {
  std::mt19937_64 gen(seed);
  lrmc::Matrix a(rows, cols);
  for (lrmc::Index j = 0; j < cols; ++j)
    for (lrmc::Index i = 0; i < rows; ++i) a(i, j) = scale * normal(gen);
  return a;
}

inline lrmc::Matrix random_lowrank(lrmc::Index rows, lrmc::Index cols, lrmc::Index rank,
                                   std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  lrmc::Matrix a(rows, rank);
  lrmc::Matrix b(cols, rank);
  for (lrmc::Index j = 0; j < rank; ++j) {
    for (lrmc::Index i = 0; i < rows; ++i) a(i, j) = normal(gen);
    for (lrmc::Index i = 0; i < cols; ++i) b(i, j) = normal(gen);
  }
  return a * b.transpose();
}

/// Index set with each position included independently with probability p.
inline lrmc::IndexSet random_index_set(lrmc::Index rows, lrmc::Index cols, double p,
                                       std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<std::pair<lrmc::Index, lrmc::Index>> pos;
  for (lrmc::Index i = 0; i < rows; ++i)
    for (lrmc::Index j = 0; j < cols; ++j)
      if (uniform01(gen) < p) pos.emplace_back(i, j);
  return lrmc::IndexSet(rows, cols, pos);
}

/// Observations of `truth` at the positions of `s`.
inline lrmc::ObservedMatrix observe(const lrmc::Matrix& truth, const lrmc::IndexSet& s) {
  std::vector<lrmc::Triplet> trips;
  trips.reserve(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    const auto [i, j] = s.position(k);
    trips.push_back({i, j, truth(i, j)});
  }
  return lrmc::ObservedMatrix(truth.rows(), truth.cols(), std::move(trips));
}

/// Golden-section search for the minimizer of a unimodal function on [lo, hi].
template <typename F>
double golden_min(F&& f, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < 200 && (b - a) > 1e-12; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

/// Scalar minimizer of |u - a| + (u - y)^2 / (2 xi).
inline double prox_shifted_l1_scalar(double y, double a, double xi) {
  if (xi == 0.0) return y;
  const double lo = std::min(y, a) - 1.0;
  const double hi = std::max(y, a) + 1.0;
  return golden_min([&](double u) { return std::abs(u - a) + (u - y) * (u - y) / (2.0 * xi); },
                    lo, hi);
}

/// Sequential composition of the scalar proxes for k = K down to 1.
inline double prox_discrete_scalar(double y, const std::vector<double>& alphabet_sorted,
                                   double xi) {
  double u = y;
  for (auto it = alphabet_sorted.rbegin(); it != alphabet_sorted.rend(); ++it)
    u = prox_shifted_l1_scalar(u, *it, xi);
  return u;
}

/// Scalar minimizer of lambda log(1 + s/theta) + (s - sigma)^2 / 2 over
/// s >= 0. Grid scan plus golden refinement; the landscape can have two
/// basins, so a pure golden search is not enough.
inline double prox_lsp_scalar_ref(double sigma, double lambda, double theta) {
  const auto h = [&](double s) {
    const double d = s - sigma;
    return lambda * std::log1p(s / theta) + 0.5 * d * d;
  };
  const double hi = sigma + 1.0;
  const int grid = 4000;
  double best_s = 0.0;
  double best = h(0.0);
  for (int i = 1; i <= grid; ++i) {
    const double s = hi * static_cast<double>(i) / grid;
    if (h(s) < best) {
      best = h(s);
      best_s = s;
    }
  }
  const double step = hi / grid;
  const double refined =
      golden_min(h, std::max(0.0, best_s - step), std::min(hi, best_s + step));
  return h(refined) < best ? refined : best_s;
}

/// Full SVD assembled from the eigendecomposition of the smaller Gram
/// matrix. Singular vectors for near-zero singular values are unreliable;
/// callers should only rely on components with sigma well above zero.
inline lrmc::SvdFactors full_svd_eig(const lrmc::Matrix& a) {
  using lrmc::Index;
  using lrmc::Matrix;
  const bool wide = a.rows() < a.cols();
  const Matrix gram = wide ? Matrix(a * a.transpose()) : Matrix(a.transpose() * a);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  const Index k = gram.rows();

  lrmc::SvdFactors f;
  f.sigma = lrmc::Vector(k);
  Matrix basis(k, k);
  for (Index i = 0; i < k; ++i) {
    f.sigma[i] = std::sqrt(std::max(0.0, eig.eigenvalues()[k - 1 - i]));
    basis.col(i) = eig.eigenvectors().col(k - 1 - i);
  }
  Matrix other(wide ? a.cols() : a.rows(), k);
  for (Index i = 0; i < k; ++i) {
    const double s = std::max(f.sigma[i], 1e-300);
    other.col(i) = (wide ? Matrix(a.transpose() * basis.col(i)) : Matrix(a * basis.col(i))) / s;
  }
  if (wide) {
    f.u = basis;
    f.v = other;
  } else {
    f.u = other;
    f.v = basis;
  }
  return f;
}

/// SVT reference through Eigen's Jacobi SVD (a different algorithm from
/// anything the library uses).
inline lrmc::Matrix svt_reference(const lrmc::Matrix& a, double lambda) {
  Eigen::JacobiSVD<lrmc::Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  lrmc::Vector s = svd.singularValues();
  for (lrmc::Index i = 0; i < s.size(); ++i) s[i] = std::max(0.0, s[i] - lambda);
  return svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
}

}  // namespace oracle
