#include "lrmc/regularizers.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <string>

namespace lrmc {

namespace {

constexpr Index kDenseCutoff = 64;

void require_shape(const Matrix& a, const IndexSet& s, const char* what) {
  if (a.rows() != s.rows() || a.cols() != s.cols())
    throw DimensionError(std::string(what) + ": shape mismatch");
}

Vector full_singular_values(const Matrix& a) {
  return Eigen::BDCSVD<Matrix>(a).singularValues();
}

SvdFactors threshold_factors(SvdFactors f, double lambda) {
  Index r = 0;
  while (r < f.sigma.size() && f.sigma[r] > lambda) ++r;
  SvdFactors out;
  out.u = f.u.leftCols(r);
  out.sigma = f.sigma.head(r).array() - lambda;
  out.v = f.v.leftCols(r);
  return out;
}

// Adaptive-rank factorization: grow the number of computed triplets until the
// per-singular-value map `dies` at the tail (everything beyond is mapped to
// zero anyway) or the full spectrum is reached. Uses the fixed-budget
// randomized mode (tol = 0).
template <typename Dies>
SvdFactors adaptive_factors(const Matrix& a, Index k_hint, Index max_rank, Dies dies) {
  const Index min_dim = std::min(a.rows(), a.cols());
  if (min_dim <= kDenseCutoff) return truncated_svd(a, min_dim);
  const Index cap = max_rank > 0 ? std::min(max_rank, min_dim) : min_dim;
  Index k = std::clamp<Index>(k_hint, 1, cap);
  for (;;) {
    SvdFactors f = truncated_svd(a, k, 0.0);
    if (k == cap || dies(f.sigma[k - 1])) return f;
    k = std::min(cap, std::max(k + 1, (3 * k + 1) / 2));
  }
}

}  // namespace

void RegularizerSpec::validate() const {
  if (lambda && (!std::isfinite(*lambda) || *lambda < 0.0))
    throw ParameterError("regularizer: lambda must be >= 0");
  if (!std::isfinite(xi) || xi < 0.0) throw ParameterError("regularizer: xi must be >= 0");
  if (kind == RegKind::lsp && !(theta > 0.0))
    throw ParameterError("regularizer: lsp requires theta > 0");
  if (kind == RegKind::discrete && !alphabet)
    throw ParameterError("regularizer: discrete kind requires an alphabet");
}

Matrix svt(const Matrix& a, double lambda) { return svt_factors(a, lambda).reconstruct(); }

SvdFactors svt_factors(const Matrix& a, double lambda, Index k_hint, Index max_rank) {
  if (!(lambda >= 0.0)) throw ParameterError("svt: lambda must be >= 0");
  if (max_rank < 0) throw ParameterError("svt: max_rank must be >= 0");
  SvdFactors f =
      adaptive_factors(a, k_hint, max_rank, [lambda](double s) { return s <= lambda; });
  return threshold_factors(std::move(f), lambda);
}

double nuclear_norm(const Matrix& a) { return full_singular_values(a).sum(); }

double discrete_penalty(const Matrix& x, const IndexSet& s, const Alphabet& alphabet) {
  require_shape(x, s, "discrete_penalty");
  double acc = 0.0;
  for (std::size_t ord = 0; ord < s.size(); ++ord) {
    const auto [i, j] = s.position(ord);
    const double v = x(i, j);
    for (double a : alphabet.values()) acc += std::abs(v - a);
  }
  return acc;
}

Vector prox_shifted_l1(const Vector& y, double a, double xi) {
  if (!(xi >= 0.0)) throw ParameterError("prox_shifted_l1: xi must be >= 0");
  if (xi == 0.0) return y;
  Vector out(y.size());
  for (Index l = 0; l < y.size(); ++l) {
    const double dev = y[l] - a;
    const double mag = std::abs(dev) - xi;
    out[l] = mag > 0.0 ? a + std::copysign(mag, dev) : a;
  }
  return out;
}

Matrix prox_discrete(const Matrix& y, const IndexSet& s, const Alphabet& alphabet, double xi) {
  require_shape(y, s, "prox_discrete");
  if (!(xi >= 0.0)) throw ParameterError("prox_discrete: xi must be >= 0");
  if (xi == 0.0 || s.empty()) return y;

  const auto& points = alphabet.values();
  Matrix out = y;
  for (std::size_t ord = 0; ord < s.size(); ++ord) {
    const auto [i, j] = s.position(ord);
    double u = y(i, j);
    for (auto it = points.rbegin(); it != points.rend(); ++it) {
      const double dev = u - *it;
      const double mag = std::abs(dev) - xi;
      u = mag > 0.0 ? *it + std::copysign(mag, dev) : *it;
    }
    out(i, j) = u;
  }
  return out;
}

double lsp_value(const Vector& sigma, double theta) {
  if (!(theta > 0.0)) throw ParameterError("lsp_value: theta must be > 0");
  double acc = 0.0;
  for (Index i = 0; i < sigma.size(); ++i) {
    if (sigma[i] < 0.0) throw ParameterError("lsp_value: negative singular value");
    acc += std::log1p(sigma[i] / theta);
  }
  return acc;
}

double prox_lsp_scalar(double sigma, double lambda, double theta) {
  if (!(lambda >= 0.0)) throw ParameterError("prox_lsp_scalar: lambda must be >= 0");
  if (!(theta > 0.0)) throw ParameterError("prox_lsp_scalar: theta must be > 0");

  const auto objective = [&](double s) {
    const double d = s - sigma;
    return lambda * std::log1p(s / theta) + 0.5 * d * d;
  };

  double best_s = 0.0;
  double best_val = objective(0.0);
  const double disc = (sigma + theta) * (sigma + theta) - 4.0 * lambda;
  if (disc >= 0.0) {
    const double sq = std::sqrt(disc);
    for (const double root : {0.5 * ((sigma - theta) + sq), 0.5 * ((sigma - theta) - sq)}) {
      if (root > 0.0) {
        const double val = objective(root);
        if (val < best_val) {
          best_val = val;
          best_s = root;
        }
      }
    }
  }
  return best_s;
}

Matrix prox_lsp_sv(const Matrix& a, double lambda, double theta) {
  return prox_lsp_sv_factors(a, lambda, theta).reconstruct();
}

SvdFactors prox_lsp_sv_factors(const Matrix& a, double lambda, double theta, Index k_hint,
                               Index max_rank) {
  if (!(lambda >= 0.0)) throw ParameterError("prox_lsp_sv: lambda must be >= 0");
  if (!(theta > 0.0)) throw ParameterError("prox_lsp_sv: theta must be > 0");
  if (max_rank < 0) throw ParameterError("prox_lsp_sv: max_rank must be >= 0");

  SvdFactors f = adaptive_factors(a, k_hint, max_rank, [&](double s) {
    return prox_lsp_scalar(s, lambda, theta) == 0.0;
  });

  Index r = 0;
  Vector mapped(f.sigma.size());
  for (Index i = 0; i < f.sigma.size(); ++i) {
    mapped[i] = prox_lsp_scalar(f.sigma[i], lambda, theta);
    if (mapped[i] > 0.0) r = i + 1;
  }
  // The scalar map is monotone on the relevant range, so nonzero outputs
  // occupy a prefix; keep only that prefix.
  SvdFactors out;
  out.u = f.u.leftCols(r);
  out.sigma = mapped.head(r);
  out.v = f.v.leftCols(r);
  return out;
}

double lowrank_penalty(const Vector& sigma, const RegularizerSpec& reg) {
  if (reg.kind == RegKind::lsp) return lsp_value(sigma, reg.theta);
  return sigma.sum();
}

}  // namespace lrmc
