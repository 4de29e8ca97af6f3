#pragma once

#include <optional>

#include "lrmc/svd.hpp"
#include "lrmc/types.hpp"

namespace lrmc {

/// Low-rank surrogate selector. `nuclear` and `discrete` both use the
/// nuclear norm; `discrete` additionally requires an alphabet so that the
/// discrete-awareness term can be active. `lsp` uses the non-convex
/// log-sum penalty on singular values.
enum class RegKind { nuclear, lsp, discrete };

struct RegularizerSpec {
  RegKind kind = RegKind::nuclear;
  /// Low-rank weight. Absent means "auto": scaled from the data spectrum
  /// at solve time (largest singular value of the observed matrix / 50).
  std::optional<double> lambda;
  /// Discrete-awareness weight. The alphabet term is active iff xi > 0 and
  /// an alphabet is present.
  double xi = 0.0;
  /// Log-sum penalty shape parameter.
  double theta = 1.0;
  std::optional<Alphabet> alphabet;

  bool discrete_active() const { return alphabet.has_value() && xi > 0.0; }
  void validate() const;
};

/// Singular value thresholding, the proximal map of lambda * nuclear norm:
/// U (Sigma - lambda I)_+ V^T. Output rank is the number of singular values
/// strictly above lambda (values exactly equal to lambda are dropped).
Matrix svt(const Matrix& a, double lambda);

/// SVT in factored form. On matrices too large for a dense SVD the rank is
/// found adaptively: start from k_hint triplets and grow by 50% while the
/// smallest computed singular value still exceeds the threshold. A nonzero
/// max_rank caps the adaptive growth (the result is then the best rank-cap
/// truncation of the exact SVT); 0 means exact.
SvdFactors svt_factors(const Matrix& a, double lambda, Index k_hint = 10, Index max_rank = 0);

/// Sum of singular values.
double nuclear_norm(const Matrix& a);

/// Discrete-space penalty sum_k || vect(X, S) - a_k 1 ||_1 over the
/// alphabet's points.
double discrete_penalty(const Matrix& x, const IndexSet& s, const Alphabet& alphabet);

/// Proximal map of xi * || . - a 1 ||_1: soft-threshold the deviation from a
/// by xi, shift back.  a + sign(y - a) (|y - a| - xi)_+ element-wise.
Vector prox_shifted_l1(const Vector& y, double a, double xi);

/// Sequential proximal map of the discrete-space penalty restricted to S:
/// the per-point shifted soft-threshold applied for k = K down to 1.
/// Entries outside S are returned unchanged. Note the composition of the
/// individual proximal maps is order-dependent; this fixed order matches
/// the nesting prox_{r_1}(prox_{r_2}(... prox_{r_K}(.))).
Matrix prox_discrete(const Matrix& y, const IndexSet& s, const Alphabet& alphabet, double xi);

/// Log-sum penalty sum_i log(1 + sigma_i / theta) for sigma >= 0.
double lsp_value(const Vector& sigma, double theta);

/// Scalar proximal map of lambda * log(1 + s/theta) over s >= 0: compares
/// s = 0 against the non-negative real roots of the stationarity quadratic
/// s^2 + (theta - sigma) s + (lambda - sigma theta) = 0.
double prox_lsp_scalar(double sigma, double lambda, double theta);

/// Singular-value proximal map of the log-sum penalty:
/// U diag(prox_lsp_scalar(sigma_i)) V^T.
Matrix prox_lsp_sv(const Matrix& a, double lambda, double theta);

/// Factored form of prox_lsp_sv with the same adaptive-rank scheme as
/// svt_factors.
SvdFactors prox_lsp_sv_factors(const Matrix& a, double lambda, double theta, Index k_hint = 10,
                               Index max_rank = 0);

/// Value of the low-rank surrogate selected by reg.kind on a spectrum.
double lowrank_penalty(const Vector& sigma, const RegularizerSpec& reg);

}  // namespace lrmc
