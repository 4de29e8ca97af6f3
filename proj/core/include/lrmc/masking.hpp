#pragma once

#include "lrmc/types.hpp"

namespace lrmc {

/// Projection onto an index set: output keeps A's entries on S, zero elsewhere.
Matrix mask(const Matrix& a, const IndexSet& s);

/// Entries of A at the positions of S, in S's canonical (row-major) order.
Vector vect(const Matrix& a, const IndexSet& s);

/// Scatter v back onto the positions of S; zero elsewhere. Inverse of vect on S.
Matrix vect_inv(const Vector& v, const IndexSet& s);

/// Squared data-fit term: 1/2 * ||P_obs(X - O)||_F^2, summed over observed entries only.
double masked_residual_sq(const Matrix& x, const ObservedMatrix& o);

/// Gradient of masked_residual_sq: P_obs(X - O). Supported on the observed set only.
Matrix grad_f(const Matrix& x, const ObservedMatrix& o);

/// Unit gradient step X - grad_f(X), i.e. X with observed entries replaced by
/// their observed values. Shared by every solver.
Matrix impute(const Matrix& x, const ObservedMatrix& o);

}  // namespace lrmc
