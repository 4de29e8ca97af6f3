#pragma once

#include <cstdint>

#include "lrmc/types.hpp"

namespace lrmc {

struct TruncatedSvdOptions {
  /// Minimum number of power passes over the sketched subspace.
  int min_passes = 2;
  /// Pass budget; exceeding it without the singular values stabilizing
  /// raises ConvergenceError carrying the best factors found.
  int max_passes = 40;
  /// Extra sketch columns beyond the requested rank.
  Index oversample = 8;
  /// Seed for the Gaussian sketch. Fixed by default so identical inputs
  /// produce identical factors.
  std::uint64_t seed = 0x9e3779b97f4a7c15ull;
  /// At or below this smaller dimension a dense SVD is used instead.
  Index dense_cutoff = 64;
};

/// Top-k singular triplets of a dense matrix.
///
/// Small matrices go through a dense SVD. Larger ones use randomized
/// subspace iteration: a Gaussian sketch followed by re-orthonormalized
/// power passes, stopping once successive singular-value estimates agree
/// to within tol relative to the spectral norm. tol = 0 selects the
/// fixed-budget mode: exactly min_passes passes with no stabilization
/// check (and no ConvergenceError).
SvdFactors truncated_svd(const Matrix& a, Index k, double tol = 1e-7,
                         const TruncatedSvdOptions& opts = {});

}  // namespace lrmc
