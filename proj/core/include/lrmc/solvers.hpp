#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lrmc/regularizers.hpp"
#include "lrmc/types.hpp"

namespace lrmc {

enum class Algorithm { soft_impute, apg, discrete_apg, niapg, discrete_niapg };
enum class MomentumSchedule { fista, none };
enum class StopReason { tolerance, max_iter, stagnation };

std::string algorithm_name(Algorithm a);
std::optional<Algorithm> parse_algorithm(const std::string& name);
std::string stop_reason_name(StopReason r);

struct SolverConfig {
  Algorithm algorithm = Algorithm::soft_impute;
  RegularizerSpec reg;
  int max_iter = 500;
  double rel_tol = 1e-4;
  MomentumSchedule momentum = MomentumSchedule::fista;
  bool trace_nmse = true;
  std::uint64_t seed = 0;
  /// Cap on the per-iteration factorization rank; 0 means exact. Large
  /// problems spend most of the first iterations factoring a transient
  /// near-full-rank spectrum that the recursion prunes anyway; a cap
  /// around a few hundred skips that work.
  Index max_rank = 0;

  void validate() const;
};

/// Momentum weight beta_t of the given schedule. The fista schedule is
/// theta_1 = 1, theta_{t+1} = (1 + sqrt(1 + 4 theta_t^2)) / 2,
/// beta_t = (theta_t - 1) / theta_{t+1}; beta_1 = 0.
double momentum_beta(long t, MomentumSchedule schedule = MomentumSchedule::fista);

/// Rolling state of an iterative solver. Besides the two most recent
/// iterates it retains their factored forms (so ranks and spectral penalty
/// values never require re-factorizing an iterate) and, for the
/// non-monotone solvers, the recent objective window.
struct IterateState {
  Matrix x_curr;
  Matrix x_prev;
  long t = 0;              // completed iterations
  double theta_seq = 1.0;  // running theta_t of the fista schedule

  std::optional<SvdFactors> factors_curr;
  std::optional<SvdFactors> factors_prev;
  std::vector<double> recent_objectives;  // newest last, bounded window

  static IterateState zero(Index rows, Index cols);
};

struct TraceRecord {
  long iter = 0;
  double objective = 0.0;
  double train_f = 0.0;
  double nmse = 0.0;  // NaN when not traced
  Index rank = 0;
  double seconds = 0.0;
};

struct ConvergenceTrace {
  std::vector<TraceRecord> records;
  StopReason stop_reason = StopReason::max_iter;
};

/// Solver failure carrying whatever trace had accumulated.
class SolveError : public Error {
 public:
  SolveError(const std::string& message, ConvergenceTrace partial)
      : Error(message), partial_(std::move(partial)) {}
  const ConvergenceTrace& partial_trace() const { return partial_; }

 private:
  ConvergenceTrace partial_;
};

/// Full objective f(X) + lambda * g(X) + xi * r(X) with g selected by
/// reg.kind and the discrete term active only when xi > 0 and an alphabet
/// is present. s_unobs must be the complement of o's index set.
double objective(const Matrix& x, const ObservedMatrix& o, const RegularizerSpec& reg,
                 const IndexSet& s_unobs);

/// One Soft-Impute iteration: X_t = SVT_lambda(X_{t-1} with observed entries
/// replaced by their observations).
IterateState soft_impute_step(IterateState s, const ObservedMatrix& o, double lambda,
                              Index max_rank = 0);

/// Accelerated variant: extrapolate Y_t = X_{t-1} + beta_t (X_{t-1} - X_{t-2}),
/// then take the Soft-Impute step from Y_t.
IterateState apg_step(IterateState s, const ObservedMatrix& o, double lambda,
                      MomentumSchedule schedule = MomentumSchedule::fista, Index max_rank = 0);

/// Discrete-aware accelerated step: extrapolate, pull the unobserved entries
/// through the sequential alphabet prox, re-impose the observations, then SVT.
IterateState discrete_apg_step(IterateState s, const ObservedMatrix& o,
                               const RegularizerSpec& reg, const IndexSet& s_unobs,
                               MomentumSchedule schedule = MomentumSchedule::fista,
                               Index max_rank = 0);

/// Non-monotone inexact accelerated PG with the log-sum penalty: the
/// extrapolation is kept only if its objective does not exceed the worst of
/// the last five iterates, otherwise the step restarts from X_{t-1}. With a
/// discrete-active regularizer the alphabet prox precedes the LSP prox.
IterateState niapg_step(IterateState s, const ObservedMatrix& o, const RegularizerSpec& reg,
                        const IndexSet& s_unobs,
                        MomentumSchedule schedule = MomentumSchedule::fista, Index max_rank = 0);

struct SolveResult {
  Matrix x;
  ConvergenceTrace trace;
  double lambda_used = 0.0;
};

using IterationCallback = std::function<void(const TraceRecord&)>;

/// Drive the configured solver from X_0 = 0 until the relative objective
/// change drops below rel_tol, the objective plateaus, or max_iter is hit.
/// An optional held-out set enables the per-iteration NMSE column.
SolveResult run(const SolverConfig& config, const ObservedMatrix& o,
                const ObservedMatrix* test = nullptr, const IterationCallback& on_iteration = {});

}  // namespace lrmc
