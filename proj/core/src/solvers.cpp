#include "lrmc/solvers.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "lrmc/masking.hpp"
#include "lrmc/metrics.hpp"
#include "lrmc/svd.hpp"

namespace lrmc {

namespace {

constexpr std::size_t kNonMonotoneWindow = 5;
constexpr int kStagnationWindow = 30;

double next_theta(double theta) { return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta)); }

/// Consume the momentum weight for the step s is about to take, advancing
/// the running theta sequence.
double take_beta(IterateState& s, MomentumSchedule schedule) {
  if (schedule == MomentumSchedule::none) return 0.0;
  const double theta_t = s.theta_seq;
  const double theta_next = next_theta(theta_t);
  s.theta_seq = theta_next;
  return (theta_t - 1.0) / theta_next;
}

Matrix extrapolate(const IterateState& s, double beta) {
  if (beta == 0.0) return s.x_curr;
  return s.x_curr + beta * (s.x_curr - s.x_prev);
}

void advance(IterateState& s, Matrix x_new, SvdFactors f_new) {
  s.x_prev = std::move(s.x_curr);
  s.factors_prev = std::move(s.factors_curr);
  s.x_curr = std::move(x_new);
  s.factors_curr = std::move(f_new);
  ++s.t;
}

Index rank_hint(const IterateState& s) {
  return s.factors_curr ? std::max<Index>(10, s.factors_curr->rank() + 5) : 10;
}

double require_lambda(const RegularizerSpec& reg) {
  if (!reg.lambda)
    throw ParameterError("solver step requires a concrete lambda (auto applies in run())");
  return *reg.lambda;
}

Vector sigma_of(const Matrix& x, const std::optional<SvdFactors>& factors) {
  if (factors) return factors->sigma;
  return Eigen::BDCSVD<Matrix>(x).singularValues();
}

/// Singular values of c1 * X1 + c2 * X2 given factored forms of both terms,
/// computed exactly from the stacked factors via two thin QRs and a small
/// SVD. Falls back to a dense SVD of `combo` when the stacked rank is not
/// actually small.
Vector combo_sigma(const Matrix& combo, const SvdFactors& f1, double c1, const SvdFactors& f2,
                   double c2) {
  const Index r1 = f1.sigma.size();
  const Index r2 = f2.sigma.size();
  const Index r = r1 + r2;
  if (r == 0) return Vector();
  if (r2 == 0) return std::abs(c1) * f1.sigma;
  if (r1 == 0) return std::abs(c2) * f2.sigma;
  const Index min_dim = std::min(combo.rows(), combo.cols());
  if (r >= min_dim) return Eigen::BDCSVD<Matrix>(combo).singularValues();

  Matrix u(combo.rows(), r);
  u << f1.u, f2.u;
  Matrix v(combo.cols(), r);
  v << f1.v, f2.v;
  Vector d(r);
  d << c1 * f1.sigma, c2 * f2.sigma;

  Eigen::HouseholderQR<Matrix> qr_u(u);
  Eigen::HouseholderQR<Matrix> qr_v(v);
  const Matrix ru = qr_u.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  const Matrix rv = qr_v.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  const Matrix core = ru * d.asDiagonal() * rv.transpose();
  return Eigen::BDCSVD<Matrix>(core).singularValues();
}

double objective_pieces(double f_val, const Vector& sigma, const Matrix& x,
                        const RegularizerSpec& reg, const IndexSet& s_unobs) {
  double obj = f_val + require_lambda(reg) * lowrank_penalty(sigma, reg);
  if (reg.discrete_active()) obj += reg.xi * discrete_penalty(x, s_unobs, *reg.alphabet);
  return obj;
}

void push_objective(IterateState& s, double obj) {
  s.recent_objectives.push_back(obj);
  if (s.recent_objectives.size() > kNonMonotoneWindow)
    s.recent_objectives.erase(s.recent_objectives.begin());
}

}  // namespace

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::soft_impute: return "soft_impute";
    case Algorithm::apg: return "apg";
    case Algorithm::discrete_apg: return "discrete_apg";
    case Algorithm::niapg: return "niapg";
    case Algorithm::discrete_niapg: return "discrete_niapg";
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(const std::string& name) {
  for (Algorithm a : {Algorithm::soft_impute, Algorithm::apg, Algorithm::discrete_apg,
                      Algorithm::niapg, Algorithm::discrete_niapg})
    if (algorithm_name(a) == name) return a;
  return std::nullopt;
}

std::string stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::tolerance: return "tolerance";
    case StopReason::max_iter: return "max_iter";
    case StopReason::stagnation: return "stagnation";
  }
  return "unknown";
}

void SolverConfig::validate() const {
  reg.validate();
  if (max_iter < 1) throw ParameterError("max_iter must be >= 1");
  if (!(rel_tol > 0.0)) throw ParameterError("rel_tol must be > 0");
  if (max_rank < 0) throw ParameterError("max_rank must be >= 0");
  const bool lsp_kind = reg.kind == RegKind::lsp;
  switch (algorithm) {
    case Algorithm::soft_impute:
    case Algorithm::apg:
      if (lsp_kind)
        throw ParameterError(algorithm_name(algorithm) + " uses the nuclear norm, not lsp");
      break;
    case Algorithm::discrete_apg:
      if (lsp_kind)
        throw ParameterError("discrete_apg uses the nuclear norm, not lsp");
      if (!reg.alphabet) throw ParameterError("discrete_apg requires an alphabet");
      break;
    case Algorithm::niapg:
      if (!lsp_kind) throw ParameterError("niapg requires the lsp regularizer");
      break;
    case Algorithm::discrete_niapg:
      if (!lsp_kind) throw ParameterError("discrete_niapg requires the lsp regularizer");
      if (!reg.alphabet) throw ParameterError("discrete_niapg requires an alphabet");
      break;
  }
}

double momentum_beta(long t, MomentumSchedule schedule) {
  if (t < 1) throw ParameterError("momentum_beta: t must be >= 1");
  if (schedule == MomentumSchedule::none) return 0.0;
  double theta = 1.0;
  for (long i = 1; i < t; ++i) theta = next_theta(theta);
  return (theta - 1.0) / next_theta(theta);
}

IterateState IterateState::zero(Index rows, Index cols) {
  IterateState s;
  s.x_curr = Matrix::Zero(rows, cols);
  s.x_prev = Matrix::Zero(rows, cols);
  SvdFactors empty;
  empty.u = Matrix(rows, 0);
  empty.sigma = Vector(0);
  empty.v = Matrix(cols, 0);
  s.factors_curr = empty;
  s.factors_prev = std::move(empty);
  return s;
}

double objective(const Matrix& x, const ObservedMatrix& o, const RegularizerSpec& reg,
                 const IndexSet& s_unobs) {
  reg.validate();
  const double lambda = require_lambda(reg);
  const double f_val = masked_residual_sq(x, o);
  double obj = f_val;
  if (lambda > 0.0) obj += lambda * lowrank_penalty(Eigen::BDCSVD<Matrix>(x).singularValues(), reg);
  if (reg.discrete_active()) obj += reg.xi * discrete_penalty(x, s_unobs, *reg.alphabet);
  return obj;
}

IterateState soft_impute_step(IterateState s, const ObservedMatrix& o, double lambda,
                              Index max_rank) {
  SvdFactors f = svt_factors(impute(s.x_curr, o), lambda, rank_hint(s), max_rank);
  Matrix x = f.reconstruct();
  advance(s, std::move(x), std::move(f));
  return s;
}

IterateState apg_step(IterateState s, const ObservedMatrix& o, double lambda,
                      MomentumSchedule schedule, Index max_rank) {
  const double beta = take_beta(s, schedule);
  SvdFactors f = svt_factors(impute(extrapolate(s, beta), o), lambda, rank_hint(s), max_rank);
  Matrix x = f.reconstruct();
  advance(s, std::move(x), std::move(f));
  return s;
}

IterateState discrete_apg_step(IterateState s, const ObservedMatrix& o,
                               const RegularizerSpec& reg, const IndexSet& s_unobs,
                               MomentumSchedule schedule, Index max_rank) {
  if (!reg.alphabet) throw ParameterError("discrete_apg_step requires an alphabet");
  const double lambda = require_lambda(reg);
  const double beta = take_beta(s, schedule);
  const Matrix y = extrapolate(s, beta);
  const Matrix z = prox_discrete(y, s_unobs, *reg.alphabet, reg.xi);
  SvdFactors f = svt_factors(impute(z, o), lambda, rank_hint(s), max_rank);
  Matrix x = f.reconstruct();
  advance(s, std::move(x), std::move(f));
  return s;
}

IterateState niapg_step(IterateState s, const ObservedMatrix& o, const RegularizerSpec& reg,
                        const IndexSet& s_unobs, MomentumSchedule schedule, Index max_rank) {
  if (reg.kind != RegKind::lsp) throw ParameterError("niapg_step requires the lsp regularizer");
  const double lambda = require_lambda(reg);
  if (s.recent_objectives.empty()) {
    const double obj0 = objective_pieces(masked_residual_sq(s.x_curr, o),
                                         sigma_of(s.x_curr, s.factors_curr), s.x_curr, reg,
                                         s_unobs);
    push_objective(s, obj0);
  }

  const double beta = take_beta(s, schedule);
  Matrix y = extrapolate(s, beta);
  if (beta != 0.0) {
    // Non-monotone safeguard: keep the extrapolation only while its
    // objective stays below the worst of the recent iterates.
    const Vector sigma_y = (s.factors_curr && s.factors_prev)
                               ? combo_sigma(y, *s.factors_curr, 1.0 + beta, *s.factors_prev, -beta)
                               : sigma_of(y, std::nullopt);
    const double obj_y = objective_pieces(masked_residual_sq(y, o), sigma_y, y, reg, s_unobs);
    const double worst =
        *std::max_element(s.recent_objectives.begin(), s.recent_objectives.end());
    if (obj_y > worst) y = s.x_curr;
  }

  if (reg.discrete_active()) y = prox_discrete(y, s_unobs, *reg.alphabet, reg.xi);
  SvdFactors f = prox_lsp_sv_factors(impute(y, o), lambda, reg.theta, rank_hint(s), max_rank);
  Matrix x = f.reconstruct();
  const double obj_new =
      objective_pieces(masked_residual_sq(x, o), f.sigma, x, reg, s_unobs);
  advance(s, std::move(x), std::move(f));
  push_objective(s, obj_new);
  return s;
}

SolveResult run(const SolverConfig& config, const ObservedMatrix& o, const ObservedMatrix* test,
                const IterationCallback& on_iteration) {
  config.validate();
  if (test && (test->rows() != o.rows() || test->cols() != o.cols()))
    throw DimensionError("run: test set shape differs from the training shape");

  RegularizerSpec reg = config.reg;
  if (!reg.lambda) {
    double sigma1 = 0.0;
    if (o.size() > 0 && std::min(o.rows(), o.cols()) >= 1)
      sigma1 = truncated_svd(o.to_dense(), 1, 0.0).sigma[0];
    reg.lambda = sigma1 / 50.0;
  }

  const IndexSet unobserved = o.index_set().complement();
  IterateState state = IterateState::zero(o.rows(), o.cols());
  ConvergenceTrace trace;
  const auto start = std::chrono::steady_clock::now();
  const auto elapsed = [&start] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  double prev_obj = objective_pieces(masked_residual_sq(state.x_curr, o), Vector(), state.x_curr,
                                     reg, unobserved);
  double best_obj = prev_obj;
  int since_best = 0;

  for (int iter = 1; iter <= config.max_iter; ++iter) {
    try {
      switch (config.algorithm) {
        case Algorithm::soft_impute:
          state = soft_impute_step(std::move(state), o, *reg.lambda, config.max_rank);
          break;
        case Algorithm::apg:
          state = apg_step(std::move(state), o, *reg.lambda, config.momentum, config.max_rank);
          break;
        case Algorithm::discrete_apg:
          state = discrete_apg_step(std::move(state), o, reg, unobserved, config.momentum,
                                    config.max_rank);
          break;
        case Algorithm::niapg:
        case Algorithm::discrete_niapg:
          state = niapg_step(std::move(state), o, reg, unobserved, config.momentum,
                             config.max_rank);
          break;
      }
    } catch (const Error& e) {
      throw SolveError("iteration " + std::to_string(iter) + ": " + e.what(), std::move(trace));
    }

    TraceRecord rec;
    rec.iter = iter;
    rec.train_f = masked_residual_sq(state.x_curr, o);
    rec.objective = objective_pieces(rec.train_f, state.factors_curr->sigma, state.x_curr, reg,
                                     unobserved);
    rec.nmse = (config.trace_nmse && test && test->size() > 0)
                   ? nmse(state.x_curr, *test)
                   : std::numeric_limits<double>::quiet_NaN();
    rec.rank = state.factors_curr->rank();
    rec.seconds = elapsed();
    trace.records.push_back(rec);
    if (on_iteration) on_iteration(rec);

    if (!std::isfinite(rec.objective) || !state.x_curr.allFinite())
      throw SolveError("iteration " + std::to_string(iter) + ": iterate diverged (non-finite)",
                       std::move(trace));

    const double rel = std::abs(rec.objective - prev_obj) / std::max(1.0, prev_obj);
    if (rel < config.rel_tol) {
      trace.stop_reason = StopReason::tolerance;
      return {std::move(state.x_curr), std::move(trace), *reg.lambda};
    }

    // Plateau guard for the non-monotone solvers: no material improvement
    // of the best objective over a whole window.
    if (rec.objective <= best_obj - config.rel_tol * std::max(1.0, std::abs(best_obj))) {
      best_obj = rec.objective;
      since_best = 0;
    } else if (++since_best >= kStagnationWindow) {
      trace.stop_reason = StopReason::stagnation;
      return {std::move(state.x_curr), std::move(trace), *reg.lambda};
    }

    prev_obj = rec.objective;
  }

  trace.stop_reason = StopReason::max_iter;
  return {std::move(state.x_curr), std::move(trace), *reg.lambda};
}

}  // namespace lrmc
