#pragma once

#include <cstdint>
#include <vector>

#include "nlasso/kernels.hpp"
#include "nlasso/model.hpp"
#include "nlasso/prox.hpp"

namespace nlasso {

/// Diagonal step sizes: sigma per edge, tau per node.
struct Preconditioners {
  std::vector<double> sigma;
  std::vector<double> tau;
  double eta = 0.9;

  /// sigma_e = 1/(2 A_e), tau_i = eta/d_i. Isolated nodes get tau = +inf, which
  /// turns their prox step into an exact fit; their incidence column is zero.
  static Preconditioners standard(const EmpiricalGraph& g, double eta = 0.9);
};

struct SolverConfig {
  double lambda = 0.0;
  double eta = 0.9;
  long max_iter = 10000;
  /// Stop once ||w_{k+1} - w_k|| / (1 + ||w_k||) < rel_tol for 10 consecutive
  /// iterations and, in the same iterations, ||u_{k+1} - u_k|| / (lambda + ||u_k||)
  /// < rel_tol. Zero disables early stopping.
  double rel_tol = 1e-8;
  long log_every = 100;
  Backend backend = Backend::kParallel;
};

/// Consecutive below-tolerance iterations required to stop.
inline constexpr int kStallWindow = 10;

struct IterationRecord {
  long iter = 0;
  double objective = 0.0;
  double primal_change = 0.0;
  double dual_max_norm = 0.0;
};

struct SolverResult {
  NodeSignal weights;
  EdgeSignal dual;
  long iterations_run = 0;
  bool converged = false;
  double objective = 0.0;
  /// Smallest objective among the logged iterates (including the final one).
  double best_objective = 0.0;
  /// One record every log_every iterations, plus the final iteration.
  std::vector<IterationRecord> trace;
};

NodeSignal primal_step(const NetworkDataset& ds, const Preconditioners& pc, const NodeSignal& w,
                       const EdgeSignal& u, Backend backend = Backend::kParallel);

EdgeSignal dual_step(const EmpiricalGraph& g, const Preconditioners& pc, const EdgeSignal& u,
                     const NodeSignal& w_next, const NodeSignal& w_prev, double lambda,
                     Backend backend = Backend::kParallel);

/// training_error(w) + lambda * total_variation(w)
double objective(const NodeSignal& w, const NetworkDataset& ds, double lambda);

/// Power-iteration estimate of ||Sigma^{1/2} D T^{1/2}||^2. The step sizes are
/// admissible when this is below one.
double estimate_operator_norm(const EmpiricalGraph& g, const Preconditioners& pc, std::size_t p,
                              int iters, std::uint64_t seed);

/// Runs the preconditioned primal-dual iteration from w = 0, u = 0.
///
/// Throws std::invalid_argument for an empty training set, a labeled node
/// with a zero feature vector, or an invalid config, and DivergenceError as
/// soon as an iterate stops being finite.
SolverResult solve(const NetworkDataset& ds, const SolverConfig& cfg);

}  // namespace nlasso
