#include "nlasso/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace nlasso {

Preconditioners Preconditioners::standard(const EmpiricalGraph& g, double eta) {
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("eta must lie in (0,1)");
  Preconditioners pc;
  pc.eta = eta;
  pc.sigma.reserve(g.num_edges());
  for (const Edge& e : g.edges()) pc.sigma.push_back(1.0 / (2.0 * e.weight));
  pc.tau.reserve(g.num_nodes());
  for (double d : g.degrees()) {
    pc.tau.push_back(d > 0.0 ? eta / d : std::numeric_limits<double>::infinity());
  }
  return pc;
}

NodeSignal primal_step(const NetworkDataset& ds, const Preconditioners& pc, const NodeSignal& w,
                       const EdgeSignal& u, Backend backend) {
  if (w.blocks() != ds.num_nodes() || w.dim() != ds.dim()) throw DimensionError("primal_step: w shape");
  if (u.blocks() != ds.graph().num_edges() || u.dim() != ds.dim()) throw DimensionError("primal_step: u shape");
  NodeSignal out(w.blocks(), w.dim());
  if (backend == Backend::kParallel) {
    kernels::primal_update(ds, pc.tau, w, u, out);
  } else {
    reference::primal_update(ds, pc.tau, w, u, out);
  }
  return out;
}

EdgeSignal dual_step(const EmpiricalGraph& g, const Preconditioners& pc, const EdgeSignal& u,
                     const NodeSignal& w_next, const NodeSignal& w_prev, double lambda, Backend backend) {
  if (u.blocks() != g.num_edges()) throw DimensionError("dual_step: u shape");
  if (w_next.blocks() != g.num_nodes() || w_prev.blocks() != g.num_nodes() ||
      w_next.dim() != u.dim() || w_prev.dim() != u.dim()) {
    throw DimensionError("dual_step: w shape");
  }
  EdgeSignal out(u.blocks(), u.dim());
  if (backend == Backend::kParallel) {
    kernels::dual_update(g, pc.sigma, lambda, u, w_next, w_prev, out);
  } else {
    reference::dual_update(g, pc.sigma, lambda, u, w_next, w_prev, out);
  }
  return out;
}

double objective(const NodeSignal& w, const NetworkDataset& ds, double lambda) {
  return training_error(w, ds) + lambda * total_variation(ds.graph(), w);
}

double estimate_operator_norm(const EmpiricalGraph& g, const Preconditioners& pc, std::size_t p,
                              int iters, std::uint64_t seed) {
  if (iters < 1) throw std::invalid_argument("estimate_operator_norm: iters must be >= 1");
  if (g.num_edges() == 0) return 0.0;

  // M = Sigma^{1/2} D T^{1/2}; zero columns (isolated nodes) are skipped.
  std::vector<double> sqrt_tau(g.num_nodes());
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    sqrt_tau[i] = g.degree(i) > 0.0 ? std::sqrt(pc.tau[i]) : 0.0;
  }
  std::vector<double> sqrt_sigma(g.num_edges());
  for (std::size_t e = 0; e < g.num_edges(); ++e) sqrt_sigma[e] = std::sqrt(pc.sigma[e]);

  NodeSignal v(g.num_nodes(), p);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    for (double& x : v[i]) x = sqrt_tau[i] > 0.0 ? gauss(rng) : 0.0;
  }

  NodeSignal scaled(g.num_nodes(), p);
  EdgeSignal mv(g.num_edges(), p);
  double best = 0.0;
  for (int it = 0; it < iters; ++it) {
    const double vnorm = norm(v.flat());
    if (vnorm == 0.0) break;
    for (double& x : v.flat()) x /= vnorm;

    for (std::size_t i = 0; i < g.num_nodes(); ++i) {
      for (std::size_t k = 0; k < p; ++k) scaled[i][k] = sqrt_tau[i] * v[i][k];
    }
    kernels::incidence(g, scaled, mv);
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
      for (double& x : mv[e]) x *= sqrt_sigma[e];
    }
    // Rayleigh quotient of M^T M at the unit vector v
    best = std::max(best, dot(mv.flat(), mv.flat()));

    for (std::size_t e = 0; e < g.num_edges(); ++e) {
      for (double& x : mv[e]) x *= sqrt_sigma[e];
    }
    kernels::incidence_adjoint(g, mv, v);
    for (std::size_t i = 0; i < g.num_nodes(); ++i) {
      for (double& x : v[i]) x *= sqrt_tau[i];
    }
  }
  return best;
}

namespace {

void validate(const NetworkDataset& ds, const SolverConfig& cfg) {
  if (!(cfg.lambda > 0.0) || !std::isfinite(cfg.lambda)) throw std::invalid_argument("lambda must be positive");
  if (!(cfg.eta > 0.0 && cfg.eta < 1.0)) throw std::invalid_argument("eta must lie in (0,1)");
  if (cfg.max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  if (!(cfg.rel_tol >= 0.0)) throw std::invalid_argument("rel_tol must be >= 0");
  if (cfg.log_every < 1) throw std::invalid_argument("log_every must be >= 1");
  if (ds.training_set().empty()) throw std::invalid_argument("training set is empty");
  for (std::size_t i : ds.training_set()) {
    if (!(norm(ds.feature(i)) > 0.0)) {
      throw std::invalid_argument("labeled node " + std::to_string(i) + " has a zero feature vector");
    }
  }
}

double max_block_norm(const EdgeSignal& u) {
  double m = 0.0;
  for (std::size_t e = 0; e < u.blocks(); ++e) m = std::max(m, norm(u[e]));
  return m;
}

}  // namespace

SolverResult solve(const NetworkDataset& ds, const SolverConfig& cfg) {
  validate(ds, cfg);
  const EmpiricalGraph& g = ds.graph();
  const std::size_t p = ds.dim();
  const Preconditioners pc = Preconditioners::standard(g, cfg.eta);

  NodeSignal w(g.num_nodes(), p);
  NodeSignal w_next(g.num_nodes(), p);
  EdgeSignal u(g.num_edges(), p);
  EdgeSignal u_next(g.num_edges(), p);

  SolverResult res;
  res.best_objective = std::numeric_limits<double>::infinity();
  int stalled = 0;
  long k = 0;
  double change = 0.0;

  auto record = [&](long iter) {
    IterationRecord r{iter, objective(w, ds, cfg.lambda), change, max_block_norm(u)};
    if (!std::isfinite(r.objective)) throw DivergenceError("objective is not finite", iter);
    res.best_objective = std::min(res.best_objective, r.objective);
    res.trace.push_back(r);
  };

  while (k < cfg.max_iter) {
    if (cfg.backend == Backend::kParallel) {
      kernels::primal_update(ds, pc.tau, w, u, w_next);
      kernels::dual_update(g, pc.sigma, cfg.lambda, u, w_next, w, u_next);
    } else {
      reference::primal_update(ds, pc.tau, w, u, w_next);
      reference::dual_update(g, pc.sigma, cfg.lambda, u, w_next, w, u_next);
    }

    double diff2 = 0.0;
    double base2 = 0.0;
    for (std::size_t t = 0; t < w.flat().size(); ++t) {
      const double d = w_next.flat()[t] - w.flat()[t];
      diff2 += d * d;
      base2 += w.flat()[t] * w.flat()[t];
    }
    change = std::sqrt(diff2) / (1.0 + std::sqrt(base2));
    if (!std::isfinite(change) || !std::isfinite(diff2 + base2)) {
      throw DivergenceError("primal iterate became non-finite at iteration " + std::to_string(k + 1), k + 1);
    }
    // The primal can sit still while the dual is still ramping up towards
    // its bound, so stagnation only counts when the dual has settled too.
    double udiff2 = 0.0;
    double ubase2 = 0.0;
    for (std::size_t t = 0; t < u.flat().size(); ++t) {
      const double d = u_next.flat()[t] - u.flat()[t];
      udiff2 += d * d;
      ubase2 += u.flat()[t] * u.flat()[t];
    }
    const double dual_change = std::sqrt(udiff2) / (cfg.lambda + std::sqrt(ubase2));

    std::swap(w, w_next);
    std::swap(u, u_next);
    ++k;

    stalled = change < cfg.rel_tol && dual_change < cfg.rel_tol ? stalled + 1 : 0;
    if (stalled >= kStallWindow) {
      res.converged = true;
      break;
    }
    if (k % cfg.log_every == 0) record(k);
  }
  if (!u.all_finite()) throw DivergenceError("dual iterate became non-finite", k);
  if (res.trace.empty() || res.trace.back().iter != k) record(k);

  res.objective = res.trace.back().objective;
  res.iterations_run = k;
  res.weights = std::move(w);
  res.dual = std::move(u);
  return res;
}

}  // namespace nlasso
