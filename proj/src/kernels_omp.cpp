#include <cstddef>

#include "nlasso/kernels.hpp"
#include "nlasso/prox.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nlasso {

namespace {
// below this many blocks the fork/join cost dominates
constexpr std::ptrdiff_t kMinParallelBlocks = 4096;
}  // namespace

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

namespace kernels {

void incidence(const EmpiricalGraph& g, const NodeSignal& w, EdgeSignal& out) {
  const auto edges = g.edges();
  const std::size_t p = w.dim();
  const auto q = static_cast<std::ptrdiff_t>(edges.size());
#pragma omp parallel for schedule(static) if (q >= kMinParallelBlocks)
  for (std::ptrdiff_t e = 0; e < q; ++e) {
    const Edge& ed = edges[e];
    auto a = w[ed.i];
    auto b = w[ed.j];
    auto o = out[e];
    for (std::size_t k = 0; k < p; ++k) o[k] = ed.weight * (a[k] - b[k]);
  }
}

void incidence_adjoint(const EmpiricalGraph& g, const EdgeSignal& u, NodeSignal& out) {
  const std::size_t p = u.dim();
  const auto n = static_cast<std::ptrdiff_t>(g.num_nodes());
#pragma omp parallel for schedule(static) if (n >= kMinParallelBlocks)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    auto o = out[i];
    for (std::size_t k = 0; k < p; ++k) o[k] = 0.0;
    for (const Incidence& inc : g.incident(i)) {
      auto ue = u[inc.edge];
      for (std::size_t k = 0; k < p; ++k) o[k] += inc.coeff * ue[k];
    }
  }
}

void primal_update(const NetworkDataset& ds, std::span<const double> tau, const NodeSignal& w,
                   const EdgeSignal& u, NodeSignal& out) {
  const EmpiricalGraph& g = ds.graph();
  const std::size_t p = w.dim();
  const auto n = static_cast<std::ptrdiff_t>(g.num_nodes());
#pragma omp parallel for schedule(static) if (n >= kMinParallelBlocks)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    auto wi = w[i];
    auto o = out[i];
    for (std::size_t k = 0; k < p; ++k) o[k] = 0.0;
    for (const Incidence& inc : g.incident(i)) {
      auto ue = u[inc.edge];
      for (std::size_t k = 0; k < p; ++k) o[k] += inc.coeff * ue[k];
    }
    if (g.incident(i).empty()) {
      for (std::size_t k = 0; k < p; ++k) o[k] = wi[k];
    } else {
      for (std::size_t k = 0; k < p; ++k) o[k] = wi[k] - tau[i] * o[k];
    }
    if (const auto& y = ds.label(i)) labeled_node_update(o, ds.feature(i), *y, tau[i], o);
  }
}

void dual_update(const EmpiricalGraph& g, std::span<const double> sigma, double lambda,
                 const EdgeSignal& u, const NodeSignal& w_next, const NodeSignal& w_prev,
                 EdgeSignal& out) {
  const auto edges = g.edges();
  const std::size_t p = u.dim();
  const auto q = static_cast<std::ptrdiff_t>(edges.size());
#pragma omp parallel for schedule(static) if (q >= kMinParallelBlocks)
  for (std::ptrdiff_t e = 0; e < q; ++e) {
    const Edge& ed = edges[e];
    auto ni = w_next[ed.i];
    auto nj = w_next[ed.j];
    auto pi = w_prev[ed.i];
    auto pj = w_prev[ed.j];
    auto ue = u[e];
    auto o = out[e];
    const double scale = sigma[e] * ed.weight;
    for (std::size_t k = 0; k < p; ++k) {
      o[k] = ue[k] + scale * ((2.0 * ni[k] - pi[k]) - (2.0 * nj[k] - pj[k]));
    }
    clip_inplace(o, lambda);
  }
}

}  // namespace kernels
}  // namespace nlasso
