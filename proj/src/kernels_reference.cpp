// Serial reference kernels. These follow the operator definitions literally:
// D^T is applied as a scatter over edges and every step materializes its
// intermediate vectors.

#include <algorithm>

#include "nlasso/kernels.hpp"
#include "nlasso/prox.hpp"

namespace nlasso::reference {

void incidence(const EmpiricalGraph& g, const NodeSignal& w, EdgeSignal& out) {
  const std::size_t p = w.dim();
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    for (std::size_t k = 0; k < p; ++k) out[e][k] = ed.weight * (w[ed.i][k] - w[ed.j][k]);
  }
}

void incidence_adjoint(const EmpiricalGraph& g, const EdgeSignal& u, NodeSignal& out) {
  const std::size_t p = u.dim();
  std::fill(out.flat().begin(), out.flat().end(), 0.0);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    for (std::size_t k = 0; k < p; ++k) {
      out[ed.i][k] += ed.weight * u[e][k];
      out[ed.j][k] -= ed.weight * u[e][k];
    }
  }
}

void primal_update(const NetworkDataset& ds, std::span<const double> tau, const NodeSignal& w,
                   const EdgeSignal& u, NodeSignal& out) {
  const EmpiricalGraph& g = ds.graph();
  NodeSignal grad(g.num_nodes(), w.dim());
  incidence_adjoint(g, u, grad);
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    const bool isolated = g.degree(i) == 0.0;
    for (std::size_t k = 0; k < w.dim(); ++k) {
      out[i][k] = isolated ? w[i][k] : w[i][k] - tau[i] * grad[i][k];
    }
  }
  for (std::size_t i : ds.training_set()) {
    std::vector<double> inter(out[i].begin(), out[i].end());
    labeled_node_update(inter, ds.feature(i), *ds.label(i), tau[i], out[i]);
  }
}

void dual_update(const EmpiricalGraph& g, std::span<const double> sigma, double lambda,
                 const EdgeSignal& u, const NodeSignal& w_next, const NodeSignal& w_prev,
                 EdgeSignal& out) {
  NodeSignal extrapolated(w_next.blocks(), w_next.dim());
  for (std::size_t k = 0; k < extrapolated.flat().size(); ++k) {
    extrapolated.flat()[k] = 2.0 * w_next.flat()[k] - w_prev.flat()[k];
  }
  incidence(g, extrapolated, out);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    for (std::size_t k = 0; k < u.dim(); ++k) out[e][k] = u[e][k] + sigma[e] * out[e][k];
    clip_inplace(out[e], lambda);
  }
}

}  // namespace nlasso::reference
