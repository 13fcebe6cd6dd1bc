#include "nlasso/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "nlasso/kernels.hpp"

namespace nlasso {

EmpiricalGraph::EmpiricalGraph(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  for (Edge& e : edges_) {
    if (e.i >= n_ || e.j >= n_) {
      throw std::invalid_argument("edge {" + std::to_string(e.i) + "," + std::to_string(e.j) +
                                  "} references a node outside [0," + std::to_string(n_) + ")");
    }
    if (e.i == e.j) throw std::invalid_argument("self-loop at node " + std::to_string(e.i));
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw std::invalid_argument("edge {" + std::to_string(e.i) + "," + std::to_string(e.j) +
                                  "} has non-positive weight");
    }
    if (e.i > e.j) std::swap(e.i, e.j);
  }
  std::sort(edges_.begin(), edges_.end(),
            [](const Edge& a, const Edge& b) { return a.i != b.i ? a.i < b.i : a.j < b.j; });
  for (std::size_t e = 1; e < edges_.size(); ++e) {
    if (edges_[e].i == edges_[e - 1].i && edges_[e].j == edges_[e - 1].j) {
      throw std::invalid_argument("duplicate edge {" + std::to_string(edges_[e].i) + "," +
                                  std::to_string(edges_[e].j) + "}");
    }
  }

  degree_.assign(n_, 0.0);
  std::vector<std::size_t> count(n_, 0);
  for (const Edge& e : edges_) {
    degree_[e.i] += e.weight;
    degree_[e.j] += e.weight;
    ++count[e.i];
    ++count[e.j];
  }
  offsets_.assign(n_ + 1, 0);
  for (std::size_t i = 0; i < n_; ++i) offsets_[i + 1] = offsets_[i] + count[i];
  incidence_.resize(offsets_[n_]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  // edges are visited in id order, so each incidence list comes out sorted
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    incidence_[fill[edges_[e].i]++] = {e, edges_[e].weight};
    incidence_[fill[edges_[e].j]++] = {e, -edges_[e].weight};
  }
}

std::size_t EmpiricalGraph::find_edge(std::size_t i, std::size_t j) const noexcept {
  if (i > j) std::swap(i, j);
  auto it = std::lower_bound(edges_.begin(), edges_.end(), Edge{i, j, 0.0},
                             [](const Edge& a, const Edge& b) { return a.i != b.i ? a.i < b.i : a.j < b.j; });
  if (it != edges_.end() && it->i == i && it->j == j) return static_cast<std::size_t>(it - edges_.begin());
  return edges_.size();
}

namespace {

void check_nodes(const EmpiricalGraph& g, const NodeSignal& w) {
  if (w.blocks() != g.num_nodes()) {
    throw DimensionError("node signal has " + std::to_string(w.blocks()) + " blocks, graph has " +
                         std::to_string(g.num_nodes()) + " nodes");
  }
}

void check_edges(const EmpiricalGraph& g, const EdgeSignal& u) {
  if (u.blocks() != g.num_edges()) {
    throw DimensionError("edge signal has " + std::to_string(u.blocks()) + " blocks, graph has " +
                         std::to_string(g.num_edges()) + " edges");
  }
}

double edge_variation(const Edge& e, const NodeSignal& w) {
  auto a = w[e.i];
  auto b = w[e.j];
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (b[k] - a[k]) * (b[k] - a[k]);
  return e.weight * std::sqrt(s);
}

}  // namespace

EdgeSignal apply_incidence(const EmpiricalGraph& g, const NodeSignal& w) {
  check_nodes(g, w);
  EdgeSignal out(g.num_edges(), w.dim());
  kernels::incidence(g, w, out);
  return out;
}

NodeSignal apply_incidence_adjoint(const EmpiricalGraph& g, const EdgeSignal& u) {
  check_edges(g, u);
  NodeSignal out(g.num_nodes(), u.dim());
  kernels::incidence_adjoint(g, u, out);
  return out;
}

double total_variation(const EmpiricalGraph& g, const NodeSignal& w) {
  check_nodes(g, w);
  double tv = 0.0;
  for (const Edge& e : g.edges()) tv += edge_variation(e, w);
  return tv;
}

double tv_on_edge_subset(const EmpiricalGraph& g, const NodeSignal& w,
                         std::span<const std::size_t> edge_ids) {
  check_nodes(g, w);
  double tv = 0.0;
  for (std::size_t e : edge_ids) {
    if (e >= g.num_edges()) throw std::out_of_range("unknown edge id " + std::to_string(e));
    tv += edge_variation(g.edge(e), w);
  }
  return tv;
}

}  // namespace nlasso
