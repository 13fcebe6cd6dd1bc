#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nlasso/signal.hpp"

namespace nlasso {

/// Undirected weighted edge; after canonicalization i < j.
struct Edge {
  std::size_t i = 0;
  std::size_t j = 0;
  double weight = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// One entry of a node's incidence row: the edge and the coefficient the
/// incidence operator uses for this node (+A_e on the lower endpoint, -A_e on
/// the upper one).
struct Incidence {
  std::size_t edge;
  double coeff;
};

/// Weighted undirected graph with a canonical edge ordering.
///
/// Edges are stored with i < j and sorted lexicographically by (i, j); the
/// position of an edge in that order is its edge id, which is also the block
/// index of every EdgeSignal. Per-node incidence lists are kept sorted by edge
/// id so that gathers over them sum in a fixed order.
class EmpiricalGraph {
 public:
  EmpiricalGraph() = default;

  /// Throws std::invalid_argument on self-loops, duplicate edges,
  /// non-positive or non-finite weights, and out-of-range endpoints.
  EmpiricalGraph(std::size_t n, std::vector<Edge> edges);

  std::size_t num_nodes() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }

  std::span<const Edge> edges() const noexcept { return edges_; }
  const Edge& edge(std::size_t e) const { return edges_.at(e); }

  /// Weighted degree d^(i) = sum of weights of incident edges.
  double degree(std::size_t i) const { return degree_.at(i); }
  std::span<const double> degrees() const noexcept { return degree_; }

  std::span<const Incidence> incident(std::size_t i) const noexcept {
    return {incidence_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }

  /// Edge id of {i, j}, or num_edges() if absent.
  std::size_t find_edge(std::size_t i, std::size_t j) const noexcept;

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<double> degree_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Incidence> incidence_;
};

/// D w: block e = A_ij (w^(i) - w^(j)) for edge e = {i, j}, i < j.
EdgeSignal apply_incidence(const EmpiricalGraph& g, const NodeSignal& w);

/// D^T u.
NodeSignal apply_incidence_adjoint(const EmpiricalGraph& g, const EdgeSignal& u);

/// sum over edges of A_ij ||w^(j) - w^(i)||.
double total_variation(const EmpiricalGraph& g, const NodeSignal& w);

/// Total variation restricted to the listed edge ids. Throws std::out_of_range
/// on an unknown id.
double tv_on_edge_subset(const EmpiricalGraph& g, const NodeSignal& w,
                         std::span<const std::size_t> edge_ids);

}  // namespace nlasso
