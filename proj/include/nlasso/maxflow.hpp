#pragma once

#include <cstddef>
#include <vector>

namespace nlasso {

/// Directed capacitated network solved with shortest augmenting paths
/// (Edmonds-Karp). Capacities may be +infinity.
class FlowNetwork {
 public:
  explicit FlowNetwork(std::size_t nodes = 0) : adj_(nodes) {}

  std::size_t num_nodes() const noexcept { return adj_.size(); }
  std::size_t add_node();

  /// Arc from -> to. Negative capacities are rejected.
  void add_arc(std::size_t from, std::size_t to, double capacity);
  /// Undirected edge: flow may pass either way up to `capacity`.
  void add_edge(std::size_t a, std::size_t b, double capacity);

  /// Maximum source-sink flow. Throws std::invalid_argument when source or
  /// sink are out of range or equal. Resets any previous flow.
  double max_flow(std::size_t source, std::size_t sink);

  /// Nodes reachable from the source in the residual network of the last
  /// max_flow call: the source side of a minimum cut.
  std::vector<bool> min_cut_source_side() const { return source_side_; }

 private:
  struct Arc {
    std::size_t to;
    std::size_t rev;
    double cap;
    double flow;
  };
  std::vector<std::vector<Arc>> adj_;
  std::vector<bool> source_side_;
};

}  // namespace nlasso
