#include "nlasso/maxflow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace nlasso {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
// residual capacities below this are treated as saturated
constexpr double kEps = 1e-12;
}  // namespace

std::size_t FlowNetwork::add_node() {
  adj_.emplace_back();
  return adj_.size() - 1;
}

void FlowNetwork::add_arc(std::size_t from, std::size_t to, double capacity) {
  if (from >= adj_.size() || to >= adj_.size()) throw std::invalid_argument("arc endpoint out of range");
  if (!(capacity >= 0.0)) throw std::invalid_argument("negative arc capacity");
  if (from == to) return;
  adj_[from].push_back({to, adj_[to].size(), capacity, 0.0});
  adj_[to].push_back({from, adj_[from].size() - 1, 0.0, 0.0});
}

void FlowNetwork::add_edge(std::size_t a, std::size_t b, double capacity) {
  if (a >= adj_.size() || b >= adj_.size()) throw std::invalid_argument("edge endpoint out of range");
  if (!(capacity >= 0.0)) throw std::invalid_argument("negative edge capacity");
  if (a == b) return;
  adj_[a].push_back({b, adj_[b].size(), capacity, 0.0});
  adj_[b].push_back({a, adj_[a].size() - 1, capacity, 0.0});
}

double FlowNetwork::max_flow(std::size_t source, std::size_t sink) {
  if (source >= adj_.size() || sink >= adj_.size()) throw std::invalid_argument("source or sink missing");
  if (source == sink) throw std::invalid_argument("source equals sink");
  for (auto& arcs : adj_)
    for (Arc& a : arcs) a.flow = 0.0;

  auto residual = [](const Arc& a) { return a.cap - a.flow; };
  const std::size_t n = adj_.size();
  std::vector<std::size_t> parent_node(n);
  std::vector<std::size_t> parent_arc(n);
  double total = 0.0;

  for (;;) {
    std::vector<bool> seen(n, false);
    std::queue<std::size_t> frontier;
    frontier.push(source);
    seen[source] = true;
    while (!frontier.empty() && !seen[sink]) {
      const std::size_t v = frontier.front();
      frontier.pop();
      for (std::size_t k = 0; k < adj_[v].size(); ++k) {
        const Arc& a = adj_[v][k];
        if (!seen[a.to] && residual(a) > kEps) {
          seen[a.to] = true;
          parent_node[a.to] = v;
          parent_arc[a.to] = k;
          frontier.push(a.to);
        }
      }
    }
    if (!seen[sink]) {
      source_side_ = std::move(seen);
      return total;
    }

    double bottleneck = kInf;
    for (std::size_t v = sink; v != source; v = parent_node[v]) {
      bottleneck = std::min(bottleneck, residual(adj_[parent_node[v]][parent_arc[v]]));
    }
    if (std::isinf(bottleneck)) {
      source_side_.assign(n, true);
      source_side_[sink] = false;
      return kInf;
    }
    for (std::size_t v = sink; v != source; v = parent_node[v]) {
      Arc& a = adj_[parent_node[v]][parent_arc[v]];
      a.flow += bottleneck;
      adj_[v][a.rev].flow -= bottleneck;
    }
    total += bottleneck;
  }
}

}  // namespace nlasso
