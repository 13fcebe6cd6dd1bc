#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "nlasso/graph.hpp"
#include "nlasso/model.hpp"

namespace testutil {

// Random graph on n nodes: a spanning path (when connected is set) plus each
// other pair with probability prob, weights uniform in [0.2, 3].
inline nlasso::EmpiricalGraph random_graph(std::size_t n, double prob, std::mt19937_64& rng,
                                           bool connected = true) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> weight(0.2, 3.0);
  std::vector<nlasso::Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if ((connected && j == i + 1) || unit(rng) < prob) edges.push_back({i, j, weight(rng)});
  return nlasso::EmpiricalGraph(n, std::move(edges));
}

template <class Signal>
Signal random_signal(std::size_t blocks, std::size_t p, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> gauss(0.0, scale);
  Signal s(blocks, p);
  for (double& v : s.flat()) v = gauss(rng);
  return s;
}

// Random dataset on g with Gaussian features and labels on a random subset
// (at least one node labeled).
inline nlasso::NetworkDataset random_dataset(nlasso::EmpiricalGraph g, std::size_t p, double label_prob,
                                             std::mt19937_64& rng) {
  const std::size_t n = g.num_nodes();
  auto x = random_signal<nlasso::NodeSignal>(n, p, rng);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss;
  std::vector<std::optional<double>> y(n);
  for (std::size_t i = 0; i < n; ++i)
    if (i == 0 || unit(rng) < label_prob) y[i] = gauss(rng);
  return nlasso::NetworkDataset(std::move(g), std::move(x), std::move(y));
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) m = std::max(m, std::abs(a[t] - b[t]));
  return m;
}

}  // namespace testutil
