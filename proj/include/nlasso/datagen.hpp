#pragma once

#include <cstdint>
#include <vector>

#include "nlasso/model.hpp"

namespace nlasso {

/// Two random clusters of n/2 nodes each, sparsely joined.
struct TwoClusterSpec {
  std::size_t n = 80;
  double avg_degree = 10.0;    // expected intra-cluster degree
  std::size_t inter_edges = 5;  // cluster-crossing edges
  std::size_t labels_per_cluster = 3;
  std::uint64_t seed = 0;
  /// Cluster weight vectors are +separation * 1 and -separation * 1.
  double separation = 1.0;
};

struct TwoClusterInstance {
  NetworkDataset dataset;
  Partition partition;
  NodeSignal truth;
};

/// Erdos-Renyi clusters on nodes [0, n/2) and [n/2, n) with unit weights,
/// uniformly random crossing edges, features uniform on the unit sphere,
/// noiseless labels from a piecewise-constant truth, and labels_per_cluster
/// labeled nodes drawn per cluster. Throws std::invalid_argument for an
/// infeasible spec.
TwoClusterInstance two_cluster_instance(const TwoClusterSpec& spec, std::size_t p);

/// Undirected unit-weight k-nearest-neighbour graph: {i, j} is an edge when
/// either point is among the other's k nearest. Ties are broken by index.
/// Throws on k >= n or duplicate points.
EmpiricalGraph knn_graph(const std::vector<std::vector<double>>& coords, std::size_t k);

struct WeatherData {
  NetworkDataset dataset;                    // every node labeled
  std::vector<std::vector<double>> coords;   // (east, north) station positions
};

/// Synthetic stand-in for station temperature data: stations scattered over a
/// plane with a southern and a northern regime, each running its own AR(3)
/// daily-temperature process driven by shared weather plus local noise.
/// Features are the three previous daily means and the label is the last
/// day's mean, so p = 3. The graph is knn_graph(coords, 3).
WeatherData synthetic_weather(std::size_t n_stations, std::size_t days, std::uint64_t seed);

/// The `size` stations nearest to the centroid of the southern regime,
/// ordered by distance.
std::vector<std::size_t> capital_cluster(const WeatherData& data, std::size_t size);

}  // namespace nlasso
