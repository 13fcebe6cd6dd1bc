#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "nlasso/graph.hpp"

namespace nlasso {

/// Graph plus per-node features and a partial labeling. The training set is
/// exactly the set of nodes whose label is present.
class NetworkDataset {
 public:
  NetworkDataset() = default;
  NetworkDataset(EmpiricalGraph graph, NodeSignal features, std::vector<std::optional<double>> labels);

  const EmpiricalGraph& graph() const noexcept { return graph_; }
  const NodeSignal& features() const noexcept { return features_; }
  std::size_t num_nodes() const noexcept { return graph_.num_nodes(); }
  std::size_t dim() const noexcept { return features_.dim(); }

  std::span<const double> feature(std::size_t i) const { return features_[i]; }
  const std::optional<double>& label(std::size_t i) const { return labels_.at(i); }
  std::span<const std::optional<double>> labels() const noexcept { return labels_; }

  /// Labeled node ids in increasing order.
  std::span<const std::size_t> training_set() const noexcept { return training_set_; }
  bool is_labeled(std::size_t i) const { return labels_.at(i).has_value(); }

  /// Same graph and features, different labeling.
  NetworkDataset with_labels(std::vector<std::optional<double>> labels) const;

 private:
  EmpiricalGraph graph_;
  NodeSignal features_;
  std::vector<std::optional<double>> labels_;
  std::vector<std::size_t> training_set_;
};

/// Disjoint clusters covering all nodes, stored as a cluster id per node.
class Partition {
 public:
  Partition() = default;

  /// cluster_of[i] in [0, F); every id in that range must be used.
  explicit Partition(std::vector<std::size_t> cluster_of);

  /// Builds from explicit member lists; throws if they overlap or miss a node.
  static Partition from_clusters(std::size_t n, const std::vector<std::vector<std::size_t>>& clusters);

  std::size_t num_nodes() const noexcept { return cluster_of_.size(); }
  std::size_t num_clusters() const noexcept { return members_.size(); }
  std::size_t cluster_of(std::size_t i) const { return cluster_of_.at(i); }
  std::span<const std::size_t> members(std::size_t l) const { return members_.at(l); }

 private:
  std::vector<std::size_t> cluster_of_;
  std::vector<std::vector<std::size_t>> members_;
};

struct NoiseSpec {
  enum class Kind { kNone, kGaussian, kSparseSpikes };

  Kind kind = Kind::kNone;
  double sigma = 0.0;      // gaussian standard deviation
  double fraction = 0.0;   // share of nodes hit by a spike
  double magnitude = 0.0;  // spike size, random sign
  std::uint64_t seed = 0;

  static NoiseSpec none() { return {}; }
  static NoiseSpec gaussian(double sigma, std::uint64_t seed);
  static NoiseSpec sparse_spikes(double fraction, double magnitude, std::uint64_t seed);
};

/// (w^(i))^T x^(i)
double predict(const NodeSignal& w, const NetworkDataset& ds, std::size_t i);

/// Sum of absolute residuals over the training set. Throws on an empty one.
double training_error(const NodeSignal& w, const NetworkDataset& ds);

/// Signal equal to values[l] on every node of cluster l.
NodeSignal piecewise_signal(const Partition& part, const std::vector<std::vector<double>>& values);

/// y^(i) = (w^(i))^T x^(i) + noise^(i) for every node.
std::vector<double> generate_labels(const NodeSignal& truth, const NodeSignal& features,
                                    const NoiseSpec& noise);

/// ||truth - estimate||^2 / ||truth||^2 over the stacked vectors.
double nmse(const NodeSignal& truth, const NodeSignal& estimate);

/// Right-hand side of the nLasso error bound,
/// K (1 + 4 sqrt(p) / (L - sqrt(p))) * noise_l1. Requires L > sqrt(p) and K > 0.
double theorem2_bound(double K, double L, std::size_t p, double noise_l1);

}  // namespace nlasso
