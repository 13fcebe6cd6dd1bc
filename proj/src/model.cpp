#include "nlasso/model.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace nlasso {

NetworkDataset::NetworkDataset(EmpiricalGraph graph, NodeSignal features,
                               std::vector<std::optional<double>> labels)
    : graph_(std::move(graph)), features_(std::move(features)), labels_(std::move(labels)) {
  if (features_.blocks() != graph_.num_nodes()) {
    throw DimensionError("dataset has " + std::to_string(features_.blocks()) +
                         " feature vectors for " + std::to_string(graph_.num_nodes()) + " nodes");
  }
  if (labels_.size() != graph_.num_nodes()) {
    throw DimensionError("dataset has " + std::to_string(labels_.size()) + " label slots for " +
                         std::to_string(graph_.num_nodes()) + " nodes");
  }
  if (!features_.all_finite()) throw std::invalid_argument("non-finite feature value");
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!labels_[i]) continue;
    if (!std::isfinite(*labels_[i])) {
      throw std::invalid_argument("non-finite label at node " + std::to_string(i));
    }
    training_set_.push_back(i);
  }
}

NetworkDataset NetworkDataset::with_labels(std::vector<std::optional<double>> labels) const {
  return NetworkDataset(graph_, features_, std::move(labels));
}

Partition::Partition(std::vector<std::size_t> cluster_of) : cluster_of_(std::move(cluster_of)) {
  for (std::size_t i = 0; i < cluster_of_.size(); ++i) {
    const std::size_t l = cluster_of_[i];
    if (l >= members_.size()) members_.resize(l + 1);
    members_[l].push_back(i);
  }
  if (members_.empty()) throw std::invalid_argument("partition has no clusters");
  for (std::size_t l = 0; l < members_.size(); ++l) {
    if (members_[l].empty()) throw std::invalid_argument("cluster id " + std::to_string(l) + " is unused");
  }
}

Partition Partition::from_clusters(std::size_t n, const std::vector<std::vector<std::size_t>>& clusters) {
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> cluster_of(n, kUnset);
  for (std::size_t l = 0; l < clusters.size(); ++l) {
    for (std::size_t i : clusters[l]) {
      if (i >= n) throw std::invalid_argument("cluster member " + std::to_string(i) + " out of range");
      if (cluster_of[i] != kUnset) {
        throw std::invalid_argument("node " + std::to_string(i) + " appears in two clusters");
      }
      cluster_of[i] = l;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (cluster_of[i] == kUnset) throw std::invalid_argument("node " + std::to_string(i) + " is in no cluster");
  }
  return Partition(std::move(cluster_of));
}

NoiseSpec NoiseSpec::gaussian(double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("noise sigma must be >= 0");
  return {Kind::kGaussian, sigma, 0.0, 0.0, seed};
}

NoiseSpec NoiseSpec::sparse_spikes(double fraction, double magnitude, std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw std::invalid_argument("spike fraction must lie in [0,1]");
  return {Kind::kSparseSpikes, 0.0, fraction, magnitude, seed};
}

double predict(const NodeSignal& w, const NetworkDataset& ds, std::size_t i) {
  if (i >= ds.num_nodes()) throw std::out_of_range("node " + std::to_string(i) + " out of range");
  return dot(w[i], ds.feature(i));
}

double training_error(const NodeSignal& w, const NetworkDataset& ds) {
  if (ds.training_set().empty()) throw std::invalid_argument("training set is empty");
  if (w.blocks() != ds.num_nodes() || w.dim() != ds.dim()) {
    throw DimensionError("weights do not match the dataset shape");
  }
  double err = 0.0;
  for (std::size_t i : ds.training_set()) err += std::abs(*ds.label(i) - dot(w[i], ds.feature(i)));
  return err;
}

NodeSignal piecewise_signal(const Partition& part, const std::vector<std::vector<double>>& values) {
  if (values.size() != part.num_clusters()) {
    throw std::invalid_argument("got " + std::to_string(values.size()) + " cluster values for " +
                                std::to_string(part.num_clusters()) + " clusters");
  }
  const std::size_t p = values.front().size();
  for (const auto& a : values) {
    if (a.size() != p) throw DimensionError("cluster values differ in length");
  }
  NodeSignal w(part.num_nodes(), p);
  for (std::size_t i = 0; i < part.num_nodes(); ++i) {
    const auto& a = values[part.cluster_of(i)];
    std::copy(a.begin(), a.end(), w[i].begin());
  }
  return w;
}

std::vector<double> generate_labels(const NodeSignal& truth, const NodeSignal& features,
                                    const NoiseSpec& noise) {
  if (truth.blocks() != features.blocks() || truth.dim() != features.dim()) {
    throw DimensionError("truth and features differ in shape");
  }
  std::mt19937_64 rng(noise.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> y(truth.blocks());
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] = dot(truth[i], features[i]);
    switch (noise.kind) {
      case NoiseSpec::Kind::kNone:
        break;
      case NoiseSpec::Kind::kGaussian:
        y[i] += noise.sigma * gauss(rng);
        break;
      case NoiseSpec::Kind::kSparseSpikes: {
        const bool hit = unit(rng) < noise.fraction;
        const bool positive = unit(rng) < 0.5;
        if (hit) y[i] += positive ? noise.magnitude : -noise.magnitude;
        break;
      }
    }
  }
  return y;
}

double nmse(const NodeSignal& truth, const NodeSignal& estimate) {
  if (truth.blocks() != estimate.blocks() || truth.dim() != estimate.dim()) {
    throw DimensionError("nmse: signals differ in shape");
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < truth.flat().size(); ++k) {
    const double t = truth.flat()[k];
    const double d = t - estimate.flat()[k];
    num += d * d;
    den += t * t;
  }
  if (!(den > 0.0)) throw std::invalid_argument("nmse: true signal is zero");
  return num / den;
}

double theorem2_bound(double K, double L, std::size_t p, double noise_l1) {
  const double root_p = std::sqrt(static_cast<double>(p));
  if (!(K > 0.0)) throw std::invalid_argument("K must be positive");
  if (!(L > root_p)) {
    throw std::domain_error("error bound requires L > sqrt(p) (L = " + std::to_string(L) +
                            ", sqrt(p) = " + std::to_string(root_p) + ")");
  }
  if (!(noise_l1 >= 0.0)) throw std::invalid_argument("noise l1 norm must be >= 0");
  return K * (1.0 + 4.0 * root_p / (L - root_p)) * noise_l1;
}

}  // namespace nlasso
