#include "nlasso/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <string>

namespace nlasso {

namespace {

std::vector<double> unit_sphere_point(std::mt19937_64& rng, std::size_t p) {
  std::normal_distribution<double> gauss;
  std::vector<double> x(p);
  double nrm = 0.0;
  do {
    for (double& v : x) v = gauss(rng);
    nrm = norm(x);
  } while (nrm < 1e-12);
  for (double& v : x) v /= nrm;
  return x;
}

}  // namespace

TwoClusterInstance two_cluster_instance(const TwoClusterSpec& spec, std::size_t p) {
  const std::size_t n = spec.n;
  const std::size_t half = n / 2;
  if (n < 4 || n % 2 != 0) throw std::invalid_argument("two-cluster n must be even and >= 4");
  if (p == 0) throw std::invalid_argument("feature dimension must be positive");
  if (!(spec.avg_degree >= 0.0) || spec.avg_degree >= static_cast<double>(half)) {
    throw std::invalid_argument("avg_degree must lie in [0, n/2)");
  }
  if (spec.inter_edges > half * half) {
    throw std::invalid_argument("inter_edges " + std::to_string(spec.inter_edges) + " exceeds " +
                                std::to_string(half * half) + " possible crossing pairs");
  }
  if (spec.labels_per_cluster > half) throw std::invalid_argument("labels_per_cluster exceeds cluster size");

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double prob = spec.avg_degree / static_cast<double>(half - 1);

  std::vector<Edge> edges;
  for (std::size_t c = 0; c < 2; ++c) {
    const std::size_t base = c * half;
    for (std::size_t a = 0; a < half; ++a)
      for (std::size_t b = a + 1; b < half; ++b)
        if (unit(rng) < prob) edges.push_back({base + a, base + b, 1.0});
  }
  std::uniform_int_distribution<std::size_t> pick(0, half - 1);
  std::set<std::pair<std::size_t, std::size_t>> crossing;
  while (crossing.size() < spec.inter_edges) crossing.emplace(pick(rng), half + pick(rng));
  for (const auto& [a, b] : crossing) edges.push_back({a, b, 1.0});

  NodeSignal features(n, p);
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = unit_sphere_point(rng, p);
    std::copy(x.begin(), x.end(), features[i].begin());
  }

  std::vector<std::size_t> cluster_of(n);
  for (std::size_t i = half; i < n; ++i) cluster_of[i] = 1;
  Partition part(std::move(cluster_of));
  NodeSignal truth = piecewise_signal(
      part, {std::vector<double>(p, spec.separation), std::vector<double>(p, -spec.separation)});
  const std::vector<double> y = generate_labels(truth, features, NoiseSpec::none());

  std::vector<std::optional<double>> labels(n);
  for (std::size_t c = 0; c < 2; ++c) {
    std::vector<std::size_t> ids(half);
    std::iota(ids.begin(), ids.end(), c * half);
    std::shuffle(ids.begin(), ids.end(), rng);
    for (std::size_t k = 0; k < spec.labels_per_cluster; ++k) labels[ids[k]] = y[ids[k]];
  }

  return {NetworkDataset(EmpiricalGraph(n, std::move(edges)), std::move(features), std::move(labels)),
          std::move(part), std::move(truth)};
}

EmpiricalGraph knn_graph(const std::vector<std::vector<double>>& coords, std::size_t k) {
  const std::size_t n = coords.size();
  if (k == 0 || k >= n) throw std::invalid_argument("knn_graph: need 0 < k < n");
  const std::size_t d = coords.front().size();
  for (const auto& c : coords)
    if (c.size() != d) throw DimensionError("knn_graph: coordinates differ in dimension");

  auto dist2 = [&](std::size_t a, std::size_t b) {
    double s = 0.0;
    for (std::size_t t = 0; t < d; ++t) s += (coords[a][t] - coords[b][t]) * (coords[a][t] - coords[b][t]);
    return s;
  };

  std::set<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::pair<double, std::size_t>> cand;
  for (std::size_t i = 0; i < n; ++i) {
    cand.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double dd = dist2(i, j);
      if (dd == 0.0) {
        throw std::invalid_argument("knn_graph: points " + std::to_string(std::min(i, j)) + " and " +
                                    std::to_string(std::max(i, j)) + " coincide");
      }
      cand.emplace_back(dd, j);
    }
    std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end());
    for (std::size_t t = 0; t < k; ++t) pairs.emplace(std::min(i, cand[t].second), std::max(i, cand[t].second));
  }
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& [a, b] : pairs) edges.push_back({a, b, 1.0});
  return EmpiricalGraph(n, std::move(edges));
}

namespace {

// Stations with north < kRegimeSplit belong to the southern regime.
constexpr double kRegimeSplit = 1.5;

}  // namespace

WeatherData synthetic_weather(std::size_t n_stations, std::size_t days, std::uint64_t seed) {
  if (days < 4) throw std::invalid_argument("synthetic_weather needs at least 4 days");
  if (n_stations < 4) throw std::invalid_argument("synthetic_weather needs at least 4 stations");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> east(0.0, 1.0);
  std::uniform_real_distribution<double> north(0.0, 3.0);
  std::normal_distribution<double> gauss;

  WeatherData out;
  out.coords.resize(n_stations);
  for (auto& c : out.coords) c = {east(rng), north(rng)};

  // AR(3) coefficients per regime, most recent day first
  const double south_ar[3] = {0.6, 0.2, 0.1};
  const double north_ar[3] = {0.75, 0.1, 0.05};
  constexpr double kSharedSd = 1.5;
  constexpr double kLocalSd = 0.4;

  std::vector<std::vector<double>> temp(n_stations, std::vector<double>(days));
  std::vector<double> climate(n_stations);
  for (std::size_t s = 0; s < n_stations; ++s) {
    climate[s] = 3.0 - 4.0 * out.coords[s][1];
    for (std::size_t t = 0; t < 3; ++t) temp[s][t] = climate[s] + kSharedSd * gauss(rng);
  }
  for (std::size_t t = 3; t < days; ++t) {
    const double shared = kSharedSd * gauss(rng);
    for (std::size_t s = 0; s < n_stations; ++s) {
      const double* ar = out.coords[s][1] < kRegimeSplit ? south_ar : north_ar;
      double anomaly = 0.0;
      for (std::size_t r = 0; r < 3; ++r) anomaly += ar[r] * (temp[s][t - 1 - r] - climate[s]);
      temp[s][t] = climate[s] + anomaly + shared + kLocalSd * gauss(rng);
    }
  }

  NodeSignal features(n_stations, 3);
  std::vector<std::optional<double>> labels(n_stations);
  for (std::size_t s = 0; s < n_stations; ++s) {
    for (std::size_t r = 0; r < 3; ++r) features[s][r] = temp[s][days - 2 - r];
    labels[s] = temp[s][days - 1];
  }
  out.dataset = NetworkDataset(knn_graph(out.coords, 3), std::move(features), std::move(labels));
  return out;
}

std::vector<std::size_t> capital_cluster(const WeatherData& data, std::size_t size) {
  const std::size_t n = data.coords.size();
  if (size == 0 || size > n) throw std::invalid_argument("cluster size out of range");
  double cx = 0.0;
  double cy = 0.0;
  std::size_t count = 0;
  for (const auto& c : data.coords) {
    if (c[1] < kRegimeSplit) {
      cx += c[0];
      cy += c[1];
      ++count;
    }
  }
  if (count == 0) throw std::invalid_argument("no station in the southern regime");
  cx /= static_cast<double>(count);
  cy /= static_cast<double>(count);
  std::vector<std::pair<double, std::size_t>> by_dist;
  for (std::size_t s = 0; s < n; ++s) {
    const double dx = data.coords[s][0] - cx;
    const double dy = data.coords[s][1] - cy;
    by_dist.emplace_back(dx * dx + dy * dy, s);
  }
  std::sort(by_dist.begin(), by_dist.end());
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < size; ++k) out.push_back(by_dist[k].second);
  return out;
}

}  // namespace nlasso
