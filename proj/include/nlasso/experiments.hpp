#pragma once

#include <cstdint>
#include <vector>

#include "nlasso/datagen.hpp"
#include "nlasso/solver.hpp"

namespace nlasso {

/// NMSE versus measured normalized flow on two-cluster graphs.
struct Fig1Config {
  std::size_t n = 80;
  std::size_t p = 2;
  std::size_t labels_per_cluster = 3;
  double avg_degree = 10.0;
  std::vector<std::size_t> inter_edges = {1, 2, 3, 4, 6, 8, 10, 12, 14, 16, 18, 20, 22, 25, 30, 35, 40, 50, 60, 80};
  std::size_t runs_per_point = 10;
  double lambda = 0.05;
  long max_iter = 10000;
  double rel_tol = 1e-9;
  std::uint64_t seed = 1;
};

struct ExperimentRecord {
  std::size_t inter_edges = 0;
  std::size_t run = 0;
  std::uint64_t seed = 0;
  double rho_1 = 0.0;
  double rho_2 = 0.0;
  double rho_bar = 0.0;
  double rho_min = 0.0;
  double nmse = 0.0;
  long iterations = 0;
  double objective = 0.0;
  double lambda = 0.0;
  bool converged = false;
};

struct Fig1Point {
  std::size_t inter_edges = 0;
  std::size_t runs = 0;
  double mean_rho_bar = 0.0;
  double mean_rho_min = 0.0;
  double mean_nmse = 0.0;
  std::size_t converged_runs = 0;
};

struct Fig1Result {
  std::vector<ExperimentRecord> records;  // sorted by (point mean rho_bar, run)
  std::vector<Fig1Point> points;          // sorted by mean rho_bar
};

/// Runs every (sweep point, run) pair; independent runs execute in parallel.
/// Seeds derive from cfg.seed, the point index and the run index only.
Fig1Result run_fig1(const Fig1Config& cfg);

/// Mean NMSE ratio low-rho / high-rho point, and the mean rho_bar (midpoint)
/// of the adjacent pair with the largest NMSE drop.
struct Fig1Trend {
  double improvement = 0.0;
  double steepest_drop_rho = 0.0;
  double steepest_drop = 0.0;
};
Fig1Trend fig1_trend(const std::vector<Fig1Point>& points);

struct WeatherConfig {
  double lambda = 1.0 / 7.0;
  long iterations = 10000;
  std::vector<std::size_t> cluster;  // nodes whose labels are hidden...
  std::vector<std::size_t> kept;     // ...except these
};

struct WeatherReport {
  std::vector<std::size_t> masked;
  std::vector<double> truth;        // true labels of masked nodes
  std::vector<double> nlasso_pred;
  std::vector<double> baseline_pred;
  /// sum (y - yhat)^2 / sum y^2 over the masked nodes
  double nlasso_error = 0.0;
  double baseline_error = 0.0;
  std::vector<double> baseline_weights;
  long iterations = 0;
  double objective = 0.0;
};

/// Hides the cluster's labels (except `kept`), runs a fixed number of solver
/// iterations and predicts the hidden labels. The baseline is one LAD model
/// fitted to all true labels of the cluster.
WeatherReport run_weather_experiment(const NetworkDataset& full, const WeatherConfig& cfg);

}  // namespace nlasso
