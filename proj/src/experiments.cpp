#include "nlasso/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <stdexcept>

#include "nlasso/lad.hpp"
#include "nlasso/ncc.hpp"

namespace nlasso {

namespace {

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t point, std::uint64_t run) {
  // splitmix64 over the combined key
  std::uint64_t z = base * 0x9E3779B97F4A7C15ULL + point * 0xBF58476D1CE4E5B9ULL + run * 0x94D049BB133111EBULL + 1;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ExperimentRecord run_one(const Fig1Config& cfg, std::size_t point, std::size_t run) {
  TwoClusterSpec spec;
  spec.n = cfg.n;
  spec.avg_degree = cfg.avg_degree;
  spec.inter_edges = cfg.inter_edges[point];
  spec.labels_per_cluster = cfg.labels_per_cluster;
  spec.seed = mix_seed(cfg.seed, point, run);
  const TwoClusterInstance inst = two_cluster_instance(spec, cfg.p);

  const auto rep = check_ncc(inst.dataset.graph(), inst.partition, inst.dataset.training_set(), cfg.p);
  SolverConfig sc;
  sc.lambda = cfg.lambda;
  sc.max_iter = cfg.max_iter;
  sc.rel_tol = cfg.rel_tol;
  sc.log_every = cfg.max_iter;
  const SolverResult res = solve(inst.dataset, sc);

  ExperimentRecord r;
  r.inter_edges = spec.inter_edges;
  r.run = run;
  r.seed = spec.seed;
  r.rho_1 = rep.rho[0];
  r.rho_2 = rep.rho[1];
  r.rho_bar = rep.rho_mean;
  r.rho_min = rep.rho_min;
  r.nmse = nmse(inst.truth, res.weights);
  r.iterations = res.iterations_run;
  r.objective = res.objective;
  r.lambda = cfg.lambda;
  r.converged = res.converged;
  return r;
}

}  // namespace

Fig1Result run_fig1(const Fig1Config& cfg) {
  if (cfg.runs_per_point < 1) throw std::invalid_argument("runs_per_point must be >= 1");
  if (cfg.inter_edges.empty()) throw std::invalid_argument("empty inter_edges sweep");
  const std::size_t points = cfg.inter_edges.size();
  const auto jobs = static_cast<std::ptrdiff_t>(points * cfg.runs_per_point);
  std::vector<ExperimentRecord> records(static_cast<std::size_t>(jobs));
  std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t job = 0; job < jobs; ++job) {
    const auto point = static_cast<std::size_t>(job) / cfg.runs_per_point;
    const auto run = static_cast<std::size_t>(job) % cfg.runs_per_point;
    try {
      records[static_cast<std::size_t>(job)] = run_one(cfg, point, run);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  Fig1Result out;
  std::vector<Fig1Point> pts(points);
  for (std::size_t pt = 0; pt < points; ++pt) {
    Fig1Point& s = pts[pt];
    s.inter_edges = cfg.inter_edges[pt];
    s.runs = cfg.runs_per_point;
    for (std::size_t r = 0; r < cfg.runs_per_point; ++r) {
      const ExperimentRecord& rec = records[pt * cfg.runs_per_point + r];
      s.mean_rho_bar += rec.rho_bar;
      s.mean_rho_min += rec.rho_min;
      s.mean_nmse += rec.nmse;
      s.converged_runs += rec.converged ? 1 : 0;
    }
    const double runs = static_cast<double>(cfg.runs_per_point);
    s.mean_rho_bar /= runs;
    s.mean_rho_min /= runs;
    s.mean_nmse /= runs;
  }
  std::vector<std::size_t> order(points);
  for (std::size_t pt = 0; pt < points; ++pt) order[pt] = pt;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pts[a].mean_rho_bar < pts[b].mean_rho_bar;
  });
  for (std::size_t pt : order) {
    out.points.push_back(pts[pt]);
    for (std::size_t r = 0; r < cfg.runs_per_point; ++r) out.records.push_back(records[pt * cfg.runs_per_point + r]);
  }
  return out;
}

Fig1Trend fig1_trend(const std::vector<Fig1Point>& points) {
  if (points.size() < 2) throw std::invalid_argument("need at least two sweep points");
  Fig1Trend t;
  const double high = points.back().mean_nmse;
  t.improvement = high > 0.0 ? points.front().mean_nmse / high : std::numeric_limits<double>::infinity();
  t.steepest_drop = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < points.size(); ++k) {
    const double drop = points[k].mean_nmse - points[k + 1].mean_nmse;
    if (drop > t.steepest_drop) {
      t.steepest_drop = drop;
      t.steepest_drop_rho = 0.5 * (points[k].mean_rho_bar + points[k + 1].mean_rho_bar);
    }
  }
  return t;
}

WeatherReport run_weather_experiment(const NetworkDataset& full, const WeatherConfig& cfg) {
  if (cfg.cluster.empty()) throw std::invalid_argument("weather experiment needs a non-empty cluster");
  std::vector<std::optional<double>> labels(full.labels().begin(), full.labels().end());
  WeatherReport rep;
  for (std::size_t i : cfg.cluster) {
    if (i >= full.num_nodes()) throw std::out_of_range("cluster node out of range");
    if (!full.label(i)) throw std::invalid_argument("cluster node " + std::to_string(i) + " has no label to hide");
    if (std::find(cfg.kept.begin(), cfg.kept.end(), i) == cfg.kept.end()) {
      rep.masked.push_back(i);
      labels[i].reset();
    }
  }
  if (rep.masked.empty()) throw std::invalid_argument("no masked nodes: every cluster node is kept");
  const NetworkDataset train = full.with_labels(std::move(labels));

  SolverConfig sc;
  sc.lambda = cfg.lambda;
  sc.max_iter = cfg.iterations;
  sc.rel_tol = 0.0;
  sc.log_every = cfg.iterations;
  const SolverResult res = solve(train, sc);
  rep.iterations = res.iterations_run;
  rep.objective = res.objective;

  std::vector<std::span<const double>> rows;
  std::vector<double> y;
  for (std::size_t i : cfg.cluster) {
    rows.push_back(full.feature(i));
    y.push_back(*full.label(i));
  }
  rep.baseline_weights = fit_lad(rows, y).weights;

  double denom = 0.0;
  double err_nl = 0.0;
  double err_base = 0.0;
  for (std::size_t i : rep.masked) {
    const double yi = *full.label(i);
    const double nl = predict(res.weights, full, i);
    const double base = dot(rep.baseline_weights, full.feature(i));
    rep.truth.push_back(yi);
    rep.nlasso_pred.push_back(nl);
    rep.baseline_pred.push_back(base);
    denom += yi * yi;
    err_nl += (yi - nl) * (yi - nl);
    err_base += (yi - base) * (yi - base);
  }
  if (!(denom > 0.0)) throw std::invalid_argument("masked labels are all zero");
  rep.nlasso_error = err_nl / denom;
  rep.baseline_error = err_base / denom;
  return rep;
}

}  // namespace nlasso
