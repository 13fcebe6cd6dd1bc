// nlasso command-line tool.
//
// Exit codes: 0 success (or condition satisfied), 1 usage, 2 parse,
// 3 solver stopped at max_iter, 4 divergence, 5 ncc-check not satisfied.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nlasso/datagen.hpp"
#include "nlasso/error.hpp"
#include "nlasso/experiments.hpp"
#include "nlasso/io.hpp"
#include "nlasso/kernels.hpp"
#include "nlasso/ncc.hpp"
#include "nlasso/solver.hpp"

namespace {

using namespace nlasso;

enum Exit : int { kOk = 0, kUsage = 1, kParse = 2, kNotConverged = 3, kDiverged = 4, kNotSatisfied = 5 };

struct Globals {
  std::uint64_t seed = 0;
  int threads = 0;
  bool quiet = false;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void say(const Globals& g, const std::string& msg) {
  if (!g.quiet) std::cerr << msg << '\n';
}

std::vector<std::size_t> to_indices(const std::vector<io::NodeId>& ids, const io::NodeIndex& index,
                                    const std::string& source) {
  std::vector<std::size_t> out;
  out.reserve(ids.size());
  for (io::NodeId id : ids) {
    const auto i = index.find(id);
    if (!i) throw ParseError(source, 0, "node " + std::to_string(id) + " is not in the dataset");
    out.push_back(*i);
  }
  return out;
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  std::string graph, dataset, out, log;
  std::optional<double> lambda, lambda_from_K;
  SolverConfig cfg;
};

int run_solve(const SolveArgs& a, const Globals& g) {
  if (a.lambda.has_value() == a.lambda_from_K.has_value()) {
    throw UsageError("solve needs exactly one of --lambda and --lambda-from-K");
  }
  const double lambda = a.lambda ? *a.lambda : 1.0 / *a.lambda_from_K;
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw UsageError("lambda must be positive and finite");

  const auto loaded = io::load_dataset(a.graph, a.dataset);
  SolverConfig cfg = a.cfg;
  cfg.lambda = lambda;
  const SolverResult res = solve(loaded.dataset, cfg);

  io::write_json(a.out, io::result_to_json(res, cfg, loaded.index));
  if (!a.log.empty()) io::write_iteration_log(a.log, res.trace);
  say(g, "iterations " + std::to_string(res.iterations_run) + ", objective " + io::format_double(res.objective) +
             (res.converged ? ", converged" : ", stopped at max_iter"));
  return res.converged ? kOk : kNotConverged;
}

// ------------------------------------------------------------ ncc-check

struct NccArgs {
  std::string graph, partition, labeled, dataset, out;
  std::size_t p = 0;
  std::optional<double> K;
};

int run_ncc(const NccArgs& a, const Globals& g) {
  if (a.labeled.empty() == a.dataset.empty()) throw UsageError("ncc-check needs exactly one of --labeled and --dataset");

  io::NodeIndex index;
  EmpiricalGraph graph;
  std::vector<std::size_t> labeled;
  std::size_t p = a.p;
  if (!a.dataset.empty()) {
    const auto loaded = io::load_dataset(a.graph, a.dataset);
    index = loaded.index;
    graph = loaded.dataset.graph();
    labeled.assign(loaded.dataset.training_set().begin(), loaded.dataset.training_set().end());
    if (p == 0) p = loaded.dataset.dim();
  } else {
    const auto rows = io::read_partition_rows(a.partition);
    std::vector<io::NodeId> ids;
    for (const auto& [node, cluster] : rows) ids.push_back(node);
    index = io::NodeIndex(ids);
    graph = io::assemble_graph(io::read_edge_list(a.graph), index, a.graph);
    labeled = to_indices(io::read_node_list(a.labeled), index, a.labeled);
  }
  if (p == 0) throw UsageError("--p is required with --labeled");

  const Partition part = io::assemble_partition(io::read_partition_rows(a.partition), index, a.partition);
  const NccReport rep = check_ncc(graph, part, labeled, p, a.K);
  io::write_json(a.out, io::ncc_to_json(rep));
  say(g, "min rho " + io::format_double(rep.rho_min) + " vs threshold " + io::format_double(rep.threshold) +
             (rep.satisfied ? ": satisfied" : ": not satisfied"));
  return rep.satisfied ? kOk : kNotSatisfied;
}

// ------------------------------------------------------ gen-two-cluster

struct GenArgs {
  TwoClusterSpec spec;
  std::size_t p = 2;
  std::string graph, dataset, partition, truth;
};

int run_gen(GenArgs a, const Globals& g) {
  a.spec.seed = g.seed;
  const auto inst = two_cluster_instance(a.spec, a.p);
  const auto index = io::NodeIndex::identity(a.spec.n);
  io::write_graph_csv(a.graph, inst.dataset.graph(), index);
  io::write_dataset_csv(a.dataset, inst.dataset, index);
  if (!a.partition.empty()) io::write_partition_csv(a.partition, inst.partition, index);
  if (!a.truth.empty()) io::write_json(a.truth, io::signal_to_json(inst.truth, index));
  say(g, std::to_string(inst.dataset.graph().num_edges()) + " edges written to " + a.graph);
  return kOk;
}

// ----------------------------------------------------------- knn-graph

struct KnnArgs {
  std::string coords, out;
  std::size_t k = 3;
};

int run_knn(const KnnArgs& a, const Globals& g) {
  const auto table = io::read_coordinates(a.coords);
  const io::NodeIndex index(table.nodes);
  std::vector<std::vector<double>> coords(index.size());
  for (std::size_t r = 0; r < table.nodes.size(); ++r) coords[*index.find(table.nodes[r])] = table.coords[r];
  const auto graph = knn_graph(coords, a.k);
  io::write_graph_csv(a.out, graph, index);
  say(g, std::to_string(graph.num_edges()) + " edges written to " + a.out);
  return kOk;
}

// ------------------------------------------------------ experiment-fig1

struct Fig1Args {
  Fig1Config cfg;
  std::string out, points;
};

int run_fig1_cmd(Fig1Args a, const Globals& g) {
  a.cfg.seed = g.seed;
  const Fig1Result res = run_fig1(a.cfg);
  io::write_fig1_records(a.out, res.records);
  if (!a.points.empty()) io::write_fig1_points(a.points, res.points);
  if (!g.quiet) {
    std::fprintf(stderr, "%12s %12s %12s %10s\n", "inter_edges", "mean_rho_bar", "mean_nmse", "converged");
    for (const auto& pt : res.points) {
      std::fprintf(stderr, "%12zu %12.4g %12.4g %7zu/%zu\n", pt.inter_edges, pt.mean_rho_bar, pt.mean_nmse,
                   pt.converged_runs, pt.runs);
    }
    if (res.points.size() >= 2) {
      const auto t = fig1_trend(res.points);
      std::fprintf(stderr, "NMSE improvement low->high rho: %.4g, steepest drop at mean rho %.4g\n", t.improvement,
                   t.steepest_drop_rho);
    }
  }
  return kOk;
}

// --------------------------------------------------- experiment-weather

struct WeatherArgs {
  std::string graph, dataset, cluster, kept, out;
  std::optional<std::uint64_t> synthetic;
  std::size_t stations = 100;
  std::size_t days = 60;
  std::size_t cluster_size = 9;
  std::string write_graph, write_dataset, write_coords;
  WeatherConfig cfg;
};

int run_weather(WeatherArgs a, const Globals& g) {
  if (a.synthetic.has_value() == !a.dataset.empty()) {
    throw UsageError("experiment-weather needs exactly one of --dataset and --synthetic");
  }
  NetworkDataset ds;
  io::NodeIndex index;
  if (a.synthetic) {
    const WeatherData data = synthetic_weather(a.stations, a.days, *a.synthetic);
    ds = data.dataset;
    index = io::NodeIndex::identity(ds.num_nodes());
    if (!a.write_graph.empty()) io::write_graph_csv(a.write_graph, ds.graph(), index);
    if (!a.write_dataset.empty()) io::write_dataset_csv(a.write_dataset, ds, index);
    if (!a.write_coords.empty()) io::write_coordinates(a.write_coords, data.coords, index);
    if (a.cluster.empty()) {
      a.cfg.cluster = capital_cluster(data, a.cluster_size);
      // keep every third station by distance rank, as in a 3-of-9 split
      if (a.kept.empty())
        for (std::size_t k = 1; k < a.cfg.cluster.size(); k += 3) a.cfg.kept.push_back(a.cfg.cluster[k]);
    }
  } else {
    if (a.graph.empty()) throw UsageError("--dataset needs --graph");
    auto loaded = io::load_dataset(a.graph, a.dataset);
    ds = std::move(loaded.dataset);
    index = std::move(loaded.index);
    if (a.cluster.empty()) throw UsageError("--cluster is required with --dataset");
  }
  if (!a.cluster.empty()) a.cfg.cluster = to_indices(io::read_node_list(a.cluster), index, a.cluster);
  if (!a.kept.empty()) a.cfg.kept = to_indices(io::read_node_list(a.kept), index, a.kept);

  const WeatherReport rep = run_weather_experiment(ds, a.cfg);
  io::write_json(a.out, io::weather_to_json(rep, a.cfg, index));
  say(g, "masked nodes " + std::to_string(rep.masked.size()) + ", nlasso error " + io::format_double(rep.nlasso_error) +
             ", LAD baseline error " + io::format_double(rep.baseline_error));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Network Lasso: localized linear regression on graphs"};
  app.require_subcommand(1);
  Globals globals;
  app.add_option("--seed", globals.seed, "Seed for generators and experiments")->capture_default_str();
  app.add_option("--threads", globals.threads, "OpenMP threads (0 keeps the runtime default)")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--quiet", globals.quiet, "Suppress progress output");

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "Run the primal-dual solver on a dataset");
  solve_cmd->add_option("--graph", solve_args.graph, "Graph CSV (i,j,weight)")->required();
  solve_cmd->add_option("--dataset", solve_args.dataset, "Dataset CSV (node,x1..xp,y)")->required();
  solve_cmd->add_option("--lambda", solve_args.lambda, "Regularization strength");
  solve_cmd->add_option("--lambda-from-K", solve_args.lambda_from_K, "Use lambda = 1/K");
  solve_cmd->add_option("--eta", solve_args.cfg.eta, "Primal step scale in (0,1)")->capture_default_str();
  solve_cmd->add_option("--max-iter", solve_args.cfg.max_iter)->capture_default_str();
  solve_cmd->add_option("--rel-tol", solve_args.cfg.rel_tol)->capture_default_str();
  solve_cmd->add_option("--log-every", solve_args.cfg.log_every)->capture_default_str();
  solve_cmd->add_option("--out", solve_args.out, "Result JSON")->required();
  solve_cmd->add_option("--log", solve_args.log, "Iteration log CSV");

  NccArgs ncc_args;
  auto* ncc_cmd = app.add_subcommand("ncc-check", "Check the compatibility condition with network flows");
  ncc_cmd->add_option("--graph", ncc_args.graph)->required();
  ncc_cmd->add_option("--partition", ncc_args.partition, "Partition CSV (node,cluster_id)")->required();
  ncc_cmd->add_option("--labeled", ncc_args.labeled, "Node list CSV of labeled nodes");
  ncc_cmd->add_option("--dataset", ncc_args.dataset, "Dataset CSV; labeled nodes are rows with y");
  ncc_cmd->add_option("--p", ncc_args.p, "Feature dimension (defaults to the dataset's)");
  ncc_cmd->add_option("--K", ncc_args.K, "K recorded in the report");
  ncc_cmd->add_option("--out", ncc_args.out, "Report JSON")->required();

  GenArgs gen_args;
  auto* gen_cmd = app.add_subcommand("gen-two-cluster", "Generate a two-cluster instance");
  gen_cmd->add_option("--n", gen_args.spec.n)->capture_default_str();
  gen_cmd->add_option("--p", gen_args.p)->capture_default_str();
  gen_cmd->add_option("--avg-degree", gen_args.spec.avg_degree)->capture_default_str();
  gen_cmd->add_option("--inter-edges", gen_args.spec.inter_edges)->capture_default_str();
  gen_cmd->add_option("--labels-per-cluster", gen_args.spec.labels_per_cluster)->capture_default_str();
  gen_cmd->add_option("--separation", gen_args.spec.separation)->capture_default_str();
  gen_cmd->add_option("--graph", gen_args.graph)->required();
  gen_cmd->add_option("--dataset", gen_args.dataset)->required();
  gen_cmd->add_option("--partition", gen_args.partition);
  gen_cmd->add_option("--truth", gen_args.truth, "Ground-truth weights JSON");

  KnnArgs knn_args;
  auto* knn_cmd = app.add_subcommand("knn-graph", "Build a k-nearest-neighbour graph from coordinates");
  knn_cmd->add_option("--coords", knn_args.coords, "Coordinates CSV (node,c1..cd)")->required();
  knn_cmd->add_option("--k", knn_args.k)->capture_default_str();
  knn_cmd->add_option("--out", knn_args.out)->required();

  Fig1Args fig1_args;
  auto* fig1_cmd = app.add_subcommand("experiment-fig1", "NMSE versus normalized flow on two-cluster graphs");
  fig1_cmd->add_option("--n", fig1_args.cfg.n)->capture_default_str();
  fig1_cmd->add_option("--p", fig1_args.cfg.p)->capture_default_str();
  fig1_cmd->add_option("--labels-per-cluster", fig1_args.cfg.labels_per_cluster)->capture_default_str();
  fig1_cmd->add_option("--avg-degree", fig1_args.cfg.avg_degree)->capture_default_str();
  fig1_cmd->add_option("--inter-edges", fig1_args.cfg.inter_edges, "Sweep of crossing-edge counts")->delimiter(',');
  fig1_cmd->add_option("--runs", fig1_args.cfg.runs_per_point)->capture_default_str();
  fig1_cmd->add_option("--lambda", fig1_args.cfg.lambda)->capture_default_str();
  fig1_cmd->add_option("--max-iter", fig1_args.cfg.max_iter)->capture_default_str();
  fig1_cmd->add_option("--rel-tol", fig1_args.cfg.rel_tol)->capture_default_str();
  fig1_cmd->add_option("--out", fig1_args.out, "Per-run records CSV")->required();
  fig1_cmd->add_option("--points", fig1_args.points, "Per-point summary CSV");

  WeatherArgs weather_args;
  auto* weather_cmd = app.add_subcommand("experiment-weather", "Predict hidden labels of a station cluster");
  weather_cmd->add_option("--graph", weather_args.graph);
  weather_cmd->add_option("--dataset", weather_args.dataset);
  weather_cmd->add_option("--synthetic", weather_args.synthetic, "Use the synthetic stand-in with this seed");
  weather_cmd->add_option("--stations", weather_args.stations)->capture_default_str();
  weather_cmd->add_option("--days", weather_args.days)->capture_default_str();
  weather_cmd->add_option("--cluster-size", weather_args.cluster_size)->capture_default_str();
  weather_cmd->add_option("--cluster", weather_args.cluster, "Node list CSV of the cluster");
  weather_cmd->add_option("--kept", weather_args.kept, "Node list CSV of cluster nodes that keep their label");
  weather_cmd->add_option("--lambda", weather_args.cfg.lambda)->capture_default_str();
  weather_cmd->add_option("--iters", weather_args.cfg.iterations)->capture_default_str();
  weather_cmd->add_option("--write-graph", weather_args.write_graph);
  weather_cmd->add_option("--write-dataset", weather_args.write_dataset);
  weather_cmd->add_option("--write-coords", weather_args.write_coords);
  weather_cmd->add_option("--out", weather_args.out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (globals.threads > 0) set_threads(globals.threads);

  try {
    if (*solve_cmd) return run_solve(solve_args, globals);
    if (*ncc_cmd) return run_ncc(ncc_args, globals);
    if (*gen_cmd) return run_gen(gen_args, globals);
    if (*knn_cmd) return run_knn(knn_args, globals);
    if (*fig1_cmd) return run_fig1_cmd(fig1_args, globals);
    if (*weather_cmd) return run_weather(weather_args, globals);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const DivergenceError& e) {
    std::cerr << "diverged at iteration " << e.iteration() << ": " << e.what() << '\n';
    return kDiverged;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParse;
  }
  return kUsage;
}
