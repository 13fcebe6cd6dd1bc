#include "nlasso/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace nlasso::io {

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  return out;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

// Reads non-blank lines, tracking 1-based line numbers.
struct LineReader {
  std::istream& in;
  std::size_t line = 0;

  bool next(std::string& out) {
    while (std::getline(in, out)) {
      ++line;
      if (!trim(out).empty()) return true;
    }
    return false;
  }
};

double parse_real(const std::string& s, const std::string& source, std::size_t line, const char* what) {
  double v = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  if (!s.empty() && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ParseError(source, line, std::string("invalid ") + what + " '" + s + "'");
  }
  return v;
}

NodeId parse_id(const std::string& s, const std::string& source, std::size_t line, const char* what) {
  NodeId v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v < 0) {
    throw ParseError(source, line, std::string("invalid ") + what + " '" + s + "'");
  }
  return v;
}

void expect_header(const std::vector<std::string>& got, const std::vector<std::string>& want,
                   const std::string& source, std::size_t line) {
  if (got != want) {
    std::string w;
    for (const auto& c : want) w += (w.empty() ? "" : ",") + c;
    throw ParseError(source, line, "expected header '" + w + "'");
  }
}

}  // namespace

NodeIndex::NodeIndex(std::vector<NodeId> ids) : ids_(std::move(ids)) {
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
  for (std::size_t k = 0; k < ids_.size(); ++k) index_.emplace(ids_[k], k);
}

NodeIndex NodeIndex::identity(std::size_t n) {
  std::vector<NodeId> ids(n);
  for (std::size_t k = 0; k < n; ++k) ids[k] = static_cast<NodeId>(k);
  return NodeIndex(std::move(ids));
}

std::optional<std::size_t> NodeIndex::find(NodeId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<RawEdge> parse_edge_list(std::istream& in, const std::string& source) {
  LineReader reader{in};
  std::string line;
  if (!reader.next(line)) throw ParseError(source, 0, "empty file, expected header 'i,j,weight'");
  expect_header(split(line), {"i", "j", "weight"}, source, reader.line);

  std::vector<RawEdge> edges;
  std::map<std::pair<NodeId, NodeId>, std::size_t> seen;
  while (reader.next(line)) {
    const auto cells = split(line);
    if (cells.size() != 3) throw ParseError(source, reader.line, "expected 3 fields, got " + std::to_string(cells.size()));
    RawEdge e{parse_id(cells[0], source, reader.line, "node id"), parse_id(cells[1], source, reader.line, "node id"),
              parse_real(cells[2], source, reader.line, "weight"), reader.line};
    if (e.i == e.j) throw ParseError(source, reader.line, "self-loop on node " + std::to_string(e.i));
    if (!(e.weight > 0.0)) throw ParseError(source, reader.line, "edge weight must be > 0");
    const auto key = std::minmax(e.i, e.j);
    auto [it, fresh] = seen.emplace(std::pair{key.first, key.second}, reader.line);
    if (!fresh) {
      throw ParseError(source, reader.line, "duplicate edge {" + std::to_string(key.first) + "," +
                                                std::to_string(key.second) + "} (first on line " +
                                                std::to_string(it->second) + ")");
    }
    edges.push_back(e);
  }
  return edges;
}

std::vector<RawEdge> read_edge_list(const std::string& path) {
  auto in = open_in(path);
  return parse_edge_list(in, path);
}

DatasetTable parse_dataset_table(std::istream& in, const std::string& source) {
  LineReader reader{in};
  std::string line;
  if (!reader.next(line)) throw ParseError(source, 0, "empty file, expected header 'node,x1,...,xp,y'");
  const auto header = split(line);
  if (header.size() < 3 || header.front() != "node" || header.back() != "y") {
    throw ParseError(source, reader.line, "expected header 'node,x1,...,xp,y'");
  }
  DatasetTable t;
  t.dim = header.size() - 2;
  for (std::size_t k = 0; k < t.dim; ++k) {
    if (header[k + 1] != "x" + std::to_string(k + 1)) {
      throw ParseError(source, reader.line, "feature column " + std::to_string(k + 1) + " must be named 'x" +
                                                std::to_string(k + 1) + "'");
    }
  }
  std::set<NodeId> seen;
  while (reader.next(line)) {
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw ParseError(source, reader.line, "ragged row: expected " + std::to_string(header.size()) +
                                                " fields, got " + std::to_string(cells.size()));
    }
    const NodeId id = parse_id(cells[0], source, reader.line, "node id");
    if (!seen.insert(id).second) throw ParseError(source, reader.line, "node " + std::to_string(id) + " listed twice");
    std::vector<double> x(t.dim);
    for (std::size_t k = 0; k < t.dim; ++k) x[k] = parse_real(cells[k + 1], source, reader.line, "feature");
    t.nodes.push_back(id);
    t.features.push_back(std::move(x));
    t.labels.push_back(cells.back().empty() ? std::nullopt
                                            : std::optional(parse_real(cells.back(), source, reader.line, "label")));
    t.lines.push_back(reader.line);
  }
  if (t.nodes.empty()) throw ParseError(source, reader.line, "dataset has no rows");
  return t;
}

DatasetTable read_dataset_table(const std::string& path) {
  auto in = open_in(path);
  return parse_dataset_table(in, path);
}

CoordinateTable parse_coordinates(std::istream& in, const std::string& source) {
  LineReader reader{in};
  std::string line;
  if (!reader.next(line)) throw ParseError(source, 0, "empty file, expected header 'node,c1,...,cd'");
  const auto header = split(line);
  if (header.size() < 2 || header.front() != "node") throw ParseError(source, reader.line, "expected header 'node,c1,...,cd'");
  for (std::size_t k = 1; k < header.size(); ++k) {
    if (header[k] != "c" + std::to_string(k)) {
      throw ParseError(source, reader.line, "coordinate column " + std::to_string(k) + " must be named 'c" +
                                                std::to_string(k) + "'");
    }
  }
  CoordinateTable t;
  std::set<NodeId> seen;
  while (reader.next(line)) {
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw ParseError(source, reader.line, "ragged row: expected " + std::to_string(header.size()) +
                                                " fields, got " + std::to_string(cells.size()));
    }
    const NodeId id = parse_id(cells[0], source, reader.line, "node id");
    if (!seen.insert(id).second) throw ParseError(source, reader.line, "node " + std::to_string(id) + " listed twice");
    std::vector<double> c(header.size() - 1);
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = parse_real(cells[k + 1], source, reader.line, "coordinate");
    t.nodes.push_back(id);
    t.coords.push_back(std::move(c));
  }
  if (t.nodes.empty()) throw ParseError(source, reader.line, "no coordinates");
  return t;
}

CoordinateTable read_coordinates(const std::string& path) {
  auto in = open_in(path);
  return parse_coordinates(in, path);
}

std::vector<std::pair<NodeId, NodeId>> read_partition_rows(const std::string& path) {
  auto in = open_in(path);
  LineReader reader{in};
  std::string line;
  if (!reader.next(line)) throw ParseError(path, 0, "empty file, expected header 'node,cluster_id'");
  expect_header(split(line), {"node", "cluster_id"}, path, reader.line);
  std::vector<std::pair<NodeId, NodeId>> rows;
  std::set<NodeId> seen;
  while (reader.next(line)) {
    const auto cells = split(line);
    if (cells.size() != 2) throw ParseError(path, reader.line, "expected 2 fields, got " + std::to_string(cells.size()));
    const NodeId node = parse_id(cells[0], path, reader.line, "node id");
    if (!seen.insert(node).second) throw ParseError(path, reader.line, "node " + std::to_string(node) + " listed twice");
    rows.emplace_back(node, parse_id(cells[1], path, reader.line, "cluster id"));
  }
  return rows;
}

std::vector<NodeId> read_node_list(const std::string& path) {
  auto in = open_in(path);
  LineReader reader{in};
  std::string line;
  if (!reader.next(line)) throw ParseError(path, 0, "empty file, expected header 'node'");
  expect_header(split(line), {"node"}, path, reader.line);
  std::vector<NodeId> out;
  while (reader.next(line)) {
    const auto cells = split(line);
    if (cells.size() != 1) throw ParseError(path, reader.line, "expected 1 field");
    out.push_back(parse_id(cells[0], path, reader.line, "node id"));
  }
  return out;
}

EmpiricalGraph assemble_graph(const std::vector<RawEdge>& raw, const NodeIndex& index, const std::string& source) {
  std::vector<Edge> edges;
  edges.reserve(raw.size());
  for (const RawEdge& r : raw) {
    const auto a = index.find(r.i);
    const auto b = index.find(r.j);
    if (!a || !b) {
      throw ParseError(source, r.line, "node " + std::to_string(a ? r.j : r.i) + " is not in the node table");
    }
    edges.push_back({*a, *b, r.weight});
  }
  return EmpiricalGraph(index.size(), std::move(edges));
}

LoadedDataset load_dataset(const std::string& graph_path, const std::string& dataset_path) {
  const DatasetTable table = read_dataset_table(dataset_path);
  NodeIndex index(table.nodes);
  EmpiricalGraph g = assemble_graph(read_edge_list(graph_path), index, graph_path);

  NodeSignal features(index.size(), table.dim);
  std::vector<std::optional<double>> labels(index.size());
  for (std::size_t r = 0; r < table.nodes.size(); ++r) {
    const std::size_t i = *index.find(table.nodes[r]);
    std::copy(table.features[r].begin(), table.features[r].end(), features[i].begin());
    labels[i] = table.labels[r];
  }
  return {NetworkDataset(std::move(g), std::move(features), std::move(labels)), std::move(index)};
}

Partition assemble_partition(const std::vector<std::pair<NodeId, NodeId>>& rows, const NodeIndex& index,
                             const std::string& source) {
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::set<NodeId> cluster_ids;
  for (const auto& [node, cluster] : rows) cluster_ids.insert(cluster);
  const std::vector<NodeId> ordered(cluster_ids.begin(), cluster_ids.end());
  std::vector<std::size_t> cluster_of(index.size(), kUnset);
  for (const auto& [node, cluster] : rows) {
    const auto i = index.find(node);
    if (!i) throw ParseError(source, 0, "node " + std::to_string(node) + " is not in the graph");
    cluster_of[*i] = static_cast<std::size_t>(std::lower_bound(ordered.begin(), ordered.end(), cluster) - ordered.begin());
  }
  for (std::size_t i = 0; i < cluster_of.size(); ++i) {
    if (cluster_of[i] == kUnset) {
      throw ParseError(source, 0, "partition does not cover node " + std::to_string(index.id_of(i)));
    }
  }
  return Partition(std::move(cluster_of));
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

void write_graph_csv(const std::string& path, const EmpiricalGraph& g, const NodeIndex& index) {
  auto out = open_out(path);
  out << "i,j,weight\n";
  for (const Edge& e : g.edges()) {
    out << index.id_of(e.i) << ',' << index.id_of(e.j) << ',' << format_double(e.weight) << '\n';
  }
}

void write_dataset_csv(const std::string& path, const NetworkDataset& ds, const NodeIndex& index) {
  auto out = open_out(path);
  out << "node";
  for (std::size_t k = 0; k < ds.dim(); ++k) out << ",x" << k + 1;
  out << ",y\n";
  for (std::size_t i = 0; i < ds.num_nodes(); ++i) {
    out << index.id_of(i);
    for (double v : ds.feature(i)) out << ',' << format_double(v);
    out << ',';
    if (ds.label(i)) out << format_double(*ds.label(i));
    out << '\n';
  }
}

void write_partition_csv(const std::string& path, const Partition& part, const NodeIndex& index) {
  auto out = open_out(path);
  out << "node,cluster_id\n";
  for (std::size_t i = 0; i < part.num_nodes(); ++i) out << index.id_of(i) << ',' << part.cluster_of(i) << '\n';
}

void write_coordinates(const std::string& path, const std::vector<std::vector<double>>& coords,
                       const NodeIndex& index) {
  auto out = open_out(path);
  out << "node";
  const std::size_t d = coords.empty() ? 0 : coords.front().size();
  for (std::size_t k = 0; k < d; ++k) out << ",c" << k + 1;
  out << '\n';
  for (std::size_t i = 0; i < coords.size(); ++i) {
    out << index.id_of(i);
    for (double v : coords[i]) out << ',' << format_double(v);
    out << '\n';
  }
}

void write_node_list(const std::string& path, const std::vector<std::size_t>& nodes, const NodeIndex& index) {
  auto out = open_out(path);
  out << "node\n";
  for (std::size_t i : nodes) out << index.id_of(i) << '\n';
}

void write_iteration_log(const std::string& path, const std::vector<IterationRecord>& trace) {
  auto out = open_out(path);
  out << "iter,objective,primal_change,dual_max_norm\n";
  for (const auto& r : trace) {
    out << r.iter << ',' << format_double(r.objective) << ',' << format_double(r.primal_change) << ','
        << format_double(r.dual_max_norm) << '\n';
  }
}

nlohmann::json signal_to_json(const NodeSignal& w, const NodeIndex& index) {
  nlohmann::json j;
  j["p"] = w.dim();
  j["node_ids"] = index.ids();
  auto& weights = j["weights"] = nlohmann::json::array();
  for (std::size_t i = 0; i < w.blocks(); ++i) weights.push_back(std::vector<double>(w[i].begin(), w[i].end()));
  return j;
}

NodeSignal signal_from_json(const nlohmann::json& j, const NodeIndex& index) {
  const auto ids = j.at("node_ids").get<std::vector<NodeId>>();
  const auto& weights = j.at("weights");
  const std::size_t p = j.at("p").get<std::size_t>();
  if (ids.size() != weights.size()) throw ParseError("json", 0, "node_ids and weights differ in length");
  if (ids.size() != index.size()) throw ParseError("json", 0, "signal covers a different node set");
  NodeSignal w(index.size(), p);
  for (std::size_t r = 0; r < ids.size(); ++r) {
    const auto i = index.find(ids[r]);
    if (!i) throw ParseError("json", 0, "unknown node id " + std::to_string(ids[r]));
    const auto row = weights[r].get<std::vector<double>>();
    if (row.size() != p) throw ParseError("json", 0, "weight vector of node " + std::to_string(ids[r]) + " has wrong length");
    std::copy(row.begin(), row.end(), w[*i].begin());
  }
  return w;
}

nlohmann::json result_to_json(const SolverResult& res, const SolverConfig& cfg, const NodeIndex& index) {
  nlohmann::json j = signal_to_json(res.weights, index);
  j["converged"] = res.converged;
  j["iterations_run"] = res.iterations_run;
  j["objective"] = res.objective;
  j["best_objective"] = res.best_objective;
  j["config"] = {{"lambda", cfg.lambda},
                 {"eta", cfg.eta},
                 {"max_iter", cfg.max_iter},
                 {"rel_tol", cfg.rel_tol},
                 {"log_every", cfg.log_every}};
  return j;
}

namespace {
nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }
double null_as_inf(const nlohmann::json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}
}  // namespace

nlohmann::json ncc_to_json(const NccReport& rep) {
  nlohmann::json j;
  auto& rho = j["rho"] = nlohmann::json::array();
  for (double r : rep.rho) rho.push_back(finite_or_null(r));
  j["rho_mean"] = finite_or_null(rep.rho_mean);
  j["rho_min"] = finite_or_null(rep.rho_min);
  j["boundary_size"] = rep.boundary_size;
  j["boundary_edge_count"] = rep.boundary_edge_count;
  j["threshold"] = rep.threshold;
  j["satisfied"] = rep.satisfied;
  j["K_used"] = rep.K_used ? nlohmann::json(*rep.K_used) : nlohmann::json(nullptr);
  j["L_used"] = finite_or_null(rep.L_used);
  j["note"] = rep.note;
  j["unbounded_is_null"] = true;
  return j;
}

NccReport ncc_from_json(const nlohmann::json& j) {
  NccReport rep;
  for (const auto& r : j.at("rho")) rep.rho.push_back(null_as_inf(r));
  rep.rho_mean = null_as_inf(j.at("rho_mean"));
  rep.rho_min = null_as_inf(j.at("rho_min"));
  rep.boundary_size = j.at("boundary_size").get<double>();
  rep.boundary_edge_count = j.at("boundary_edge_count").get<std::size_t>();
  rep.threshold = j.at("threshold").get<double>();
  rep.satisfied = j.at("satisfied").get<bool>();
  if (!j.at("K_used").is_null()) rep.K_used = j.at("K_used").get<double>();
  rep.L_used = null_as_inf(j.at("L_used"));
  rep.note = j.value("note", "");
  return rep;
}

nlohmann::json weather_to_json(const WeatherReport& rep, const WeatherConfig& cfg, const NodeIndex& index) {
  nlohmann::json j;
  j["lambda"] = cfg.lambda;
  j["iterations"] = rep.iterations;
  j["objective"] = rep.objective;
  std::vector<NodeId> cluster, kept, masked;
  for (std::size_t i : cfg.cluster) cluster.push_back(index.id_of(i));
  for (std::size_t i : cfg.kept) kept.push_back(index.id_of(i));
  for (std::size_t i : rep.masked) masked.push_back(index.id_of(i));
  j["cluster"] = cluster;
  j["kept"] = kept;
  j["masked"] = masked;
  j["truth"] = rep.truth;
  j["nlasso_prediction"] = rep.nlasso_pred;
  j["baseline_prediction"] = rep.baseline_pred;
  j["baseline_weights"] = rep.baseline_weights;
  j["nlasso_error"] = rep.nlasso_error;
  j["baseline_error"] = rep.baseline_error;
  j["error_ratio"] = rep.baseline_error > 0.0 ? nlohmann::json(rep.nlasso_error / rep.baseline_error)
                                              : nlohmann::json(nullptr);
  return j;
}

void write_json(const std::string& path, const nlohmann::json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

nlohmann::json read_json(const std::string& path) {
  auto in = open_in(path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path, 0, e.what());
  }
}

void write_fig1_records(const std::string& path, const std::vector<ExperimentRecord>& records) {
  auto out = open_out(path);
  out << "inter_edges,run,seed,rho_1,rho_2,rho_bar,rho_min,nmse,iterations,objective,lambda,converged\n";
  for (const auto& r : records) {
    out << r.inter_edges << ',' << r.run << ',' << r.seed << ',' << format_double(r.rho_1) << ','
        << format_double(r.rho_2) << ',' << format_double(r.rho_bar) << ',' << format_double(r.rho_min) << ','
        << format_double(r.nmse) << ',' << r.iterations << ',' << format_double(r.objective) << ','
        << format_double(r.lambda) << ',' << (r.converged ? 1 : 0) << '\n';
  }
}

void write_fig1_points(const std::string& path, const std::vector<Fig1Point>& points) {
  auto out = open_out(path);
  out << "inter_edges,runs,mean_rho_bar,mean_rho_min,mean_nmse,converged_runs\n";
  for (const auto& p : points) {
    out << p.inter_edges << ',' << p.runs << ',' << format_double(p.mean_rho_bar) << ','
        << format_double(p.mean_rho_min) << ',' << format_double(p.mean_nmse) << ',' << p.converged_runs << '\n';
  }
}

}  // namespace nlasso::io
