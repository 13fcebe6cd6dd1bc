#pragma once

// File formats:
//   graph CSV      i,j,weight            one undirected edge per row
//   dataset CSV    node,x1,...,xp,y      y may be empty (unlabeled)
//   partition CSV  node,cluster_id
//   node list CSV  node
//   coordinates    node,c1,...,cd
// Node ids in files are arbitrary non-negative integers; they are mapped to
// 0-based indices in increasing id order (NodeIndex) and written back out
// with the same table.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nlasso/experiments.hpp"
#include "nlasso/ncc.hpp"
#include "nlasso/solver.hpp"

#include <json.hpp>

namespace nlasso::io {

using NodeId = std::int64_t;

class NodeIndex {
 public:
  NodeIndex() = default;
  /// Deduplicates and sorts.
  explicit NodeIndex(std::vector<NodeId> ids);
  /// Identity table 0..n-1.
  static NodeIndex identity(std::size_t n);

  std::size_t size() const noexcept { return ids_.size(); }
  NodeId id_of(std::size_t index) const { return ids_.at(index); }
  std::optional<std::size_t> find(NodeId id) const;
  const std::vector<NodeId>& ids() const noexcept { return ids_; }

 private:
  std::vector<NodeId> ids_;
  std::map<NodeId, std::size_t> index_;
};

struct RawEdge {
  NodeId i;
  NodeId j;
  double weight;
  std::size_t line;
};

struct DatasetTable {
  std::size_t dim = 0;
  std::vector<NodeId> nodes;
  std::vector<std::vector<double>> features;
  std::vector<std::optional<double>> labels;
  std::vector<std::size_t> lines;
};

/// Rejects self-loops, duplicate edges (in either orientation) and
/// non-positive weights with the offending line number.
std::vector<RawEdge> read_edge_list(const std::string& path);
std::vector<RawEdge> parse_edge_list(std::istream& in, const std::string& source);

DatasetTable read_dataset_table(const std::string& path);
DatasetTable parse_dataset_table(std::istream& in, const std::string& source);

struct CoordinateTable {
  std::vector<NodeId> nodes;
  std::vector<std::vector<double>> coords;
};

CoordinateTable read_coordinates(const std::string& path);
CoordinateTable parse_coordinates(std::istream& in, const std::string& source);

/// (node, cluster_id) rows.
std::vector<std::pair<NodeId, NodeId>> read_partition_rows(const std::string& path);
std::vector<NodeId> read_node_list(const std::string& path);

/// Maps raw edges onto `index`; unknown endpoints are a ParseError.
EmpiricalGraph assemble_graph(const std::vector<RawEdge>& raw, const NodeIndex& index, const std::string& source);

struct LoadedDataset {
  NetworkDataset dataset;
  NodeIndex index;
};

/// Nodes are those of the dataset file; every graph endpoint must appear there.
LoadedDataset load_dataset(const std::string& graph_path, const std::string& dataset_path);

/// Cluster ids are renumbered 0..F-1 in increasing order of the file ids.
Partition assemble_partition(const std::vector<std::pair<NodeId, NodeId>>& rows, const NodeIndex& index,
                             const std::string& source);

std::string format_double(double v);

void write_graph_csv(const std::string& path, const EmpiricalGraph& g, const NodeIndex& index);
void write_dataset_csv(const std::string& path, const NetworkDataset& ds, const NodeIndex& index);
void write_partition_csv(const std::string& path, const Partition& part, const NodeIndex& index);
void write_coordinates(const std::string& path, const std::vector<std::vector<double>>& coords,
                       const NodeIndex& index);
void write_node_list(const std::string& path, const std::vector<std::size_t>& nodes, const NodeIndex& index);
void write_iteration_log(const std::string& path, const std::vector<IterationRecord>& trace);

nlohmann::json signal_to_json(const NodeSignal& w, const NodeIndex& index);
/// Reads {"node_ids": [...], "weights": [[...], ...]} back onto `index` order.
NodeSignal signal_from_json(const nlohmann::json& j, const NodeIndex& index);

nlohmann::json result_to_json(const SolverResult& res, const SolverConfig& cfg, const NodeIndex& index);
nlohmann::json ncc_to_json(const NccReport& rep);
NccReport ncc_from_json(const nlohmann::json& j);

nlohmann::json weather_to_json(const WeatherReport& rep, const WeatherConfig& cfg, const NodeIndex& index);

void write_json(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json(const std::string& path);

void write_fig1_records(const std::string& path, const std::vector<ExperimentRecord>& records);
void write_fig1_points(const std::string& path, const std::vector<Fig1Point>& points);

}  // namespace nlasso::io
