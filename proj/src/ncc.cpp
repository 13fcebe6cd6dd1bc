#include "nlasso/ncc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

#include "nlasso/maxflow.hpp"

namespace nlasso {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxRefinements = 200;

struct ClusterFlowProblem {
  std::vector<std::size_t> local;             // global id -> local id, or npos
  std::vector<std::size_t> members;           // local id -> global id
  std::vector<Edge> interior;                 // local endpoints
  std::vector<double> demand;                 // boundary weight per local node
  std::vector<std::size_t> sources;           // local ids of labeled members
  double total_demand = 0.0;
};

ClusterFlowProblem build_problem(const EmpiricalGraph& g, const Partition& part,
                                 std::span<const std::size_t> labeled, std::size_t l) {
  constexpr std::size_t npos = static_cast<std::size_t>(-1);
  ClusterFlowProblem pb;
  pb.local.assign(g.num_nodes(), npos);
  for (std::size_t i : part.members(l)) {
    pb.local[i] = pb.members.size();
    pb.members.push_back(i);
  }
  pb.demand.assign(pb.members.size(), 0.0);
  for (const Edge& e : g.edges()) {
    const bool in_i = part.cluster_of(e.i) == l;
    const bool in_j = part.cluster_of(e.j) == l;
    if (in_i && in_j) {
      pb.interior.push_back({pb.local[e.i], pb.local[e.j], e.weight});
    } else if (in_i || in_j) {
      pb.demand[pb.local[in_i ? e.i : e.j]] += e.weight;
      pb.total_demand += e.weight;
    }
  }
  for (std::size_t i : labeled) {
    if (i >= g.num_nodes()) throw std::out_of_range("labeled node out of range");
    if (pb.local[i] != npos) pb.sources.push_back(pb.local[i]);
  }
  return pb;
}

// Max flow with sink arcs scaled by `level`; also returns the min-cut source side.
double scaled_flow(const ClusterFlowProblem& pb, double level, std::vector<bool>& side) {
  const std::size_t m = pb.members.size();
  FlowNetwork net(m + 2);
  const std::size_t source = m;
  const std::size_t sink = m + 1;
  for (std::size_t s : pb.sources) net.add_arc(source, s, kInf);
  for (const Edge& e : pb.interior) net.add_edge(e.i, e.j, e.weight);
  for (std::size_t v = 0; v < m; ++v) {
    if (pb.demand[v] > 0.0) net.add_arc(v, sink, level * pb.demand[v]);
  }
  const double f = net.max_flow(source, sink);
  side = net.min_cut_source_side();
  return f;
}

}  // namespace

std::vector<std::size_t> boundary_edges(const EmpiricalGraph& g, const Partition& part) {
  if (part.num_nodes() != g.num_nodes()) throw DimensionError("partition does not cover the graph");
  std::vector<std::size_t> out;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    if (part.cluster_of(ed.i) != part.cluster_of(ed.j)) out.push_back(e);
  }
  return out;
}

double normalized_flow(const EmpiricalGraph& g, const Partition& part,
                       std::span<const std::size_t> labeled, std::size_t l) {
  if (part.num_nodes() != g.num_nodes()) throw DimensionError("partition does not cover the graph");
  if (l >= part.num_clusters()) throw std::out_of_range("cluster index out of range");
  if (part.members(l).empty()) throw std::invalid_argument("empty cluster");

  const ClusterFlowProblem pb = build_problem(g, part, labeled, l);
  if (pb.total_demand == 0.0) return kInf;
  if (pb.sources.empty()) return 0.0;

  // rho = min over cuts S (source side) of cap_interior(S) / demand outside S.
  // Start above every finite ratio and move down to the ratio of each
  // violated min cut until the scaled demand can be met.
  double interior_total = 0.0;
  double min_demand = kInf;
  for (const Edge& e : pb.interior) interior_total += e.weight;
  for (double d : pb.demand)
    if (d > 0.0) min_demand = std::min(min_demand, d);
  double level = interior_total / min_demand + 1.0;

  std::vector<bool> side;
  for (int round = 0; round < kMaxRefinements; ++round) {
    const double f = scaled_flow(pb, level, side);
    const double target = level * pb.total_demand;
    if (f >= target - 1e-9 * (1.0 + target)) return round == 0 ? kInf : level;

    double cut = 0.0;
    for (const Edge& e : pb.interior)
      if (side[e.i] != side[e.j]) cut += e.weight;
    double outside = 0.0;
    for (std::size_t v = 0; v < pb.members.size(); ++v)
      if (!side[v]) outside += pb.demand[v];
    const double next = cut / outside;
    if (!(next < level)) return level;
    level = next;
  }
  return level;
}

NccReport check_ncc(const EmpiricalGraph& g, const Partition& part, std::span<const std::size_t> labeled,
                    std::size_t p, std::optional<double> K) {
  if (p == 0) throw std::invalid_argument("feature dimension must be positive");
  NccReport rep;
  rep.threshold = std::sqrt(static_cast<double>(p));
  rep.K_used = K;
  const auto boundary = boundary_edges(g, part);
  rep.boundary_edge_count = boundary.size();
  for (std::size_t e : boundary) rep.boundary_size += g.edge(e).weight;

  rep.rho.reserve(part.num_clusters());
  for (std::size_t l = 0; l < part.num_clusters(); ++l) rep.rho.push_back(normalized_flow(g, part, labeled, l));
  rep.rho_min = *std::min_element(rep.rho.begin(), rep.rho.end());
  double sum = 0.0;
  for (double r : rep.rho) sum += r;
  rep.rho_mean = sum / static_cast<double>(rep.rho.size());
  rep.satisfied = rep.rho_min > rep.threshold;
  rep.L_used = rep.rho_min;
  if (boundary.empty()) rep.note = "partition has no boundary edges; condition holds vacuously";
  return rep;
}

std::vector<double> labeled_feature_spread(const NetworkDataset& ds, const Partition& part) {
  if (part.num_nodes() != ds.num_nodes()) throw DimensionError("partition does not cover the dataset");
  const std::size_t p = ds.dim();
  std::vector<Eigen::MatrixXd> gram(part.num_clusters(), Eigen::MatrixXd::Zero(p, p));
  std::vector<std::size_t> count(part.num_clusters(), 0);
  for (std::size_t i : ds.training_set()) {
    const auto x = ds.feature(i);
    const double nrm = norm(x);
    if (nrm == 0.0) continue;
    const Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(p)) / nrm;
    const std::size_t l = part.cluster_of(i);
    gram[l] += v * v.transpose();
    ++count[l];
  }
  std::vector<double> out(part.num_clusters(), 0.0);
  for (std::size_t l = 0; l < out.size(); ++l) {
    if (count[l] < p) continue;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram[l], Eigen::EigenvaluesOnly);
    out[l] = std::sqrt(std::max(eig.eigenvalues()(0), 0.0));
  }
  return out;
}

}  // namespace nlasso
