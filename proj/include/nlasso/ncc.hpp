#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nlasso/graph.hpp"
#include "nlasso/model.hpp"

namespace nlasso {

/// Ids of edges whose endpoints lie in different clusters, in increasing order.
std::vector<std::size_t> boundary_edges(const EmpiricalGraph& g, const Partition& part);

/// Normalized flow rho of cluster l.
///
/// Flow enters the cluster at its labeled nodes (unlimited supply), travels
/// along intra-cluster edges with capacity A_ij, and leaves through the
/// boundary edges incident to the cluster. rho is the largest factor such that
/// every boundary edge e can be sent rho * A_e units simultaneously, i.e. the
/// maximum such flow divided by the cluster's boundary weight.
///
/// Returns +inf when the cluster has no boundary edges (nothing to certify)
/// and 0 when it has boundary edges but no labeled node.
double normalized_flow(const EmpiricalGraph& g, const Partition& part,
                       std::span<const std::size_t> labeled, std::size_t l);

struct NccReport {
  std::vector<double> rho;
  double rho_mean = 0.0;
  double rho_min = 0.0;
  /// Total weight of the boundary edges.
  double boundary_size = 0.0;
  std::size_t boundary_edge_count = 0;
  double threshold = 0.0;
  bool satisfied = false;
  std::optional<double> K_used;
  double L_used = 0.0;
  std::string note;
};

/// Per cluster, the smallest singular value of the matrix whose rows are the
/// normalized feature vectors of the cluster's labeled nodes (0 with fewer
/// than p labeled nodes). Flows certify only the graph side of the
/// compatibility condition; when this is 0 the labels cannot pin down the
/// cluster's weight vector and no finite K exists.
std::vector<double> labeled_feature_spread(const NetworkDataset& ds, const Partition& part);

/// rho for every cluster and the verdict min rho > sqrt(p). L_used is
/// min rho; K is not derivable from flows and is only echoed.
NccReport check_ncc(const EmpiricalGraph& g, const Partition& part, std::span<const std::size_t> labeled,
                    std::size_t p, std::optional<double> K = std::nullopt);

}  // namespace nlasso
