#include <doctest.h>

#include <cmath>
#include <random>

#include "nlasso/datagen.hpp"
#include "nlasso/ncc.hpp"

using namespace nlasso;

TEST_SUITE("datagen") {

TEST_CASE("two-cluster instance structure") {
  const auto inst = two_cluster_instance({.n = 80, .inter_edges = 7, .labels_per_cluster = 3, .seed = 9}, 3);
  const auto& ds = inst.dataset;
  CHECK(ds.num_nodes() == 80);
  CHECK(ds.dim() == 3);
  CHECK(boundary_edges(ds.graph(), inst.partition).size() == 7);
  std::size_t labeled[2] = {0, 0};
  for (std::size_t i : ds.training_set()) ++labeled[inst.partition.cluster_of(i)];
  CHECK(labeled[0] == 3);
  CHECK(labeled[1] == 3);
  for (std::size_t i = 0; i < 80; ++i) {
    CHECK(norm(ds.feature(i)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(inst.truth[i][0] == (i < 40 ? 1.0 : -1.0));
  }
  CHECK(training_error(inst.truth, ds) == doctest::Approx(0.0));
}

TEST_CASE("same seed, same instance") {
  const TwoClusterSpec spec{.inter_edges = 4, .seed = 17};
  const auto a = two_cluster_instance(spec, 2);
  const auto b = two_cluster_instance(spec, 2);
  CHECK(a.dataset.features() == b.dataset.features());
  CHECK(std::equal(a.dataset.graph().edges().begin(), a.dataset.graph().edges().end(),
                   b.dataset.graph().edges().begin(), b.dataset.graph().edges().end()));
}

TEST_CASE("mean intra-cluster degree is close to the target") {
  double total = 0.0;
  const int reps = 10;
  for (int s = 0; s < reps; ++s) {
    const auto inst = two_cluster_instance({.n = 400, .avg_degree = 10, .inter_edges = 0, .seed = 100u + s}, 2);
    double deg = 0.0;
    for (double d : inst.dataset.graph().degrees()) deg += d;
    total += deg / 400.0;
  }
  CHECK(std::abs(total / reps - 10.0) <= 1.5);
}

TEST_CASE("infeasible specs") {
  CHECK_THROWS(two_cluster_instance({.n = 7}, 2));
  CHECK_THROWS(two_cluster_instance({.n = 10, .inter_edges = 26}, 2));
  CHECK_THROWS(two_cluster_instance({.n = 10, .labels_per_cluster = 6}, 2));
  CHECK_THROWS(two_cluster_instance({}, 0));
}

TEST_CASE("knn graph on a line") {
  const std::vector<std::vector<double>> pts{{0.0}, {1.0}, {3.0}, {7.0}};
  const auto g = knn_graph(pts, 1);
  // 0-1, 1-0, 2-1, 3-2
  CHECK(g.num_edges() == 3);
  CHECK(g.find_edge(0, 1) < g.num_edges());
  CHECK(g.find_edge(1, 2) < g.num_edges());
  CHECK(g.find_edge(2, 3) < g.num_edges());
  CHECK_THROWS(knn_graph(pts, 4));
  CHECK_THROWS(knn_graph({{0.0}, {0.0}, {1.0}}, 1));
}

TEST_CASE("knn graph is invariant under rigid motions") {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < 10; ++t) {
    std::vector<std::vector<double>> pts(50), moved(50);
    const double a = 2.0 * M_PI * unit(rng), dx = 10.0 * unit(rng), dy = -5.0 * unit(rng);
    for (std::size_t i = 0; i < 50; ++i) {
      pts[i] = {unit(rng), unit(rng)};
      moved[i] = {std::cos(a) * pts[i][0] - std::sin(a) * pts[i][1] + dx,
                  std::sin(a) * pts[i][0] + std::cos(a) * pts[i][1] + dy};
    }
    const auto g1 = knn_graph(pts, 3);
    const auto g2 = knn_graph(moved, 3);
    CHECK(std::equal(g1.edges().begin(), g1.edges().end(), g2.edges().begin(), g2.edges().end()));
  }
}

TEST_CASE("synthetic weather") {
  const auto data = synthetic_weather(60, 40, 2);
  CHECK(data.dataset.num_nodes() == 60);
  CHECK(data.dataset.dim() == 3);
  CHECK(data.dataset.training_set().size() == 60);
  for (std::size_t i = 0; i < 60; ++i) CHECK(data.dataset.graph().degree(i) >= 3.0);
  const auto again = synthetic_weather(60, 40, 2);
  CHECK(again.dataset.features() == data.dataset.features());
  const auto cluster = capital_cluster(data, 9);
  CHECK(cluster.size() == 9);
  CHECK_THROWS(capital_cluster(data, 0));
}

}
