#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "nlasso/maxflow.hpp"
#include "oracles.hpp"

using namespace nlasso;

TEST_SUITE("maxflow") {

TEST_CASE("textbook network") {
  FlowNetwork net(4);
  net.add_arc(0, 1, 3.0);
  net.add_arc(0, 2, 2.0);
  net.add_arc(1, 2, 1.0);
  net.add_arc(1, 3, 2.0);
  net.add_arc(2, 3, 3.0);
  CHECK(net.max_flow(0, 3) == doctest::Approx(5.0));
  const auto side = net.min_cut_source_side();
  CHECK(side[0]);
  CHECK(!side[3]);
}

TEST_CASE("infinite capacities") {
  const double inf = std::numeric_limits<double>::infinity();
  FlowNetwork net(3);
  net.add_arc(0, 1, inf);
  net.add_arc(1, 2, 4.0);
  CHECK(net.max_flow(0, 2) == doctest::Approx(4.0));
  FlowNetwork open(2);
  open.add_arc(0, 1, inf);
  CHECK(std::isinf(open.max_flow(0, 1)));
}

TEST_CASE("argument checks") {
  FlowNetwork net(2);
  CHECK_THROWS(net.max_flow(0, 0));
  CHECK_THROWS(net.max_flow(0, 5));
  CHECK_THROWS(net.add_arc(0, 1, -1.0));
}

TEST_CASE("flow value equals the brute-force minimum cut") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> cap(0.1, 5.0);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + rng() % 7;
    std::vector<Edge> edges;
    for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, cap(rng)});
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 2; j < n; ++j)
        if (rng() % 2) edges.push_back({i, j, cap(rng)});
    FlowNetwork net(n);
    for (const auto& e : edges) net.add_edge(e.i, e.j, e.weight);
    const std::size_t s = rng() % n;
    std::size_t sink = rng() % n;
    if (sink == s) sink = (s + 1) % n;
    CHECK(net.max_flow(s, sink) == doctest::Approx(oracle::brute_force_min_cut(n, edges, s, sink)).epsilon(1e-12));
  }
}

TEST_CASE("repeated solves reset the flow") {
  FlowNetwork net(3);
  net.add_edge(0, 1, 2.0);
  net.add_edge(1, 2, 1.0);
  CHECK(net.max_flow(0, 2) == doctest::Approx(1.0));
  CHECK(net.max_flow(0, 2) == doctest::Approx(1.0));
  CHECK(net.max_flow(2, 0) == doctest::Approx(1.0));
}

}
