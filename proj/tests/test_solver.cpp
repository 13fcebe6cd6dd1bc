#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "helpers.hpp"
#include "nlasso/datagen.hpp"
#include "nlasso/error.hpp"
#include "nlasso/solver.hpp"
#include "oracles.hpp"

using namespace nlasso;

TEST_SUITE("solver") {

TEST_CASE("standard preconditioners") {
  EmpiricalGraph g(3, {{0, 1, 2.0}, {1, 2, 0.5}});
  const auto pc = Preconditioners::standard(g);
  CHECK(pc.sigma[0] == doctest::Approx(0.25));
  CHECK(pc.sigma[1] == doctest::Approx(1.0));
  CHECK(pc.tau[1] == doctest::Approx(0.9 / 2.5));
  EmpiricalGraph iso(3, {{0, 1, 1.0}});
  CHECK(std::isinf(Preconditioners::standard(iso).tau[2]));
}

TEST_CASE("step sizes satisfy the convergence condition") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 + rng() % 199;
    const auto g = testutil::random_graph(n, 4.0 / static_cast<double>(n), rng, t % 2 == 0);
    const auto pc = Preconditioners::standard(g);
    CHECK(estimate_operator_norm(g, pc, 1 + t % 3, 300, rng()) < 1.0);
  }
  EmpiricalGraph single(2, {{0, 1, 3.7}});
  CHECK(std::abs(estimate_operator_norm(single, Preconditioners::standard(single), 2, 100, 1) - 0.9) <= 1e-10);
}

TEST_CASE("single labeled node is fitted exactly") {
  EmpiricalGraph g(1, {});
  NodeSignal x(1, 2);
  x[0][0] = 2.0;
  x[0][1] = 0.0;
  SolverConfig cfg;
  cfg.lambda = 1.0;
  const auto res = solve(NetworkDataset(g, x, {4.0}), cfg);
  CHECK(res.converged);
  CHECK(res.weights[0][0] == doctest::Approx(2.0));
  CHECK(res.objective == doctest::Approx(0.0));
}

TEST_CASE("two agreeing labeled nodes give a constant solution") {
  EmpiricalGraph g(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  NodeSignal x(3, 1);
  x[0][0] = 1.0;
  x[1][0] = 1.0;
  x[2][0] = 2.0;
  SolverConfig cfg;
  cfg.lambda = 0.5;
  cfg.rel_tol = 1e-12;
  cfg.max_iter = 100000;
  const auto res = solve(NetworkDataset(g, x, {3.0, std::nullopt, 6.0}), cfg);
  for (std::size_t i = 0; i < 3; ++i) CHECK(res.weights[i][0] == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(res.objective == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("invalid inputs") {
  EmpiricalGraph g(2, {{0, 1, 1.0}});
  NodeSignal x(2, 1);
  x[0][0] = 1.0;
  SolverConfig cfg;
  cfg.lambda = 1.0;
  CHECK_THROWS_AS(solve(NetworkDataset(g, x, {std::nullopt, std::nullopt}), cfg), std::invalid_argument);
  CHECK_THROWS_AS(solve(NetworkDataset(g, x, {std::nullopt, 1.0}), cfg), std::invalid_argument);
  cfg.lambda = 0.0;
  CHECK_THROWS_AS(solve(NetworkDataset(g, x, {1.0, std::nullopt}), cfg), std::invalid_argument);
  cfg.lambda = 1.0;
  cfg.eta = 1.0;
  CHECK_THROWS_AS(solve(NetworkDataset(g, x, {1.0, std::nullopt}), cfg), std::invalid_argument);
}

TEST_CASE("overflowing labels raise a divergence error") {
  EmpiricalGraph g(2, {{0, 1, 1.0}});
  NodeSignal x(2, 1);
  x[0][0] = 1e-150;
  x[1][0] = 1.0;
  SolverConfig cfg;
  cfg.lambda = 1.0;
  CHECK_THROWS_AS(solve(NetworkDataset(g, x, {1e300, 1.0}), cfg), DivergenceError);
}

TEST_CASE("objective matches an independent evaluation") {
  std::mt19937_64 rng(32);
  const auto ds = testutil::random_dataset(testutil::random_graph(20, 0.2, rng), 3, 0.5, rng);
  const auto w = testutil::random_signal<NodeSignal>(20, 3, rng);
  CHECK(objective(w, ds, 0.3) == doctest::Approx(oracle::nlasso_objective(w, ds, 0.3)).epsilon(1e-12));
}

TEST_CASE("optimality certificate at convergence") {
  std::mt19937_64 rng(33);
  for (int t = 0; t < 5; ++t) {
    const auto ds = testutil::random_dataset(testutil::random_graph(15, 0.2, rng), 2, 0.5, rng);
    SolverConfig cfg;
    cfg.lambda = 0.3;
    cfg.rel_tol = 1e-13;
    cfg.max_iter = 200000;
    const auto res = solve(ds, cfg);
    REQUIRE(res.converged);
    const EdgeSignal d = apply_incidence(ds.graph(), res.weights);
    for (std::size_t e = 0; e < d.blocks(); ++e) {
      CHECK(norm(res.dual[e]) <= cfg.lambda * (1.0 + 1e-12));
      const double dn = norm(d[e]);
      if (dn > 1e-6) {
        for (std::size_t k = 0; k < d.dim(); ++k)
          CHECK(std::abs(res.dual[e][k] - cfg.lambda * d[e][k] / dn) <= 1e-4);
      }
    }
  }
}

TEST_CASE("primal change is small after ten thousand iterations") {
  std::mt19937_64 rng(34);
  for (int t = 0; t < 5; ++t) {
    const auto ds = testutil::random_dataset(testutil::random_graph(40, 0.1, rng), 2, 0.3, rng);
    SolverConfig cfg;
    cfg.lambda = 0.2;
    cfg.rel_tol = 0.0;
    cfg.max_iter = 10000;
    cfg.log_every = 1;
    const auto res = solve(ds, cfg);
    CHECK(res.trace.back().primal_change < 1e-6);
  }
}

TEST_CASE("final objective is close to the best logged objective") {
  std::mt19937_64 rng(35);
  const auto ds = testutil::random_dataset(testutil::random_graph(30, 0.15, rng), 2, 0.4, rng);
  SolverConfig cfg;
  cfg.lambda = 0.1;
  cfg.rel_tol = 1e-10;
  cfg.max_iter = 100000;
  cfg.log_every = 10;
  const auto res = solve(ds, cfg);
  CHECK(res.converged);
  CHECK(res.objective <= res.best_objective * (1.0 + 1e-6) + 1e-12);
  CHECK(res.trace.back().iter == res.iterations_run);
}

TEST_CASE("agreement with a subgradient oracle on small scalar problems") {
  std::mt19937_64 rng(36);
  for (int t = 0; t < 5; ++t) {
    const std::size_t n = 2 + rng() % 4;
    const auto ds = testutil::random_dataset(testutil::random_graph(n, 0.5, rng), 1, 0.7, rng);
    const double lambda = 0.2 + 0.1 * t;
    SolverConfig cfg;
    cfg.lambda = lambda;
    cfg.rel_tol = 1e-12;
    cfg.max_iter = 200000;
    const auto res = solve(ds, cfg);
    const double exact = oracle::scalar_vertex_minimum(ds, lambda);
    const auto sg = oracle::subgradient_descent(ds, lambda, 200000, 1.0);
    CHECK(sg.best_objective == doctest::Approx(exact).epsilon(1e-5));
    CHECK(res.objective == doctest::Approx(exact).epsilon(1e-6));
  }
}

TEST_CASE("parallel and serial backends produce the same iterates") {
  const auto inst = two_cluster_instance({.n = 200, .avg_degree = 8, .inter_edges = 10, .seed = 5}, 3);
  SolverConfig cfg;
  cfg.lambda = 0.05;
  cfg.max_iter = 500;
  cfg.rel_tol = 0.0;
  cfg.backend = Backend::kParallel;
  const auto a = solve(inst.dataset, cfg);
  cfg.backend = Backend::kSerial;
  const auto b = solve(inst.dataset, cfg);
  CHECK(testutil::max_abs_diff(a.weights.flat(), b.weights.flat()) <= 1e-9);
  CHECK(testutil::max_abs_diff(a.dual.flat(), b.dual.flat()) <= 1e-9);
}

TEST_CASE("results do not depend on the thread count") {
  const auto inst = two_cluster_instance({.n = 9000, .avg_degree = 4, .inter_edges = 20, .seed = 6}, 2);
  SolverConfig cfg;
  cfg.lambda = 0.05;
  cfg.max_iter = 20;
  cfg.rel_tol = 0.0;
  const int before = max_threads();
  set_threads(1);
  const auto a = solve(inst.dataset, cfg);
  set_threads(4);
  const auto b = solve(inst.dataset, cfg);
  set_threads(before);
  CHECK(a.weights == b.weights);
  CHECK(a.dual == b.dual);
}

TEST_CASE("primal and dual steps match the fused loop") {
  std::mt19937_64 rng(37);
  const auto ds = testutil::random_dataset(testutil::random_graph(30, 0.2, rng), 2, 0.4, rng);
  const auto pc = Preconditioners::standard(ds.graph());
  NodeSignal w(30, 2);
  EdgeSignal u(ds.graph().num_edges(), 2);
  for (int k = 0; k < 3; ++k) {
    const NodeSignal w_next = primal_step(ds, pc, w, u);
    u = dual_step(ds.graph(), pc, u, w_next, w, 0.2);
    w = w_next;
  }
  SolverConfig cfg;
  cfg.lambda = 0.2;
  cfg.max_iter = 3;
  cfg.rel_tol = 0.0;
  const auto res = solve(ds, cfg);
  CHECK(testutil::max_abs_diff(res.weights.flat(), w.flat()) <= 1e-14);
  CHECK(testutil::max_abs_diff(res.dual.flat(), u.flat()) <= 1e-14);
}

}
