#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "nlasso/datagen.hpp"
#include "nlasso/experiments.hpp"
#include "nlasso/lad.hpp"

using namespace nlasso;

TEST_SUITE("experiments") {

TEST_CASE("lad recovers an exact linear model") {
  std::vector<std::vector<double>> x{{1, 0}, {0, 1}, {1, 1}, {2, -1}, {-1, 2}, {0.5, 0.5}};
  std::vector<double> y;
  for (const auto& r : x) y.push_back(2.0 * r[0] - 0.5 * r[1]);
  y[5] += 10.0;  // one low-leverage outlier does not move a least-absolute-deviation fit
  std::vector<std::span<const double>> rows(x.begin(), x.end());
  const auto fit = fit_lad(rows, y);
  CHECK(fit.weights[0] == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(fit.weights[1] == doctest::Approx(-0.5).epsilon(1e-4));
}

TEST_CASE("lad matches exhaustive vertex search") {
  // With full-rank data some minimizer interpolates two samples (p = 2).
  std::mt19937_64 rng(71);
  std::normal_distribution<double> gauss;
  for (int t = 0; t < 30; ++t) {
    const std::size_t m = 3 + rng() % 8;
    std::vector<std::vector<double>> x(m, std::vector<double>(2));
    std::vector<double> y(m);
    for (std::size_t r = 0; r < m; ++r) {
      x[r] = {gauss(rng), gauss(rng)};
      y[r] = gauss(rng);
    }
    auto obj = [&](double a, double b) {
      double s = 0.0;
      for (std::size_t r = 0; r < m; ++r) s += std::abs(y[r] - a * x[r][0] - b * x[r][1]);
      return s;
    };
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) {
        const double det = x[i][0] * x[j][1] - x[i][1] * x[j][0];
        if (std::abs(det) < 1e-12) continue;
        best = std::min(best, obj((y[i] * x[j][1] - y[j] * x[i][1]) / det, (x[i][0] * y[j] - x[j][0] * y[i]) / det));
      }
    std::vector<std::span<const double>> rows(x.begin(), x.end());
    const auto fit = fit_lad(rows, y);
    CHECK(fit.objective == doctest::Approx(best).epsilon(1e-9));
    CHECK(obj(fit.weights[0], fit.weights[1]) == doctest::Approx(fit.objective).epsilon(1e-12));
  }
}

TEST_CASE("small sweep is reproducible and sorted") {
  Fig1Config cfg;
  cfg.n = 40;
  cfg.inter_edges = {30, 2};
  cfg.runs_per_point = 2;
  cfg.max_iter = 2000;
  const auto a = run_fig1(cfg);
  const auto b = run_fig1(cfg);
  REQUIRE(a.points.size() == 2);
  CHECK(a.points[0].mean_rho_bar <= a.points[1].mean_rho_bar);
  CHECK(a.points[0].inter_edges == 30);
  CHECK(a.records.size() == 4);
  for (std::size_t r = 0; r < 4; ++r) CHECK(a.records[r].nmse == b.records[r].nmse);
}

TEST_CASE("trend summary") {
  std::vector<Fig1Point> pts(3);
  pts[0].mean_rho_bar = 0.5;
  pts[0].mean_nmse = 1.0;
  pts[1].mean_rho_bar = 1.5;
  pts[1].mean_nmse = 0.9;
  pts[2].mean_rho_bar = 2.5;
  pts[2].mean_nmse = 0.01;
  const auto t = fig1_trend(pts);
  CHECK(t.improvement == doctest::Approx(100.0));
  CHECK(t.steepest_drop_rho == doctest::Approx(2.0));
  CHECK_THROWS(fig1_trend({pts[0]}));
}

TEST_CASE("weather protocol masks the cluster and is deterministic") {
  const auto data = synthetic_weather(60, 40, 3);
  WeatherConfig cfg;
  cfg.iterations = 500;
  cfg.cluster = capital_cluster(data, 9);
  cfg.kept = {cfg.cluster[1], cfg.cluster[4], cfg.cluster[7]};
  const auto a = run_weather_experiment(data.dataset, cfg);
  const auto b = run_weather_experiment(data.dataset, cfg);
  CHECK(a.masked.size() == 6);
  CHECK(std::isfinite(a.nlasso_error));
  CHECK(a.nlasso_error == b.nlasso_error);
  CHECK(a.baseline_error == b.baseline_error);
  cfg.kept = cfg.cluster;
  CHECK_THROWS(run_weather_experiment(data.dataset, cfg));
}

}
