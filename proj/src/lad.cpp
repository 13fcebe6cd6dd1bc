#include "nlasso/lad.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

#include "nlasso/error.hpp"

namespace nlasso {

namespace {

double lad_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& w) {
  return (y - X * w).cwiseAbs().sum();
}

}  // namespace

LadFit fit_lad(const std::vector<std::span<const double>>& rows, std::span<const double> y, long iterations) {
  if (rows.empty()) throw std::invalid_argument("fit_lad: no samples");
  if (rows.size() != y.size()) throw DimensionError("fit_lad: rows and labels differ in count");
  if (iterations < 1) throw std::invalid_argument("fit_lad: iterations must be >= 1");
  const std::size_t p = rows.front().size();
  const auto m = static_cast<Eigen::Index>(rows.size());
  const auto pp = static_cast<Eigen::Index>(p);
  Eigen::MatrixXd X(m, pp);
  Eigen::VectorXd Y(m);
  for (Eigen::Index r = 0; r < m; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    if (row.size() != p) throw DimensionError("fit_lad: ragged feature rows");
    for (Eigen::Index t = 0; t < pp; ++t) X(r, t) = row[static_cast<std::size_t>(t)];
    Y(r) = y[static_cast<std::size_t>(r)];
  }

  // Iteratively reweighted least squares: weights 1/max(|r|, delta) turn the
  // squared loss into the absolute one at the fixed point.
  const double scale = std::max(Y.cwiseAbs().maxCoeff(), 1.0);
  const double delta = 1e-10 * scale;
  Eigen::VectorXd w = X.completeOrthogonalDecomposition().solve(Y);
  Eigen::VectorXd best = w;
  double best_obj = lad_objective(X, Y, w);
  for (long k = 0; k < iterations; ++k) {
    const Eigen::VectorXd wt = (Y - X * w).cwiseAbs().cwiseMax(delta).cwiseInverse();
    const Eigen::MatrixXd A = X.transpose() * wt.asDiagonal() * X;
    const Eigen::VectorXd next = A.completeOrthogonalDecomposition().solve(X.transpose() * wt.asDiagonal() * Y);
    const double obj = lad_objective(X, Y, next);
    const bool stalled = (next - w).norm() <= 1e-14 * (1.0 + w.norm());
    w = next;
    if (obj < best_obj) {
      best_obj = obj;
      best = w;
    }
    if (stalled) break;
  }

  // Some minimizer interpolates p samples; snap to the one suggested by the
  // smallest residuals when that is at least as good.
  if (m >= pp) {
    const Eigen::VectorXd res = (Y - X * best).cwiseAbs();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return res(a) < res(b); });
    Eigen::MatrixXd Xs(pp, pp);
    Eigen::VectorXd Ys(pp);
    for (Eigen::Index t = 0; t < pp; ++t) {
      Xs.row(t) = X.row(order[static_cast<std::size_t>(t)]);
      Ys(t) = Y(order[static_cast<std::size_t>(t)]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(Xs);
    if (lu.isInvertible()) {
      const Eigen::VectorXd snap = lu.solve(Ys);
      const double obj = lad_objective(X, Y, snap);
      if (obj <= best_obj) {
        best_obj = obj;
        best = snap;
      }
    }
  }
  return {std::vector<double>(best.data(), best.data() + best.size()), best_obj};
}

}  // namespace nlasso
