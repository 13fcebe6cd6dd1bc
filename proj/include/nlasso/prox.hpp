#pragma once

#include <span>
#include <vector>

namespace nlasso {

/// Projection onto the closed Euclidean ball of radius lambda:
/// lambda x / ||x|| when ||x|| >= lambda, x otherwise.
void clip_inplace(std::span<double> x, double lambda) noexcept;
std::vector<double> clip(std::span<const double> x, double lambda);

/// sign(x) (|x| - tau)_+
inline double soft_threshold(double x, double tau) noexcept {
  if (x > tau) return x - tau;
  if (x < -tau) return x + tau;
  return 0.0;
}

/// Proximal step of the absolute loss at one labeled node:
/// argmin_v |y - x^T v| + ||v - w||^2 / (2 tau).
///
/// Only the component of w along x moves; with ybar = y/||x||^2 and
/// wbar = x^T w/||x||^2 the result is x (ybar + S(wbar - ybar; tau)) + (I - x x^T/||x||^2) w.
/// Throws std::invalid_argument when x is zero.
void labeled_node_update(std::span<const double> w, std::span<const double> x, double y, double tau,
                         std::span<double> out);
std::vector<double> labeled_node_update(std::span<const double> w, std::span<const double> x,
                                        double y, double tau);

}  // namespace nlasso
