#include "nlasso/prox.hpp"

#include <cmath>
#include <stdexcept>

#include "nlasso/signal.hpp"

namespace nlasso {

void clip_inplace(std::span<double> x, double lambda) noexcept {
  const double nrm = norm(x);
  if (nrm >= lambda && nrm > 0.0) {
    const double scale = lambda / nrm;
    for (double& v : x) v *= scale;
  }
}

std::vector<double> clip(std::span<const double> x, double lambda) {
  std::vector<double> out(x.begin(), x.end());
  clip_inplace(out, lambda);
  return out;
}

void labeled_node_update(std::span<const double> w, std::span<const double> x, double y, double tau,
                         std::span<double> out) {
  const double xx = dot(x, x);
  if (!(xx > 0.0)) throw std::invalid_argument("labeled node has a zero feature vector");
  const double y_scaled = y / xx;
  const double w_scaled = dot(x, w) / xx;
  // move only along x: new normalized coordinate minus the old one
  const double shift = y_scaled + soft_threshold(w_scaled - y_scaled, tau) - w_scaled;
  for (std::size_t k = 0; k < w.size(); ++k) out[k] = w[k] + shift * x[k];
}

std::vector<double> labeled_node_update(std::span<const double> w, std::span<const double> x,
                                        double y, double tau) {
  if (w.size() != x.size()) throw DimensionError("labeled_node_update: w and x differ in length");
  std::vector<double> out(w.size());
  labeled_node_update(w, x, y, tau, out);
  return out;
}

}  // namespace nlasso
