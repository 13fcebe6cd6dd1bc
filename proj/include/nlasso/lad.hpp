#pragma once

#include <span>
#include <vector>

#include "nlasso/signal.hpp"

namespace nlasso {

struct LadFit {
  std::vector<double> weights;
  double objective = 0.0;  // sum of absolute residuals
};

/// Single least-absolute-deviation linear model min_w sum_r |y_r - x_r^T w|
/// fitted by iteratively reweighted least squares (at most `iterations`
/// reweightings), then snapped to an interpolating vertex when that is no
/// worse. `rows` holds one feature vector per sample.
LadFit fit_lad(const std::vector<std::span<const double>>& rows, std::span<const double> y,
               long iterations = 500);

}  // namespace nlasso
