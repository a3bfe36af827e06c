#pragma once

#include <vector>

namespace csbp {

struct OrderFit {
  double slope = 0.0;
  double half_width = 0.0;  ///< standard error of the slope
};

/// Least-squares slope of log(value) against log(h).
/// Needs >= 3 points and strictly positive data.
OrderFit fit_order(const std::vector<double>& h, const std::vector<double>& values);

}  // namespace csbp
