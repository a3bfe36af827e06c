#include "csbp/fit.hpp"

#include <cmath>
#include <string>

#include "csbp/errors.hpp"

namespace csbp {

OrderFit fit_order(const std::vector<double>& h, const std::vector<double>& values) {
  if (h.size() != values.size()) {
    throw DimensionMismatch("fit_order: h and value lists differ in length");
  }
  const std::size_t n = h.size();
  if (n < 3) {
    throw InsufficientData("fit_order: need at least 3 points, got " + std::to_string(n));
  }
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(h[i] > 0.0) || !(values[i] > 0.0)) {
      throw InvalidArgument("fit_order: nonpositive value at index " + std::to_string(i));
    }
    lx[i] = std::log(h[i]);
    ly[i] = std::log(values[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx <= 0.0) {
    throw InsufficientData("fit_order: all h values coincide");
  }
  OrderFit fit;
  fit.slope = sxy / sxx;
  const double intercept = my - fit.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (intercept + fit.slope * lx[i]);
    ssr += r * r;
  }
  fit.half_width = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
  return fit;
}

}  // namespace csbp
