#include "spdcfc/special_functions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "spdcfc/errors.hpp"

namespace spdcfc {

double erf(double x) { return std::erf(x); }

double erf_over_sigma(double sigma) {
  if (std::isnan(sigma) || sigma < 0.0) {
    throw DomainError("erf_over_sigma: sigma must be >= 0, got " + std::to_string(sigma));
  }
  if (std::isinf(sigma)) return 0.0;
  if (sigma < kSeriesSwitch) {
    const double s2 = sigma * sigma;
    // erf(s)/s = (2/sqrt(pi)) (1 - s^2/3 + s^4/10 - ...)
    return 2.0 * std::numbers::inv_sqrtpi * (1.0 - s2 / 3.0 + s2 * s2 / 10.0);
  }
  return spdcfc::erf(sigma) / sigma;
}

double sigma_over_erf(double sigma) {
  const double q = erf_over_sigma(sigma);
  if (q == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / q;
}

}  // namespace spdcfc
