#pragma once

namespace spdcfc {

/// Error function. Absolute error below 1e-12 on the whole real line.
double erf(double x);

/// erf(sigma)/sigma for sigma >= 0, finite at sigma = 0 (limit 2/sqrt(pi)).
/// Below kSeriesSwitch a three-term Taylor series replaces the quotient.
double erf_over_sigma(double sigma);

/// sigma/erf(sigma), the reciprocal of erf_over_sigma (limit sqrt(pi)/2).
double sigma_over_erf(double sigma);

inline constexpr double kSeriesSwitch = 1e-4;

}  // namespace spdcfc
