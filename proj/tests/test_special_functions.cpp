#include <doctest.h>

#include <cmath>
#include <numbers>

#include "reference/erf_series.hpp"
#include "spdcfc/errors.hpp"
#include "spdcfc/special_functions.hpp"

using spdcfc::erf_over_sigma;
using spdcfc::sigma_over_erf;
using spdcfc::testing::erf_series;

TEST_CASE("reference series uses at least 30 terms and matches known values") {
  int terms = 0;
  CHECK(static_cast<double>(erf_series(1.0L, &terms)) == doctest::Approx(0.8427007929497149).epsilon(1e-15));
  CHECK(terms >= spdcfc::testing::kErfSeriesMinTerms);
  CHECK(static_cast<double>(erf_series(3.0L)) == doctest::Approx(0.9999779095030014).epsilon(1e-15));
}

TEST_CASE("erf within 1e-12 of the reference on [0, 6]") {
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double x = 6.0 * i / 999.0;
    worst = std::max(worst, std::abs(spdcfc::erf(x) - static_cast<double>(erf_series(x))));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("erf is odd") {
  for (double x : {0.1, 0.7, 2.5}) CHECK(spdcfc::erf(-x) == -spdcfc::erf(x));
}

TEST_CASE("erf_over_sigma examples") {
  CHECK(erf_over_sigma(0.0) == doctest::Approx(2.0 * std::numbers::inv_sqrtpi).epsilon(1e-15));
  CHECK(erf_over_sigma(0.0) == doctest::Approx(1.1283791671).epsilon(1e-10));
  CHECK(erf_over_sigma(1.0) == doctest::Approx(0.8427007929).epsilon(1e-10));
  CHECK(erf_over_sigma(3.0) == doctest::Approx(0.3333259698343338).epsilon(1e-14));
}

TEST_CASE("erf_over_sigma series branch against the reference") {
  for (double s : {1e-12, 1e-8, 1e-6, 5e-5, 9.99e-5}) {
    const double ref = static_cast<double>(erf_series(s) / s);
    CHECK(std::abs(erf_over_sigma(s) - ref) <= 1e-12);
  }
}

TEST_CASE("erf_over_sigma is continuous at the series switchover") {
  const double sw = spdcfc::kSeriesSwitch;
  for (double eps : {1e-18, 1e-15, 1e-12, 1e-9}) {
    CHECK(std::abs(erf_over_sigma(sw - eps) - erf_over_sigma(sw + eps)) <= 1e-12);
  }
  CHECK(std::abs(erf_over_sigma(std::nextafter(sw, 0.0)) - erf_over_sigma(sw)) <= 1e-12);
}

TEST_CASE("sigma_over_erf is the reciprocal with limit sqrt(pi)/2") {
  CHECK(sigma_over_erf(0.0) == doctest::Approx(std::sqrt(std::numbers::pi) / 2.0).epsilon(1e-15));
  for (double s : {1e-5, 0.3, 2.0, 10.0}) CHECK(sigma_over_erf(s) * erf_over_sigma(s) == doctest::Approx(1.0));
}

TEST_CASE("erf_over_sigma rejects negative and NaN input") {
  CHECK_THROWS_AS(erf_over_sigma(-1e-3), spdcfc::DomainError);
  CHECK_THROWS_AS(erf_over_sigma(std::nan("")), spdcfc::DomainError);
  CHECK(erf_over_sigma(INFINITY) == 0.0);
}
