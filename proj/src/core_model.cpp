#include "spdcfc/core_model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>

#include "spdcfc/errors.hpp"
#include "spdcfc/special_functions.hpp"

namespace spdcfc {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

std::string fmt(const char* name, double v) {
  std::ostringstream os;
  os << name << " = " << v;
  return os.str();
}

void require_positive(double v, const char* name) {
  require(std::isfinite(v) && v > 0.0, fmt(name, v) + " must be finite and > 0");
}

void require_unit_interval(double v, const char* name) {
  require(std::isfinite(v) && v > 0.0 && v <= 1.0, fmt(name, v) + " must lie in (0, 1]");
}

}  // namespace

void WalkOffSet::validate() const {
  for (auto [v, name] : {std::pair{m_p, "m_p"}, std::pair{m, "m"}, std::pair{q_over_k, "q_over_k"}}) {
    require(std::isfinite(v) && v >= 0.0, fmt(name, v) + " must be finite and >= 0");
    require(v < 1.0, fmt(name, v) + " violates the paraxial bound < 1");
  }
}

void ExperimentConfig::validate() const {
  require_positive(crystal_length_um, "crystal_length_um");
  require_positive(pump_waist_um, "pump_waist_um");
  require_positive(fiber_mode_radius_um, "fiber_mode_radius_um");
  require_positive(inverse_magnification, "inverse_magnification");
  walkoffs.validate();
}

AlphaBeta compute_alpha_beta(const WalkOffSet& w) {
  w.validate();
  const double q2 = w.q_over_k * w.q_over_k;
  const double dm = w.m_p - w.m;
  return AlphaBeta{
      .alpha1 = w.m_p * w.m_p + q2,
      .alpha2 = dm * dm + q2,
      .beta = w.m * w.m + 4.0 * q2,
  };
}

double mode_field_radius(double mfd_um) {
  require_positive(mfd_um, "mfd_um");
  return mfd_um / (2.0 * std::numbers::sqrt2);
}

double pump_waist_from_diameter(double diameter_um) {
  require_positive(diameter_um, "diameter_um");
  return diameter_um / (2.0 * std::numbers::sqrt2);
}

ImagingGeometry magnification(double focal_length_mm, double object_distance_mm) {
  require_positive(focal_length_mm, "focal_length_mm");
  require(std::isfinite(object_distance_mm), fmt("object_distance_mm", object_distance_mm) + " must be finite");
  if (!(object_distance_mm > focal_length_mm)) {
    throw NoRealImageError(fmt("object_distance_mm", object_distance_mm) +
                           " must exceed the focal length for a real image (" + fmt("f", focal_length_mm) + ")");
  }
  const double image = 1.0 / (1.0 / focal_length_mm - 1.0 / object_distance_mm);
  return ImagingGeometry{
      .inverse_magnification = object_distance_mm / focal_length_mm - 1.0,
      .image_distance_mm = image,
  };
}

ShapeParams shape_params(const ExperimentConfig& cfg) {
  // Zero length is allowed here: it is the analytic limit used by the tests.
  require_positive(cfg.pump_waist_um, "pump_waist_um");
  require_positive(cfg.fiber_mode_radius_um, "fiber_mode_radius_um");
  require_positive(cfg.inverse_magnification, "inverse_magnification");
  require(std::isfinite(cfg.crystal_length_um) && cfg.crystal_length_um >= 0.0,
          fmt("crystal_length_um", cfg.crystal_length_um) + " must be finite and >= 0");

  const AlphaBeta ab = compute_alpha_beta(cfg.walkoffs);
  const double xi = cfg.imaged_mode_radius_um() / cfg.pump_waist_um;
  const double xi2 = xi * xi;
  const double scale = cfg.crystal_length_um / cfg.pump_waist_um;

  ShapeParams sp;
  sp.xi = xi;
  sp.alpha_beta = ab;
  sp.sigma1 = scale * std::sqrt(ab.alpha1 / (1.0 + xi2));
  sp.sigma2 = scale * std::sqrt(ab.alpha2 / (1.0 + xi2));
  sp.sigma_c = scale * std::sqrt(((ab.alpha1 + ab.alpha2) * xi2 + ab.beta) / (xi2 * (2.0 + xi2)));
  return sp;
}

EfficiencyResult eta_closed_form(const ShapeParams& sp) {
  for (double v : {sp.xi, sp.sigma_c, sp.sigma1, sp.sigma2, sp.alpha_beta.alpha1, sp.alpha_beta.alpha2,
                   sp.alpha_beta.beta}) {
    require(std::isfinite(v), "eta_closed_form: non-finite shape parameter");
  }
  require(sp.xi > 0.0, fmt("xi", sp.xi) + " must be > 0");
  require(sp.sigma_c >= 0.0 && sp.sigma1 >= 0.0 && sp.sigma2 >= 0.0, "eta_closed_form: negative sigma");

  const double xi2 = sp.xi * sp.xi;
  const double prefactor = 4.0 * (1.0 + xi2) / ((2.0 + xi2) * (2.0 + xi2));
  const double singles = std::sqrt(sigma_over_erf(sp.sigma1) * sigma_over_erf(sp.sigma2));
  double eta = prefactor * erf_over_sigma(sp.sigma_c) * singles;

  // eta <= 1 holds analytically; clip the last-ulp excess that the
  // L -> 0, xi -> 0 corner produces.
  if (eta > 1.0) {
    if (eta > 1.0 + 1e-12) throw DomainError(fmt("eta", eta) + " exceeds 1; inconsistent shape parameters");
    eta = 1.0;
  }
  require(eta > 0.0, fmt("eta", eta) + " underflowed to zero");
  return EfficiencyResult{.eta = eta, .shape = sp};
}

EfficiencyResult eta_closed_form(const ExperimentConfig& cfg) { return eta_closed_form(shape_params(cfg)); }

double effective_to_raw(double eta_fc, double eta_det, double t_filter) {
  require_unit_interval(eta_fc, "eta_fc");
  require_unit_interval(eta_det, "eta_det");
  require_unit_interval(t_filter, "t_filter");
  return eta_fc * eta_det * t_filter;
}

double raw_to_effective(double eta_raw, double eta_det, double t_filter) {
  require_unit_interval(eta_raw, "eta_raw");
  require_unit_interval(eta_det, "eta_det");
  require_unit_interval(t_filter, "t_filter");
  const double eff = eta_raw / (eta_det * t_filter);
  require(eff <= 1.0, fmt("implied coupling efficiency", eff) + " exceeds 1");
  return eff;
}

}  // namespace spdcfc
