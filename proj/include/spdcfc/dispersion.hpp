#pragma once

#include <array>
#include <string>
#include <vector>

#include "spdcfc/core_model.hpp"

namespace spdcfc {

/// Principal index of one polarization, n^2 = A + B/(lambda^2 - C) - D lambda^2
/// (lambda in micrometres), the "sellmeier-1" form.
struct SellmeierTerm {
  std::vector<double> coeffs;  ///< {A, B, C, D}
  std::string form = "sellmeier-1";
  std::array<double, 2> range_um{0.0, 0.0};

  double index(double lambda_um) const;
  bool in_range(double lambda_um) const { return lambda_um >= range_um[0] && lambda_um <= range_um[1]; }
};

/// Refractive-index model of a negative uniaxial crystal.
class IndexModel {
 public:
  /// Validates the coefficients: n real and > 1 over the common validity
  /// range, and n_o >= n_e (equality allowed for isotropic test media).
  IndexModel(std::string material, SellmeierTerm ordinary, SellmeierTerm extraordinary, std::string citation = {});

  /// A dispersionless, possibly birefringent model, valid on [lo, hi].
  static IndexModel constant(double n_o, double n_e, double lo_um = 0.2, double hi_um = 3.0);

  /// Loads the JSON data-file format:
  /// {"material", "citation", "o": {coeffs, form, range_um}, "e": {...}}.
  static IndexModel from_json_file(const std::string& path);
  static IndexModel from_json_text(const std::string& text);

  double n_o(double lambda_um) const;
  /// Principal extraordinary index (theta = pi/2).
  double n_e_principal(double lambda_um) const;

  const std::string& material() const { return material_; }
  const std::string& citation() const { return citation_; }
  double range_lo() const { return lo_; }
  double range_hi() const { return hi_; }

 private:
  void check_range(double lambda_um) const;

  std::string material_;
  SellmeierTerm o_;
  SellmeierTerm e_;
  std::string citation_;
  double lo_ = 0.0;
  double hi_ = 0.0;
};

struct PhaseMatchGeometry {
  double pump_wavelength_um = 0.415;
  double degenerate_wavelength_um = 0.830;
  double cut_angle_rad = 0.0;          ///< optic axis to pump propagation
  double external_cone_angle_rad = 0.0;

  void validate() const;
};

/// Default BBO cut angle. A working default, not a measured value.
inline constexpr double kDefaultBboCutAngleDeg = 42.9;

struct TemporalParams {
  double d_fs_per_um = 0.0;       ///< 1/u_o - 1/u_e
  double lambda_fs_per_um = 0.0;  ///< 1/u_p - (1/2u_o + 1/2u_e)
};

/// Speed of light in micrometres per femtosecond.
inline constexpr double kSpeedOfLightUmPerFs = 0.299792458;

/// Central-difference step for dn/dlambda.
inline constexpr double kDispersionStepUm = 1e-3;

/// 1/n_e(theta)^2 = cos^2(theta)/n_o^2 + sin^2(theta)/n_e^2.
double extraordinary_index(const IndexModel& model, double lambda_um, double theta_rad);

/// tan(rho) = (n_e(theta)^2 / 2) sin(2 theta) (1/n_e^2 - 1/n_o^2), as a magnitude.
double walk_off_tangent(const IndexModel& model, double lambda_um, double theta_rad);

/// sin of the internal non-collinear angle for the geometry's external cone angle.
double q_over_kbar(const PhaseMatchGeometry& geometry, double n_bar);

/// Group index n - lambda dn/dlambda of a polarization with index function n(lambda).
template <typename IndexFn>
double group_index(IndexFn&& n, double lambda_um, double step_um = kDispersionStepUm) {
  const double dn = (n(lambda_um + step_um) - n(lambda_um - step_um)) / (2.0 * step_um);
  return n(lambda_um) - lambda_um * dn;
}

TemporalParams group_delay_params(const IndexModel& model, const PhaseMatchGeometry& geometry,
                                  double step_um = kDispersionStepUm);

/// Mean of n_o and n_e(theta) at the degenerate wavelength.
double mean_generated_index(const IndexModel& model, const PhaseMatchGeometry& geometry);

WalkOffSet build_walkoff_set(const IndexModel& model, const PhaseMatchGeometry& geometry);

/// Solves collinear degenerate type-II matching n_e(pump, theta) =
/// (n_o(deg) + n_e(deg, theta)) / 2 for theta by bisection on [lo, hi].
double phase_matching_angle(const IndexModel& model, double pump_wavelength_um, double lo_rad, double hi_rad,
                            double tol_rad = 1e-6);
double phase_matching_angle(const IndexModel& model, double pump_wavelength_um);

}  // namespace spdcfc
