#pragma once

namespace spdcfc {

/// Walk-off and phase-matching geometry of the crystal, all dimensionless.
///
/// The pump walk-off (m_p) and the walk-off of the extraordinary
/// down-converted photon (m) are taken collinear, both in the principal
/// plane. The transverse phase-matching wave-vector enters orthogonally to
/// that plane, so it only ever appears squared.
struct WalkOffSet {
  double m_p = 0.0;       ///< |M_p|, pump walk-off tangent
  double m = 0.0;         ///< |M|, extraordinary-photon walk-off tangent
  double q_over_k = 0.0;  ///< |Q|/K̄

  /// Throws DomainError unless every field is finite and in [0, 1).
  void validate() const;
};

struct AlphaBeta {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double beta = 0.0;
};

/// Everything the closed-form efficiency needs. Lengths in micrometres.
/// Pump and fiber mode use the field-amplitude convention exp(-r^2 / 2 s^2).
struct ExperimentConfig {
  double crystal_length_um = 0.0;
  double pump_waist_um = 0.0;
  double fiber_mode_radius_um = 0.0;
  double inverse_magnification = 0.0;
  WalkOffSet walkoffs;

  void validate() const;
  /// Back-imaged fiber mode radius on the crystal plane, w * mu.
  double imaged_mode_radius_um() const { return fiber_mode_radius_um * inverse_magnification; }
};

struct ShapeParams {
  double xi = 0.0;
  double sigma_c = 0.0;
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  AlphaBeta alpha_beta;
};

struct EfficiencyResult {
  double eta = 0.0;
  ShapeParams shape;
};

struct ImagingGeometry {
  double inverse_magnification = 0.0;
  double image_distance_mm = 0.0;
};

AlphaBeta compute_alpha_beta(const WalkOffSet& w);

/// Gaussian field radius of a fiber mode from its mode-field diameter: MFD / (2 sqrt 2).
double mode_field_radius(double mfd_um);

/// Field-convention pump radius from a quoted beam diameter: d / (2 sqrt 2).
double pump_waist_from_diameter(double diameter_um);

/// Thin-lens imaging of the crystal output face onto the fiber plane.
/// Requires object_distance_mm > focal_length_mm > 0.
ImagingGeometry magnification(double focal_length_mm, double object_distance_mm);

ShapeParams shape_params(const ExperimentConfig& cfg);

/// Coupling efficiency
///   eta = 4 (1+xi^2)/(2+xi^2)^2 * erf(s_c)/s_c * sqrt(s_1/erf(s_1) * s_2/erf(s_2)).
EfficiencyResult eta_closed_form(const ShapeParams& sp);

/// Convenience: shape_params followed by eta_closed_form.
EfficiencyResult eta_closed_form(const ExperimentConfig& cfg);

/// Raw coincidence efficiency seen behind lossy detectors and filters.
double effective_to_raw(double eta_fc, double eta_det, double t_filter);

/// Inverse of effective_to_raw: the fiber-coupling efficiency implied by a raw measurement.
double raw_to_effective(double eta_raw, double eta_det, double t_filter);

}  // namespace spdcfc
