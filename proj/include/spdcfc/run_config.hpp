#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "spdcfc/core_model.hpp"
#include "spdcfc/dispersion.hpp"
#include "spdcfc/oracle.hpp"

namespace spdcfc {

inline constexpr int kRunConfigSchemaVersion = 1;

/// Malformed configuration document (bad JSON, unknown key, wrong type).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inputs for deriving walk-offs from an index model.
struct DispersionInputs {
  std::string sellmeier_path;
  double pump_wavelength_um = 0.415;
  double cut_angle_deg = kDefaultBboCutAngleDeg;
  double external_cone_angle_deg = 3.5;

  PhaseMatchGeometry geometry() const;
};

/// A possibly partial experiment description. Fields left empty must be
/// supplied by command-line flags before use.
struct RunConfig {
  std::optional<double> crystal_length_um;
  std::optional<double> pump_waist_um;
  std::optional<double> fiber_mode_radius_um;
  std::optional<double> inverse_magnification;
  std::optional<WalkOffSet> walkoffs;
  std::optional<DispersionInputs> dispersion;
  std::optional<QuadratureSpec> quadrature;

  /// Throws ConfigError on unknown keys or wrong types, DomainError when a
  /// present value violates its invariant. A top-level "result" member, as
  /// written by `eval --format json`, is accepted and ignored.
  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig load(const std::string& path);

  nlohmann::json to_json() const;
};

nlohmann::json to_json(const ExperimentConfig& cfg);

}  // namespace spdcfc
