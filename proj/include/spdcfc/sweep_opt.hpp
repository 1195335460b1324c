#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spdcfc/core_model.hpp"
#include "spdcfc/execution.hpp"

namespace spdcfc {

struct SweepSpec {
  std::vector<double> l_grid_um;
  std::vector<double> mu_values;
  ExperimentConfig fixed;  ///< crystal length and mu are overridden per row

  void validate() const;
};

struct SweepRow {
  double crystal_length_um;
  double mu;
  double xi;
  double eta;
};

struct SweepResult {
  std::vector<SweepRow> rows;  ///< L-major, then mu
};

/// Illustrative mu values for efficiency-vs-length curves; 49 is the measured setup.
inline const std::vector<double> kDefaultMuValues{25.0, 35.0, 49.0, 60.0, 80.0};

SweepResult efficiency_curve(const SweepSpec& spec, Execution exec = Execution::parallel);

enum class DesignVariable { mu, pump_waist, xi };

std::string_view to_string(DesignVariable v);
DesignVariable parse_design_variable(std::string_view name);

struct OptResult {
  DesignVariable variable = DesignVariable::xi;
  double argmax = 0.0;
  double eta_max = 0.0;
  std::pair<double, double> bracket{0.0, 0.0};  ///< interval handed to golden section
  int iterations = 0;
  bool at_boundary = false;  ///< optimum sits on a search bound; interior optimum not established
};

inline constexpr int kPrescanPoints = 64;
inline constexpr double kGoldenRelTol = 1e-6;

/// Maximizes eta over one design variable on [lo, hi]: 64-point grid scan,
/// then golden-section refinement around the best cell.
OptResult maximize_eta(const ExperimentConfig& cfg, DesignVariable variable, double lo, double hi);

struct CeilingRow {
  double crystal_length_um;
  double eta_max;
  double xi_at_max;
  bool at_boundary;
};

inline constexpr double kCeilingXiLo = 0.1;
inline constexpr double kCeilingXiHi = 10.0;

/// Best achievable eta over xi in [0.1, 10] for each crystal length.
std::vector<CeilingRow> ceiling_scan(double pump_waist_um, const WalkOffSet& walkoffs,
                                     const std::vector<double>& l_grid_um, Execution exec = Execution::parallel);

}  // namespace spdcfc
