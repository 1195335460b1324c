#pragma once

#include <complex>

#include "spdcfc/core_model.hpp"
#include "spdcfc/execution.hpp"

namespace spdcfc {

/// Grid controls for the numerical overlap integrals.
struct QuadratureSpec {
  int n_tau = 64;              ///< Gauss-Legendre nodes along the crystal
  int n_trans = 96;            ///< trapezoid points per transverse axis
  double extent_factor = 6.0;  ///< transverse half-width in units of max(w mu, r_p)
  double target_rel_err = 1e-5;

  void validate() const;
  QuadratureSpec refined() const;
};

/// Unnormalized pair and singles probabilities.
struct OracleTerms {
  double p12 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;

  double eta() const;
};

struct OracleResult {
  double eta_numeric = 0.0;
  double est_rel_err = 0.0;
  OracleTerms pieces;
};

/// Transverse displacement vectors of the reduced pair amplitude, per unit
/// of the generation coordinate tau. x is the walk-off plane; the
/// phase-matching wave-vector Q lies along y.
struct DisplacementVectors {
  double a_x = 0.0;  ///< pair centroid drift vs pump: 2 M_p - M
  double a_y = 0.0;
  double b_x = 0.0;  ///< separation between the two photons: M + 2Q/K̄
  double b_y = 0.0;

  static DisplacementVectors from(const WalkOffSet& w);
};

/// N(tau) = ∫ d²u ψ*(u) ψ*(u - B tau) E_p(u - (A+B) tau / 2), with ψ the
/// unit-norm fiber mode imaged back onto the crystal (radius w mu).
std::complex<double> pair_overlap_density(const ExperimentConfig& cfg, double tau_um,
                                          const QuadratureSpec& q = QuadratureSpec{});

/// One quadrature pass at the given resolution, no refinement.
OracleTerms overlap_terms(const ExperimentConfig& cfg, const QuadratureSpec& q,
                          Execution exec = Execution::parallel);

/// As above with explicit displacement vectors instead of those implied by
/// cfg.walkoffs (which is then ignored). Used for symmetry checks.
OracleTerms overlap_terms(const ExperimentConfig& cfg, const DisplacementVectors& d, const QuadratureSpec& q,
                          Execution exec = Execution::parallel);

/// eta = P12 / sqrt(P1 P2) by direct quadrature, refined (n doubled) until
/// two successive passes agree to target_rel_err; at most two refinements.
/// Throws ConvergenceError otherwise.
OracleResult eta_numeric(const ExperimentConfig& cfg, const QuadratureSpec& q = QuadratureSpec{},
                         Execution exec = Execution::parallel);

}  // namespace spdcfc
