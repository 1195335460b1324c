#include "spdcfc/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "spdcfc/errors.hpp"
#include "spdcfc/quadrature.hpp"

namespace spdcfc {
namespace {

// exp(-precision (u - center)^2 / 2)
struct GaussFactor {
  double center;
  double precision;
};

// Transverse integration window shared by every axis integral of a config.
struct Window {
  double half_width;
  int points;
};

// Trapezoid rule for the product of Gaussian factors along one axis. The
// window is centred on the precision-weighted centroid of the factors.
template <std::size_t K>
double axis_integral(const std::array<GaussFactor, K>& factors, const Window& win) {
  double p_sum = 0.0;
  double pc_sum = 0.0;
  for (const auto& f : factors) {
    p_sum += f.precision;
    pc_sum += f.precision * f.center;
  }
  const double centre = pc_sum / p_sum;
  const double h = 2.0 * win.half_width / (win.points - 1);
  double sum = 0.0;
  for (int i = 0; i < win.points; ++i) {
    const double u = centre - win.half_width + i * h;
    double expo = 0.0;
    for (const auto& f : factors) {
      const double d = u - f.center;
      expo += f.precision * d * d;
    }
    const double v = std::exp(-0.5 * expo);
    sum += (i == 0 || i == win.points - 1) ? 0.5 * v : v;
  }
  return sum * h;
}

struct AxisGeometry {
  double a;
  double b;
};

struct Integrands {
  double pair;  // N(tau), real for Gaussian profiles
  double single1;
  double single2;
};

class OverlapModel {
 public:
  OverlapModel(const ExperimentConfig& cfg, const DisplacementVectors& d, const QuadratureSpec& q) {
    const double mode = cfg.imaged_mode_radius_um();
    const double pump = cfg.pump_waist_um;
    mode_prec_ = 1.0 / (mode * mode);
    pump_prec_ = 1.0 / (pump * pump);
    // Unit-norm 2-D mode exp(-|u|^2/2W^2)/(sqrt(pi) W), split over two axes.
    mode_norm_axis_ = std::sqrt(std::numbers::inv_sqrtpi / mode);
    win_ = Window{q.extent_factor * std::max(mode, pump), q.n_trans};
    axes_ = {AxisGeometry{d.a_x, d.b_x}, AxisGeometry{d.a_y, d.b_y}};
  }

  Integrands at(double tau) const {
    Integrands out{1.0, 1.0, 1.0};
    const double n2 = mode_norm_axis_ * mode_norm_axis_;
    for (const auto& ax : axes_) {
      const double shift_b = ax.b * tau;
      const double shift_mid = 0.5 * (ax.a + ax.b) * tau;
      const double shift_diff = 0.5 * (ax.b - ax.a) * tau;
      out.pair *= n2 * axis_integral(std::array{GaussFactor{0.0, mode_prec_}, GaussFactor{shift_b, mode_prec_},
                                                GaussFactor{shift_mid, pump_prec_}},
                                     win_);
      out.single1 *= n2 * axis_integral(std::array{GaussFactor{-shift_b, 2.0 * mode_prec_},
                                                   GaussFactor{-shift_diff, 2.0 * pump_prec_}},
                                        win_);
      out.single2 *= n2 * axis_integral(std::array{GaussFactor{shift_b, 2.0 * mode_prec_},
                                                   GaussFactor{shift_mid, 2.0 * pump_prec_}},
                                        win_);
    }
    return out;
  }

 private:
  double mode_prec_ = 0.0;
  double pump_prec_ = 0.0;
  double mode_norm_axis_ = 0.0;
  Window win_{};
  std::array<AxisGeometry, 2> axes_{};
};

std::string describe_failure(double coarse, double fine, double err, double target) {
  std::ostringstream os;
  os.precision(9);
  os << "overlap quadrature did not converge: coarse eta = " << coarse << ", refined eta = " << fine
     << ", relative change " << err << " > target " << target;
  return os.str();
}

}  // namespace

void QuadratureSpec::validate() const {
  if (n_tau < 8) throw DomainError("QuadratureSpec: n_tau must be >= 8");
  if (n_trans < 16) throw DomainError("QuadratureSpec: n_trans must be >= 16");
  if (!(extent_factor >= 4.0) || !std::isfinite(extent_factor)) {
    throw DomainError("QuadratureSpec: extent_factor must be >= 4");
  }
  if (!(target_rel_err > 0.0)) throw DomainError("QuadratureSpec: target_rel_err must be > 0");
}

QuadratureSpec QuadratureSpec::refined() const {
  QuadratureSpec r = *this;
  r.n_tau *= 2;
  r.n_trans *= 2;
  return r;
}

double OracleTerms::eta() const { return p12 / std::sqrt(p1 * p2); }

DisplacementVectors DisplacementVectors::from(const WalkOffSet& w) {
  return DisplacementVectors{
      .a_x = 2.0 * w.m_p - w.m,
      .a_y = 0.0,
      .b_x = w.m,
      .b_y = 2.0 * w.q_over_k,
  };
}

std::complex<double> pair_overlap_density(const ExperimentConfig& cfg, double tau_um, const QuadratureSpec& q) {
  cfg.validate();
  q.validate();
  if (!(tau_um >= 0.0 && tau_um <= cfg.crystal_length_um)) {
    throw DomainError("pair_overlap_density: tau outside [0, L]");
  }
  return {OverlapModel(cfg, DisplacementVectors::from(cfg.walkoffs), q).at(tau_um).pair, 0.0};
}

OracleTerms overlap_terms(const ExperimentConfig& cfg, const QuadratureSpec& q, Execution exec) {
  cfg.validate();
  return overlap_terms(cfg, DisplacementVectors::from(cfg.walkoffs), q, exec);
}

OracleTerms overlap_terms(const ExperimentConfig& cfg, const DisplacementVectors& d, const QuadratureSpec& q,
                          Execution exec) {
  q.validate();
  if (!(cfg.crystal_length_um > 0.0 && cfg.pump_waist_um > 0.0 && cfg.imaged_mode_radius_um() > 0.0)) {
    throw DomainError("overlap_terms: lengths must be > 0");
  }
  const OverlapModel model(cfg, d, q);
  const QuadratureRule rule = gauss_legendre(q.n_tau, 0.0, cfg.crystal_length_um);
  const int n = q.n_tau;

  OracleTerms t;
  if (exec == Execution::serial) {
    for (int i = 0; i < n; ++i) {
      const Integrands v = model.at(rule.nodes[i]);
      const double w = rule.weights[i];
      t.p12 += w * v.pair * v.pair;
      t.p1 += w * v.single1;
      t.p2 += w * v.single2;
    }
    return t;
  }

  std::vector<Integrands> values(n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    values[i] = model.at(rule.nodes[i]);
  }
  // Fixed-order reduction keeps the result identical to the serial path.
  for (int i = 0; i < n; ++i) {
    const double w = rule.weights[i];
    t.p12 += w * values[i].pair * values[i].pair;
    t.p1 += w * values[i].single1;
    t.p2 += w * values[i].single2;
  }
  return t;
}

OracleResult eta_numeric(const ExperimentConfig& cfg, const QuadratureSpec& q, Execution exec) {
  q.validate();
  QuadratureSpec spec = q;
  OracleTerms coarse = overlap_terms(cfg, spec, exec);
  double err = 0.0;
  for (int refinement = 0; refinement < 2; ++refinement) {
    spec = spec.refined();
    const OracleTerms fine = overlap_terms(cfg, spec, exec);
    err = std::abs(fine.eta() - coarse.eta()) / fine.eta();
    if (err <= q.target_rel_err) {
      return OracleResult{.eta_numeric = fine.eta(), .est_rel_err = err, .pieces = fine};
    }
    if (refinement == 1) {
      throw ConvergenceError(describe_failure(coarse.eta(), fine.eta(), err, q.target_rel_err), coarse.eta(),
                             fine.eta());
    }
    coarse = fine;
  }
  return {};  // unreachable
}

}  // namespace spdcfc
