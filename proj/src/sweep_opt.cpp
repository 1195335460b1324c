#include "spdcfc/sweep_opt.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <optional>
#include <sstream>

#include "spdcfc/errors.hpp"

namespace spdcfc {
namespace {

void require_grid(const std::vector<double>& g, const char* name) {
  if (g.empty()) throw DomainError(std::string(name) + " must not be empty");
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(std::isfinite(g[i]) && g[i] > 0.0)) throw DomainError(std::string(name) + " entries must be > 0");
    if (i > 0 && !(g[i] > g[i - 1])) throw DomainError(std::string(name) + " must be strictly increasing");
  }
}

// Runs body(i) for i in [0, n). Exceptions are captured per index and the
// lowest failing index is rethrown, so errors are deterministic too.
template <typename Body>
void for_each_index(std::size_t n, Execution exec, Body&& body) {
  if (exec == Execution::serial) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<long>(n);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double golden_section_max(const std::function<double(double)>& f, double a, double b, int& iterations) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  iterations = 0;
  while ((b - a) > kGoldenRelTol * std::max(std::abs(a), std::abs(b)) && iterations < 500) {
    ++iterations;
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

void SweepSpec::validate() const {
  require_grid(l_grid_um, "l_grid");
  require_grid(mu_values, "mu_values");
}

SweepResult efficiency_curve(const SweepSpec& spec, Execution exec) {
  spec.validate();
  const std::size_t n_mu = spec.mu_values.size();
  SweepResult out;
  out.rows.resize(spec.l_grid_um.size() * n_mu);

  for_each_index(out.rows.size(), exec, [&](std::size_t idx) {
    ExperimentConfig cfg = spec.fixed;
    cfg.crystal_length_um = spec.l_grid_um[idx / n_mu];
    cfg.inverse_magnification = spec.mu_values[idx % n_mu];
    try {
      cfg.validate();
      const EfficiencyResult r = eta_closed_form(cfg);
      out.rows[idx] = SweepRow{cfg.crystal_length_um, cfg.inverse_magnification, r.shape.xi, r.eta};
    } catch (const DomainError& e) {
      std::ostringstream os;
      os << "sweep row " << idx << " (L = " << cfg.crystal_length_um << " um, mu = " << cfg.inverse_magnification
         << "): " << e.what();
      throw DomainError(os.str());
    }
  });
  return out;
}

std::string_view to_string(DesignVariable v) {
  switch (v) {
    case DesignVariable::mu:
      return "mu";
    case DesignVariable::pump_waist:
      return "rp";
    case DesignVariable::xi:
      return "xi";
  }
  return "?";
}

DesignVariable parse_design_variable(std::string_view name) {
  if (name == "mu") return DesignVariable::mu;
  if (name == "rp" || name == "r_p") return DesignVariable::pump_waist;
  if (name == "xi") return DesignVariable::xi;
  throw DomainError("unknown design variable '" + std::string(name) + "' (expected mu, rp or xi)");
}

OptResult maximize_eta(const ExperimentConfig& cfg, DesignVariable variable, double lo, double hi) {
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo > 0.0 && hi > lo)) {
    throw DomainError("maximize_eta: bounds must satisfy 0 < lo < hi");
  }
  // Validate the fixed part with the variable at the lower bound.
  const auto apply = [&](double x) {
    ExperimentConfig c = cfg;
    switch (variable) {
      case DesignVariable::mu:
        c.inverse_magnification = x;
        break;
      case DesignVariable::pump_waist:
        c.pump_waist_um = x;
        break;
      case DesignVariable::xi:
        c.inverse_magnification = x * c.pump_waist_um / c.fiber_mode_radius_um;
        break;
    }
    return c;
  };
  apply(lo).validate();
  const auto eta_at = [&](double x) { return eta_closed_form(apply(x)).eta; };

  std::vector<double> grid(kPrescanPoints);
  std::vector<double> values(kPrescanPoints);
  for (int i = 0; i < kPrescanPoints; ++i) {
    grid[i] = (i == kPrescanPoints - 1) ? hi : lo + (hi - lo) * i / (kPrescanPoints - 1);
    values[i] = eta_at(grid[i]);
  }
  const int best = static_cast<int>(std::max_element(values.begin(), values.end()) - values.begin());
  const double a = grid[std::max(best - 1, 0)];
  const double b = grid[std::min(best + 1, kPrescanPoints - 1)];

  OptResult r;
  r.variable = variable;
  r.bracket = {a, b};
  const double x = golden_section_max(eta_at, a, b, r.iterations);
  const double fx = eta_at(x);
  if (fx >= values[best]) {
    r.argmax = x;
    r.eta_max = fx;
  } else {
    r.argmax = grid[best];
    r.eta_max = values[best];
  }
  const double tol = 10.0 * kGoldenRelTol * hi;
  r.at_boundary = (r.argmax - lo) <= tol || (hi - r.argmax) <= tol;
  return r;
}

std::vector<CeilingRow> ceiling_scan(double pump_waist_um, const WalkOffSet& walkoffs,
                                     const std::vector<double>& l_grid_um, Execution exec) {
  require_grid(l_grid_um, "l_grid");
  std::vector<CeilingRow> rows(l_grid_um.size());
  for_each_index(rows.size(), exec, [&](std::size_t i) {
    ExperimentConfig cfg{
        .crystal_length_um = l_grid_um[i],
        .pump_waist_um = pump_waist_um,
        .fiber_mode_radius_um = 1.0,
        .inverse_magnification = pump_waist_um,
        .walkoffs = walkoffs,
    };
    const OptResult r = maximize_eta(cfg, DesignVariable::xi, kCeilingXiLo, kCeilingXiHi);
    rows[i] = CeilingRow{l_grid_um[i], r.eta_max, r.argmax, r.at_boundary};
  });
  return rows;
}

}  // namespace spdcfc
