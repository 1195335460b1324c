#include "spdcfc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <locale>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string_view>

#include <CLI11.hpp>
#include <json.hpp>

#include "spdcfc/core_model.hpp"
#include "spdcfc/dispersion.hpp"
#include "spdcfc/errors.hpp"
#include "spdcfc/oracle.hpp"
#include "spdcfc/run_config.hpp"
#include "spdcfc/sweep_opt.hpp"

namespace spdcfc::cli {
namespace {

using nlohmann::json;

constexpr double kUmPerMm = 1000.0;
constexpr double kDeg = std::numbers::pi / 180.0;

// Fixed 9 significant digits, '.' decimal separator.
std::string num(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(9) << v;
  return os.str();
}

std::pair<double, double> parse_pair(const std::string& text, const char* flag) {
  std::istringstream is(text);
  is.imbue(std::locale::classic());
  double a = 0.0;
  double b = 0.0;
  char sep = 0;
  if (!(is >> a >> sep >> b) || sep != ':' || !is.eof()) {
    throw UsageError(std::string(flag) + " expects lo:hi, got '" + text + "'");
  }
  return {a, b};
}

std::vector<double> parse_range(const std::string& text, const char* flag) {
  std::istringstream is(text);
  is.imbue(std::locale::classic());
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.0;
  char s1 = 0;
  char s2 = 0;
  if (!(is >> lo >> s1 >> hi >> s2 >> step) || s1 != ':' || s2 != ':' || !is.eof()) {
    throw UsageError(std::string(flag) + " expects lo:hi:step, got '" + text + "'");
  }
  if (!(lo > 0.0 && hi >= lo && step > 0.0 && std::isfinite(hi))) {
    throw UsageError(std::string(flag) + " must satisfy 0 < lo <= hi and step > 0");
  }
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> grid;
  grid.reserve(count);
  for (long k = 0; k < count; ++k) grid.push_back(lo + k * step);
  return grid;
}

// Flags shared by every subcommand that needs an experiment description.
struct ExperimentFlags {
  std::string config;
  double l_mm = 0.0, rp_um = 0.0, rp_diam_um = 0.0, w_um = 0.0, mfd_um = 0.0, mu = 0.0, f_mm = 0.0, dbl_mm = 0.0;
  double mp = 0.0, m = 0.0, qk = 0.0;
  std::string sellmeier;
  double pump_um = 0.0, cut_deg = 0.0, cone_deg = 0.0;
  bool solve_cut = false;
  std::string format = "text";

  CLI::Option *o_l = nullptr, *o_rp = nullptr, *o_rpd = nullptr, *o_w = nullptr, *o_mfd = nullptr,
              *o_mu = nullptr, *o_f = nullptr, *o_dbl = nullptr, *o_mp = nullptr, *o_m = nullptr, *o_qk = nullptr,
              *o_sell = nullptr, *o_pump = nullptr, *o_cut = nullptr, *o_cone = nullptr, *o_config = nullptr;

  // with_mu = false leaves --mu free for a subcommand that takes a list.
  void attach(CLI::App& app, bool with_mu = true) {
    o_config = app.add_option("--config", config, "JSON run configuration (flags override its values)");
    o_l = app.add_option("--L-mm", l_mm, "crystal length [mm]");
    o_rp = app.add_option("--rp-um", rp_um, "pump waist r_p, field 1/e radius [um]");
    o_rpd = app.add_option("--rp-diam-um", rp_diam_um, "pump beam diameter [um], converted as d/(2 sqrt 2)");
    o_w = app.add_option("--w-um", w_um, "fiber mode field radius [um]");
    o_mfd = app.add_option("--mfd-um", mfd_um, "fiber mode-field diameter [um]");
    if (with_mu) o_mu = app.add_option("--mu", mu, "inverse magnification");
    o_f = app.add_option("--f-mm", f_mm, "coupling lens focal length [mm]");
    o_dbl = app.add_option("--dbl-mm", dbl_mm, "crystal-to-lens distance [mm]");
    o_mp = app.add_option("--Mp", mp, "pump walk-off |M_p|");
    o_m = app.add_option("--M", m, "extraordinary walk-off |M|");
    o_qk = app.add_option("--QK", qk, "|Q|/K-bar");
    o_sell = app.add_option("--sellmeier", sellmeier, "Sellmeier JSON data file (default: $SPDCFC_SELLMEIER_PATH)");
    o_pump = app.add_option("--pump-um", pump_um, "pump wavelength [um] (default 0.415)");
    o_cut = app.add_option("--cut-deg", cut_deg, "crystal cut angle [deg] (default 42.9)");
    o_cone = app.add_option("--cone-deg", cone_deg, "external cone angle [deg] (default 3.5)");
    app.add_flag("--solve-cut", solve_cut, "solve collinear type-II matching for the cut angle");
    o_rp->excludes(o_rpd);
    o_w->excludes(o_mfd);
    if (o_mu != nullptr) {
      o_mu->excludes(o_f);
      o_mu->excludes(o_dbl);
    }
    o_cut->excludes("--solve-cut");
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json", "csv"}));
  }

  RunConfig resolve() const {
    RunConfig rc = o_config->count() ? RunConfig::load(config) : RunConfig{};
    if (o_l->count()) rc.crystal_length_um = l_mm * kUmPerMm;
    if (o_rp->count()) rc.pump_waist_um = rp_um;
    if (o_rpd->count()) rc.pump_waist_um = pump_waist_from_diameter(rp_diam_um);
    if (o_w->count()) rc.fiber_mode_radius_um = w_um;
    if (o_mfd->count()) rc.fiber_mode_radius_um = mode_field_radius(mfd_um);
    if (o_mu != nullptr && o_mu->count()) rc.inverse_magnification = mu;
    if (o_f->count() || o_dbl->count()) {
      if (!(o_f->count() && o_dbl->count())) throw UsageError("--f-mm and --dbl-mm must be given together");
      rc.inverse_magnification = magnification(f_mm, dbl_mm).inverse_magnification;
    }

    const auto n_explicit = o_mp->count() + o_m->count() + o_qk->count();
    if (n_explicit > 0) {
      if (n_explicit != 3) throw UsageError("--Mp, --M and --QK must be given together");
      rc.walkoffs = WalkOffSet{mp, m, qk};
      rc.walkoffs->validate();
    }

    const bool dispersion_flags = o_sell->count() || o_pump->count() || o_cut->count() || o_cone->count() || solve_cut;
    if (dispersion_flags || (!rc.walkoffs && !rc.dispersion)) {
      DispersionInputs d = rc.dispersion.value_or(DispersionInputs{});
      if (o_sell->count()) d.sellmeier_path = sellmeier;
      if (o_pump->count()) d.pump_wavelength_um = pump_um;
      if (o_cut->count()) d.cut_angle_deg = cut_deg;
      if (o_cone->count()) d.external_cone_angle_deg = cone_deg;
      rc.dispersion = d;
    }
    if (rc.dispersion && rc.dispersion->sellmeier_path.empty()) {
      if (const char* env = std::getenv(kSellmeierEnv); env != nullptr && *env != '\0') {
        rc.dispersion->sellmeier_path = env;
      }
    }
    // Explicit walk-offs take precedence unless dispersion flags were given.
    if (dispersion_flags && n_explicit == 0) rc.walkoffs.reset();
    return rc;
  }
};

struct Derived {
  WalkOffSet walkoffs;
  std::optional<TemporalParams> temporal;
  std::optional<double> cut_angle_deg;
  std::string material;
};

Derived derive_walkoffs(const RunConfig& rc, bool solve_cut) {
  // Explicit walk-offs win over dispersion inputs.
  if (rc.walkoffs) return Derived{*rc.walkoffs, std::nullopt, std::nullopt, {}};
  if (!rc.dispersion || rc.dispersion->sellmeier_path.empty()) {
    throw UsageError("walk-offs required: give --Mp/--M/--QK or a Sellmeier file (--sellmeier or $" +
                     std::string(kSellmeierEnv) + ")");
  }
  DispersionInputs d = *rc.dispersion;
  const IndexModel model = IndexModel::from_json_file(d.sellmeier_path);
  if (solve_cut) d.cut_angle_deg = phase_matching_angle(model, d.pump_wavelength_um) / kDeg;
  const PhaseMatchGeometry g = d.geometry();
  return Derived{build_walkoff_set(model, g), group_delay_params(model, g), d.cut_angle_deg, model.material()};
}

double need(const std::optional<double>& v, const char* what) {
  if (!v) throw UsageError(std::string("missing ") + what);
  return *v;
}

ExperimentConfig build_config(const RunConfig& rc, const WalkOffSet& w, bool need_length, bool need_rp,
                              bool need_mu) {
  ExperimentConfig cfg;
  cfg.crystal_length_um = need_length ? need(rc.crystal_length_um, "crystal length (--L-mm)") : 1.0;
  cfg.pump_waist_um = need_rp ? need(rc.pump_waist_um, "pump waist (--rp-um)") : rc.pump_waist_um.value_or(1.0);
  cfg.fiber_mode_radius_um = need(rc.fiber_mode_radius_um, "fiber mode radius (--w-um or --mfd-um)");
  cfg.inverse_magnification =
      need_mu ? need(rc.inverse_magnification, "inverse magnification (--mu or --f-mm/--dbl-mm)")
              : rc.inverse_magnification.value_or(1.0);
  cfg.walkoffs = w;
  return cfg;
}

json shape_json(const EfficiencyResult& r) {
  const auto& s = r.shape;
  return {{"eta", r.eta},
          {"xi", s.xi},
          {"sigma_c", s.sigma_c},
          {"sigma1", s.sigma1},
          {"sigma2", s.sigma2},
          {"alpha1", s.alpha_beta.alpha1},
          {"alpha2", s.alpha_beta.alpha2},
          {"beta", s.alpha_beta.beta}};
}

void print_kv(std::ostream& out, std::string_view key, double v) { out << key << " = " << num(v) << '\n'; }

int cmd_eval(const ExperimentFlags& f, std::ostream& out) {
  const RunConfig rc = f.resolve();
  const Derived d = derive_walkoffs(rc, f.solve_cut);
  const ExperimentConfig cfg = build_config(rc, d.walkoffs, true, true, true);
  cfg.validate();
  const EfficiencyResult r = eta_closed_form(cfg);
  if (f.format == "json") {
    json doc = to_json(cfg);
    doc["result"] = shape_json(r);
    out << doc.dump(2) << '\n';
    return kExitOk;
  }
  print_kv(out, "eta", r.eta);
  print_kv(out, "xi", r.shape.xi);
  print_kv(out, "sigma_c", r.shape.sigma_c);
  print_kv(out, "sigma1", r.shape.sigma1);
  print_kv(out, "sigma2", r.shape.sigma2);
  print_kv(out, "alpha1", r.shape.alpha_beta.alpha1);
  print_kv(out, "alpha2", r.shape.alpha_beta.alpha2);
  print_kv(out, "beta", r.shape.alpha_beta.beta);
  return kExitOk;
}

int cmd_sweep(const ExperimentFlags& f, const std::string& range, const std::vector<double>& mus,
              std::ostream& out) {
  const RunConfig rc = f.resolve();
  SweepSpec spec;
  spec.l_grid_um = parse_range(range, "--L-range");
  for (double& l : spec.l_grid_um) l *= kUmPerMm;
  spec.mu_values = mus.empty() ? kDefaultMuValues : mus;
  if (!std::is_sorted(spec.mu_values.begin(), spec.mu_values.end()) ||
      std::adjacent_find(spec.mu_values.begin(), spec.mu_values.end()) != spec.mu_values.end() ||
      spec.mu_values.front() <= 0.0) {
    throw UsageError("--mu values must be positive and strictly increasing");
  }
  const Derived d = derive_walkoffs(rc, f.solve_cut);
  spec.fixed = build_config(rc, d.walkoffs, false, true, false);
  const SweepResult res = efficiency_curve(spec);

  if (f.format == "json") {
    json rows = json::array();
    for (const auto& r : res.rows) rows.push_back({r.crystal_length_um / kUmPerMm, r.mu, r.xi, r.eta});
    out << json{{"columns", {"L_mm", "mu", "xi", "eta"}}, {"rows", rows}}.dump(2) << '\n';
    return kExitOk;
  }
  out << "L_mm,mu,xi,eta\n";
  for (const auto& r : res.rows) {
    out << num(r.crystal_length_um / kUmPerMm) << ',' << num(r.mu) << ',' << num(r.xi) << ',' << num(r.eta) << '\n';
  }
  return kExitOk;
}

int cmd_optimize(const ExperimentFlags& f, const std::string& var_name, const std::string& bounds_text,
                 std::ostream& out) {
  DesignVariable var;
  try {
    var = parse_design_variable(var_name);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  const auto [lo, hi] = parse_pair(bounds_text, "--bounds");
  if (!(lo > 0.0 && hi > lo && std::isfinite(hi))) {
    throw UsageError("--bounds must satisfy 0 < lo < hi (" + std::string(to_string(var)) + " must be > 0)");
  }
  const RunConfig rc = f.resolve();
  const Derived d = derive_walkoffs(rc, f.solve_cut);
  const ExperimentConfig cfg =
      build_config(rc, d.walkoffs, true, var != DesignVariable::pump_waist, var == DesignVariable::pump_waist);
  const OptResult r = maximize_eta(cfg, var, lo, hi);

  if (f.format == "json") {
    out << json{{"variable", to_string(r.variable)},
                {"argmax", r.argmax},
                {"eta_max", r.eta_max},
                {"bracket", {r.bracket.first, r.bracket.second}},
                {"iterations", r.iterations},
                {"at_boundary", r.at_boundary}}
               .dump(2)
        << '\n';
    return kExitOk;
  }
  out << "variable = " << to_string(r.variable) << '\n';
  print_kv(out, "argmax", r.argmax);
  print_kv(out, "eta_max", r.eta_max);
  out << "bracket = " << num(r.bracket.first) << ':' << num(r.bracket.second) << '\n';
  out << "iterations = " << r.iterations << '\n';
  out << "at_boundary = " << (r.at_boundary ? "true" : "false") << '\n';
  return kExitOk;
}

struct OracleFlags {
  int n_tau = 0;
  int n_trans = 0;
  double extent = 0.0;
  double target = 0.0;
  CLI::Option *o_tau = nullptr, *o_trans = nullptr, *o_extent = nullptr, *o_target = nullptr;

  void attach(CLI::App& app) {
    o_tau = app.add_option("--n-tau", n_tau, "Gauss-Legendre nodes along the crystal (default 64)");
    o_trans = app.add_option("--n-trans", n_trans, "trapezoid points per transverse axis (default 96)");
    o_extent = app.add_option("--extent", extent, "transverse half-width factor (default 6)");
    o_target = app.add_option("--target", target, "target relative error of refinement (default 1e-5)");
  }

  QuadratureSpec apply(QuadratureSpec q) const {
    if (o_tau->count()) q.n_tau = n_tau;
    if (o_trans->count()) q.n_trans = n_trans;
    if (o_extent->count()) q.extent_factor = extent;
    if (o_target->count()) q.target_rel_err = target;
    return q;
  }
};

inline constexpr double kOracleAgreementFloor = 1e-4;

int cmd_oracle(const ExperimentFlags& f, const OracleFlags& qf, std::ostream& out, std::ostream& err) {
  const RunConfig rc = f.resolve();
  const Derived d = derive_walkoffs(rc, f.solve_cut);
  const ExperimentConfig cfg = build_config(rc, d.walkoffs, true, true, true);
  cfg.validate();
  const QuadratureSpec q = qf.apply(rc.quadrature.value_or(QuadratureSpec{}));
  const double closed = eta_closed_form(cfg).eta;

  OracleResult r;
  try {
    r = eta_numeric(cfg, q);
  } catch (const ConvergenceError& e) {
    print_kv(out, "eta_closed", closed);
    print_kv(out, "eta_numeric_coarse", e.coarse());
    print_kv(out, "eta_numeric_fine", e.fine());
    out << "status = not-converged\n";
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  const double dev = std::abs(r.eta_numeric - closed) / closed;
  const double allowed = std::max(kOracleAgreementFloor, 3.0 * r.est_rel_err);
  const bool ok = dev <= allowed;
  if (f.format == "json") {
    out << json{{"eta_closed", closed},
                {"eta_numeric", r.eta_numeric},
                {"rel_deviation", dev},
                {"est_rel_err", r.est_rel_err},
                {"allowed", allowed},
                {"agree", ok}}
               .dump(2)
        << '\n';
  } else {
    print_kv(out, "eta_closed", closed);
    print_kv(out, "eta_numeric", r.eta_numeric);
    print_kv(out, "rel_deviation", dev);
    print_kv(out, "est_rel_err", r.est_rel_err);
    out << "status = " << (ok ? "agree" : "DISAGREE") << '\n';
  }
  if (!ok) {
    err << "error: closed form and quadrature disagree (" << num(dev) << " > " << num(allowed) << ")\n";
    return kExitDomain;
  }
  return kExitOk;
}

int cmd_params(const ExperimentFlags& f, std::ostream& out) {
  const RunConfig rc = f.resolve();
  const Derived d = derive_walkoffs(rc, f.solve_cut);
  const AlphaBeta ab = compute_alpha_beta(d.walkoffs);
  if (f.format == "json") {
    json doc{{"walkoffs", {{"m_p", d.walkoffs.m_p}, {"m", d.walkoffs.m}, {"q_over_k", d.walkoffs.q_over_k}}},
             {"alpha1", ab.alpha1},
             {"alpha2", ab.alpha2},
             {"beta", ab.beta}};
    if (d.temporal) {
      doc["D_fs_per_um"] = d.temporal->d_fs_per_um;
      doc["Lambda_fs_per_um"] = d.temporal->lambda_fs_per_um;
      doc["cut_angle_deg"] = *d.cut_angle_deg;
      doc["material"] = d.material;
    }
    out << doc.dump(2) << '\n';
    return kExitOk;
  }
  if (d.temporal) {
    out << "material = " << d.material << '\n';
    print_kv(out, "cut_angle_deg", *d.cut_angle_deg);
  }
  print_kv(out, "m_p", d.walkoffs.m_p);
  print_kv(out, "m", d.walkoffs.m);
  print_kv(out, "q_over_k", d.walkoffs.q_over_k);
  print_kv(out, "alpha1", ab.alpha1);
  print_kv(out, "alpha2", ab.alpha2);
  print_kv(out, "beta", ab.beta);
  if (d.temporal) {
    print_kv(out, "D_fs_per_um", d.temporal->d_fs_per_um);
    print_kv(out, "Lambda_fs_per_um", d.temporal->lambda_fs_per_um);
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fiber-coupling efficiency of SPDC photon pairs", "spdcfc"};
  app.require_subcommand(1);

  ExperimentFlags eval_f, sweep_f, opt_f, oracle_f, params_f;
  auto* eval = app.add_subcommand("eval", "closed-form coupling efficiency of one configuration");
  eval_f.attach(*eval);

  auto* sweep = app.add_subcommand("sweep", "efficiency vs crystal length for a list of mu values (CSV)");
  sweep_f.attach(*sweep, false);
  std::string range;
  std::vector<double> mus;
  sweep->add_option("--L-range", range, "crystal lengths lo:hi:step [mm]")->required();
  sweep->add_option("--mu", mus, "inverse magnifications, comma separated (default 25,35,49,60,80)")
      ->delimiter(',')
      ->excludes(sweep_f.o_f);

  auto* optimize = app.add_subcommand("optimize", "maximize eta over mu, rp or xi");
  opt_f.attach(*optimize);
  std::string var_name;
  std::string bounds;
  optimize->add_option("--var", var_name, "design variable: mu, rp or xi")->required();
  optimize->add_option("--bounds", bounds, "search interval lo:hi")->required();

  auto* oracle = app.add_subcommand("oracle", "compare the closed form against direct overlap quadrature");
  oracle_f.attach(*oracle);
  OracleFlags quad;
  quad.attach(*oracle);

  auto* params = app.add_subcommand("params", "walk-off set, alpha/beta and temporal parameters");
  params_f.attach(*params);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      if (auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front()) {
        out << sub->help();
      }
      return kExitOk;
    }
    err << "usage error: " << e.what() << "\n" << (app.get_subcommands().empty() ? app.help() : "");
    return kExitUsage;
  }

  try {
    if (eval->parsed()) return cmd_eval(eval_f, out);
    if (sweep->parsed()) return cmd_sweep(sweep_f, range, mus, out);
    if (optimize->parsed()) return cmd_optimize(opt_f, var_name, bounds, out);
    if (oracle->parsed()) return cmd_oracle(oracle_f, quad, out, err);
    if (params->parsed()) return cmd_params(params_f, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitUsage;
}

}  // namespace spdcfc::cli
