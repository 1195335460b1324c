#include "spdcfc/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "spdcfc/errors.hpp"

namespace spdcfc {
namespace {

constexpr int kValidationSamples = 64;

std::string describe(double lambda_um) {
  std::ostringstream os;
  os << lambda_um << " um";
  return os.str();
}

SellmeierTerm parse_term(const nlohmann::json& j, const char* pol) {
  if (!j.contains(pol)) throw DomainError(std::string("Sellmeier data: missing polarization '") + pol + "'");
  const auto& t = j.at(pol);
  SellmeierTerm term;
  term.form = t.value("form", std::string("sellmeier-1"));
  term.coeffs = t.at("coeffs").get<std::vector<double>>();
  const auto range = t.at("range_um").get<std::vector<double>>();
  if (range.size() != 2) throw DomainError("Sellmeier data: range_um must have two entries");
  term.range_um = {range[0], range[1]};
  return term;
}

}  // namespace

double SellmeierTerm::index(double lambda_um) const {
  const double l2 = lambda_um * lambda_um;
  const double n2 = coeffs[0] + coeffs[1] / (l2 - coeffs[2]) - coeffs[3] * l2;
  return std::sqrt(n2);
}

IndexModel::IndexModel(std::string material, SellmeierTerm ordinary, SellmeierTerm extraordinary,
                       std::string citation)
    : material_(std::move(material)),
      o_(std::move(ordinary)),
      e_(std::move(extraordinary)),
      citation_(std::move(citation)) {
  for (const SellmeierTerm* t : {&o_, &e_}) {
    if (t->form != "sellmeier-1") throw DomainError("unsupported Sellmeier form '" + t->form + "'");
    if (t->coeffs.size() != 4) throw DomainError("sellmeier-1 needs exactly 4 coefficients");
    if (!(t->range_um[0] > 0.0 && t->range_um[1] > t->range_um[0])) {
      throw DomainError("Sellmeier validity range must satisfy 0 < lo < hi");
    }
  }
  lo_ = std::max(o_.range_um[0], e_.range_um[0]);
  hi_ = std::min(o_.range_um[1], e_.range_um[1]);
  if (!(hi_ > lo_)) throw DomainError("ordinary and extraordinary validity ranges do not overlap");

  for (int i = 0; i <= kValidationSamples; ++i) {
    const double lambda = lo_ + (hi_ - lo_) * i / kValidationSamples;
    const double no = o_.index(lambda);
    const double ne = e_.index(lambda);
    if (!(std::isfinite(no) && std::isfinite(ne) && no > 1.0 && ne > 1.0)) {
      throw DomainError("index model is not real and > 1 at " + describe(lambda));
    }
    if (no < ne) throw DomainError("index model is not negative uniaxial at " + describe(lambda));
  }
}

IndexModel IndexModel::constant(double n_o, double n_e, double lo_um, double hi_um) {
  SellmeierTerm o{{n_o * n_o, 0.0, 0.0, 0.0}, "sellmeier-1", {lo_um, hi_um}};
  SellmeierTerm e{{n_e * n_e, 0.0, 0.0, 0.0}, "sellmeier-1", {lo_um, hi_um}};
  return IndexModel("constant", std::move(o), std::move(e));
}

IndexModel IndexModel::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    return IndexModel(j.value("material", std::string("unknown")), parse_term(j, "o"), parse_term(j, "e"),
                      j.value("citation", std::string()));
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed Sellmeier data: ") + e.what());
  }
}

IndexModel IndexModel::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open Sellmeier data file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

void IndexModel::check_range(double lambda_um) const {
  if (!(lambda_um >= lo_ && lambda_um <= hi_)) {
    std::ostringstream os;
    os << "wavelength " << lambda_um << " um outside the " << material_ << " validity range [" << lo_ << ", " << hi_
       << "] um";
    throw DomainError(os.str());
  }
}

double IndexModel::n_o(double lambda_um) const {
  check_range(lambda_um);
  return o_.index(lambda_um);
}

double IndexModel::n_e_principal(double lambda_um) const {
  check_range(lambda_um);
  return e_.index(lambda_um);
}

void PhaseMatchGeometry::validate() const {
  if (!(pump_wavelength_um > 0.0 && degenerate_wavelength_um > 0.0)) {
    throw DomainError("wavelengths must be > 0");
  }
  if (!(cut_angle_rad > 0.0 && cut_angle_rad < std::numbers::pi / 2)) {
    throw DomainError("cut angle must lie in (0, pi/2)");
  }
  if (!std::isfinite(external_cone_angle_rad)) throw DomainError("external cone angle must be finite");
}

double extraordinary_index(const IndexModel& model, double lambda_um, double theta_rad) {
  const double no = model.n_o(lambda_um);
  const double ne = model.n_e_principal(lambda_um);
  const double c = std::cos(theta_rad);
  const double s = std::sin(theta_rad);
  return 1.0 / std::sqrt(c * c / (no * no) + s * s / (ne * ne));
}

double walk_off_tangent(const IndexModel& model, double lambda_um, double theta_rad) {
  const double no = model.n_o(lambda_um);
  const double ne = model.n_e_principal(lambda_um);
  const double n = extraordinary_index(model, lambda_um, theta_rad);
  return std::abs(0.5 * n * n * std::sin(2.0 * theta_rad) * (1.0 / (ne * ne) - 1.0 / (no * no)));
}

double q_over_kbar(const PhaseMatchGeometry& geometry, double n_bar) {
  if (!(n_bar >= 1.0)) throw DomainError("q_over_kbar: mean index must be >= 1");
  const double s = std::sin(geometry.external_cone_angle_rad) / n_bar;
  if (!(std::abs(s) < 1.0)) throw DomainError("q_over_kbar: no internal angle for this external angle");
  return std::abs(std::sin(std::asin(s)));
}

TemporalParams group_delay_params(const IndexModel& model, const PhaseMatchGeometry& geometry, double step_um) {
  geometry.validate();
  const double theta = geometry.cut_angle_rad;
  const auto n_o = [&](double l) { return model.n_o(l); };
  const auto n_e = [&](double l) { return extraordinary_index(model, l, theta); };

  const double inv_u_o = group_index(n_o, geometry.degenerate_wavelength_um, step_um) / kSpeedOfLightUmPerFs;
  const double inv_u_e = group_index(n_e, geometry.degenerate_wavelength_um, step_um) / kSpeedOfLightUmPerFs;
  const double inv_u_p = group_index(n_e, geometry.pump_wavelength_um, step_um) / kSpeedOfLightUmPerFs;
  return TemporalParams{
      .d_fs_per_um = inv_u_o - inv_u_e,
      .lambda_fs_per_um = inv_u_p - 0.5 * (inv_u_o + inv_u_e),
  };
}

double mean_generated_index(const IndexModel& model, const PhaseMatchGeometry& geometry) {
  const double l = geometry.degenerate_wavelength_um;
  return 0.5 * (model.n_o(l) + extraordinary_index(model, l, geometry.cut_angle_rad));
}

WalkOffSet build_walkoff_set(const IndexModel& model, const PhaseMatchGeometry& geometry) {
  geometry.validate();
  WalkOffSet w{
      .m_p = walk_off_tangent(model, geometry.pump_wavelength_um, geometry.cut_angle_rad),
      .m = walk_off_tangent(model, geometry.degenerate_wavelength_um, geometry.cut_angle_rad),
      .q_over_k = q_over_kbar(geometry, mean_generated_index(model, geometry)),
  };
  w.validate();
  return w;
}

double phase_matching_angle(const IndexModel& model, double pump_wavelength_um, double lo_rad, double hi_rad,
                            double tol_rad) {
  const double deg = 2.0 * pump_wavelength_um;
  const auto mismatch = [&](double theta) {
    return extraordinary_index(model, pump_wavelength_um, theta) -
           0.5 * (model.n_o(deg) + extraordinary_index(model, deg, theta));
  };
  double f_lo = mismatch(lo_rad);
  const double f_hi = mismatch(hi_rad);
  if (f_lo * f_hi > 0.0) throw DomainError("phase matching angle is not bracketed by the search interval");
  while (hi_rad - lo_rad > tol_rad) {
    const double mid = 0.5 * (lo_rad + hi_rad);
    const double f_mid = mismatch(mid);
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo_rad = mid;
      f_lo = f_mid;
    } else {
      hi_rad = mid;
    }
  }
  return 0.5 * (lo_rad + hi_rad);
}

double phase_matching_angle(const IndexModel& model, double pump_wavelength_um) {
  constexpr double deg = std::numbers::pi / 180.0;
  return phase_matching_angle(model, pump_wavelength_um, 30.0 * deg, 60.0 * deg);
}

}  // namespace spdcfc
