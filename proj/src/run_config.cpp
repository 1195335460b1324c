#include "spdcfc/run_config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <sstream>
#include <string_view>

#include "spdcfc/errors.hpp"

namespace spdcfc {
namespace {

using nlohmann::json;

constexpr double kDeg = std::numbers::pi / 180.0;

void reject_unknown(const json& j, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw ConfigError(std::string(where) + ": expected a JSON object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
  }
}

double number(const json& j, const char* key, std::string_view where) {
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(std::string(where) + "." + key + ": expected a number");
  return v.get<double>();
}

std::optional<double> maybe_number(const json& j, const char* key, std::string_view where) {
  if (!j.contains(key)) return std::nullopt;
  return number(j, key, where);
}

int integer(const json& j, const char* key, std::string_view where) {
  const auto& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(std::string(where) + "." + key + ": expected an integer");
  return v.get<int>();
}

}  // namespace

PhaseMatchGeometry DispersionInputs::geometry() const {
  return PhaseMatchGeometry{
      .pump_wavelength_um = pump_wavelength_um,
      .degenerate_wavelength_um = 2.0 * pump_wavelength_um,
      .cut_angle_rad = cut_angle_deg * kDeg,
      .external_cone_angle_rad = external_cone_angle_deg * kDeg,
  };
}

RunConfig RunConfig::from_json(const json& j) {
  reject_unknown(j, "config", {"schema_version", "experiment", "dispersion", "quadrature", "result"});
  if (!j.contains("schema_version")) throw ConfigError("config: missing schema_version");
  if (integer(j, "schema_version", "config") != kRunConfigSchemaVersion) {
    throw ConfigError("config: unsupported schema_version (expected " + std::to_string(kRunConfigSchemaVersion) +
                      ")");
  }

  RunConfig rc;
  try {
    if (j.contains("experiment")) {
      const auto& e = j.at("experiment");
      reject_unknown(e, "experiment",
                     {"crystal_length_um", "pump_waist_um", "fiber_mode_radius_um", "inverse_magnification",
                      "walkoffs"});
      rc.crystal_length_um = maybe_number(e, "crystal_length_um", "experiment");
      rc.pump_waist_um = maybe_number(e, "pump_waist_um", "experiment");
      rc.fiber_mode_radius_um = maybe_number(e, "fiber_mode_radius_um", "experiment");
      rc.inverse_magnification = maybe_number(e, "inverse_magnification", "experiment");
      if (e.contains("walkoffs")) {
        const auto& w = e.at("walkoffs");
        reject_unknown(w, "walkoffs", {"m_p", "m", "q_over_k"});
        WalkOffSet set{number(w, "m_p", "walkoffs"), number(w, "m", "walkoffs"), number(w, "q_over_k", "walkoffs")};
        set.validate();
        rc.walkoffs = set;
      }
    }
    if (j.contains("dispersion")) {
      const auto& d = j.at("dispersion");
      reject_unknown(d, "dispersion",
                     {"sellmeier_path", "pump_wavelength_um", "cut_angle_deg", "external_cone_angle_deg"});
      DispersionInputs in;
      if (d.contains("sellmeier_path")) {
        if (!d.at("sellmeier_path").is_string()) throw ConfigError("dispersion.sellmeier_path: expected a string");
        in.sellmeier_path = d.at("sellmeier_path").get<std::string>();
      }
      in.pump_wavelength_um = maybe_number(d, "pump_wavelength_um", "dispersion").value_or(in.pump_wavelength_um);
      in.cut_angle_deg = maybe_number(d, "cut_angle_deg", "dispersion").value_or(in.cut_angle_deg);
      in.external_cone_angle_deg =
          maybe_number(d, "external_cone_angle_deg", "dispersion").value_or(in.external_cone_angle_deg);
      rc.dispersion = in;
    }
    if (j.contains("quadrature")) {
      const auto& q = j.at("quadrature");
      reject_unknown(q, "quadrature", {"n_tau", "n_trans", "extent_factor", "target_rel_err"});
      QuadratureSpec spec;
      if (q.contains("n_tau")) spec.n_tau = integer(q, "n_tau", "quadrature");
      if (q.contains("n_trans")) spec.n_trans = integer(q, "n_trans", "quadrature");
      spec.extent_factor = maybe_number(q, "extent_factor", "quadrature").value_or(spec.extent_factor);
      spec.target_rel_err = maybe_number(q, "target_rel_err", "quadrature").value_or(spec.target_rel_err);
      spec.validate();
      rc.quadrature = spec;
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  for (const auto& v : {rc.crystal_length_um, rc.pump_waist_um, rc.fiber_mode_radius_um, rc.inverse_magnification}) {
    if (v && !(std::isfinite(*v) && *v > 0.0)) throw DomainError("config: experiment lengths and mu must be > 0");
  }
  return rc;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
  return from_json(j);
}

json RunConfig::to_json() const {
  json j;
  j["schema_version"] = kRunConfigSchemaVersion;
  json e = json::object();
  if (crystal_length_um) e["crystal_length_um"] = *crystal_length_um;
  if (pump_waist_um) e["pump_waist_um"] = *pump_waist_um;
  if (fiber_mode_radius_um) e["fiber_mode_radius_um"] = *fiber_mode_radius_um;
  if (inverse_magnification) e["inverse_magnification"] = *inverse_magnification;
  if (walkoffs) e["walkoffs"] = {{"m_p", walkoffs->m_p}, {"m", walkoffs->m}, {"q_over_k", walkoffs->q_over_k}};
  j["experiment"] = e;
  if (dispersion) {
    j["dispersion"] = {{"sellmeier_path", dispersion->sellmeier_path},
                       {"pump_wavelength_um", dispersion->pump_wavelength_um},
                       {"cut_angle_deg", dispersion->cut_angle_deg},
                       {"external_cone_angle_deg", dispersion->external_cone_angle_deg}};
  }
  if (quadrature) {
    j["quadrature"] = {{"n_tau", quadrature->n_tau},
                       {"n_trans", quadrature->n_trans},
                       {"extent_factor", quadrature->extent_factor},
                       {"target_rel_err", quadrature->target_rel_err}};
  }
  return j;
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  RunConfig rc;
  rc.crystal_length_um = cfg.crystal_length_um;
  rc.pump_waist_um = cfg.pump_waist_um;
  rc.fiber_mode_radius_um = cfg.fiber_mode_radius_um;
  rc.inverse_magnification = cfg.inverse_magnification;
  rc.walkoffs = cfg.walkoffs;
  return rc.to_json();
}

}  // namespace spdcfc
