#include "qan/config.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "qan/units.hpp"

using nlohmann::json;

namespace qan::cfg {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError(path + ": " + message);
}

double require_number(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) fail(path + "/" + key, "expected a number");
  return j.at(key).get<double>();
}

double number_or(const json& j, const char* key, double fallback) {
  return j.contains(key) ? j.at(key).get<double>() : fallback;
}

}  // namespace

void Scenario::validate() const {
  catalog.validate();
  scheme.validate();
  raman.validate();
  protocol.validate();
  detector.validate();
  for (const auto& axis : sweep)
    if (axis.values.empty()) throw ConfigError("sweep axis " + axis.path + ": empty range");
}

json catalog_to_json(const odn::Catalog& catalog) {
  json j;
  j["signals"] = json::array();
  for (const auto& s : catalog.signals) {
    json sig{{"name", s.name},
             {"center_nm", s.wavelength_center_nm},
             {"wavelength_range_nm", {s.wavelength_min_nm, s.wavelength_max_nm}},
             {"direction", s.direction == odn::Direction::Downstream ? "downstream" : "upstream"},
             {"data_rate_gbps", s.data_rate_gbps},
             {"attenuation_db_per_km", s.attenuation_db_per_km}};
    if (s.launch_power_dbm) sig["launch_power_dbm"] = *s.launch_power_dbm;
    j["signals"].push_back(sig);
  }
  j["splitters"] = json::array();
  for (const auto& [ratio, loss] : catalog.splitter_loss_db)
    j["splitters"].push_back({{"ratio", ratio}, {"insertion_loss_db", loss}});
  j["stages"] = json::object();
  for (const auto& [name, stage] : catalog.stages) {
    json st;
    st["kind"] = stage.kind == odn::StageKind::Mux      ? "mux"
                 : stage.kind == odn::StageKind::Demux  ? "demux"
                                                        : "filter";
    st["insertion_loss_db"] = stage.insertion_loss_db;
    st["isolation_db"] = stage.isolation_db;
    j["stages"][name] = st;
  }
  return j;
}

odn::Catalog catalog_from_json(const json& j) {
  odn::Catalog c;
  if (!j.contains("signals") || !j.at("signals").is_array()) fail("/catalog/signals", "expected an array");
  for (size_t i = 0; i < j.at("signals").size(); ++i) {
    const auto& sj = j.at("signals")[i];
    const std::string path = "/catalog/signals/" + std::to_string(i);
    odn::SignalSpec s;
    if (!sj.contains("name")) fail(path, "signal needs a name");
    s.name = sj.at("name").get<std::string>();
    s.wavelength_center_nm = require_number(sj, path, "center_nm");
    if (sj.contains("wavelength_range_nm")) {
      const auto& r = sj.at("wavelength_range_nm");
      if (!r.is_array() || r.size() != 2) fail(path + "/wavelength_range_nm", "expected [lo, hi]");
      s.wavelength_min_nm = r[0].get<double>();
      s.wavelength_max_nm = r[1].get<double>();
    } else {
      s.wavelength_min_nm = s.wavelength_max_nm = s.wavelength_center_nm;
    }
    const std::string dir = sj.value("direction", "downstream");
    if (dir != "downstream" && dir != "upstream") fail(path + "/direction", "unknown direction " + dir);
    s.direction = dir == "downstream" ? odn::Direction::Downstream : odn::Direction::Upstream;
    s.data_rate_gbps = number_or(sj, "data_rate_gbps", 0.0);
    s.attenuation_db_per_km = require_number(sj, path, "attenuation_db_per_km");
    if (sj.contains("launch_power_dbm")) s.launch_power_dbm = sj.at("launch_power_dbm").get<double>();
    c.signals.push_back(s);
  }
  if (j.contains("splitters"))
    for (const auto& sp : j.at("splitters"))
      c.splitter_loss_db[sp.at("ratio").get<int>()] = sp.at("insertion_loss_db").get<double>();
  if (j.contains("stages")) {
    for (const auto& [name, sj] : j.at("stages").items()) {
      odn::WdmStage stage;
      stage.name = name;
      const std::string kind = sj.value("kind", "mux");
      stage.kind = kind == "mux"     ? odn::StageKind::Mux
                   : kind == "demux" ? odn::StageKind::Demux
                   : kind == "filter"
                       ? odn::StageKind::Filter
                       : throw ConfigError("/catalog/stages/" + name + ": unknown kind " + kind);
      if (sj.contains("insertion_loss_db"))
        stage.insertion_loss_db =
            sj.at("insertion_loss_db").get<std::map<std::string, double>>();
      if (sj.contains("isolation_db"))
        stage.isolation_db =
            sj.at("isolation_db").get<std::map<std::string, std::map<std::string, double>>>();
      c.stages[name] = stage;
    }
  }
  try {
    c.validate();
  } catch (const std::exception& e) {
    fail("/catalog", e.what());
  }
  return c;
}

json raman_to_json(const raman::RamanParams& params) {
  return json{{"beta_feeder_per_km", params.beta_feeder},
              {"beta_drop_per_km", params.beta_drop},
              {"alpha_c_per_km", params.alpha_c},
              {"alpha_q_per_km", params.alpha_q}};
}

raman::RamanParams raman_from_json(const json& j) {
  raman::RamanParams p;
  p.beta_feeder = require_number(j, "/raman", "beta_feeder_per_km");
  p.beta_drop = require_number(j, "/raman", "beta_drop_per_km");
  p.alpha_c = require_number(j, "/raman", "alpha_c_per_km");
  p.alpha_q = require_number(j, "/raman", "alpha_q_per_km");
  try {
    p.validate();
  } catch (const std::exception& e) {
    fail("/raman", e.what());
  }
  return p;
}

raman::RamanParams default_raman_params(const odn::Catalog& catalog) {
  raman::RamanParams p;
  p.alpha_c = att_to_natural(catalog.signal(odn::kOlt10G).attenuation_db_per_km);
  p.alpha_q = att_to_natural(catalog.signal(odn::kQuantumSignal).attenuation_db_per_km);
  // Amplitudes from `qanplan calibrate configs/measurements_16user.json`,
  // the bundled two-amplitude fit of the 5 km reference measurements.
  p.beta_feeder = 5.621108105031129e-11;
  p.beta_drop = 7.8916278138461678e-11;
  return p;
}

namespace {

odn::NetworkScheme scheme_from_json(const json& j, const odn::Catalog& catalog) {
  if (!j.contains("kind")) fail("/scheme/kind", "missing scheme kind");
  const std::string kind = j.at("kind").get<std::string>();
  const double feeder = require_number(j, "/scheme", "feeder_km");
  const double drop = number_or(j, "drop_km", 1.0);
  const double att = number_or(j, "olt_attenuation_db", 0.0);
  try {
    if (kind == "full") {
      return odn::make_full_scheme(catalog, j.at("users").get<int>(), feeder, drop, att);
    } else if (kind == "dual_feeder") {
      return odn::make_dual_feeder_scheme(catalog, j.at("users").get<int>(), feeder, drop, att);
    } else if (kind == "dual_splitter") {
      return odn::make_dual_splitter_scheme(catalog, j.at("classical_users").get<int>(),
                                            j.at("quantum_users").get<int>(), feeder, drop, att);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    fail("/scheme", e.what());
  }
  fail("/scheme/kind", "unknown scheme kind " + kind);
}

keyrate::ProtocolParams protocol_from_json(const json& j) {
  keyrate::ProtocolParams p;
  p.mu = number_or(j, "mu", p.mu);
  p.nu = number_or(j, "nu", p.nu);
  p.vacuum = number_or(j, "vacuum", p.vacuum);
  if (j.contains("emission_ratio")) {
    const auto& r = j.at("emission_ratio");
    if (!r.is_array() || r.size() != 3) fail("/protocol/emission_ratio", "expected [signal, decoy, vacuum]");
    for (size_t i = 0; i < 3; ++i) p.emission_ratio[i] = r[i].get<double>();
  }
  p.q_sift = number_or(j, "q_sift", p.q_sift);
  p.f_ec = number_or(j, "f_ec", p.f_ec);
  p.e_detector = number_or(j, "e_detector", p.e_detector);
  p.pulse_rate_hz = number_or(j, "pulse_rate_hz", p.pulse_rate_hz);
  p.qber_abort = number_or(j, "qber_abort", p.qber_abort);
  try {
    p.validate();
  } catch (const std::exception& e) {
    fail("/protocol", e.what());
  }
  return p;
}

keyrate::DetectorParams detector_from_json(const json& j) {
  keyrate::DetectorParams d;
  d.efficiency = number_or(j, "efficiency", d.efficiency);
  d.dark_per_gate = number_or(j, "dark_per_gate", d.dark_per_gate);
  d.gate_rate_hz = number_or(j, "gate_rate_hz", d.gate_rate_hz);
  if (j.contains("detectors_per_receiver"))
    d.detectors_per_receiver = j.at("detectors_per_receiver").get<int>();
  d.gate_width_s = number_or(j, "gate_width_s", d.gate_width_s);
  try {
    d.validate();
  } catch (const std::exception& e) {
    fail("/detector", e.what());
  }
  return d;
}

std::vector<SweepAxis> sweep_from_json(const json& j) {
  std::vector<SweepAxis> axes;
  if (!j.is_array()) fail("/sweep", "expected an array of axes");
  for (size_t i = 0; i < j.size(); ++i) {
    const auto& aj = j[i];
    const std::string path = "/sweep/" + std::to_string(i);
    SweepAxis axis;
    if (!aj.contains("path")) fail(path, "axis needs a path");
    axis.path = aj.at("path").get<std::string>();
    if (aj.contains("values")) {
      for (const auto& v : aj.at("values")) axis.values.push_back(v.get<double>());
    } else {
      const double from = require_number(aj, path, "from");
      const double to = require_number(aj, path, "to");
      const double step = require_number(aj, path, "step");
      if (step <= 0.0 || to < from) fail(path, "need step > 0 and to >= from");
      for (double v = from; v <= to + 1e-9 * step; v += step) axis.values.push_back(v);
    }
    if (axis.values.empty()) fail(path, "axis expands to no values");
    axes.push_back(axis);
  }
  return axes;
}

}  // namespace

Scenario scenario_from_json(const json& j) {
  Scenario s;
  if (!j.contains("catalog")) {
    s.catalog = odn::default_catalog();
  } else if (j.at("catalog").is_string()) {
    // catalog by file reference
    s.catalog = catalog_from_json(load_json(j.at("catalog").get<std::string>()));
  } else {
    s.catalog = catalog_from_json(j.at("catalog"));
  }
  if (!j.contains("scheme")) fail("/scheme", "scenario needs a scheme");
  try {
    s.scheme = scheme_from_json(j.at("scheme"), s.catalog);
    s.raman =
        j.contains("raman") ? raman_from_json(j.at("raman")) : default_raman_params(s.catalog);
    s.protocol = protocol_from_json(j.contains("protocol") ? j.at("protocol") : json::object());
    s.detector = detector_from_json(j.contains("detector") ? j.at("detector") : json::object());
    if (j.contains("sweep")) s.sweep = sweep_from_json(j.at("sweep"));
    s.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    // json type errors and invariant violations, tagged with the document root
    throw ConfigError(std::string("/scenario: ") + e.what());
  }
  return s;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return j;
}

Scenario load_scenario(const std::string& path) { return scenario_from_json(load_json(path)); }

std::vector<raman::RamanMeasurement> measurements_from_json(const json& j,
                                                            const odn::Catalog& catalog) {
  if (!j.contains("measurements") || !j.at("measurements").is_array())
    fail("/measurements", "expected an array");
  std::vector<raman::RamanMeasurement> out;
  for (size_t i = 0; i < j.at("measurements").size(); ++i) {
    const auto& mj = j.at("measurements")[i];
    raman::RamanMeasurement m;
    m.scheme = scheme_from_json(mj.at("scheme"), catalog);
    m.observed_cps = require_number(mj, "/measurements/" + std::to_string(i), "observed_cps");
    out.push_back(m);
  }
  return out;
}

}  // namespace qan::cfg
