#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qan/catalog.hpp"
#include "qan/keyrate.hpp"
#include "qan/raman.hpp"
#include "qan/scheme.hpp"

namespace qan::cfg {

// Config errors carry the JSON path of the offending value.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct SweepAxis {
  std::string path;            // JSON pointer into the scenario document
  std::vector<double> values;  // expanded grid values, in evaluation order
};

// A fully resolved evaluation scenario plus the raw document it came from
// (sweeps patch the document and re-resolve per grid point).
struct Scenario {
  odn::Catalog catalog;
  odn::NetworkScheme scheme;
  raman::RamanParams raman;
  keyrate::ProtocolParams protocol;
  keyrate::DetectorParams detector;
  std::vector<SweepAxis> sweep;

  void validate() const;
};

nlohmann::json catalog_to_json(const odn::Catalog& catalog);
odn::Catalog catalog_from_json(const nlohmann::json& j);

nlohmann::json raman_to_json(const raman::RamanParams& params);
raman::RamanParams raman_from_json(const nlohmann::json& j);

// Attenuation coefficients from the catalog plan plus the bundled calibration
// of the SRS amplitudes against the reference measurement set.
raman::RamanParams default_raman_params(const odn::Catalog& catalog);

Scenario scenario_from_json(const nlohmann::json& j);
Scenario load_scenario(const std::string& path);
nlohmann::json load_json(const std::string& path);

// Calibration measurements: scheme descriptions paired with observed rates.
std::vector<raman::RamanMeasurement> measurements_from_json(const nlohmann::json& j,
                                                            const odn::Catalog& catalog);

}  // namespace qan::cfg
