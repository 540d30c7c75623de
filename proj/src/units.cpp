#include "qan/units.hpp"

#include <cmath>
#include <stdexcept>

namespace qan {

namespace {
constexpr double kPlanck = 6.62607015e-34;  // J s
constexpr double kLightSpeed = 299792458.0; // m/s
}  // namespace

double db_to_linear(double loss_db) { return std::pow(10.0, -loss_db / 10.0); }

double linear_to_db(double ratio) {
  if (ratio <= 0.0) throw std::invalid_argument("linear_to_db: ratio must be > 0");
  return -10.0 * std::log10(ratio);
}

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

double mw_to_dbm(double mw) {
  if (mw <= 0.0) throw std::invalid_argument("mw_to_dbm: power must be > 0");
  return 10.0 * std::log10(mw);
}

double att_to_natural(double db_per_km) {
  if (db_per_km <= 0.0) throw std::invalid_argument("att_to_natural: attenuation must be > 0");
  return db_per_km * std::log(10.0) / 10.0;
}

double photon_energy_j(double wavelength_nm) {
  if (wavelength_nm <= 0.0) throw std::invalid_argument("photon_energy_j: wavelength must be > 0");
  return kPlanck * kLightSpeed / (wavelength_nm * 1e-9);
}

}  // namespace qan
