#include "qan/raman.hpp"

#include <cmath>
#include <stdexcept>

#include "qan/units.hpp"

namespace qan::raman {

void RamanParams::validate() const {
  if (beta_feeder <= 0.0 || beta_drop <= 0.0)
    throw std::invalid_argument("raman: SRS coefficients must be > 0");
  if (alpha_c <= 0.0 || alpha_q <= 0.0)
    throw std::invalid_argument("raman: attenuation coefficients must be > 0");
  if (alpha_q == alpha_c)
    throw std::invalid_argument("raman: alpha_q must differ from alpha_c");
}

namespace {

// Numerically safe (e^(-a_c L) - e^(-a_q L)) / (a_q - a_c). The difference of
// attenuation coefficients is a removable singularity; near it the midpoint
// limit L * e^(-a L) keeps the O((dL)^2) error far below 1e-6 relative.
double attenuation_kernel(double alpha_c, double alpha_q, double length_km) {
  const double delta = alpha_q - alpha_c;
  if (std::fabs(delta) < 1e-9) {
    const double mid = 0.5 * (alpha_c + alpha_q);
    return length_km * std::exp(-mid * length_km);
  }
  return (std::exp(-alpha_c * length_km) - std::exp(-alpha_q * length_km)) / delta;
}

void check_geometry(double pump_mw, double feeder_km, double drop_km, double users) {
  if (pump_mw < 0.0) throw std::invalid_argument("srs: pump power must be >= 0");
  if (feeder_km < 0.0 || drop_km < 0.0) throw std::invalid_argument("srs: lengths must be >= 0");
  if (users < 1.0) throw std::invalid_argument("srs: splitting ratio must be >= 1");
}

}  // namespace

double srs_feeder(double pump_mw, double feeder_km, double drop_km, double users,
                  const RamanParams& params) {
  params.validate();
  check_geometry(pump_mw, feeder_km, drop_km, users);
  return pump_mw * params.beta_feeder * attenuation_kernel(params.alpha_c, params.alpha_q, feeder_km) /
         users * std::exp(-params.alpha_q * drop_km);
}

double srs_drop(double pump_mw, double feeder_km, double drop_km, double users,
                const RamanParams& params) {
  params.validate();
  check_geometry(pump_mw, feeder_km, drop_km, users);
  return pump_mw / users * std::exp(-params.alpha_c * feeder_km) * params.beta_drop *
         attenuation_kernel(params.alpha_c, params.alpha_q, drop_km);
}

double power_to_count_rate(double p_mw, double wavelength_nm, double det_efficiency,
                           double temporal_acceptance) {
  if (p_mw < 0.0) throw std::invalid_argument("power_to_count_rate: power must be >= 0");
  if (det_efficiency < 0.0 || det_efficiency > 1.0 || temporal_acceptance < 0.0 ||
      temporal_acceptance > 1.0)
    throw std::invalid_argument("power_to_count_rate: capture fractions must be in [0, 1]");
  return p_mw * 1e-3 / photon_energy_j(wavelength_nm) * det_efficiency * temporal_acceptance;
}

namespace {

// Scatter power delivered to the drop-fiber end per unit SRS coefficient,
// split into the feeder- and drop-generated components.
struct ScatterComponents {
  double feeder_mw_per_beta = 0.0;
  double drop_mw_per_beta = 0.0;
};

ScatterComponents scatter_components(const odn::NetworkScheme& scheme, const RamanParams& params) {
  scheme.validate();
  const double pump_mw = dbm_to_mw(odn::olt_power_at(scheme, odn::PathPoint::FeederEntry));
  const double n = static_cast<double>(scheme.classical_splitter.ratio);
  ScatterComponents sc;
  sc.drop_mw_per_beta = pump_mw / n * std::exp(-params.alpha_c * scheme.feeder_km) *
                        attenuation_kernel(params.alpha_c, params.alpha_q, scheme.drop_km);
  if (scheme.kind == odn::SchemeKind::Full) {
    sc.feeder_mw_per_beta = pump_mw *
                            attenuation_kernel(params.alpha_c, params.alpha_q, scheme.feeder_km) /
                            n * std::exp(-params.alpha_q * scheme.drop_km);
  }
  return sc;
}

double receiver_capture_per_mw(const odn::NetworkScheme& scheme,
                               const keyrate::DetectorParams& det) {
  double demux_db = 0.0;
  for (const auto& name : scheme.quantum_tail_stages)
    demux_db += scheme.catalog.stage(name).insertion_loss(odn::kQuantumSignal);
  const double lambda = scheme.catalog.signal(odn::kQuantumSignal).wavelength_center_nm;
  return db_to_linear(demux_db) *
         power_to_count_rate(1.0, lambda, det.efficiency, det.temporal_acceptance());
}

}  // namespace

RamanBudget total_srs(const odn::NetworkScheme& scheme, const RamanParams& params,
                      const keyrate::DetectorParams& det) {
  params.validate();
  det.validate();
  const ScatterComponents sc = scatter_components(scheme, params);
  double demux_db = 0.0;
  for (const auto& name : scheme.quantum_tail_stages)
    demux_db += scheme.catalog.stage(name).insertion_loss(odn::kQuantumSignal);
  const double demux = db_to_linear(demux_db);

  RamanBudget budget;
  budget.s_f_mw = params.beta_feeder * sc.feeder_mw_per_beta * demux;
  budget.s_d_mw = params.beta_drop * sc.drop_mw_per_beta * demux;
  const double lambda = scheme.catalog.signal(odn::kQuantumSignal).wavelength_center_nm;
  budget.count_rate_cps = power_to_count_rate(budget.s_f_mw + budget.s_d_mw, lambda,
                                              det.efficiency, det.temporal_acceptance());
  budget.per_gate_probability = budget.count_rate_cps / det.gate_rate_hz;
  return budget;
}

CalibrationResult calibrate(const std::vector<RamanMeasurement>& measurements,
                            const RamanParams& base, const keyrate::DetectorParams& det) {
  if (measurements.empty()) throw std::invalid_argument("calibrate: need at least one measurement");
  det.validate();

  // Count-rate contribution per unit coefficient, weighted for relative error.
  std::vector<double> u, v;
  bool any_feeder = false;
  for (const auto& m : measurements) {
    if (m.observed_cps <= 0.0)
      throw std::invalid_argument("calibrate: observed count rates must be > 0");
    const ScatterComponents sc = scatter_components(m.scheme, base);
    const double capture = receiver_capture_per_mw(m.scheme, det);
    u.push_back(sc.feeder_mw_per_beta * capture / m.observed_cps);
    v.push_back(sc.drop_mw_per_beta * capture / m.observed_cps);
    any_feeder = any_feeder || sc.feeder_mw_per_beta > 0.0;
  }

  double suu = 0, suv = 0, svv = 0, su = 0, sv = 0;
  for (size_t i = 0; i < u.size(); ++i) {
    suu += u[i] * u[i];
    suv += u[i] * v[i];
    svv += v[i] * v[i];
    su += u[i];
    sv += v[i];
  }

  CalibrationResult result;
  result.params = base;
  const double det2x2 = suu * svv - suv * suv;
  bool solved = false;
  if (any_feeder && measurements.size() >= 2 && det2x2 > 1e-12 * (suu * svv + 1e-300)) {
    const double bf = (su * svv - sv * suv) / det2x2;
    const double bd = (sv * suu - su * suv) / det2x2;
    if (bf > 0.0 && bd > 0.0) {
      result.params.beta_feeder = bf;
      result.params.beta_drop = bd;
      solved = true;
    }
  }
  if (!solved) {
    // Single-coefficient model: beta multiplies feeder and drop alike.
    double sw = 0, sww = 0;
    for (size_t i = 0; i < u.size(); ++i) {
      const double w = u[i] + v[i];
      sw += w;
      sww += w * w;
    }
    if (sww <= 0.0) throw std::invalid_argument("calibrate: degenerate model, no scatter path");
    result.params.beta_feeder = result.params.beta_drop = sw / sww;
  }
  result.params.validate();

  for (const auto& m : measurements) {
    const double predicted = total_srs(m.scheme, result.params, det).count_rate_cps;
    const double rel = (predicted - m.observed_cps) / m.observed_cps;
    result.residuals_rel.push_back(rel);
    result.max_abs_residual_rel = std::max(result.max_abs_residual_rel, std::fabs(rel));
  }
  return result;
}

}  // namespace qan::raman
