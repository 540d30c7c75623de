#pragma once

#include <vector>

#include "qan/keyrate.hpp"
#include "qan/scheme.hpp"

namespace qan::raman {

// Spontaneous-Raman model parameters. The coefficients are effective per-km
// conversion ratios into the quantum receiver's filter acceptance bandwidth,
// so the filter width is absorbed into them. Separate feeder and drop
// amplitudes support the two-amplitude calibration; a single-coefficient model
// simply keeps them equal.
struct RamanParams {
  double beta_feeder = 1.0;  // 1/km
  double beta_drop = 1.0;    // 1/km
  double alpha_c = 0.0;      // 1/km, natural, classical pump
  double alpha_q = 0.0;      // 1/km, natural, quantum wavelength

  void validate() const;
};

// SRS powers reaching the receiver and the detector-side count accounting.
struct RamanBudget {
  double s_f_mw = 0.0;  // feeder-generated scatter at the receiver input
  double s_d_mw = 0.0;  // drop-generated scatter at the receiver input
  double count_rate_cps = 0.0;        // summed over the receiver's detectors
  double per_gate_probability = 0.0;  // count_rate / gate_rate
};

// Forward scatter generated in the feeder fiber and delivered through the
// splitter and drop fiber:
//   P * beta/(a_q - a_c) * (e^(-a_c Lf) - e^(-a_q Lf)) * (1/N) * e^(-a_q Ld).
// The removable a_q == a_c singularity is evaluated through its limit.
double srs_feeder(double pump_mw, double feeder_km, double drop_km, double users,
                  const RamanParams& params);

// Scatter generated in the drop fiber by the attenuated, split pump:
//   (P/N) * e^(-a_c Lf) * beta/(a_q - a_c) * (e^(-a_c Ld) - e^(-a_q Ld)).
double srs_drop(double pump_mw, double feeder_km, double drop_km, double users,
                const RamanParams& params);

// Scheme-level budget. Full coexistence sums feeder and drop scatter with the
// pump at feeder entry; the partial schemes keep only the drop term because
// feeder scatter is stripped by the classical-path filter before combining.
// Receiver demux loss, detector efficiency and the gate duty cycle convert
// delivered power into a count rate.
RamanBudget total_srs(const odn::NetworkScheme& scheme, const RamanParams& params,
                      const keyrate::DetectorParams& det);

// Photon-flux conversion: p * lambda/(h c) * efficiency * acceptance.
double power_to_count_rate(double p_mw, double wavelength_nm, double det_efficiency,
                           double temporal_acceptance);

struct RamanMeasurement {
  odn::NetworkScheme scheme;
  double observed_cps = 0.0;
};

struct CalibrationResult {
  RamanParams params;
  std::vector<double> residuals_rel;  // (predicted - observed)/observed per row
  double max_abs_residual_rel = 0.0;
};

// Least-squares fit of the SRS amplitudes minimizing relative count-rate
// error. Measurement sets containing both full and partial schemes resolve
// the feeder/drop amplitude split; otherwise a single coefficient is fitted.
// `base` supplies the attenuation coefficients.
CalibrationResult calibrate(const std::vector<RamanMeasurement>& measurements,
                            const RamanParams& base, const keyrate::DetectorParams& det);

}  // namespace qan::raman
