#pragma once

#include <array>

namespace qan::keyrate {

// Decoy-state BB84 protocol constants of the transmitter.
struct ProtocolParams {
  double mu = 0.4;        // mean photon number, signal state
  double nu = 0.1;        // mean photon number, decoy state
  double vacuum = 0.0;
  std::array<double, 3> emission_ratio = {6.0, 1.0, 1.0};  // signal : decoy : vacuum
  double q_sift = 0.5;    // basis-sift factor
  double f_ec = 1.35;     // error-correction efficiency (1.2..1.5 range)
  double e_detector = 0.03;  // misalignment error probability, calibration-dependent
  double pulse_rate_hz = 625e6;
  double qber_abort = 0.04;

  void validate() const;
  double signal_fraction() const;  // share of pulses in the signal state
};

// Gated InGaAs single-photon detector bank of one receiver.
struct DetectorParams {
  double efficiency = 0.15;
  double dark_per_gate = 2e-7;     // per detector, per gate
  double gate_rate_hz = 1.25e9;
  int detectors_per_receiver = 4;
  double gate_width_s = 400e-12;   // acceptance window of one gate

  void validate() const;
  // Fraction of a continuous photon flux falling inside open gates.
  double temporal_acceptance() const { return gate_width_s * gate_rate_hz; }
  double dark_counts_per_s() const {
    return dark_per_gate * gate_rate_hz * detectors_per_receiver;
  }
};

// Everything the key-rate formula consumes, per intensity class.
struct ChannelObservables {
  double q_mu = 0.0;  // gain of the signal state, probability per pulse
  double e_mu = 0.0;  // QBER of the signal state
  double q_nu = 0.0;
  double e_nu = 0.0;
  double y_0 = 0.0;   // background yield per pulse
};

struct DecoyBounds {
  double y_1_lower = 0.0;  // single-photon yield lower bound
  double e_1_upper = 0.0;  // single-photon error upper bound
  double q_1 = 0.0;        // single-photon gain from the bounds
  bool usable = false;     // false when the yield bound collapses to <= 0
};

struct KeyRateResult {
  double y_1_lower = 0.0;
  double e_1_upper = 0.0;
  double q_1 = 0.0;
  double q_0 = 0.0;          // background gain
  double r_per_pulse = 0.0;  // secret bits per emitted pulse (clamped at 0)
  double r_bps = 0.0;        // bits/s per user
  bool feasible = false;
};

double binary_entropy(double x);  // H2 with 0*log0 == 0

// Channel transmittance including detector efficiency.
double transmittance(double loss_db, const DetectorParams& det);

// Background yield per pulse from the per-detector noise probabilities.
// raman_per_gate is the per-detector, per-gate Raman click probability.
double background_yield(double raman_per_gate, const DetectorParams& det);

// Gains and QBERs of the signal and decoy states for a Poissonian source over
// a threshold-detector channel: Q = Y0 + 1 - exp(-eta*m), with error weight
// 1/2 on the background and e_detector on the photon component.
ChannelObservables gains(double eta, double y_0, const ProtocolParams& p);

// Vacuum + weak-decoy single-photon bounds.
DecoyBounds decoy_bounds(const ChannelObservables& obs, const ProtocolParams& p);

// Secret fraction and per-user throughput.
KeyRateResult secure_key_rate(const ChannelObservables& obs, const DecoyBounds& bounds,
                              const ProtocolParams& p);

}  // namespace qan::keyrate
