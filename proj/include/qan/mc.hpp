#pragma once

#include <cstdint>
#include <vector>

#include "qan/keyrate.hpp"

namespace qan::mc {

// Pulse-level simulation of the downstream channel: one transmitter, one
// receiver behind a fixed link loss, background noise per gate.
struct SimConfig {
  uint64_t pulses = 0;
  uint64_t seed = 0;
  keyrate::ProtocolParams protocol;
  keyrate::DetectorParams detector;
  double link_loss_db = 0.0;
  double raman_per_gate = 0.0;  // per detector, per gate, on top of dark counts
  unsigned threads = 0;         // 0 = hardware concurrency; results identical at any count

  void validate() const;
};

struct Estimate {
  double value = 0.0;
  double sigma = 0.0;       // binomial standard error of the estimate
  uint64_t trials = 0;      // denominator events
  uint64_t successes = 0;   // numerator events
};

struct SimOutcome {
  Estimate q_mu, e_mu, q_nu, e_nu, q_vac;
  std::vector<uint8_t> sifted_sender;    // signal-state, matched-basis bits
  std::vector<uint8_t> sifted_receiver;
  std::vector<uint64_t> sifted_positions;  // pulse index of each sifted bit
  uint64_t detections = 0;

  double sifted_qber() const;
};

// Deterministic for a given seed: every pulse consumes draws from its own
// Philox4x32-10 stream addressed by (seed, pulse index), in a fixed order.
SimOutcome simulate(const SimConfig& cfg);

}  // namespace qan::mc
