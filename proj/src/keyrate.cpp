#include "qan/keyrate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qan/units.hpp"

namespace qan::keyrate {

void ProtocolParams::validate() const {
  if (!(mu > 0.0) || !(nu > 0.0) || nu >= mu)
    throw std::invalid_argument("protocol: require 0 < nu < mu");
  if (vacuum != 0.0) throw std::invalid_argument("protocol: vacuum intensity must be 0");
  for (double w : emission_ratio)
    if (w <= 0.0) throw std::invalid_argument("protocol: emission ratio components must be > 0");
  if (!(q_sift > 0.0) || q_sift > 1.0)
    throw std::invalid_argument("protocol: q_sift must be in (0, 1]");
  if (f_ec < 1.0) throw std::invalid_argument("protocol: f_ec must be >= 1");
  if (e_detector < 0.0 || e_detector > 0.5)
    throw std::invalid_argument("protocol: e_detector must be in [0, 0.5]");
  if (pulse_rate_hz <= 0.0) throw std::invalid_argument("protocol: pulse rate must be > 0");
  if (qber_abort <= 0.0 || qber_abort > 0.5)
    throw std::invalid_argument("protocol: qber_abort must be in (0, 0.5]");
}

double ProtocolParams::signal_fraction() const {
  const double total = emission_ratio[0] + emission_ratio[1] + emission_ratio[2];
  return emission_ratio[0] / total;
}

void DetectorParams::validate() const {
  if (!(efficiency > 0.0) || efficiency > 1.0)
    throw std::invalid_argument("detector: efficiency must be in (0, 1]");
  if (dark_per_gate < 0.0 || dark_per_gate >= 1.0)
    throw std::invalid_argument("detector: dark_per_gate must be in [0, 1)");
  if (gate_rate_hz <= 0.0) throw std::invalid_argument("detector: gate rate must be > 0");
  if (detectors_per_receiver < 1)
    throw std::invalid_argument("detector: need at least one detector");
  if (gate_width_s <= 0.0 || gate_width_s * gate_rate_hz > 1.0)
    throw std::invalid_argument("detector: gate width must be positive and fit the gate period");
}

double binary_entropy(double x) {
  if (x < 0.0 || x > 1.0) throw std::invalid_argument("binary_entropy: x must be in [0, 1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double transmittance(double loss_db, const DetectorParams& det) {
  if (loss_db < 0.0) throw std::invalid_argument("transmittance: loss must be >= 0");
  return db_to_linear(loss_db) * det.efficiency;
}

double background_yield(double raman_per_gate, const DetectorParams& det) {
  if (raman_per_gate < 0.0 || raman_per_gate >= 1.0)
    throw std::invalid_argument("background_yield: probability must be in [0, 1)");
  const double y = det.detectors_per_receiver * (det.dark_per_gate + raman_per_gate);
  return std::clamp(y, 0.0, 1.0);
}

namespace {
constexpr double kErrorBackground = 0.5;  // e_0: background clicks are random

void single_gain(double eta, double y_0, double mean, double e_detector, double& q, double& e) {
  const double photon = -std::expm1(-eta * mean);  // 1 - exp(-eta*m)
  q = std::clamp(y_0 + photon, 0.0, 1.0);
  e = q > 0.0 ? (kErrorBackground * y_0 + e_detector * photon) / q : kErrorBackground;
}
}  // namespace

ChannelObservables gains(double eta, double y_0, const ProtocolParams& p) {
  if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("gains: eta must be in [0, 1]");
  if (y_0 < 0.0 || y_0 >= 1.0) throw std::invalid_argument("gains: y_0 must be in [0, 1)");
  ChannelObservables obs;
  obs.y_0 = y_0;
  single_gain(eta, y_0, p.mu, p.e_detector, obs.q_mu, obs.e_mu);
  single_gain(eta, y_0, p.nu, p.e_detector, obs.q_nu, obs.e_nu);
  return obs;
}

DecoyBounds decoy_bounds(const ChannelObservables& obs, const ProtocolParams& p) {
  const double mu = p.mu;
  const double nu = p.nu;
  DecoyBounds b;
  const double y1 = mu / (mu * nu - nu * nu) *
                    (obs.q_nu * std::exp(nu) - obs.q_mu * std::exp(mu) * nu * nu / (mu * mu) -
                     (mu * mu - nu * nu) / (mu * mu) * obs.y_0);
  if (y1 <= 0.0) return b;  // bound collapsed: caller reports infeasible
  b.y_1_lower = std::min(y1, 1.0);
  const double e1 =
      (obs.e_nu * obs.q_nu * std::exp(nu) - kErrorBackground * obs.y_0) / (b.y_1_lower * nu);
  b.e_1_upper = std::clamp(e1, 0.0, 1.0);
  b.q_1 = b.y_1_lower * mu * std::exp(-mu);
  b.usable = true;
  return b;
}

KeyRateResult secure_key_rate(const ChannelObservables& obs, const DecoyBounds& bounds,
                              const ProtocolParams& p) {
  KeyRateResult r;
  r.y_1_lower = bounds.y_1_lower;
  r.e_1_upper = bounds.e_1_upper;
  r.q_1 = bounds.q_1;
  r.q_0 = obs.y_0 * std::exp(-p.mu);
  double rate = 0.0;
  if (bounds.usable) {
    // An error bound at or beyond 1/2 leaves no single-photon privacy, so the
    // entropy argument is capped there rather than wrapping around.
    const double single = bounds.q_1 * (1.0 - binary_entropy(std::min(bounds.e_1_upper, 0.5)));
    rate = p.q_sift *
           (single - p.f_ec * obs.q_mu * binary_entropy(std::min(obs.e_mu, 0.5)) + r.q_0);
  }
  r.r_per_pulse = std::max(rate, 0.0);
  r.r_bps = r.r_per_pulse * p.pulse_rate_hz * p.signal_fraction();
  r.feasible = r.r_per_pulse > 0.0 && obs.e_mu <= p.qber_abort;
  return r;
}

}  // namespace qan::keyrate
