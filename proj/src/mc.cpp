#include "qan/mc.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

#include "qan/philox.hpp"
#include "qan/units.hpp"

namespace qan::mc {

void SimConfig::validate() const {
  if (pulses < 1) throw std::invalid_argument("sim: need at least one pulse");
  protocol.validate();
  detector.validate();
  if (link_loss_db < 0.0) throw std::invalid_argument("sim: link loss must be >= 0");
  if (raman_per_gate < 0.0 || raman_per_gate >= 1.0)
    throw std::invalid_argument("sim: raman_per_gate must be in [0, 1)");
}

double SimOutcome::sifted_qber() const {
  if (sifted_sender.empty()) return 0.0;
  size_t errors = 0;
  for (size_t i = 0; i < sifted_sender.size(); ++i)
    errors += sifted_sender[i] != sifted_receiver[i];
  return static_cast<double>(errors) / static_cast<double>(sifted_sender.size());
}

namespace {

struct Tally {
  uint64_t pulses = 0;
  uint64_t detections = 0;
  uint64_t sifted = 0;
  uint64_t errors = 0;
};

Estimate ratio_estimate(uint64_t successes, uint64_t trials) {
  Estimate e;
  e.trials = trials;
  e.successes = successes;
  if (trials == 0) return e;
  const double n = static_cast<double>(trials);
  e.value = static_cast<double>(successes) / n;
  // Binomial standard error, floored away from zero at the estimator's own
  // resolution so downstream sigma-deviation checks stay defined.
  const double p = std::min(std::max(e.value, 1.0 / (n + 2.0)), 1.0 - 1.0 / (n + 2.0));
  e.sigma = std::sqrt(p * (1.0 - p) / n);
  return e;
}

}  // namespace

namespace {

struct ChunkResult {
  Tally tally[3];
  std::vector<uint8_t> sifted_sender;
  std::vector<uint8_t> sifted_receiver;
  std::vector<uint64_t> sifted_positions;
  uint64_t detections = 0;
};

// Simulates pulses [begin, end). Each pulse owns the Philox stream addressed
// by (seed, pulse index), so any partition of the pulse range reproduces the
// same outcome bit for bit.
ChunkResult simulate_chunk(const SimConfig& cfg, uint64_t begin, uint64_t end) {
  const auto& pr = cfg.protocol;
  const auto& det = cfg.detector;

  const double eta = keyrate::transmittance(cfg.link_loss_db, det);
  const double p_background = det.dark_per_gate + cfg.raman_per_gate;  // per detector
  const double ratio_total = pr.emission_ratio[0] + pr.emission_ratio[1] + pr.emission_ratio[2];
  const double p_signal = pr.emission_ratio[0] / ratio_total;
  const double p_decoy = pr.emission_ratio[1] / ratio_total;
  const double means[3] = {pr.mu, pr.nu, pr.vacuum};

  ChunkResult out;
  Tally* tally = out.tally;

  for (uint64_t pulse = begin; pulse < end; ++pulse) {
    rng::PhiloxStream stream(cfg.seed, pulse);

    // Draw order per pulse: class, photon number, per-photon survival,
    // Alice basis/bit, photon branch/flip, 4 background gates, squash pick.
    const double class_draw = stream.next_double();
    const int cls = class_draw < p_signal ? 0 : (class_draw < p_signal + p_decoy ? 1 : 2);
    ++tally[cls].pulses;

    const uint32_t emitted = stream.poisson(means[cls]);
    uint32_t arrived = 0;
    for (uint32_t i = 0; i < emitted; ++i) arrived += stream.bernoulli(eta);

    const int alice_basis = static_cast<int>(stream.next_u32() & 1u);
    const int alice_bit = static_cast<int>(stream.next_u32() & 1u);

    // Clicked detectors, indexed basis*2 + bit.
    bool clicked[4] = {false, false, false, false};
    if (arrived >= 1) {
      const bool matched = stream.bernoulli(0.5);
      if (matched) {
        const int bit = alice_bit ^ (stream.bernoulli(pr.e_detector) ? 1 : 0);
        clicked[alice_basis * 2 + bit] = true;
      } else {
        const int bit = static_cast<int>(stream.next_u32() & 1u);
        clicked[(1 - alice_basis) * 2 + bit] = true;
      }
    }
    for (int d = 0; d < 4; ++d)
      if (stream.bernoulli(p_background)) clicked[d] = true;

    int n_clicked = 0;
    for (bool c : clicked) n_clicked += c;
    if (n_clicked == 0) continue;

    ++tally[cls].detections;
    ++out.detections;

    int outcome = -1;
    if (n_clicked == 1) {
      for (int d = 0; d < 4; ++d)
        if (clicked[d]) outcome = d;
    } else {
      // Fair squashing: a double click yields a uniformly random clicked
      // detector.
      auto pick = static_cast<int>(stream.below(static_cast<uint64_t>(n_clicked)));
      for (int d = 0; d < 4; ++d) {
        if (!clicked[d]) continue;
        if (pick == 0) {
          outcome = d;
          break;
        }
        --pick;
      }
    }

    const int bob_basis = outcome / 2;
    const int bob_bit = outcome % 2;
    if (bob_basis != alice_basis) continue;  // sifted away

    ++tally[cls].sifted;
    tally[cls].errors += bob_bit != alice_bit;
    if (cls == 0) {
      out.sifted_sender.push_back(static_cast<uint8_t>(alice_bit));
      out.sifted_receiver.push_back(static_cast<uint8_t>(bob_bit));
      out.sifted_positions.push_back(pulse);
    }
  }
  return out;
}

}  // namespace

SimOutcome simulate(const SimConfig& cfg) {
  cfg.validate();

  unsigned threads = cfg.threads != 0 ? cfg.threads : std::thread::hardware_concurrency();
  if (threads == 0) threads = 1;
  // below ~1e6 pulses the thread setup outweighs the work
  if (cfg.pulses < 1000000) threads = 1;
  threads = static_cast<unsigned>(
      std::min<uint64_t>(threads, std::max<uint64_t>(cfg.pulses / 100000, 1)));

  std::vector<ChunkResult> chunks(threads);
  if (threads == 1) {
    chunks[0] = simulate_chunk(cfg, 0, cfg.pulses);
  } else {
    std::vector<std::thread> pool;
    const uint64_t step = cfg.pulses / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const uint64_t begin = t * step;
      const uint64_t end = t + 1 == threads ? cfg.pulses : begin + step;
      pool.emplace_back([&cfg, &chunks, t, begin, end] {
        chunks[t] = simulate_chunk(cfg, begin, end);
      });
    }
    for (auto& worker : pool) worker.join();
  }

  // Merge in pulse order; sums and concatenations match a sequential run.
  Tally tally[3];
  SimOutcome out;
  for (const auto& chunk : chunks) {
    for (int c = 0; c < 3; ++c) {
      tally[c].pulses += chunk.tally[c].pulses;
      tally[c].detections += chunk.tally[c].detections;
      tally[c].sifted += chunk.tally[c].sifted;
      tally[c].errors += chunk.tally[c].errors;
    }
    out.detections += chunk.detections;
    out.sifted_sender.insert(out.sifted_sender.end(), chunk.sifted_sender.begin(),
                             chunk.sifted_sender.end());
    out.sifted_receiver.insert(out.sifted_receiver.end(), chunk.sifted_receiver.begin(),
                               chunk.sifted_receiver.end());
    out.sifted_positions.insert(out.sifted_positions.end(), chunk.sifted_positions.begin(),
                                chunk.sifted_positions.end());
  }

  out.q_mu = ratio_estimate(tally[0].detections, tally[0].pulses);
  out.e_mu = ratio_estimate(tally[0].errors, tally[0].sifted);
  out.q_nu = ratio_estimate(tally[1].detections, tally[1].pulses);
  out.e_nu = ratio_estimate(tally[1].errors, tally[1].sifted);
  out.q_vac = ratio_estimate(tally[2].detections, tally[2].pulses);
  return out;
}

}  // namespace qan::mc
