#pragma once

#include <string>
#include <vector>

#include "qan/catalog.hpp"

namespace qan::odn {

enum class SchemeKind { Full, DualFeeder, DualSplitter };

// Where along the optical distribution network a classical power level is
// queried.
enum class PathPoint { FeederEntry, SplitterExit, DropEntry };

// One coexistence topology: geometry, splitters, and the WDM stages crossed by
// the quantum and classical signals. Immutable after construction; all
// operations on it are pure.
struct NetworkScheme {
  SchemeKind kind = SchemeKind::Full;
  double feeder_km = 0.0;
  double drop_km = 1.0;  // each drop fiber is fixed at 1 km in the reference plan
  PowerSplitter classical_splitter{1, 0.0};
  PowerSplitter quantum_splitter{1, 0.0};  // equals classical unless DualSplitter
  double olt_attenuation_db = 0.0;         // attenuation added to the OLT signal

  // Stage names resolved against the catalog, in path order.
  std::vector<std::string> quantum_head_stages;    // central-office side, quantum path
  std::vector<std::string> classical_head_stages;  // central-office side, OLT path
  std::vector<std::string> quantum_tail_stages;    // user side, quantum path

  Catalog catalog;

  void validate() const;
};

// Builders for the three reference topologies. Feeder / drop lengths in km.
NetworkScheme make_full_scheme(const Catalog& catalog, int users, double feeder_km,
                               double drop_km = 1.0, double olt_attenuation_db = 0.0);
NetworkScheme make_dual_feeder_scheme(const Catalog& catalog, int users, double feeder_km,
                                      double drop_km = 1.0, double olt_attenuation_db = 0.0);
NetworkScheme make_dual_splitter_scheme(const Catalog& catalog, int classical_users,
                                        int quantum_users, double feeder_km, double drop_km = 1.0,
                                        double olt_attenuation_db = 0.0);

// End-to-end quantum-signal loss from transmitter output to receiver input, in
// dB per user (all users symmetric since the drop length is uniform).
double quantum_link_loss(const NetworkScheme& scheme);

// Classical OLT aggregate power at a point along its path, in dBm. Launch is
// the catalog OLT power minus the scheme's added attenuation; stage, fiber and
// (classical) splitter losses accumulate up to the requested point.
double olt_power_at(const NetworkScheme& scheme, PathPoint point);

// Residual linear-crosstalk audit: for every classical signal, the leaked
// count rate at the quantum detector after path loss and summed isolations.
struct CrosstalkEntry {
  std::string signal;
  double leaked_power_dbm = 0.0;
  double leaked_counts_per_s = 0.0;
  double limit_counts_per_s = 0.0;
  bool pass = true;
};

struct ChannelPlanReport {
  std::vector<CrosstalkEntry> entries;
  bool all_pass = true;
};

// detector_efficiency/temporal_acceptance describe the quantum receiver;
// dark_counts_per_s is the total dark rate of one receiver. A channel is
// flagged when its leaked count rate exceeds dark_fraction of the dark rate.
ChannelPlanReport validate_channel_plan(const NetworkScheme& scheme, double detector_efficiency,
                                        double temporal_acceptance, double dark_counts_per_s,
                                        double dark_fraction = 0.1);

}  // namespace qan::odn
