#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qan::odn {

enum class Direction { Downstream, Upstream };

// One classical or quantum wavelength channel of the coexistence plan.
struct SignalSpec {
  std::string name;
  double wavelength_center_nm = 0.0;
  double wavelength_min_nm = 0.0;
  double wavelength_max_nm = 0.0;
  Direction direction = Direction::Downstream;
  double data_rate_gbps = 0.0;              // 0 for quantum / sync channels
  double attenuation_db_per_km = 0.0;
  std::optional<double> launch_power_dbm;   // absent for quantum signals

  void validate() const;
};

struct PowerSplitter {
  int ratio = 1;                 // number of user ports
  double insertion_loss_db = 0;  // measured loss, >= ideal 10*log10(ratio)

  void validate() const;
  double excess_loss_db() const;
};

enum class StageKind { Mux, Demux, Filter };

// A WDM multiplexing stage: per-signal insertion losses plus the isolation it
// provides between an interfering signal and a victim signal.
struct WdmStage {
  std::string name;
  StageKind kind = StageKind::Mux;
  std::map<std::string, double> insertion_loss_db;                    // signal -> dB
  std::map<std::string, std::map<std::string, double>> isolation_db;  // interferer -> victim -> dB

  void validate() const;
  double insertion_loss(const std::string& signal) const;  // throws if missing
  double isolation(const std::string& interferer, const std::string& victim) const;  // 0 if absent
};

// The measured signal plan, splitter family, and WDM stages of the network.
struct Catalog {
  std::vector<SignalSpec> signals;
  std::map<int, double> splitter_loss_db;  // ratio -> measured insertion loss
  std::map<std::string, WdmStage> stages;  // "mux", "demux", "filter", "quantum_combiner"

  void validate() const;
  const SignalSpec& signal(const std::string& name) const;
  const WdmStage& stage(const std::string& name) const;
};

// The shipped plan: signal table and component losses of the reference
// 10G-EPON + QKD deployment this tool models.
Catalog default_catalog();

// Splitter insertion loss for a port count. Catalog ratios return the measured
// value; other powers of two get ideal loss plus excess interpolated linearly
// in log2(n). n == 1 is the degenerate no-split case (0 dB). Non-powers of two
// are rejected.
double splitter_loss(int n, const Catalog& catalog);

// Well-known signal labels used by the default catalog.
inline constexpr const char* kQuantumSignal = "QKD-Sig";
inline constexpr const char* kSyncSignal = "QKD-Syn";
inline constexpr const char* kOlt10G = "10G-OLT";
inline constexpr const char* kOlt1G = "1G-OLT";

}  // namespace qan::odn
