#include "qan/catalog.hpp"

#include <cmath>
#include <stdexcept>

namespace qan::odn {

void SignalSpec::validate() const {
  if (name.empty()) throw std::invalid_argument("signal: name must not be empty");
  if (attenuation_db_per_km <= 0.0)
    throw std::invalid_argument("signal " + name + ": attenuation must be > 0");
  if (wavelength_center_nm < wavelength_min_nm || wavelength_center_nm > wavelength_max_nm)
    throw std::invalid_argument("signal " + name + ": center wavelength outside range");
}

void PowerSplitter::validate() const {
  if (ratio < 1) throw std::invalid_argument("splitter: ratio must be >= 1");
  if (insertion_loss_db + 1e-9 < 10.0 * std::log10(static_cast<double>(ratio)))
    throw std::invalid_argument("splitter: measured loss below the ideal split loss");
}

double PowerSplitter::excess_loss_db() const {
  return insertion_loss_db - 10.0 * std::log10(static_cast<double>(ratio));
}

void WdmStage::validate() const {
  for (const auto& [signal, loss] : insertion_loss_db)
    if (loss < 0.0) throw std::invalid_argument("stage " + name + ": negative loss for " + signal);
  for (const auto& [interferer, victims] : isolation_db)
    for (const auto& [victim, iso] : victims)
      if (iso < 0.0)
        throw std::invalid_argument("stage " + name + ": negative isolation " + interferer +
                                    " -> " + victim);
}

double WdmStage::insertion_loss(const std::string& signal) const {
  auto it = insertion_loss_db.find(signal);
  if (it == insertion_loss_db.end())
    throw std::out_of_range("stage " + name + ": no insertion loss for signal " + signal);
  return it->second;
}

double WdmStage::isolation(const std::string& interferer, const std::string& victim) const {
  auto it = isolation_db.find(interferer);
  if (it == isolation_db.end()) return 0.0;
  auto jt = it->second.find(victim);
  return jt == it->second.end() ? 0.0 : jt->second;
}

void Catalog::validate() const {
  for (const auto& s : signals) s.validate();
  for (const auto& [ratio, loss] : splitter_loss_db) {
    PowerSplitter sp{ratio, loss};
    sp.validate();
  }
  for (const auto& [name, stage] : stages) {
    (void)name;
    stage.validate();
  }
}

const SignalSpec& Catalog::signal(const std::string& name) const {
  for (const auto& s : signals)
    if (s.name == name) return s;
  throw std::out_of_range("catalog: unknown signal " + name);
}

const WdmStage& Catalog::stage(const std::string& name) const {
  auto it = stages.find(name);
  if (it == stages.end()) throw std::out_of_range("catalog: unknown stage " + name);
  return it->second;
}

Catalog default_catalog() {
  Catalog c;
  // Signal plan. The two OLT channels leave the central office as one
  // aggregate with 7.2 dBm average power; that aggregate value is carried on
  // both rows and used per-signal as a worst-case launch for crosstalk.
  c.signals = {
      {"1G-OLT", 1490.0, 1480.0, 1500.0, Direction::Downstream, 1.25, 0.31, 7.2},
      {"10G-OLT", 1577.0, 1575.0, 1580.0, Direction::Downstream, 10.3125, 0.31, 7.2},
      {"10G-ONU", 1270.0, 1260.0, 1280.0, Direction::Upstream, 10.3125, 0.57, 5.7},
      {"1G-ONU-U2", 1310.0, 1260.0, 1360.0, Direction::Upstream, 1.25, 0.48, 2.0},
      {"1G-ONU-U3", 1310.0, 1260.0, 1360.0, Direction::Upstream, 1.25, 0.48, 3.4},
      {"QKD-Sig", 1550.12, 1550.12, 1550.12, Direction::Downstream, 0.0, 0.35, std::nullopt},
      {"QKD-Syn", 1569.59, 1569.59, 1569.59, Direction::Downstream, 0.0, 0.34, std::nullopt},
  };

  c.splitter_loss_db = {{4, 7.4}, {8, 10.5}, {16, 13.6}, {32, 17.1}, {64, 20.2}};

  WdmStage mux;
  mux.name = "mux";
  mux.kind = StageKind::Mux;
  mux.insertion_loss_db = {{"1G-OLT", 0.9}, {"10G-OLT", 0.9},   {"10G-ONU", 1.0},
                           {"1G-ONU-U2", 0.7}, {"1G-ONU-U3", 0.7}, {"QKD-Sig", 0.8},
                           {"QKD-Syn", 0.8}};
  // Suppression of the classical lasers' in-quantum-band emission at the head
  // end: 23 dB for the 1G-OLT (FWDM), 50 dB for the 10G-OLT (CWDM band-stop,
  // a typical module figure; not a measured value -> configurable).
  mux.isolation_db = {{"1G-OLT", {{"QKD-Sig", 23.0}}}, {"10G-OLT", {{"QKD-Sig", 50.0}}}};

  WdmStage demux;
  demux.name = "demux";
  demux.kind = StageKind::Demux;
  demux.insertion_loss_db = {{"1G-OLT", 1.0}, {"10G-OLT", 1.0},   {"10G-ONU", 0.5},
                             {"1G-ONU-U2", 0.5}, {"1G-ONU-U3", 0.5}, {"QKD-Sig", 3.4},
                             {"QKD-Syn", 1.0}};
  demux.isolation_db = {{"1G-OLT", {{"QKD-Sig", 107.0}}},
                        {"10G-OLT", {{"QKD-Sig", 71.0}}},
                        {"10G-ONU", {{"QKD-Sig", 107.0}}},
                        {"1G-ONU-U2", {{"QKD-Sig", 107.0}}},
                        {"1G-ONU-U3", {{"QKD-Sig", 107.0}}}};

  // FWDM+CWDM filter used on the classical feeder of the partial schemes. Its
  // OLT insertion loss is not a measured figure; 1.0 dB default, configurable.
  WdmStage filter;
  filter.name = "filter";
  filter.kind = StageKind::Filter;
  filter.insertion_loss_db = {{"1G-OLT", 1.0}, {"10G-OLT", 1.0}};
  filter.isolation_db = {{"1G-OLT", {{"QKD-Sig", 23.0}}}, {"10G-OLT", {{"QKD-Sig", 50.0}}}};

  // Head-end combining of the quantum Sig/Syn pair onto the dedicated feeder
  // of the partial schemes (same DWDM chain as in the mux module).
  WdmStage qcomb;
  qcomb.name = "quantum_combiner";
  qcomb.kind = StageKind::Mux;
  qcomb.insertion_loss_db = {{"QKD-Sig", 0.8}, {"QKD-Syn", 0.8}};

  c.stages = {{"mux", mux}, {"demux", demux}, {"filter", filter}, {"quantum_combiner", qcomb}};
  c.validate();
  return c;
}

double splitter_loss(int n, const Catalog& catalog) {
  if (n < 1) throw std::invalid_argument("splitter_loss: n must be >= 1");
  if (n == 1) return 0.0;
  if ((n & (n - 1)) != 0) throw std::invalid_argument("splitter_loss: n must be a power of two");

  auto it = catalog.splitter_loss_db.find(n);
  if (it != catalog.splitter_loss_db.end()) return it->second;

  const double ideal = 10.0 * std::log10(static_cast<double>(n));
  if (catalog.splitter_loss_db.empty()) return ideal;

  // Excess loss interpolated linearly in log2(n) over the measured family,
  // extrapolating from the end segments, never below zero.
  std::vector<std::pair<double, double>> knots;  // (log2 ratio, excess)
  for (const auto& [ratio, loss] : catalog.splitter_loss_db)
    knots.emplace_back(std::log2(static_cast<double>(ratio)),
                       loss - 10.0 * std::log10(static_cast<double>(ratio)));
  const double x = std::log2(static_cast<double>(n));
  double excess;
  if (knots.size() == 1) {
    excess = knots.front().second;
  } else {
    size_t hi = 1;
    while (hi + 1 < knots.size() && knots[hi].first < x) ++hi;
    const auto& [x0, y0] = knots[hi - 1];
    const auto& [x1, y1] = knots[hi];
    excess = y0 + (y1 - y0) * (x - x0) / (x1 - x0);
  }
  return ideal + std::max(0.0, excess);
}

}  // namespace qan::odn
