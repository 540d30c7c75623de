#include "qan/scheme.hpp"

#include <cmath>
#include <stdexcept>

#include "qan/units.hpp"

namespace qan::odn {

void NetworkScheme::validate() const {
  if (feeder_km < 0.0) throw std::invalid_argument("scheme: feeder length must be >= 0");
  if (drop_km < 0.0) throw std::invalid_argument("scheme: drop length must be >= 0");
  if (olt_attenuation_db < 0.0) throw std::invalid_argument("scheme: OLT attenuation must be >= 0");
  classical_splitter.validate();
  quantum_splitter.validate();
  if (kind != SchemeKind::DualSplitter &&
      (quantum_splitter.ratio != classical_splitter.ratio ||
       quantum_splitter.insertion_loss_db != classical_splitter.insertion_loss_db))
    throw std::invalid_argument("scheme: separate quantum splitter requires the dual-splitter kind");
  catalog.validate();
  for (const auto& name : quantum_head_stages) catalog.stage(name);
  for (const auto& name : classical_head_stages) catalog.stage(name);
  for (const auto& name : quantum_tail_stages) catalog.stage(name);
}

namespace {

NetworkScheme base_scheme(const Catalog& catalog, double feeder_km, double drop_km,
                          double olt_attenuation_db) {
  NetworkScheme s;
  s.catalog = catalog;
  s.feeder_km = feeder_km;
  s.drop_km = drop_km;
  s.olt_attenuation_db = olt_attenuation_db;
  return s;
}

PowerSplitter splitter_for(const Catalog& catalog, int users) {
  return PowerSplitter{users, splitter_loss(users, catalog)};
}

}  // namespace

NetworkScheme make_full_scheme(const Catalog& catalog, int users, double feeder_km, double drop_km,
                               double olt_attenuation_db) {
  NetworkScheme s = base_scheme(catalog, feeder_km, drop_km, olt_attenuation_db);
  s.kind = SchemeKind::Full;
  s.classical_splitter = s.quantum_splitter = splitter_for(catalog, users);
  s.quantum_head_stages = {"mux"};
  s.classical_head_stages = {"mux"};
  s.quantum_tail_stages = {"demux"};
  s.validate();
  return s;
}

NetworkScheme make_dual_feeder_scheme(const Catalog& catalog, int users, double feeder_km,
                                      double drop_km, double olt_attenuation_db) {
  NetworkScheme s = base_scheme(catalog, feeder_km, drop_km, olt_attenuation_db);
  s.kind = SchemeKind::DualFeeder;
  s.classical_splitter = s.quantum_splitter = splitter_for(catalog, users);
  s.quantum_head_stages = {"quantum_combiner"};
  s.classical_head_stages = {"mux", "filter"};
  s.quantum_tail_stages = {"demux"};
  s.validate();
  return s;
}

NetworkScheme make_dual_splitter_scheme(const Catalog& catalog, int classical_users,
                                        int quantum_users, double feeder_km, double drop_km,
                                        double olt_attenuation_db) {
  NetworkScheme s = base_scheme(catalog, feeder_km, drop_km, olt_attenuation_db);
  s.kind = SchemeKind::DualSplitter;
  s.classical_splitter = splitter_for(catalog, classical_users);
  s.quantum_splitter = splitter_for(catalog, quantum_users);
  s.quantum_head_stages = {"quantum_combiner"};
  s.classical_head_stages = {"mux", "filter"};
  s.quantum_tail_stages = {"demux"};
  s.validate();
  return s;
}

double quantum_link_loss(const NetworkScheme& scheme) {
  const double att = scheme.catalog.signal(kQuantumSignal).attenuation_db_per_km;
  double loss = 0.0;
  for (const auto& name : scheme.quantum_head_stages)
    loss += scheme.catalog.stage(name).insertion_loss(kQuantumSignal);
  loss += att * scheme.feeder_km;
  loss += scheme.quantum_splitter.insertion_loss_db;
  loss += att * scheme.drop_km;
  for (const auto& name : scheme.quantum_tail_stages)
    loss += scheme.catalog.stage(name).insertion_loss(kQuantumSignal);
  return loss;
}

double olt_power_at(const NetworkScheme& scheme, PathPoint point) {
  const auto& olt = scheme.catalog.signal(kOlt10G);
  if (!olt.launch_power_dbm)
    throw std::invalid_argument("olt_power_at: OLT signal has no launch power");
  double dbm = *olt.launch_power_dbm - scheme.olt_attenuation_db;
  for (const auto& name : scheme.classical_head_stages)
    dbm -= scheme.catalog.stage(name).insertion_loss(kOlt10G);
  if (point == PathPoint::FeederEntry) return dbm;
  dbm -= olt.attenuation_db_per_km * scheme.feeder_km;
  dbm -= scheme.classical_splitter.insertion_loss_db;
  if (point == PathPoint::SplitterExit) return dbm;
  return dbm;  // drop entry: any combining loss is folded into the stage config
}

ChannelPlanReport validate_channel_plan(const NetworkScheme& scheme, double detector_efficiency,
                                        double temporal_acceptance, double dark_counts_per_s,
                                        double dark_fraction) {
  ChannelPlanReport report;
  const double limit = dark_fraction * dark_counts_per_s;
  for (const auto& sig : scheme.catalog.signals) {
    // Audited interferers are the classical channels co-propagating with the
    // quantum signal. Upstream channels counter-propagate; they reach the
    // quantum port only through reflection paths outside this model.
    if (!sig.launch_power_dbm || sig.direction != Direction::Downstream) continue;
    CrosstalkEntry entry;
    entry.signal = sig.name;
    double dbm = *sig.launch_power_dbm - scheme.olt_attenuation_db;
    double isolation = 0.0;
    for (const auto& name : scheme.classical_head_stages) {
      const auto& stage = scheme.catalog.stage(name);
      dbm -= stage.insertion_loss(sig.name);
      isolation += stage.isolation(sig.name, kQuantumSignal);
    }
    dbm -= sig.attenuation_db_per_km * scheme.feeder_km;
    dbm -= scheme.classical_splitter.insertion_loss_db;
    dbm -= sig.attenuation_db_per_km * scheme.drop_km;
    for (const auto& name : scheme.quantum_tail_stages)
      isolation += scheme.catalog.stage(name).isolation(sig.name, kQuantumSignal);
    entry.leaked_power_dbm = dbm - isolation;

    const double watts = dbm_to_mw(entry.leaked_power_dbm) * 1e-3;
    const double photon_rate = watts / photon_energy_j(sig.wavelength_center_nm);
    entry.leaked_counts_per_s = photon_rate * detector_efficiency * temporal_acceptance;
    entry.limit_counts_per_s = limit;
    entry.pass = entry.leaked_counts_per_s <= limit;
    report.all_pass = report.all_pass && entry.pass;
    report.entries.push_back(entry);
  }
  return report;
}

}  // namespace qan::odn
