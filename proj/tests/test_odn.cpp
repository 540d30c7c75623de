#include <cmath>

#include <doctest.h>

#include "qan/keyrate.hpp"
#include "qan/scheme.hpp"
#include "qan/units.hpp"

using namespace qan;
using namespace qan::odn;

TEST_CASE("default catalog reproduces the signal plan") {
  const Catalog c = default_catalog();
  const auto& sig = c.signal(kQuantumSignal);
  CHECK(sig.wavelength_center_nm == 1550.12);
  CHECK(sig.attenuation_db_per_km == 0.35);
  CHECK_FALSE(sig.launch_power_dbm.has_value());

  const auto& olt10 = c.signal(kOlt10G);
  CHECK(olt10.wavelength_center_nm == 1577.0);
  CHECK(olt10.attenuation_db_per_km == 0.31);
  CHECK(olt10.data_rate_gbps == 10.3125);
  CHECK(olt10.launch_power_dbm == 7.2);

  const auto& olt1 = c.signal(kOlt1G);
  CHECK(olt1.wavelength_center_nm == 1490.0);
  CHECK(olt1.attenuation_db_per_km == 0.31);
  CHECK(olt1.data_rate_gbps == 1.25);

  CHECK(c.signal("10G-ONU").attenuation_db_per_km == 0.57);
  CHECK(c.signal("1G-ONU-U2").attenuation_db_per_km == 0.48);
  CHECK(c.signal("1G-ONU-U2").launch_power_dbm == 2.0);
  CHECK(c.signal("1G-ONU-U3").launch_power_dbm == 3.4);
  CHECK(c.signal(kSyncSignal).wavelength_center_nm == 1569.59);
  CHECK(c.signal(kSyncSignal).attenuation_db_per_km == 0.34);

  // mux/demux insertion losses and isolations of the module plan
  CHECK(c.stage("mux").insertion_loss(kQuantumSignal) == 0.8);
  CHECK(c.stage("demux").insertion_loss(kQuantumSignal) == 3.4);
  CHECK(c.stage("mux").insertion_loss(kOlt10G) == 0.9);
  CHECK(c.stage("demux").isolation(kOlt1G, kQuantumSignal) == 107.0);
  CHECK(c.stage("demux").isolation(kOlt10G, kQuantumSignal) == 71.0);
  CHECK(c.stage("demux").isolation("10G-ONU", kQuantumSignal) == 107.0);
  CHECK(c.stage("mux").isolation(kOlt1G, kQuantumSignal) == 23.0);
}

TEST_CASE("splitter loss family") {
  const Catalog c = default_catalog();
  CHECK(splitter_loss(4, c) == 7.4);
  CHECK(splitter_loss(8, c) == 10.5);
  CHECK(splitter_loss(16, c) == 13.6);
  CHECK(splitter_loss(32, c) == 17.1);
  CHECK(splitter_loss(64, c) == 20.2);
  CHECK(splitter_loss(1, c) == 0.0);
  CHECK_THROWS(splitter_loss(12, c));
  CHECK_THROWS(splitter_loss(0, c));

  // measured loss never beats the ideal split; excess stays non-negative for
  // interpolated and extrapolated ratios too
  for (int n : {2, 4, 8, 16, 32, 64, 128, 256}) {
    const double loss = splitter_loss(n, c);
    CHECK(loss >= 10.0 * std::log10(static_cast<double>(n)) - 1e-12);
  }
  for (const auto& [ratio, loss] : c.splitter_loss_db) {
    PowerSplitter sp{ratio, loss};
    CHECK(sp.excess_loss_db() >= 0.0);
  }
}

TEST_CASE("quantum link loss composition") {
  const Catalog c = default_catalog();

  SUBCASE("64-user full scheme, 5 km feeder") {
    const auto s = make_full_scheme(c, 64, 5.0, 1.0);
    CHECK(quantum_link_loss(s) == doctest::Approx(26.5).epsilon(0.1 / 26.5));
  }
  SUBCASE("16-user full scheme, zero lengths") {
    const auto s = make_full_scheme(c, 16, 0.0, 0.0);
    CHECK(quantum_link_loss(s) == doctest::Approx(0.8 + 13.6 + 3.4).epsilon(1e-12));
  }
  SUBCASE("empty path") {
    NetworkScheme s;
    s.catalog = c;
    s.feeder_km = 0.0;
    s.drop_km = 0.0;
    s.validate();
    CHECK(quantum_link_loss(s) == 0.0);
  }
}

TEST_CASE("link loss monotonicity") {
  const Catalog c = default_catalog();
  double previous = -1.0;
  for (double feeder : {0.0, 1.0, 5.0, 20.0}) {
    const double loss = quantum_link_loss(make_full_scheme(c, 16, feeder, 1.0));
    CHECK(loss > previous);
    previous = loss;
  }
  previous = -1.0;
  for (double drop : {0.0, 0.5, 1.0, 2.0}) {
    const double loss = quantum_link_loss(make_full_scheme(c, 16, 5.0, drop));
    CHECK(loss > previous);
    previous = loss;
  }
  previous = -1.0;
  for (int users : {4, 8, 16, 32, 64}) {
    const double loss = quantum_link_loss(make_full_scheme(c, users, 5.0, 1.0));
    CHECK(loss > previous);
    previous = loss;
  }
}

TEST_CASE("path additivity: dB sum equals product of transmittances") {
  const Catalog c = default_catalog();
  const auto s = make_full_scheme(c, 64, 5.0, 1.0);
  const double att = c.signal(kQuantumSignal).attenuation_db_per_km;
  const double segments_db[] = {c.stage("mux").insertion_loss(kQuantumSignal),
                                att * s.feeder_km,
                                s.quantum_splitter.insertion_loss_db,
                                att * s.drop_km,
                                c.stage("demux").insertion_loss(kQuantumSignal)};
  double sum_db = 0.0;
  double product = 1.0;
  for (double seg : segments_db) {
    sum_db += seg;
    product *= db_to_linear(seg);
  }
  CHECK(sum_db == doctest::Approx(quantum_link_loss(s)).epsilon(1e-12));
  CHECK(db_to_linear(sum_db) == doctest::Approx(product).epsilon(1e-9));
}

TEST_CASE("olt power along the path") {
  const Catalog c = default_catalog();

  SUBCASE("full scheme feeder entry") {
    const auto s = make_full_scheme(c, 16, 5.0, 1.0, 0.0);
    CHECK(olt_power_at(s, PathPoint::FeederEntry) == doctest::Approx(7.2 - 0.9).epsilon(1e-12));
  }
  SUBCASE("attenuation is additive") {
    const auto s0 = make_full_scheme(c, 16, 5.0, 1.0, 0.0);
    const auto s9 = make_full_scheme(c, 16, 5.0, 1.0, 9.0);
    CHECK(olt_power_at(s9, PathPoint::FeederEntry) ==
          doctest::Approx(olt_power_at(s0, PathPoint::FeederEntry) - 9.0).epsilon(1e-12));
  }
  SUBCASE("dual feeder drop entry") {
    const auto s = make_dual_feeder_scheme(c, 16, 20.0, 1.0, 0.0);
    const double filter = c.stage("filter").insertion_loss(kOlt10G);
    CHECK(olt_power_at(s, PathPoint::DropEntry) ==
          doctest::Approx(7.2 - 0.9 - 20.0 * 0.31 - 13.6 - filter).epsilon(1e-12));
  }
  SUBCASE("splitter exit sits between feeder entry and drop entry") {
    const auto s = make_full_scheme(c, 16, 5.0, 1.0, 0.0);
    const double entry = olt_power_at(s, PathPoint::FeederEntry);
    CHECK(olt_power_at(s, PathPoint::SplitterExit) ==
          doctest::Approx(entry - 5.0 * 0.31 - 13.6).epsilon(1e-12));
  }
}

TEST_CASE("channel plan crosstalk audit") {
  const Catalog c = default_catalog();
  keyrate::DetectorParams det;

  SUBCASE("reference full scheme passes") {
    const auto s = make_full_scheme(c, 64, 5.0, 1.0);
    const auto report = validate_channel_plan(s, det.efficiency, det.temporal_acceptance(),
                                              det.dark_counts_per_s());
    CHECK(report.all_pass);
    CHECK(report.entries.size() == 2);  // the co-propagating OLT channels
    for (const auto& entry : report.entries) CHECK(entry.leaked_counts_per_s > 0.0);
  }
  SUBCASE("no isolation flags every classical channel") {
    Catalog stripped = c;
    for (auto& [name, stage] : stripped.stages) {
      (void)name;
      stage.isolation_db.clear();
    }
    const auto s = make_full_scheme(stripped, 64, 5.0, 1.0);
    const auto report = validate_channel_plan(s, det.efficiency, det.temporal_acceptance(),
                                              det.dark_counts_per_s());
    CHECK_FALSE(report.all_pass);
    for (const auto& entry : report.entries) CHECK_FALSE(entry.pass);
  }
  SUBCASE("quantum-only plan yields an empty report") {
    Catalog quantum_only = c;
    quantum_only.signals = {c.signal(kQuantumSignal), c.signal(kSyncSignal)};
    NetworkScheme s;
    s.catalog = quantum_only;
    const auto report = validate_channel_plan(s, det.efficiency, det.temporal_acceptance(),
                                              det.dark_counts_per_s());
    CHECK(report.entries.empty());
    CHECK(report.all_pass);
  }
}

TEST_CASE("scheme invariants") {
  const Catalog c = default_catalog();
  CHECK_THROWS(make_full_scheme(c, 16, -1.0, 1.0));

  NetworkScheme s = make_full_scheme(c, 16, 5.0, 1.0);
  s.quantum_splitter = PowerSplitter{32, splitter_loss(32, c)};
  CHECK_THROWS(s.validate());  // separate splitters only in the dual-splitter kind

  const auto ds = make_dual_splitter_scheme(c, 32, 16, 20.0, 1.0);
  CHECK(ds.classical_splitter.ratio == 32);
  CHECK(ds.quantum_splitter.ratio == 16);
}
