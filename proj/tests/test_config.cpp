#include <fstream>

#include <doctest.h>
#include <json.hpp>

#include "qan/config.hpp"

using namespace qan;
using nlohmann::json;

namespace {
const std::string kConfigDir = std::string(QAN_SOURCE_DIR) + "/configs";
}

TEST_CASE("catalog serialization round trip is exact") {
  const auto catalog = odn::default_catalog();
  const json once = cfg::catalog_to_json(catalog);
  const auto reloaded = cfg::catalog_from_json(once);
  const json twice = cfg::catalog_to_json(reloaded);
  CHECK(once == twice);
  CHECK(once.dump() == twice.dump());  // byte-for-byte stable rendering
}

TEST_CASE("shipped catalog file matches the built-in plan") {
  const json shipped = cfg::load_json(kConfigDir + "/catalog.json");
  CHECK(cfg::catalog_to_json(odn::default_catalog()) == shipped);
}

TEST_CASE("scenario parsing") {
  json doc = {{"scheme", {{"kind", "full"}, {"users", 64}, {"feeder_km", 5.0},
                          {"olt_attenuation_db", 5.0}}}};

  SUBCASE("defaults fill the remaining sections") {
    const auto s = cfg::scenario_from_json(doc);
    CHECK(s.scheme.classical_splitter.ratio == 64);
    CHECK(s.protocol.mu == 0.4);
    CHECK(s.detector.efficiency == 0.15);
    CHECK(s.raman.beta_drop > 0.0);
    CHECK(s.sweep.empty());
  }

  SUBCASE("invalid decoy ordering is rejected with a path") {
    doc["protocol"] = {{"mu", 0.1}, {"nu", 0.4}};
    try {
      cfg::scenario_from_json(doc);
      FAIL("expected a config error");
    } catch (const cfg::ConfigError& e) {
      CHECK(std::string(e.what()).find("/protocol") != std::string::npos);
    }
  }

  SUBCASE("unknown scheme kind is rejected") {
    doc["scheme"]["kind"] = "ring";
    CHECK_THROWS_AS(cfg::scenario_from_json(doc), cfg::ConfigError);
  }

  SUBCASE("dual splitter parses both ratios") {
    doc["scheme"] = {{"kind", "dual_splitter"}, {"classical_users", 32},
                     {"quantum_users", 16},    {"feeder_km", 20.0}};
    const auto s = cfg::scenario_from_json(doc);
    CHECK(s.scheme.classical_splitter.ratio == 32);
    CHECK(s.scheme.quantum_splitter.ratio == 16);
  }

  SUBCASE("inline catalog object") {
    doc["catalog"] = cfg::catalog_to_json(odn::default_catalog());
    const auto s = cfg::scenario_from_json(doc);
    CHECK(s.catalog.signals.size() == 7);
  }

  SUBCASE("catalog by file reference") {
    doc["catalog"] = kConfigDir + "/catalog.json";
    const auto s = cfg::scenario_from_json(doc);
    CHECK(s.catalog.signals.size() == 7);
    CHECK(s.catalog.signal("QKD-Sig").attenuation_db_per_km == 0.35);
  }

  SUBCASE("sweep axes expand ranges and value lists") {
    doc["sweep"] = json::array({{{"path", "/scheme/feeder_km"}, {"from", 1.0}, {"to", 3.0},
                                 {"step", 1.0}},
                                {{"path", "/scheme/olt_attenuation_db"},
                                 {"values", {3.0, 6.0, 9.0}}}});
    const auto s = cfg::scenario_from_json(doc);
    REQUIRE(s.sweep.size() == 2);
    CHECK(s.sweep[0].values == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(s.sweep[1].values == std::vector<double>{3.0, 6.0, 9.0});
  }
}

TEST_CASE("shipped scenarios load cleanly") {
  for (const char* name : {"scenario_full_64user.json", "scenario_full_16user_20km.json",
                           "scenario_dual_feeder_32user_20km.json", "scenario_postproc_demo.json",
                           "scenario_reach_sweep.json", "scenario_capacity_5km.json"}) {
    CHECK_NOTHROW(cfg::load_scenario(kConfigDir + "/" + std::string(name)));
  }
}

TEST_CASE("measurements parsing") {
  const json doc = cfg::load_json(kConfigDir + "/measurements_16user.json");
  const auto catalog = odn::default_catalog();
  const auto ms = cfg::measurements_from_json(doc, catalog);
  REQUIRE(ms.size() == 4);
  CHECK(ms[0].observed_cps == 16300.0);
  CHECK(ms[1].observed_cps == 2900.0);
  CHECK(ms[2].observed_cps == 18100.0);
  CHECK(ms[3].observed_cps == 1000.0);
}

TEST_CASE("raman params serialization") {
  const auto catalog = odn::default_catalog();
  const auto params = cfg::default_raman_params(catalog);
  const auto round = cfg::raman_from_json(cfg::raman_to_json(params));
  CHECK(round.beta_feeder == params.beta_feeder);
  CHECK(round.beta_drop == params.beta_drop);
  CHECK(round.alpha_c == params.alpha_c);
  CHECK(round.alpha_q == params.alpha_q);
}
