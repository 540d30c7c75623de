#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "qan/config.hpp"
#include "qan/mc.hpp"

namespace qan::scenario {

// Single-point evaluation: link budget, noise budget, observables, key rate.
struct Evaluation {
  double loss_db = 0.0;
  raman::RamanBudget raman;
  double eta = 0.0;
  double y_0 = 0.0;
  keyrate::ChannelObservables observables;
  keyrate::DecoyBounds bounds;
  keyrate::KeyRateResult rate;
};

Evaluation evaluate(const cfg::Scenario& scenario);
nlohmann::json evaluation_to_json(const cfg::Scenario& scenario, const Evaluation& eval);
std::string evaluation_csv(const Evaluation& eval);  // header comment + one row

// Largest feasible feeder length for the scenario's scheme, by bisection to
// 0.01 km; 0 when already infeasible back-to-back.
double max_feeder_distance(const cfg::Scenario& scenario, double search_limit_km = 200.0);

struct CapacityRow {
  int users = 0;
  Evaluation eval;
};

// Key rate and feasibility across the splitter family at fixed geometry.
std::vector<CapacityRow> capacity_table(const cfg::Scenario& scenario,
                                        const std::vector<int>& user_counts = {4, 8, 16, 32, 64});

// Cartesian sweep over the scenario's axes. Rows come out in lexicographic
// axis order and the CSV rendering is byte-stable for identical inputs.
struct SweepRow {
  std::vector<double> axis_values;
  Evaluation eval;
  bool valid = true;          // false when the point failed validation
  std::string error;
};

std::vector<SweepRow> run_sweep(const nlohmann::json& scenario_doc);
std::string sweep_csv(const nlohmann::json& scenario_doc, const std::vector<SweepRow>& rows);

// Monte Carlo vs analytic comparison for one scenario.
struct ObservableDeviation {
  std::string name;
  double analytic = 0.0;
  double simulated = 0.0;
  double sigma = 0.0;
  double deviation_sigmas = 0.0;
};

struct ValidationReport {
  std::vector<ObservableDeviation> deviations;
  mc::SimOutcome outcome;
  double worst_sigmas = 0.0;
  bool pass = true;  // every observable within 3 sigma
};

ValidationReport validate_against_mc(const cfg::Scenario& scenario, uint64_t pulses, uint64_t seed);

// SimConfig wired from a scenario (link loss and per-detector noise filled in).
mc::SimConfig sim_config(const cfg::Scenario& scenario, uint64_t pulses, uint64_t seed);

}  // namespace qan::scenario
