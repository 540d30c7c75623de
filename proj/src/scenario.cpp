#include "qan/scenario.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

using nlohmann::json;

namespace qan::scenario {

Evaluation evaluate(const cfg::Scenario& scenario) {
  Evaluation ev;
  ev.loss_db = odn::quantum_link_loss(scenario.scheme);
  ev.raman = raman::total_srs(scenario.scheme, scenario.raman, scenario.detector);
  ev.eta = keyrate::transmittance(ev.loss_db, scenario.detector);
  // The budget's per-gate probability is summed over the receiver's
  // detectors; background_yield expects the per-detector share.
  const double raman_per_detector =
      ev.raman.per_gate_probability / scenario.detector.detectors_per_receiver;
  ev.y_0 = keyrate::background_yield(raman_per_detector, scenario.detector);
  ev.observables = keyrate::gains(ev.eta, ev.y_0, scenario.protocol);
  ev.bounds = keyrate::decoy_bounds(ev.observables, scenario.protocol);
  ev.rate = keyrate::secure_key_rate(ev.observables, ev.bounds, scenario.protocol);
  return ev;
}

json evaluation_to_json(const cfg::Scenario& scenario, const Evaluation& ev) {
  json j;
  j["scheme"] = {{"kind", scenario.scheme.kind == odn::SchemeKind::Full         ? "full"
                          : scenario.scheme.kind == odn::SchemeKind::DualFeeder ? "dual_feeder"
                                                                                : "dual_splitter"},
                 {"feeder_km", scenario.scheme.feeder_km},
                 {"drop_km", scenario.scheme.drop_km},
                 {"classical_users", scenario.scheme.classical_splitter.ratio},
                 {"quantum_users", scenario.scheme.quantum_splitter.ratio},
                 {"olt_attenuation_db", scenario.scheme.olt_attenuation_db}};
  j["link"] = {{"quantum_loss_db", ev.loss_db}, {"eta", ev.eta}};
  j["raman"] = {{"s_f_mw", ev.raman.s_f_mw},
                {"s_d_mw", ev.raman.s_d_mw},
                {"count_rate_cps", ev.raman.count_rate_cps},
                {"per_gate_probability", ev.raman.per_gate_probability}};
  j["observables"] = {{"y_0", ev.y_0},
                      {"q_mu", ev.observables.q_mu},
                      {"e_mu", ev.observables.e_mu},
                      {"q_nu", ev.observables.q_nu},
                      {"e_nu", ev.observables.e_nu}};
  j["key_rate"] = {{"y_1_lower", ev.bounds.y_1_lower}, {"e_1_upper", ev.bounds.e_1_upper},
                   {"q_1", ev.bounds.q_1},             {"q_0", ev.rate.q_0},
                   {"r_per_pulse", ev.rate.r_per_pulse}, {"r_bps_per_user", ev.rate.r_bps},
                   {"feasible", ev.rate.feasible}};
  return j;
}

namespace {

void append_eval_columns(std::ostringstream& out, const Evaluation& ev) {
  out << ev.loss_db << ',' << ev.raman.count_rate_cps << ',' << ev.y_0 << ','
      << ev.observables.q_mu << ',' << ev.observables.e_mu << ',' << ev.observables.q_nu << ','
      << ev.observables.e_nu << ',' << ev.bounds.y_1_lower << ',' << ev.bounds.e_1_upper << ','
      << ev.rate.r_per_pulse << ',' << ev.rate.r_bps << ',' << (ev.rate.feasible ? 1 : 0);
}

constexpr const char* kEvalColumns =
    "loss_db,raman_cps,y_0,q_mu,e_mu,q_nu,e_nu,y_1_lower,e_1_upper,"
    "r_per_pulse,r_bps_per_user,feasible";

}  // namespace

std::string evaluation_csv(const Evaluation& ev) {
  std::ostringstream out;
  out.precision(9);
  out << "# qanplan plan csv v1\n" << kEvalColumns << '\n';
  append_eval_columns(out, ev);
  out << '\n';
  return out.str();
}

double max_feeder_distance(const cfg::Scenario& scenario, double search_limit_km) {
  cfg::Scenario probe = scenario;
  auto feasible_at = [&probe](double feeder_km) {
    probe.scheme.feeder_km = feeder_km;
    return evaluate(probe).rate.feasible;
  };
  if (!feasible_at(0.0)) return 0.0;
  double lo = 0.0;
  double hi = search_limit_km;
  if (feasible_at(hi)) return hi;
  while (hi - lo > 0.01) {
    const double mid = 0.5 * (lo + hi);
    (feasible_at(mid) ? lo : hi) = mid;
  }
  return lo;
}

std::vector<CapacityRow> capacity_table(const cfg::Scenario& scenario,
                                        const std::vector<int>& user_counts) {
  std::vector<CapacityRow> rows;
  for (int n : user_counts) {
    cfg::Scenario point = scenario;
    point.scheme.classical_splitter =
        odn::PowerSplitter{n, odn::splitter_loss(n, scenario.catalog)};
    point.scheme.quantum_splitter = point.scheme.classical_splitter;
    rows.push_back({n, evaluate(point)});
  }
  return rows;
}

namespace {

void enumerate_grid(const std::vector<cfg::SweepAxis>& axes, size_t axis,
                    std::vector<double>& current, const json& base,
                    std::vector<SweepRow>& rows) {
  if (axis == axes.size()) {
    json doc = base;
    for (size_t i = 0; i < axes.size(); ++i)
      doc[json::json_pointer(axes[i].path)] = current[i];
    doc.erase("sweep");
    SweepRow row;
    row.axis_values = current;
    try {
      row.eval = evaluate(cfg::scenario_from_json(doc));
    } catch (const std::exception& e) {
      row.valid = false;
      row.error = e.what();
    }
    rows.push_back(std::move(row));
    return;
  }
  for (double v : axes[axis].values) {
    current[axis] = v;
    enumerate_grid(axes, axis + 1, current, base, rows);
  }
}

}  // namespace

std::vector<SweepRow> run_sweep(const json& scenario_doc) {
  const cfg::Scenario base = cfg::scenario_from_json(scenario_doc);
  if (base.sweep.empty()) throw cfg::ConfigError("/sweep: sweep requires at least one axis");
  for (const auto& axis : base.sweep)
    if (!scenario_doc.contains(json::json_pointer(axis.path)))
      throw cfg::ConfigError("/sweep: axis path " + axis.path + " not present in the scenario");
  std::vector<SweepRow> rows;
  std::vector<double> current(base.sweep.size(), 0.0);
  enumerate_grid(base.sweep, 0, current, scenario_doc, rows);
  return rows;
}

std::string sweep_csv(const json& scenario_doc, const std::vector<SweepRow>& rows) {
  const cfg::Scenario base = cfg::scenario_from_json(scenario_doc);
  std::ostringstream out;
  out << "# qanplan sweep csv v1\n";
  out << "# axes:";
  for (const auto& axis : base.sweep) out << ' ' << axis.path;
  out << '\n';
  for (const auto& axis : base.sweep) {
    std::string name = axis.path;
    for (auto& ch : name)
      if (ch == '/') ch = '.';
    out << "axis" << name << ',';
  }
  out << kEvalColumns << ",error\n";
  out.precision(9);
  for (const auto& row : rows) {
    for (double v : row.axis_values) out << v << ',';
    if (row.valid) {
      append_eval_columns(out, row.eval);
      out << ",\n";
    } else {
      std::string msg = row.error;
      for (auto& ch : msg)
        if (ch == ',' || ch == '\n') ch = ';';
      out << ",,,,,,,,,,,0," << msg << '\n';
    }
  }
  return out.str();
}

mc::SimConfig sim_config(const cfg::Scenario& scenario, uint64_t pulses, uint64_t seed) {
  mc::SimConfig cfg;
  cfg.pulses = pulses;
  cfg.seed = seed;
  cfg.protocol = scenario.protocol;
  cfg.detector = scenario.detector;
  const Evaluation ev = evaluate(scenario);
  cfg.link_loss_db = ev.loss_db;
  cfg.raman_per_gate = ev.raman.per_gate_probability / scenario.detector.detectors_per_receiver;
  return cfg;
}

ValidationReport validate_against_mc(const cfg::Scenario& scenario, uint64_t pulses,
                                     uint64_t seed) {
  const Evaluation analytic = evaluate(scenario);
  ValidationReport report;
  report.outcome = mc::simulate(sim_config(scenario, pulses, seed));

  auto add = [&report](const char* name, double analytic_value, const mc::Estimate& est) {
    ObservableDeviation dev;
    dev.name = name;
    dev.analytic = analytic_value;
    dev.simulated = est.value;
    dev.sigma = est.sigma;
    if (est.trials == 0) {
      dev.deviation_sigmas = 0.0;  // nothing observed and nothing expected
    } else if (est.sigma > 0.0) {
      dev.deviation_sigmas = std::fabs(est.value - analytic_value) / est.sigma;
    }
    report.worst_sigmas = std::max(report.worst_sigmas, dev.deviation_sigmas);
    report.deviations.push_back(dev);
  };

  add("q_mu", analytic.observables.q_mu, report.outcome.q_mu);
  add("e_mu", analytic.observables.e_mu, report.outcome.e_mu);
  add("q_nu", analytic.observables.q_nu, report.outcome.q_nu);
  add("e_nu", analytic.observables.e_nu, report.outcome.e_nu);
  add("q_vacuum", analytic.y_0, report.outcome.q_vac);
  report.pass = report.worst_sigmas <= 3.0;
  return report;
}

}  // namespace qan::scenario
