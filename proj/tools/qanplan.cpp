// qanplan: plan, sweep, calibrate, validate, and post-process a downstream
// quantum access network coexisting with a 10G-EPON.
//
// Exit codes: 0 success, 1 validation/config error, 2 oracle mismatch.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qan/config.hpp"
#include "qan/postproc.hpp"
#include "qan/philox.hpp"
#include "qan/scenario.hpp"
#include "qan/units.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitOracleMismatch = 2;

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void emit(const fs::path& out_dir, const std::string& name, const json& j) {
  if (out_dir.empty()) return;
  fs::create_directories(out_dir);
  write_text(out_dir / name, j.dump(2) + "\n");
}

int cmd_plan(const std::string& scenario_path, const fs::path& out_dir, const std::string& format) {
  const auto scenario = qan::cfg::load_scenario(scenario_path);
  const auto ev = qan::scenario::evaluate(scenario);
  const json j = qan::scenario::evaluation_to_json(scenario, ev);
  if (format == "json") {
    std::cout << j.dump(2) << '\n';
  } else if (format == "csv") {
    std::cout << qan::scenario::evaluation_csv(ev);
  } else {
    std::cout << "quantum link loss : " << ev.loss_db << " dB\n"
              << "raman count rate  : " << ev.raman.count_rate_cps << " cps\n"
              << "background yield  : " << ev.y_0 << " /pulse\n"
              << "Q_mu / E_mu       : " << ev.observables.q_mu << " / " << ev.observables.e_mu
              << '\n'
              << "Q_nu / E_nu       : " << ev.observables.q_nu << " / " << ev.observables.e_nu
              << '\n'
              << "Y1 lower / e1 up  : " << ev.bounds.y_1_lower << " / " << ev.bounds.e_1_upper
              << '\n'
              << "secret rate       : " << ev.rate.r_per_pulse << " /pulse, " << ev.rate.r_bps
              << " bit/s per user\n"
              << "feasible          : " << (ev.rate.feasible ? "yes" : "no") << '\n';
  }
  emit(out_dir, "plan.json", j);
  return kExitOk;
}

int cmd_sweep(const std::string& scenario_path, const fs::path& out_dir,
              const std::string& format) {
  const json doc = qan::cfg::load_json(scenario_path);
  const auto rows = qan::scenario::run_sweep(doc);
  std::string rendered;
  std::string filename = "sweep.csv";
  if (format == "json") {
    json out = json::array();
    const auto base = qan::cfg::scenario_from_json(doc);
    for (const auto& row : rows) {
      json r;
      for (size_t i = 0; i < base.sweep.size(); ++i) r["axes"][base.sweep[i].path] = row.axis_values[i];
      if (row.valid) {
        r["loss_db"] = row.eval.loss_db;
        r["r_bps_per_user"] = row.eval.rate.r_bps;
        r["e_mu"] = row.eval.observables.e_mu;
        r["feasible"] = row.eval.rate.feasible;
      } else {
        r["error"] = row.error;
      }
      out.push_back(r);
    }
    rendered = out.dump(2) + "\n";
    filename = "sweep.json";
  } else {
    rendered = qan::scenario::sweep_csv(doc, rows);
  }
  if (out_dir.empty()) {
    std::cout << rendered;
  } else {
    fs::create_directories(out_dir);
    write_text(out_dir / filename, rendered);
    std::cout << "wrote " << (out_dir / filename).string() << " (" << rows.size() << " rows)\n";
  }
  return kExitOk;
}

int cmd_calibrate(const std::string& measurements_path, const fs::path& out_dir) {
  const json doc = qan::cfg::load_json(measurements_path);
  const auto catalog = doc.contains("catalog") ? qan::cfg::catalog_from_json(doc.at("catalog"))
                                               : qan::odn::default_catalog();
  const auto measurements = qan::cfg::measurements_from_json(doc, catalog);
  const auto base = qan::cfg::default_raman_params(catalog);
  qan::keyrate::DetectorParams det;  // reference receiver
  const auto result = qan::raman::calibrate(measurements, base, det);

  json j;
  j["raman"] = qan::cfg::raman_to_json(result.params);
  j["residuals_rel"] = result.residuals_rel;
  j["max_abs_residual_rel"] = result.max_abs_residual_rel;
  std::cout << j.dump(2) << '\n';
  emit(out_dir, "calibration.json", j);
  return kExitOk;
}

int cmd_validate(const std::string& scenario_path, uint64_t pulses, uint64_t seed,
                 const fs::path& out_dir) {
  const auto scenario = qan::cfg::load_scenario(scenario_path);
  const auto report = qan::scenario::validate_against_mc(scenario, pulses, seed);
  json j;
  j["pulses"] = pulses;
  j["seed"] = seed;
  j["observables"] = json::array();
  for (const auto& dev : report.deviations) {
    std::cout << dev.name << ": analytic " << dev.analytic << ", simulated " << dev.simulated
              << " (sigma " << dev.sigma << ", deviation " << dev.deviation_sigmas << " sigma)\n";
    j["observables"].push_back({{"name", dev.name},
                                {"analytic", dev.analytic},
                                {"simulated", dev.simulated},
                                {"sigma", dev.sigma},
                                {"deviation_sigmas", dev.deviation_sigmas}});
  }
  j["worst_sigmas"] = report.worst_sigmas;
  j["pass"] = report.pass;
  std::cout << (report.pass ? "PASS" : "MISMATCH") << ": worst deviation " << report.worst_sigmas
            << " sigma\n";
  emit(out_dir, "validate.json", j);
  return report.pass ? kExitOk : kExitOracleMismatch;
}

int cmd_postproc(const std::string& scenario_path, uint64_t pulses, uint64_t seed,
                 const fs::path& out_dir) {
  const auto scenario = qan::cfg::load_scenario(scenario_path);
  const auto outcome = qan::mc::simulate(qan::scenario::sim_config(scenario, pulses, seed));
  if (outcome.sifted_sender.size() < 8) {
    std::cerr << "not enough sifted bits (" << outcome.sifted_sender.size()
              << ") for post-processing; increase --pulses\n";
    return kExitValidation;
  }

  qan::post::SiftedKeyPair pair;
  pair.sender = outcome.sifted_sender;
  pair.receiver = outcome.sifted_receiver;
  pair.qber_estimate = outcome.sifted_qber();

  qan::post::WinnowConfig wcfg;
  wcfg.seed = seed ^ 0x57494E4Fu;
  const auto recon = qan::post::winnow_reconcile(pair, wcfg);

  json j;
  j["sifted_bits"] = pair.sender.size();
  j["sifted_qber"] = pair.qber_estimate;
  j["winnow"] = {{"passed", recon.passed},
                 {"iterations", recon.iterations_used},
                 {"corrections", recon.corrections},
                 {"leakage_bits", recon.leakage_bits},
                 {"discarded_bits", recon.discarded_bits},
                 {"reconciled_bits", recon.corrected.size()}};

  if (!recon.passed) {
    std::cerr << "winnow failed to reconcile; session aborted\n";
    std::cout << j.dump(2) << '\n';
    emit(out_dir, "postproc.json", j);
    return kExitValidation;
  }

  const auto bounds = qan::keyrate::decoy_bounds(
      qan::scenario::evaluate(scenario).observables, scenario.protocol);
  const auto analytic = qan::scenario::evaluate(scenario);
  double sp_fraction = 1.0;
  double e1 = pair.qber_estimate;
  if (bounds.usable && analytic.observables.q_mu > 0.0) {
    sp_fraction = (bounds.q_1 + analytic.rate.q_0) / analytic.observables.q_mu;
    e1 = bounds.e_1_upper;
  }
  // Disclosed parities and syndromes are paid for by the privacy-maintenance
  // discards, so charging the full disclosure count against the pre-discard
  // sifted length covers both the lost bits and the hash comparisons. The
  // compressed key can never exceed the reconciled material.
  const long final_len = std::min<long>(
      qan::post::final_key_length(pair.sender.size(), pair.qber_estimate, recon.leakage_bits,
                                  scenario.protocol, std::min(sp_fraction, 1.0), e1),
      static_cast<long>(recon.corrected.size()));

  j["final_key_bits"] = final_len;
  j["single_photon_fraction"] = sp_fraction;
  // throughput over the simulated wall-clock span, next to the model's rate
  const double span_s = static_cast<double>(pulses) / scenario.protocol.pulse_rate_hz;
  j["realized_bps"] = static_cast<double>(final_len) / span_s;
  j["analytic_bps"] = analytic.rate.r_bps;

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    qan::post::write_key_file((out_dir / "sifted_sender.key").string(), pair.sender);
    qan::post::write_key_file((out_dir / "sifted_receiver.key").string(), pair.receiver);
    if (final_len > 0) {
      qan::post::BitVec seed_bits(recon.corrected.size() + static_cast<size_t>(final_len) - 1);
      qan::rng::PhiloxStream stream(seed ^ 0x544F4550u, 0);
      for (auto& b : seed_bits) b = static_cast<uint8_t>(stream.next_u32() & 1u);
      const auto final_key =
          qan::post::toeplitz_pa(recon.corrected, static_cast<size_t>(final_len), seed_bits);
      qan::post::write_key_file((out_dir / "final.key").string(), final_key);
    }
  }

  std::cout << j.dump(2) << '\n';
  emit(out_dir, "postproc.json", j);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"downstream QKD access network planner over a 10G-EPON"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir;
  std::string format = "table";
  uint64_t seed = 1;
  uint64_t pulses = 1000000;

  auto add_common = [&](CLI::App* cmd, bool needs_scenario = true) {
    if (needs_scenario)
      cmd->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    cmd->add_option("--out", out_dir, "output directory for result artifacts");
    cmd->add_option("--seed", seed, "random seed");
    cmd->add_option("--pulses", pulses, "number of simulated pulses");
    cmd->add_option("--format", format, "stdout format: table|json|csv");
  };

  auto* plan = app.add_subcommand("plan", "single-point link, noise, and key-rate report");
  add_common(plan);
  auto* sweep = app.add_subcommand("sweep", "Cartesian sweep over the scenario's axes");
  add_common(sweep);
  auto* calibrate =
      app.add_subcommand("calibrate", "fit SRS amplitudes against measured count rates");
  std::string measurements_path;
  calibrate->add_option("--measurements", measurements_path, "measurements JSON file")->required();
  calibrate->add_option("--out", out_dir, "output directory for result artifacts");
  auto* validate = app.add_subcommand("validate", "compare the analytic model with Monte Carlo");
  add_common(validate);
  auto* postproc = app.add_subcommand("postproc",
                                      "simulate, reconcile (Winnow), and compress (Toeplitz)");
  add_common(postproc);
  auto* check = app.add_subcommand("check", "validate a scenario file and exit");
  add_common(check);

  CLI11_PARSE(app, argc, argv);

  try {
    if (plan->parsed()) return cmd_plan(scenario_path, out_dir, format);
    if (sweep->parsed()) return cmd_sweep(scenario_path, out_dir, format);
    if (calibrate->parsed()) return cmd_calibrate(measurements_path, out_dir);
    if (validate->parsed()) return cmd_validate(scenario_path, pulses, seed, out_dir);
    if (postproc->parsed()) return cmd_postproc(scenario_path, pulses, seed, out_dir);
    if (check->parsed()) {
      qan::cfg::load_scenario(scenario_path);
      std::cout << "scenario ok\n";
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitOk;
}
