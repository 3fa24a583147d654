// Command-line front end: single runs and the exp1/exp2 sweep harnesses.
// Exit codes: 0 success, 1 scenario error, 2 runtime error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wlansim/wlansim.hpp"

namespace {

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file \"" + out_path + "\"");
  out << text;
}

struct Overrides {
  std::string policy;
  std::optional<double> beta;
  std::optional<double> duration;
};

wlansim::Scenario load_with_overrides(const std::string& path, const Overrides& ov) {
  wlansim::Scenario sc = wlansim::load_scenario_file(path);
  if (!ov.policy.empty()) {
    sc.policy = wlansim::policy_kind_from_string(ov.policy);
    sc.policy_params.guard_enabled = sc.policy == wlansim::PolicyKind::SnrAwareLba;
  }
  if (ov.beta) sc.policy_params.beta = *ov.beta;
  if (ov.duration) sc.sim.duration_s = *ov.duration;
  sc.policy_params.validate();
  sc.sim.validate();
  return sc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Overlapping 802.11 cells: association policies and video QoS"};
  app.require_subcommand(1);

  Overrides ov;
  std::string scenario_path, out_path;
  std::vector<double> snr_axis, load_axis;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  std::optional<std::uint64_t> seed;
  int workers = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--scenario", scenario_path, "Scenario file (JSON)")->required();
    cmd->add_option("--out", out_path, "Output CSV file (default: stdout)");
    cmd->add_option("--policy", ov.policy, "Override policy: strongest-snr|lba|snr-lba");
    cmd->add_option("--beta", ov.beta, "Override load-balancing criterion beta");
    cmd->add_option("--duration", ov.duration, "Override simulated duration (seconds)");
  };

  CLI::App* run_cmd = app.add_subcommand("run", "Run the scenario once");
  add_common(run_cmd);
  run_cmd->add_option("--seed", seed, "Override RNG seed");

  CLI::App* exp1_cmd = app.add_subcommand("exp1", "SNR x load sweep of the video sink");
  add_common(exp1_cmd);
  exp1_cmd->add_option("--snr", snr_axis, "Video link SNR values (dB)")->required()->delimiter(',');
  exp1_cmd->add_option("--load", load_axis, "Background load values (kbps)")
      ->required()
      ->delimiter(',');
  exp1_cmd->add_option("--seeds", seeds, "Seed list")->delimiter(',');
  exp1_cmd->add_option("--workers", workers, "Worker threads (0 = all cores)");

  CLI::App* exp2_cmd = app.add_subcommand("exp2", "Unbalanced vs lba vs snr-lba comparison");
  add_common(exp2_cmd);
  exp2_cmd->add_option("--snr", snr_axis, "Target-AP SNR values for the moved station (dB)")
      ->required()
      ->delimiter(',');
  exp2_cmd->add_option("--seeds", seeds, "Seed list")->delimiter(',');
  exp2_cmd->add_option("--workers", workers, "Worker threads (0 = all cores)");

  CLI11_PARSE(app, argc, argv);

  try {
    std::vector<wlansim::CsvRow> rows;
    if (run_cmd->parsed()) {
      rows = wlansim::run_single(load_with_overrides(scenario_path, ov), seed);
    } else {
      wlansim::ExperimentSpec spec;
      spec.scenario = load_with_overrides(scenario_path, ov);
      spec.snr_axis = snr_axis;
      spec.load_axis = load_axis;
      spec.seeds = seeds;
      spec.workers = workers;
      if (exp1_cmd->parsed()) {
        spec.comparison = wlansim::ComparisonMode::None;
        rows = wlansim::run_exp1(spec);
      } else {
        spec.comparison = wlansim::ComparisonMode::BalancedVsUnbalanced;
        rows = wlansim::run_exp2(spec);
      }
    }
    write_output(wlansim::emit_csv(rows), out_path);
  } catch (const wlansim::ScenarioError& e) {
    std::cerr << "scenario error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
