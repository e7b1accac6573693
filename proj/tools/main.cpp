#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <future>
#include <iostream>

#include "nls2d/diagnostics.hpp"
#include "nls2d/io.hpp"

namespace fs = std::filesystem;
using namespace nls2d;

namespace {

int cmd_ground_state(double p, double tol, double r_max, long n,
                     const std::string& out_dir) {
  GridPtr grid = (r_max > 0 && n > 0) ? make_grid(r_max, n) : nullptr;
  const GroundStateProfile g = shoot_ground_state(p, tol, grid);
  fs::create_directories(out_dir);
  const std::string json = ground_state_json(g);
  write_text(out_dir + "/ground_state.json", json);
  write_ground_state_csv(out_dir + "/ground_state.csv", g);
  std::cout << json;
  return 0;
}

int cmd_classify(const std::string& config_path) {
  const ExperimentConfig cfg = parse_config_file(config_path);
  GridPtr grid = make_grid(cfg.grid_r_max, cfg.grid_n);
  const ComplexRadialField u0 = build_initial_data(cfg, grid);
  const GroundStateProfile g = shoot_ground_state(cfg.p);
  const ThresholdReport rep = classify(u0, cfg.p, g);
  std::cout << threshold_json(rep);
  return rep.below ? 0 : 2;
}

int cmd_evolve(const std::string& config_path) {
  const ExperimentConfig cfg = parse_config_file(config_path);
  GridPtr grid = make_grid(cfg.grid_r_max, cfg.grid_n);
  const ComplexRadialField u0 = build_initial_data(cfg, grid);
  EvolveConfig ecfg = cfg.evolve;
  ecfg.p = cfg.p;
  const Trajectory traj = evolve(u0, ecfg);
  fs::create_directories(cfg.output_dir);
  write_monitors_csv(cfg.output_dir + "/monitors.csv", traj);
  if (cfg.snapshots == SnapshotOutput::Csv || cfg.snapshots == SnapshotOutput::Both)
    write_trajectory_csv(cfg.output_dir + "/snapshots.csv", traj);
  if (cfg.snapshots == SnapshotOutput::Binary || cfg.snapshots == SnapshotOutput::Both)
    write_trajectory_binary(cfg.output_dir + "/snapshots.bin", traj);
  const ConservationReport rep = conservation_report(traj, cfg.boundary_mass_tol);
  nlohmann::json j;
  j["mass_drift"] = rep.max_mass_drift;
  j["energy_drift"] = rep.max_energy_drift;
  j["max_boundary_fraction"] = rep.max_boundary_fraction;
  j["boundary_flagged"] = rep.boundary_flagged;
  j["blowup"] = traj.blowup;
  std::cout << j.dump(2) << "\n";
  return traj.blowup ? 2 : 0;
}

int cmd_morawetz(const std::string& config_path) {
  ExperimentConfig cfg = parse_config_file(config_path);
  const ExperimentResult res = run_experiment(cfg);
  if (!res.have_morawetz) {
    std::cerr << "morawetz series not available: " << res.verdict.notes << "\n";
    return res.trajectory.blowup ? 2 : 1;
  }
  nlohmann::json j;
  j["alpha_fitted"] = std::isnan(res.morawetz.alpha_fitted)
                          ? nlohmann::json(nullptr)
                          : nlohmann::json(res.morawetz.alpha_fitted);
  j["alpha_theory"] = res.morawetz.alpha_theory;
  j["sigma"] = res.morawetz.sigma;
  j["eta_measured"] = res.morawetz.eta_measured;
  j["C_action_bound"] = res.morawetz.c_action_bound;
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_run(const std::string& config_path, const std::string& preset) {
  ExperimentConfig cfg;
  if (!preset.empty())
    cfg = preset_config(preset);
  else
    cfg = parse_config_file(config_path);
  const ExperimentResult res = run_experiment(cfg);
  std::cout << verdict_json(res.verdict);
  return outcome_exit_code(res.verdict.outcome);
}

int cmd_sweep(const std::string& dir) {
  std::vector<fs::path> configs;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    const auto ext = e.path().extension();
    if (ext == ".cfg" || ext == ".json") configs.push_back(e.path());
  }
  if (configs.empty()) {
    std::cerr << "sweep: no .cfg or .json configs in " << dir << "\n";
    return 1;
  }
  std::sort(configs.begin(), configs.end());

  // each experiment writes to its own output directory; run them concurrently
  std::vector<std::future<std::pair<std::string, std::string>>> jobs;
  for (const auto& path : configs) {
    jobs.push_back(std::async(std::launch::async, [path]() {
      try {
        const ExperimentResult res = run_experiment(parse_config_file(path.string()));
        return std::make_pair(path.filename().string(),
                              std::string(outcome_name(res.verdict.outcome)));
      } catch (const std::exception& e) {
        return std::make_pair(path.filename().string(),
                              std::string("error: ") + e.what());
      }
    }));
  }
  bool any_error = false;
  for (auto& j : jobs) {
    const auto [name, outcome] = j.get();
    std::cout << name << ": " << outcome << "\n";
    if (outcome.rfind("error", 0) == 0) any_error = true;
  }
  return any_error ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radial 2d focusing NLS: ground states, threshold "
               "classification, conservative evolution and Morawetz "
               "diagnostics"};
  app.require_subcommand(1);

  double p = 3.0, tol = 1e-12, r_max = 0.0;
  long n = 0;
  std::string out_dir = ".", config_path, preset, sweep_dir;

  auto* gs = app.add_subcommand("ground-state", "Compute the ground state Q");
  gs->add_option("--p", p, "nonlinearity exponent (>= 2)")->required();
  gs->add_option("--tol", tol, "shooting bracket tolerance");
  gs->add_option("--r-max", r_max, "profile grid radius (default 16)");
  gs->add_option("--n", n, "profile grid nodes (default 65536)");
  gs->add_option("--out", out_dir, "output directory");

  auto* cl = app.add_subcommand("classify", "Threshold classification of initial data");
  cl->add_option("--config", config_path, "experiment config")->required();

  auto* ev = app.add_subcommand("evolve", "Time integration with conservation monitors");
  ev->add_option("--config", config_path, "experiment config")->required();

  auto* mo = app.add_subcommand("morawetz", "Evolve and accumulate the Morawetz series");
  mo->add_option("--config", config_path, "experiment config")->required();

  auto* rn = app.add_subcommand("run", "Full experiment pipeline with verdict");
  rn->add_option("--config", config_path, "experiment config");
  rn->add_option("--preset", preset, "built-in preset name");

  auto* sw = app.add_subcommand("sweep", "Run every config in a directory");
  sw->add_option("--config-dir", sweep_dir, "directory of configs")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gs->parsed()) return cmd_ground_state(p, tol, r_max, n, out_dir);
    if (cl->parsed()) return cmd_classify(config_path);
    if (ev->parsed()) return cmd_evolve(config_path);
    if (mo->parsed()) return cmd_morawetz(config_path);
    if (rn->parsed()) {
      if (config_path.empty() && preset.empty()) {
        std::cerr << "run: need --config or --preset\n";
        return 1;
      }
      return cmd_run(config_path, preset);
    }
    if (sw->parsed()) return cmd_sweep(sweep_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
