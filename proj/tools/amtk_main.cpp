// Command-line front end: clearance / allocate / design / simulate.

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "amtk/design.hpp"
#include "amtk/errors.hpp"
#include "amtk/params_io.hpp"
#include "amtk/scenario.hpp"
#include "amtk/slipstream.hpp"
#include "amtk/wrench_map.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitAbort = 2;
constexpr int kExitConfig = 3;

json vec_to_json(const amtk::Vec3d& v) { return json::array({v.x(), v.y(), v.z()}); }

int cmd_clearance(const std::string& layout_path, int i, int j) {
  const amtk::ParamFile params = amtk::load_params(layout_path);
  const amtk::ThrusterLayout layout = amtk::make_layout(params);
  auto pose_of = [&](int idx) -> const amtk::ThrusterPose& {
    const int n = static_cast<int>(layout.primary.size());
    if (idx < 1 || idx > n + 1) throw amtk::ConfigError("thruster index out of range");
    return idx <= n ? layout.primary[idx - 1] : layout.auxiliary;
  };
  const amtk::SlipstreamVolume vol_i{pose_of(i)};
  const amtk::SlipstreamVolume vol_j{pose_of(j)};
  const amtk::ClearanceResult res = amtk::pairwise_clearance(vol_i, vol_j);
  json out;
  out["distance_m"] = res.distance;
  out["p_i"] = vec_to_json(res.p_i);
  out["p_j"] = vec_to_json(res.p_j);
  out["converged"] = res.converged;
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

int cmd_allocate(const std::string& layout_path, const std::string& wrench_str) {
  std::istringstream ss(wrench_str);
  amtk::Vec6d request;
  for (int k = 0; k < 6; ++k) {
    if (!(ss >> request(k))) {
      throw amtk::ConfigError("--wrench needs six numbers \"Fx Fy Fz Tx Ty Tz\"");
    }
  }
  const amtk::ParamFile params = amtk::load_params(layout_path);
  amtk::validate_body(params.body);
  const amtk::ThrusterLayout layout = amtk::make_layout(params);

  const amtk::Vec6d w_r = amtk::required_wrench(request.head<3>(), request.tail<3>(),
                                                amtk::Vec3d::Zero(), params.body, layout);
  const amtk::WrenchMap map6 = amtk::build_wrench_map(layout, 6);
  const amtk::Vec6d lambda6 = amtk::solve_thrust(map6, w_r);
  const auto lambda7 =
      amtk::redistribute(lambda6, map6, amtk::auxiliary_column(layout.primary));
  const amtk::SaturationReport sat = amtk::check_saturation(lambda7, layout.max_thrust);

  json out;
  out["lambda6"] = std::vector<double>(lambda6.data(), lambda6.data() + 6);
  out["lambda7"] = std::vector<double>(lambda7.data(), lambda7.data() + 7);
  out["kappa"] = map6.condition_number;
  json saturated = json::array();
  for (int idx : sat.over_limit) saturated.push_back(idx + 1);
  for (int idx : sat.negative) saturated.push_back(idx + 1);
  out["saturated"] = saturated;
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

amtk::OptimizerConfig load_optimizer_config(const json& j) {
  amtk::OptimizerConfig cfg;
  if (j.contains("n_lhs")) cfg.n_lhs = j["n_lhs"].get<int>();
  if (j.contains("top_k")) cfg.top_k = j["top_k"].get<int>();
  if (j.contains("gps_budget")) cfg.gps_budget = j["gps_budget"].get<int>();
  if (j.contains("mesh_init")) cfg.mesh_init = j["mesh_init"].get<double>();
  if (j.contains("mesh_tol")) cfg.mesh_tol = j["mesh_tol"].get<double>();
  if (j.contains("position_bound")) cfg.position_bound = j["position_bound"].get<double>();
  if (j.contains("epsilon1")) cfg.epsilon1 = j["epsilon1"].get<double>();
  if (j.contains("epsilon2")) cfg.epsilon2 = j["epsilon2"].get<double>();
  if (j.contains("effector_radius")) cfg.effector_radius = j["effector_radius"].get<double>();
  if (j.contains("kappa_max")) cfg.kappa_max = j["kappa_max"].get<double>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("parallel")) cfg.parallel = j["parallel"].get<bool>();
  return cfg;
}

int cmd_design(const std::string& config_path, std::uint64_t seed, bool seed_set,
               const std::string& out_path) {
  std::ifstream in(config_path);
  if (!in) throw amtk::ConfigError("cannot open design config: " + config_path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw amtk::ConfigError(std::string("malformed design config: ") + e.what());
  }
  amtk::OptimizerConfig cfg = load_optimizer_config(j);
  if (seed_set) cfg.seed = seed;

  const auto base_dir = std::filesystem::path(config_path).parent_path();
  std::string params_path = j.at("params").get<std::string>();
  if (!std::filesystem::path(params_path).is_absolute()) {
    params_path = (base_dir / params_path).string();
  }
  amtk::ParamFile base = amtk::load_params(params_path);

  const amtk::DesignResult result = amtk::run_design(cfg, &std::cout);
  const amtk::DecodedDesign design = amtk::decode_design(result.best.x);

  base.thruster_positions.clear();
  base.thruster_directions.clear();
  for (const auto& t : design.thrusters) {
    base.thruster_positions.push_back(t.r);
    base.thruster_directions.push_back(t.dir);
  }
  base.body.r_effector = design.r_effector;
  base.structure_volume_diag = result.best.eval.objective;
  amtk::save_params(base, out_path);

  const amtk::CandidateEvaluation& ev = result.best.eval;
  json report;
  report["objective"] = ev.objective;
  report["sigma_min"] = ev.sigma_min;
  report["kappa"] = ev.kappa;
  report["pairwise_clearances_m"] =
      std::vector<double>(ev.pairwise_clearances.begin(), ev.pairwise_clearances.end());
  report["effector_clearances_m"] =
      std::vector<double>(ev.effector_clearances.begin(), ev.effector_clearances.end());
  report["aux_dir_residual"] = ev.aux_dir_residual;
  report["aux_moment_residual"] = ev.aux_moment_residual;
  report["feasible"] = ev.feasible;
  report["lhs_feasible"] = result.lhs_feasible;
  report["seed"] = cfg.seed;
  std::ofstream rep(out_path + ".report.json");
  rep << report.dump(2) << "\n";
  return kExitOk;
}

int cmd_simulate(const std::vector<std::string>& scenario_paths, double dt, bool dt_set,
                 double duration, bool duration_set, std::uint64_t seed, bool seed_set,
                 const std::string& out_dir, bool out_set) {
  auto run_one = [&](const std::string& path, const std::string& out_override) {
    amtk::Scenario sc = amtk::load_scenario(path);
    if (dt_set) sc.dt = dt;
    if (duration_set) sc.duration = duration;
    if (seed_set) sc.seed = seed;
    if (!out_override.empty()) sc.out_dir = out_override;
    const amtk::RunResult result = amtk::run_scenario(sc);
    amtk::emit_outputs(result, sc.out_dir);
    std::cout << "scenario " << path << ": " << (result.summary.completed ? "completed" : "ABORTED")
              << ", outputs in " << sc.out_dir << "\n";
    return result.summary.completed ? kExitOk : kExitAbort;
  };

  if (scenario_paths.size() == 1) {
    return run_one(scenario_paths[0], out_set ? out_dir : "");
  }
  // Sweep: independent scenarios across workers, isolated output directories.
  std::vector<std::future<int>> futs;
  futs.reserve(scenario_paths.size());
  for (std::size_t k = 0; k < scenario_paths.size(); ++k) {
    std::string sub;
    if (out_set) {
      sub = (std::filesystem::path(out_dir) / ("scenario_" + std::to_string(k))).string();
    }
    futs.push_back(std::async(std::launch::async, run_one, scenario_paths[k], sub));
  }
  int rc = kExitOk;
  for (auto& f : futs) rc = std::max(rc, f.get());
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Aerial-manipulator design, allocation and simulation toolkit"};
  app.require_subcommand(1);

  std::string layout_path;
  std::vector<int> pair_idx;
  auto* clearance = app.add_subcommand("clearance", "Minimum distance between two rotor volumes");
  clearance->add_option("--layout", layout_path, "layout/parameter JSON")->required();
  clearance->add_option("--pair", pair_idx, "thruster indices i j (1-based)")
      ->expected(2)
      ->required();

  std::string alloc_layout, wrench_str;
  auto* allocate = app.add_subcommand("allocate", "Thrust allocation for an actuation request");
  allocate->add_option("--layout", alloc_layout, "layout/parameter JSON")->required();
  allocate->add_option("--wrench", wrench_str, "\"Fx Fy Fz Tx Ty Tz\"")->required();

  std::string design_config, design_out = "layout.json";
  std::uint64_t design_seed = 0;
  auto* design = app.add_subcommand("design", "Geometry optimization (LHS + pattern search)");
  design->add_option("--config", design_config, "optimizer config JSON")->required();
  auto* seed_opt = design->add_option("--seed", design_seed, "RNG seed override");
  design->add_option("--out", design_out, "output layout path");

  std::vector<std::string> scenario_paths;
  double sim_dt = 1e-3, sim_duration = 30.0;
  std::uint64_t sim_seed = 0;
  std::string sim_out;
  auto* simulate = app.add_subcommand("simulate", "Closed-loop trajectory tracking run");
  simulate->add_option("--scenario", scenario_paths, "scenario JSON (repeat to sweep)")
      ->required();
  auto* dt_opt = simulate->add_option("--dt", sim_dt, "integrator step, s");
  auto* dur_opt = simulate->add_option("--duration", sim_duration, "run length, s");
  auto* sseed_opt = simulate->add_option("--seed", sim_seed, "seed override");
  auto* out_opt = simulate->add_option("--out", sim_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*clearance) return cmd_clearance(layout_path, pair_idx[0], pair_idx[1]);
    if (*allocate) return cmd_allocate(alloc_layout, wrench_str);
    if (*design) return cmd_design(design_config, design_seed, seed_opt->count() > 0, design_out);
    if (*simulate) {
      return cmd_simulate(scenario_paths, sim_dt, dt_opt->count() > 0, sim_duration,
                          dur_opt->count() > 0, sim_seed, sseed_opt->count() > 0, sim_out,
                          out_opt->count() > 0);
    }
  } catch (const amtk::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
