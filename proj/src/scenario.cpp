#include "amtk/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "amtk/errors.hpp"
#include "amtk/kinematics.hpp"
#include "amtk/wrench_map.hpp"

namespace amtk {

using nlohmann::json;

Vec6d DisturbanceSpec::eval(double t) const {
  Vec6d d = Vec6d::Zero();
  if (!enabled) return d;
  for (int i = 0; i < 6; ++i) {
    const Term& term = terms[i];
    d(i) = term.offset + term.amp * std::sin(term.omega * t + term.phase);
  }
  return d;
}

namespace {

Vec6d read_vec6(const json& arr) {
  Vec6d v;
  for (int i = 0; i < 6; ++i) v(i) = arr.at(i).get<double>();
  return v;
}

Vec3d read_vec3(const json& arr) {
  return Vec3d(arr.at(0).get<double>(), arr.at(1).get<double>(), arr.at(2).get<double>());
}

ReferenceSpec parse_reference(const json& j) {
  ReferenceSpec spec;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "hold") {
    spec.kind = ReferenceSpec::Kind::Hold;
    spec.hold_pose = read_vec6(j.at("pose"));
  } else if (kind == "helix") {
    spec.kind = ReferenceSpec::Kind::Helix;
    spec.radius = j.at("radius").get<double>();
    spec.angular_rate = j.at("angular_rate").get<double>();
    if (j.contains("center")) {
      spec.center_x = j["center"].at(0).get<double>();
      spec.center_y = j["center"].at(1).get<double>();
    }
    spec.z_start = j.at("z_start").get<double>();
    spec.climb_rate = j.at("climb_rate").get<double>();
    spec.orientation = read_vec3(j.at("orientation"));
  } else if (kind == "polynomial") {
    spec.kind = ReferenceSpec::Kind::Polynomial;
    const auto& axes = j.at("coefficients");
    for (int i = 0; i < 6; ++i) {
      for (const auto& c : axes.at(i)) spec.poly[i].push_back(c.get<double>());
    }
  } else {
    throw ConfigError("unknown reference kind: " + kind);
  }
  return spec;
}

}  // namespace

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("malformed JSON in " + path + ": " + e.what());
  }

  Scenario sc;
  const auto base = std::filesystem::path(path).parent_path();
  auto resolve = [&](const std::string& p) {
    std::filesystem::path fp(p);
    return fp.is_absolute() ? fp.string() : (base / fp).string();
  };
  try {
    sc.params_path = resolve(j.at("params").get<std::string>());
    sc.gains_path = resolve(j.at("gains").get<std::string>());
    sc.reference = parse_reference(j.at("reference"));
    if (j.contains("disturbance")) {
      const auto& dj = j["disturbance"];
      const std::string kind = dj.at("kind").get<std::string>();
      if (kind == "harmonic") {
        sc.disturbance.enabled = true;
        const auto& terms = dj.at("terms");
        for (int i = 0; i < 6; ++i) {
          const auto& tj = terms.at(i);
          auto& term = sc.disturbance.terms[i];
          if (tj.contains("offset")) term.offset = tj["offset"].get<double>();
          if (tj.contains("amp")) term.amp = tj["amp"].get<double>();
          if (tj.contains("omega")) term.omega = tj["omega"].get<double>();
          if (tj.contains("phase")) term.phase = tj["phase"].get<double>();
        }
      } else if (kind != "none") {
        throw ConfigError("unknown disturbance kind: " + kind);
      }
    }
    if (j.contains("effectiveness")) sc.effectiveness = read_vec6(j["effectiveness"]);
    if (j.contains("initial_estimates")) {
      sc.initial_estimates.delta_hat = read_vec6(j["initial_estimates"].at("delta_hat"));
      sc.initial_estimates.theta_hat = read_vec6(j["initial_estimates"].at("theta_hat"));
    }
    if (j.contains("initial")) {
      const auto& ij = j["initial"];
      Pose6 pose;
      pose.p = read_vec3(ij.at("p"));
      pose.rpy = read_vec3(ij.at("rpy"));
      sc.initial_pose = pose;
      Twist6 twist;
      twist.v = read_vec3(ij.at("v"));
      twist.omega = read_vec3(ij.at("omega"));
      sc.initial_twist = twist;
    }
    if (j.contains("dt")) sc.dt = j["dt"].get<double>();
    if (j.contains("duration")) sc.duration = j["duration"].get<double>();
    if (j.contains("seed")) sc.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("decimation")) sc.decimation = j["decimation"].get<int>();
    if (j.contains("out_dir")) sc.out_dir = resolve(j["out_dir"].get<std::string>());
  } catch (const json::exception& e) {
    throw ConfigError("bad scenario file " + path + ": " + e.what());
  }
  if (!(sc.dt > 0.0) || !(sc.duration > 0.0)) throw ConfigError("dt and duration must be positive");
  if (sc.decimation < 1) throw ConfigError("decimation must be >= 1");
  return sc;
}

namespace {

std::vector<std::string> make_header() {
  std::vector<std::string> h = {"t",  "x_e", "y_e", "z_e", "phi", "theta", "psi",
                                "vx", "vy",  "vz",  "wx",  "wy",  "wz"};
  for (int i = 1; i <= 7; ++i) h.push_back("l" + std::to_string(i));
  for (const char* base : {"z1_", "z2_", "dhat_", "that_"}) {
    for (int i = 1; i <= 6; ++i) h.push_back(base + std::to_string(i));
  }
  return h;
}

constexpr double kPitchAbortMargin = 0.01;  // rad inside the pi/2 singularity

}  // namespace

RunResult run_scenario(const Scenario& scenario) {
  const ParamFile params = load_params(scenario.params_path);
  validate_body(params.body);
  const ThrusterLayout layout = make_layout(params);
  validate_layout(layout);
  const ControllerGains gains = load_gains(scenario.gains_path);

  const DisturbanceSpec dist = scenario.disturbance;
  DisturbanceFn dist_fn;
  if (dist.enabled) {
    dist_fn = [dist](const Pose6&, const Twist6&, double t) { return dist.eval(t); };
  }
  const DynamicsModel model =
      DynamicsModel::create(params.body, layout, scenario.effectiveness, dist_fn);
  const WrenchMap map6 = build_wrench_map(layout, 6);
  const Vec6d aux_col = auxiliary_column(layout.primary);

  SimState state;
  state.pose = scenario.initial_pose.value_or(Pose6{params.body.r_effector, Vec3d::Zero()});
  state.twist = scenario.initial_twist.value_or(Twist6{});
  state.t = 0.0;
  EstimatorState est = scenario.initial_estimates;

  RunResult result;
  result.header = make_header();
  SimSummary& sum = result.summary;
  sum.dt = scenario.dt;
  sum.duration = scenario.duration;
  sum.seed = scenario.seed;
  sum.theta_hat_min = est.theta_hat.minCoeff();
  sum.theta_hat_max = est.theta_hat.maxCoeff();

  const long n_steps = std::lround(scenario.duration / scenario.dt);
  Vec6d z1 = Vec6d::Zero();

  for (long k = 0; k <= n_steps; ++k) {
    state.t = k * scenario.dt;
    if (std::abs(state.pose.rpy.y()) >= M_PI / 2.0 - kPitchAbortMargin) {
      sum.aborted = true;
      sum.abort_time = state.t;
      sum.abort_reason = "pitch reached the singular region";
      break;
    }

    const ReferenceSignal ref = reference(state.t, scenario.reference);
    ControlStep ctrl;
    try {
      ctrl = compute_control(state, ref, est, gains, model);
    } catch (const NearSingularError& e) {
      sum.aborted = true;
      sum.abort_time = state.t;
      sum.abort_reason = e.what();
      break;
    }
    z1 = ctrl.errors.z1;
    const Eigen::Matrix<double, 7, 1> lambda7 = redistribute(ctrl.lambda6, map6, aux_col);

    if (k % scenario.decimation == 0) {
      std::vector<double> row;
      row.reserve(result.header.size());
      row.push_back(state.t);
      for (int i = 0; i < 3; ++i) row.push_back(state.pose.p(i));
      for (int i = 0; i < 3; ++i) row.push_back(state.pose.rpy(i));
      for (int i = 0; i < 3; ++i) row.push_back(state.twist.v(i));
      for (int i = 0; i < 3; ++i) row.push_back(state.twist.omega(i));
      for (int i = 0; i < 7; ++i) row.push_back(lambda7(i));
      for (int i = 0; i < 6; ++i) row.push_back(ctrl.errors.z1(i));
      for (int i = 0; i < 6; ++i) row.push_back(ctrl.errors.z2(i));
      for (int i = 0; i < 6; ++i) row.push_back(est.delta_hat(i));
      for (int i = 0; i < 6; ++i) row.push_back(est.theta_hat(i));
      result.rows.push_back(std::move(row));

      if ((lambda7.array() > layout.max_thrust).any()) ++sum.over_limit_steps;
    }

    sum.max_position_error = std::max(sum.max_position_error, z1.head<3>().norm());
    sum.max_orientation_error = std::max(sum.max_orientation_error, z1.tail<3>().norm());
    sum.max_command_thrust = std::max(sum.max_command_thrust, ctrl.lambda6.cwiseAbs().maxCoeff());
    sum.max_redistributed_thrust = std::max(sum.max_redistributed_thrust, lambda7.maxCoeff());
    sum.min_redistributed_thrust = std::min(sum.min_redistributed_thrust, lambda7.minCoeff());
    sum.theta_hat_min = std::min(sum.theta_hat_min, est.theta_hat.minCoeff());
    sum.theta_hat_max = std::max(sum.theta_hat_max, est.theta_hat.maxCoeff());
    sum.delta_hat_max = std::max(sum.delta_hat_max, est.delta_hat.maxCoeff());
    ++sum.steps;

    if (k == n_steps) break;
    est = update_estimates(est, ctrl.errors.z2, ctrl.lambda6, gains, model, scenario.dt);
    try {
      state = step_rk4(state, ctrl.lambda6, model, scenario.dt);
    } catch (const NearSingularError& e) {
      sum.aborted = true;
      sum.abort_time = state.t;
      sum.abort_reason = e.what();
      break;
    }
  }

  sum.completed = !sum.aborted;
  sum.final_position_error = z1.head<3>().norm();
  sum.final_orientation_error = z1.tail<3>().norm();
  return result;
}

void emit_outputs(const RunResult& result, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir + ": " + ec.message());

  const auto csv_path = (std::filesystem::path(dir) / "series.csv").string();
  std::ofstream csv(csv_path);
  if (!csv) throw ConfigError("cannot write " + csv_path);
  for (std::size_t i = 0; i < result.header.size(); ++i) {
    csv << result.header[i] << (i + 1 < result.header.size() ? "," : "\n");
  }
  char buf[32];
  for (const auto& row : result.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", row[i]);
      csv << buf << (i + 1 < row.size() ? "," : "\n");
    }
  }

  const SimSummary& s = result.summary;
  json j;
  j["completed"] = s.completed;
  j["aborted"] = s.aborted;
  j["abort_time_s"] = s.aborted ? json(s.abort_time) : json(nullptr);
  j["abort_reason"] = s.aborted ? json(s.abort_reason) : json(nullptr);
  j["final_position_error_m"] = s.final_position_error;
  j["final_orientation_error_rad"] = s.final_orientation_error;
  j["max_position_error_m"] = s.max_position_error;
  j["max_orientation_error_rad"] = s.max_orientation_error;
  j["max_command_thrust_N"] = s.max_command_thrust;
  j["max_redistributed_thrust_N"] = s.max_redistributed_thrust;
  j["min_redistributed_thrust_N"] = s.min_redistributed_thrust;
  j["theta_hat_min"] = s.theta_hat_min;
  j["theta_hat_max"] = s.theta_hat_max;
  j["delta_hat_max"] = s.delta_hat_max;
  j["over_limit_steps"] = s.over_limit_steps;
  j["steps"] = s.steps;
  j["dt_s"] = s.dt;
  j["duration_s"] = s.duration;
  j["seed"] = s.seed;

  const auto json_path = (std::filesystem::path(dir) / "summary.json").string();
  std::ofstream out(json_path);
  if (!out) throw ConfigError("cannot write " + json_path);
  out << j.dump(2) << "\n";
}

}  // namespace amtk
