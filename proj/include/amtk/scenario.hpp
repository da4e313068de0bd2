#ifndef AMTK_SCENARIO_HPP
#define AMTK_SCENARIO_HPP

#include <optional>
#include <string>
#include <vector>

#include "amtk/controller.hpp"
#include "amtk/params_io.hpp"
#include "amtk/reference.hpp"

namespace amtk {

/// d_i(t) = offset_i + amp_i * sin(omega_i t + phase_i), acceleration level.
struct DisturbanceSpec {
  bool enabled = false;
  struct Term {
    double offset = 0.0, amp = 0.0, omega = 0.0, phase = 0.0;
  };
  std::array<Term, 6> terms;

  Vec6d eval(double t) const;
};

struct Scenario {
  std::string params_path;
  std::string gains_path;
  ReferenceSpec reference;
  DisturbanceSpec disturbance;
  Vec6d effectiveness = Vec6d::Ones();
  EstimatorState initial_estimates;
  std::optional<Pose6> initial_pose;    // default: end-effector at r_e, zero angles
  std::optional<Twist6> initial_twist;  // default: zero
  double dt = 1e-3;
  double duration = 30.0;
  std::uint64_t seed = 0;
  int decimation = 10;
  std::string out_dir = "out";
};

/// Parses the scenario JSON; file paths inside are resolved relative to it.
Scenario load_scenario(const std::string& path);

struct SimSummary {
  bool completed = false;
  bool aborted = false;
  double abort_time = 0.0;
  std::string abort_reason;
  double final_position_error = 0.0;
  double final_orientation_error = 0.0;
  double max_position_error = 0.0;
  double max_orientation_error = 0.0;
  double max_command_thrust = 0.0;        // max |lambda6_i|
  double max_redistributed_thrust = 0.0;  // max lambda7_i
  double min_redistributed_thrust = 0.0;
  double theta_hat_min = 0.0, theta_hat_max = 0.0;
  double delta_hat_max = 0.0;
  long over_limit_steps = 0;  // logged steps with any redistributed thrust > lambda_max
  long steps = 0;
  double dt = 0.0, duration = 0.0;
  std::uint64_t seed = 0;
};

struct RunResult {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;  // one per logged step
  SimSummary summary;
};

/// Closed-loop run: tracking errors -> control -> estimator update -> RK4.
/// A pitch-singularity abort stops the run and is recorded, not thrown.
RunResult run_scenario(const Scenario& scenario);

/// Writes <dir>/series.csv and <dir>/summary.json.
void emit_outputs(const RunResult& result, const std::string& dir);

}  // namespace amtk

#endif
