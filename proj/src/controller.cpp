#include "amtk/controller.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "amtk/errors.hpp"
#include "amtk/kinematics.hpp"

namespace amtk {

void ControllerGains::validate() const {
  auto check_spd = [](const Mat6d& m, const char* name) {
    if ((m - m.transpose()).norm() > 1e-12) {
      throw ConfigError(std::string(name) + " must be symmetric");
    }
    Eigen::LLT<Mat6d> llt(m);
    if (llt.info() != Eigen::Success) {
      throw ConfigError(std::string(name) + " must be positive definite");
    }
  };
  check_spd(k1, "K1");
  check_spd(k2, "K2");
  if ((gamma_delta.array() <= 0).any() || (gamma_theta.array() <= 0).any()) {
    throw ConfigError("adaptation gains must be positive");
  }
  if (!(sigma > 0)) throw ConfigError("sigma must be positive");
  if (!(proj_delta > 0)) throw ConfigError("projection delta must be positive");
  if (!(theta_min - proj_delta > 0)) {
    throw ConfigError("theta_min - delta must stay positive to keep the estimate invertible");
  }
  if (!(theta_max > theta_min)) throw ConfigError("theta bounds out of order");
}

ControllerGains load_gains(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open gain file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed JSON in " + path + ": " + e.what());
  }
  ControllerGains g;
  try {
    auto diag6 = [&](const char* key) {
      const auto& arr = j.at(key);
      Vec6d v;
      for (int i = 0; i < 6; ++i) v(i) = arr.at(i).get<double>();
      return v;
    };
    g.k1 = diag6("K1").asDiagonal();
    g.k2 = diag6("K2").asDiagonal();
    g.gamma_delta = diag6("Gamma_Delta");
    g.gamma_theta = diag6("Gamma_theta");
    g.sigma = j.at("sigma").get<double>();
    g.proj_delta = j.at("delta").get<double>();
    g.theta_min = j.at("theta_bounds").at(0).get<double>();
    g.theta_max = j.at("theta_bounds").at(1).get<double>();
    if (j.contains("sign_smoothing")) g.sign_epsilon = j["sign_smoothing"].get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("bad gain file " + path + ": " + e.what());
  }
  g.validate();
  return g;
}

Vec6d signum(const Vec6d& z, double eps) {
  Vec6d s;
  for (int i = 0; i < 6; ++i) {
    if (eps > 0.0) {
      s(i) = std::tanh(z(i) / eps);
    } else {
      s(i) = (z(i) > 0.0) ? 1.0 : (z(i) < 0.0 ? -1.0 : 0.0);
    }
  }
  return s;
}

TrackingErrors tracking_errors(const SimState& s, const ReferenceSignal& ref,
                               const ControllerGains& gains, const Vec3d& r_effector) {
  TrackingErrors err;
  err.z1 = s.pose.stacked() - ref.pose;
  const Mat6d jac = system_jacobian(s.pose, r_effector);
  err.nu_des = jac.partialPivLu().solve(ref.pose_rate - gains.k1 * err.z1);
  err.z2 = s.twist.stacked() - err.nu_des;
  return err;
}

Vec6d virtual_accel(const SimState& s, const ReferenceSignal& ref, const TrackingErrors& err,
                    const ControllerGains& gains, const Vec3d& r_effector) {
  const Mat6d jac = system_jacobian(s.pose, r_effector);
  const Mat6d jac_dot = system_jacobian_dot(s.pose, s.twist, r_effector);
  const Vec6d z1_rate = jac * s.twist.stacked() - ref.pose_rate;
  return jac.partialPivLu().solve(ref.pose_accel - jac_dot * err.nu_des - gains.k1 * z1_rate);
}

ControlStep compute_control(const SimState& s, const ReferenceSignal& ref,
                            const EstimatorState& est, const ControllerGains& gains,
                            const DynamicsModel& model) {
  for (int i = 0; i < 6; ++i) {
    const double lo = gains.theta_min - gains.proj_delta - 1e-12;
    const double hi = gains.theta_max + gains.proj_delta + 1e-12;
    if (est.theta_hat(i) < lo || est.theta_hat(i) > hi) {
      throw EstimateOutOfRangeError("effectiveness estimate escaped the projection set");
    }
  }
  ControlStep step;
  step.errors = tracking_errors(s, ref, gains, model.body.r_effector);
  step.nu_des_dot = virtual_accel(s, ref, step.errors, gains, model.body.r_effector);

  const Mat6d jac = system_jacobian(s.pose, model.body.r_effector);
  const Vec6d drift = model.drift_accel(s.pose, s.twist);
  const Vec6d robust = signum(step.errors.z2, gains.sign_epsilon).cwiseProduct(est.delta_hat);
  const Vec6d demand = step.nu_des_dot - drift - jac.transpose() * step.errors.z1 - robust -
                       gains.k2 * step.errors.z2;
  const Vec6d raw = model.input_map.partialPivLu().solve(demand);
  step.lambda6 = raw.cwiseQuotient(est.theta_hat);
  return step;
}

Vec6d control_law(const SimState& s, const ReferenceSignal& ref, const EstimatorState& est,
                  const ControllerGains& gains, const DynamicsModel& model) {
  return compute_control(s, ref, est, gains, model).lambda6;
}

double projected_rate(double theta, double drive, const ControllerGains& gains) {
  double factor = 1.0;
  if (theta > gains.theta_max && drive > 0.0) {
    factor = std::max(0.0, 1.0 - (theta - gains.theta_max) / gains.proj_delta);
  } else if (theta < gains.theta_min && drive < 0.0) {
    factor = std::max(0.0, 1.0 - (gains.theta_min - theta) / gains.proj_delta);
  }
  return factor * drive;
}

EstimatorState update_estimates(const EstimatorState& est, const Vec6d& z2, const Vec6d& lambda6,
                                const ControllerGains& gains, const DynamicsModel& model,
                                double dt) {
  EstimatorState out;
  const Vec6d sign_z2 = signum(z2, gains.sign_epsilon);
  out.delta_hat =
      est.delta_hat +
      dt * gains.gamma_delta.cwiseProduct(sign_z2.cwiseProduct(z2) - gains.sigma * est.delta_hat);
  out.delta_hat = out.delta_hat.cwiseMax(0.0);  // keep the robustness term dissipative

  // Only the diagonal of N^T z2 lambda^T drives the (diagonal) estimate.
  const Vec6d ntz2 = model.input_map.transpose() * z2;
  for (int i = 0; i < 6; ++i) {
    const double drive = ntz2(i) * lambda6(i);
    out.theta_hat(i) =
        est.theta_hat(i) + dt * gains.gamma_theta(i) * projected_rate(est.theta_hat(i), drive, gains);
    // Discrete steps can overshoot the ramp; pin to the admissible interval.
    out.theta_hat(i) = std::clamp(out.theta_hat(i), gains.theta_min - gains.proj_delta,
                                  gains.theta_max + gains.proj_delta);
  }
  return out;
}

}  // namespace amtk
