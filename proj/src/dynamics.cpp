#include "amtk/dynamics.hpp"

#include <Eigen/Cholesky>

#include "amtk/errors.hpp"
#include "amtk/kinematics.hpp"
#include "amtk/wrench_map.hpp"

namespace amtk {

Mat6d inertia_matrix(const RigidBodyParams& body) {
  const Mat3d s = skew<double>(body.r_cog);
  const Mat3d i_b = body.inertia_cog - body.mass * s * s;
  Mat6d m;
  m.topLeftCorner<3, 3>() = body.mass * Mat3d::Identity();
  m.topRightCorner<3, 3>() = -body.mass * s;
  m.bottomLeftCorner<3, 3>() = body.mass * s;
  m.bottomRightCorner<3, 3>() = i_b;
  Eigen::LLT<Mat6d> llt(m);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefiniteError("inertia_matrix: M is not positive definite");
  }
  return m;
}

Mat6d coriolis_matrix(const RigidBodyParams& body, const Twist6& twist) {
  const Mat3d s_cog = skew<double>(body.r_cog);
  const Mat3d s_w = skew<double>(twist.omega);
  const Mat3d i_b = body.inertia_cog - body.mass * s_cog * s_cog;
  Mat6d c;
  c.topLeftCorner<3, 3>() = body.mass * s_w;
  c.topRightCorner<3, 3>() = -body.mass * s_w * s_cog;
  c.bottomLeftCorner<3, 3>() = body.mass * s_cog * s_w;
  c.bottomRightCorner<3, 3>() = -skew<double>((i_b * twist.omega).eval());
  return c;
}

Vec6d body_wrench(const Pose6& pose, const Vec6d& lambda6, const ThrusterLayout& layout,
                  const RigidBodyParams& body) {
  Vec6d wrench = Vec6d::Zero();
  Vec3d thrust_sum = Vec3d::Zero();
  for (int i = 0; i < 6; ++i) {
    wrench += lambda6(i) * thruster_column(layout.primary[i]);
    thrust_sum += lambda6(i) * layout.primary[i].dir;
  }
  wrench.tail<3>() += layout.torque_coeff * thrust_sum;  // rotor reaction torques

  const Vec3d g_body = rotation_matrix<double>(pose.rpy).transpose() * Vec3d::UnitZ();
  wrench.head<3>() -= body.mass * body.gravity * g_body;
  wrench.tail<3>() -= body.mass * body.gravity * body.r_cog.cross(g_body);
  return wrench;
}

DynamicsModel DynamicsModel::create(const RigidBodyParams& body, const ThrusterLayout& layout,
                                    const Vec6d& effectiveness, DisturbanceFn disturbance) {
  DynamicsModel model;
  model.body = body;
  model.layout = layout;
  model.inertia = inertia_matrix(body);
  model.inertia_inv = model.inertia.inverse();
  Mat6d fe;
  for (int i = 0; i < 6; ++i) {
    fe.col(i) = thruster_column(layout.primary[i]);
    fe.col(i).tail<3>() += layout.torque_coeff * layout.primary[i].dir;
  }
  model.input_map = model.inertia_inv * fe;
  if (std::abs(model.input_map.determinant()) < 1e-12) {
    throw RankDeficientError("DynamicsModel: input map is singular");
  }
  model.effectiveness = effectiveness;
  model.disturbance = std::move(disturbance);
  return model;
}

Vec6d DynamicsModel::gravity_accel(const Pose6& pose) const {
  const Vec3d g_body = rotation_matrix<double>(pose.rpy).transpose() * Vec3d::UnitZ();
  Vec6d g;
  g.head<3>() = g_body;
  g.tail<3>() = body.r_cog.cross(g_body);
  return -body.mass * body.gravity * (inertia_inv * g);
}

Vec6d DynamicsModel::drift_accel(const Pose6& pose, const Twist6& twist) const {
  return -inertia_inv * (coriolis_matrix(body, twist) * twist.stacked()) + gravity_accel(pose);
}

StateDerivative state_derivative(const SimState& s, const Vec6d& lambda6,
                                 const DynamicsModel& model) {
  StateDerivative d;
  d.pose_rate = system_jacobian(s.pose, model.body.r_effector) * s.twist.stacked();
  d.twist_rate = model.drift_accel(s.pose, s.twist) +
                 model.input_map * model.effectiveness.cwiseProduct(lambda6);
  if (model.disturbance) d.twist_rate += model.disturbance(s.pose, s.twist, s.t);
  return d;
}

SimState step_rk4(const SimState& s, const Vec6d& lambda6, const DynamicsModel& model, double dt) {
  if (!(dt > 0.0)) throw ConfigError("step_rk4: dt must be positive");
  auto eval = [&](const Vec6d& pose, const Vec6d& twist, double t) {
    SimState tmp{Pose6::from_stacked(pose), Twist6::from_stacked(twist), t};
    return state_derivative(tmp, lambda6, model);
  };
  const Vec6d x0 = s.pose.stacked();
  const Vec6d v0 = s.twist.stacked();
  const StateDerivative k1 = eval(x0, v0, s.t);
  const StateDerivative k2 =
      eval(x0 + 0.5 * dt * k1.pose_rate, v0 + 0.5 * dt * k1.twist_rate, s.t + 0.5 * dt);
  const StateDerivative k3 =
      eval(x0 + 0.5 * dt * k2.pose_rate, v0 + 0.5 * dt * k2.twist_rate, s.t + 0.5 * dt);
  const StateDerivative k4 = eval(x0 + dt * k3.pose_rate, v0 + dt * k3.twist_rate, s.t + dt);

  SimState out;
  out.pose = Pose6::from_stacked(
      x0 + dt / 6.0 * (k1.pose_rate + 2.0 * k2.pose_rate + 2.0 * k3.pose_rate + k4.pose_rate));
  out.twist = Twist6::from_stacked(
      v0 + dt / 6.0 * (k1.twist_rate + 2.0 * k2.twist_rate + 2.0 * k3.twist_rate + k4.twist_rate));
  out.t = s.t + dt;
  return out;
}

}  // namespace amtk
