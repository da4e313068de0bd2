#ifndef AMTK_DYNAMICS_HPP
#define AMTK_DYNAMICS_HPP

#include <functional>

#include "amtk/types.hpp"

namespace amtk {

/// 6x6 rigid-body inertia [[m I, -m S(r_G)], [m S(r_G), I_B]] with
/// I_B = I_G - m S(r_G) S(r_G). Throws NotPositiveDefiniteError.
Mat6d inertia_matrix(const RigidBodyParams& body);

/// Coriolis-centripetal matrix; skew-symmetric for every twist.
Mat6d coriolis_matrix(const RigidBodyParams& body, const Twist6& twist);

/// Net body wrench: propulsion + reaction torques + gravity.
Vec6d body_wrench(const Pose6& pose, const Vec6d& lambda6, const ThrusterLayout& layout,
                  const RigidBodyParams& body);

using DisturbanceFn = std::function<Vec6d(const Pose6&, const Twist6&, double)>;

struct DynamicsModel {
  RigidBodyParams body;
  ThrusterLayout layout;
  Mat6d inertia = Mat6d::Identity();
  Mat6d inertia_inv = Mat6d::Identity();
  Mat6d input_map = Mat6d::Identity();  // M^{-1} [F; E + mu F], thrusters 1..6
  Vec6d effectiveness = Vec6d::Ones();  // actuator health factors
  DisturbanceFn disturbance;            // acceleration-level, may be null

  static DynamicsModel create(const RigidBodyParams& body, const ThrusterLayout& layout,
                              const Vec6d& effectiveness, DisturbanceFn disturbance = nullptr);

  /// Drift acceleration B = -M^{-1} C(nu) nu + gravity term.
  Vec6d drift_accel(const Pose6& pose, const Twist6& twist) const;
  Vec6d gravity_accel(const Pose6& pose) const;
};

struct SimState {
  Pose6 pose;
  Twist6 twist;
  double t = 0.0;
};

struct StateDerivative {
  Vec6d pose_rate;
  Vec6d twist_rate;
};

/// Right-hand side of the closed model: pose_rate = J(pose) twist,
/// twist_rate = B + N (theta .* lambda) + d.
StateDerivative state_derivative(const SimState& s, const Vec6d& lambda6,
                                 const DynamicsModel& model);

/// Classical RK4 step with the thrust command held constant (zero-order hold).
SimState step_rk4(const SimState& s, const Vec6d& lambda6, const DynamicsModel& model, double dt);

}  // namespace amtk

#endif
