#ifndef AMTK_CONTROLLER_HPP
#define AMTK_CONTROLLER_HPP

#include "amtk/dynamics.hpp"
#include "amtk/types.hpp"

namespace amtk {

struct ControllerGains {
  Mat6d k1 = Mat6d::Identity();
  Mat6d k2 = Mat6d::Identity();
  Vec6d gamma_delta = Vec6d::Ones();  // disturbance-bound adaptation gains
  Vec6d gamma_theta = Vec6d::Ones();  // effectiveness adaptation gains
  double sigma = 1.0;                 // leakage on the disturbance-bound estimate
  double proj_delta = 0.05;           // projection transition band width
  double theta_min = 0.1;
  double theta_max = 1.0;
  double sign_epsilon = 0.0;  // 0: exact sign; >0: tanh(z/eps) boundary layer

  /// Throws ConfigError unless K1, K2 are symmetric positive definite, the
  /// adaptation gains are positive, and theta_min - proj_delta > 0.
  void validate() const;
};

ControllerGains load_gains(const std::string& path);

struct EstimatorState {
  Vec6d delta_hat = Vec6d::Zero();  // disturbance-bound estimates, >= 0
  Vec6d theta_hat = Vec6d::Ones();  // effectiveness estimates (diagonal)
};

struct ReferenceSignal {
  Vec6d pose = Vec6d::Zero();
  Vec6d pose_rate = Vec6d::Zero();
  Vec6d pose_accel = Vec6d::Zero();
};

struct TrackingErrors {
  Vec6d z1 = Vec6d::Zero();      // pose error
  Vec6d z2 = Vec6d::Zero();      // twist error vs the virtual law
  Vec6d nu_des = Vec6d::Zero();  // virtual velocity command
};

/// Componentwise sign, optionally smoothed as tanh(z/eps).
Vec6d signum(const Vec6d& z, double eps);

/// z1 = pose - ref, nu_des = J^{-1}(ref_rate - K1 z1), z2 = twist - nu_des.
TrackingErrors tracking_errors(const SimState& s, const ReferenceSignal& ref,
                               const ControllerGains& gains, const Vec3d& r_effector);

/// Analytic rate of the virtual velocity command.
Vec6d virtual_accel(const SimState& s, const ReferenceSignal& ref, const TrackingErrors& err,
                    const ControllerGains& gains, const Vec3d& r_effector);

/// Thrust command for the six primary thrusters.
Vec6d control_law(const SimState& s, const ReferenceSignal& ref, const EstimatorState& est,
                  const ControllerGains& gains, const DynamicsModel& model);

/// Scalar projection: passes inward drives, ramps outward drives to zero
/// across the transition band beyond [theta_min, theta_max].
double projected_rate(double theta, double drive, const ControllerGains& gains);

/// One explicit-Euler update of both estimates at the control rate.
EstimatorState update_estimates(const EstimatorState& est, const Vec6d& z2, const Vec6d& lambda6,
                                const ControllerGains& gains, const DynamicsModel& model,
                                double dt);

/// Everything one control step needs; control_law is a thin wrapper.
struct ControlStep {
  TrackingErrors errors;
  Vec6d nu_des_dot = Vec6d::Zero();
  Vec6d lambda6 = Vec6d::Zero();
};

ControlStep compute_control(const SimState& s, const ReferenceSignal& ref,
                            const EstimatorState& est, const ControllerGains& gains,
                            const DynamicsModel& model);

}  // namespace amtk

#endif
