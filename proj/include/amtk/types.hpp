#ifndef AMTK_TYPES_HPP
#define AMTK_TYPES_HPP

#include <Eigen/Dense>

#include <vector>

namespace amtk {

template <typename Scalar> using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar> using Vec6 = Eigen::Matrix<Scalar, 6, 1>;
template <typename Scalar> using Mat3 = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar> using Mat6 = Eigen::Matrix<Scalar, 6, 6>;

using Vec3d = Vec3<double>;
using Vec6d = Vec6<double>;
using Mat3d = Mat3<double>;
using Mat6d = Mat6<double>;
using MatXd = Eigen::MatrixXd;
using VecXd = Eigen::VectorXd;

/// One thruster mount: position and unit thrust direction, both body frame.
struct ThrusterPose {
  Vec3d r = Vec3d::Zero();     // m
  Vec3d dir = Vec3d::UnitZ();  // unit vector
};

/// Full propulsion geometry: n primary thrusters plus one auxiliary.
struct ThrusterLayout {
  std::vector<ThrusterPose> primary;  // n >= 6
  ThrusterPose auxiliary;
  double thruster_mass = 0.0;  // kg, per thruster
  double max_thrust = 0.0;     // N
  double torque_coeff = 0.0;   // thrust-to-reaction-torque coefficient, m
};

struct RigidBodyParams {
  double mass = 0.0;                   // kg, total
  Mat3d inertia_cog = Mat3d::Zero();   // kg m^2, about the centre of gravity
  Vec3d r_cog = Vec3d::Zero();         // m, centre of gravity, body frame
  Vec3d r_struct = Vec3d::Zero();      // m, centre of gravity w/o thruster masses
  Vec3d r_effector = Vec3d::Zero();    // m, end-effector position, body frame
  double gravity = 9.81;               // m/s^2
};

/// Pose of the end-effector frame: world position + roll-pitch-yaw.
struct Pose6 {
  Vec3d p = Vec3d::Zero();    // m
  Vec3d rpy = Vec3d::Zero();  // rad

  Vec6d stacked() const {
    Vec6d out;
    out << p, rpy;
    return out;
  }
  static Pose6 from_stacked(const Vec6d& x) { return Pose6{x.head<3>(), x.tail<3>()}; }
};

/// Body-frame twist.
struct Twist6 {
  Vec3d v = Vec3d::Zero();      // m/s
  Vec3d omega = Vec3d::Zero();  // rad/s

  Vec6d stacked() const {
    Vec6d out;
    out << v, omega;
    return out;
  }
  static Twist6 from_stacked(const Vec6d& x) { return Twist6{x.head<3>(), x.tail<3>()}; }
};

}  // namespace amtk

#endif
