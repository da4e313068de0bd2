#ifndef AMTK_KINEMATICS_HPP
#define AMTK_KINEMATICS_HPP

#include <cmath>

#include "amtk/errors.hpp"
#include "amtk/types.hpp"

// Euler-angle kinematics for the roll-pitch-yaw (ZYX) convention.
// rpy = (phi, theta, psi); the rotation maps body vectors into the world frame.

namespace amtk {

inline constexpr double kPitchGuard = 1e-6;  // |cos(theta)| below this is treated as singular

template <typename S>
Mat3<S> skew(const Vec3<S>& a) {
  Mat3<S> m;
  m << S(0), -a.z(), a.y(),
       a.z(), S(0), -a.x(),
      -a.y(), a.x(), S(0);
  return m;
}

/// Body-to-world rotation R = Rz(psi) Ry(theta) Rx(phi).
template <typename S>
Mat3<S> rotation_matrix(const Vec3<S>& rpy) {
  using std::cos;
  using std::sin;
  const S cf = cos(rpy.x()), sf = sin(rpy.x());
  const S ct = cos(rpy.y()), st = sin(rpy.y());
  const S cp = cos(rpy.z()), sp = sin(rpy.z());
  Mat3<S> m;
  m << ct * cp, sf * st * cp - sp * cf, st * cf * cp + sf * sp,
       sp * ct, sf * st * sp + cf * cp, st * sp * cf - sf * cp,
       -st,     sf * ct,                cf * ct;
  return m;
}

/// Map from body rates omega to Euler-angle rates. Singular at |pitch| = pi/2.
template <typename S>
Mat3<S> euler_rate_matrix(const Vec3<S>& rpy) {
  using std::abs;
  using std::cos;
  using std::sin;
  const S cf = cos(rpy.x()), sf = sin(rpy.x());
  const S ct = cos(rpy.y()), st = sin(rpy.y());
  if (abs(ct) < S(kPitchGuard)) {
    throw NearSingularError("euler_rate_matrix: |cos(pitch)| below guard band");
  }
  const S tt = st / ct;
  Mat3<S> m;
  m << S(1), sf * tt, cf * tt,
       S(0), cf,      -sf,
       S(0), sf / ct, cf / ct;
  return m;
}

/// 6x6 map from body twist (v, omega) to end-effector pose rates (p_dot, rpy_dot).
/// Block form [R, -R S(r_eff); 0, E]; det = 1/cos(pitch).
template <typename S>
Mat6<S> system_jacobian(const Vec3<S>& rpy, const Vec3<S>& r_eff) {
  const Mat3<S> R = rotation_matrix(rpy);
  Mat6<S> J = Mat6<S>::Zero();
  J.template topLeftCorner<3, 3>() = R;
  J.template topRightCorner<3, 3>() = -R * skew(r_eff);
  J.template bottomRightCorner<3, 3>() = euler_rate_matrix(rpy);
  return J;
}

inline Mat6d system_jacobian(const Pose6& pose, const Vec3d& r_eff) {
  return system_jacobian<double>(pose.rpy, r_eff);
}

/// Partial derivatives of euler_rate_matrix in roll and pitch (yaw does not enter).
template <typename S>
void euler_rate_matrix_partials(const Vec3<S>& rpy, Mat3<S>& d_droll, Mat3<S>& d_dpitch) {
  using std::abs;
  using std::cos;
  using std::sin;
  const S cf = cos(rpy.x()), sf = sin(rpy.x());
  const S ct = cos(rpy.y()), st = sin(rpy.y());
  if (abs(ct) < S(kPitchGuard)) {
    throw NearSingularError("euler_rate_matrix_partials: |cos(pitch)| below guard band");
  }
  const S tt = st / ct;
  const S sec2 = S(1) / (ct * ct);
  d_droll << S(0), cf * tt, -sf * tt,
             S(0), -sf,     -cf,
             S(0), cf / ct, -sf / ct;
  d_dpitch << S(0), sf * sec2,      cf * sec2,
              S(0), S(0),           S(0),
              S(0), sf * st * sec2, cf * st * sec2;
}

/// Time derivative of system_jacobian along a twist: R_dot = R S(omega),
/// E_dot = dE/droll * roll_rate + dE/dpitch * pitch_rate.
template <typename S>
Mat6<S> system_jacobian_dot(const Vec3<S>& rpy, const Vec3<S>& omega, const Vec3<S>& r_eff) {
  const Mat3<S> R_dot = rotation_matrix(rpy) * skew(omega);
  const Vec3<S> rpy_rates = euler_rate_matrix(rpy) * omega;
  Mat3<S> d_droll, d_dpitch;
  euler_rate_matrix_partials(rpy, d_droll, d_dpitch);
  Mat6<S> Jd = Mat6<S>::Zero();
  Jd.template topLeftCorner<3, 3>() = R_dot;
  Jd.template topRightCorner<3, 3>() = -R_dot * skew(r_eff);
  Jd.template bottomRightCorner<3, 3>() = d_droll * rpy_rates.x() + d_dpitch * rpy_rates.y();
  return Jd;
}

inline Mat6d system_jacobian_dot(const Pose6& pose, const Twist6& twist, const Vec3d& r_eff) {
  return system_jacobian_dot<double>(pose.rpy, twist.omega, r_eff);
}

}  // namespace amtk

#endif
