#include "amtk/reference.hpp"

#include <cmath>

#include "amtk/errors.hpp"

namespace amtk {

namespace {

void eval_poly(const std::vector<double>& coeffs, double t, double& v, double& vd, double& vdd) {
  v = vd = vdd = 0.0;
  // Horner passes for the value and the first two derivatives.
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    vdd = vdd * t + 2.0 * vd;
    vd = vd * t + v;
    v = v * t + *it;
  }
}

}  // namespace

ReferenceSignal reference(double t, const ReferenceSpec& spec) {
  if (t < 0.0) throw ConfigError("reference: t must be non-negative");
  ReferenceSignal sig;
  switch (spec.kind) {
    case ReferenceSpec::Kind::Hold:
      sig.pose = spec.hold_pose;
      break;
    case ReferenceSpec::Kind::Helix: {
      const double w = spec.angular_rate;
      const double a = w * t;
      sig.pose.head<3>() = Vec3d(spec.center_x + spec.radius * std::cos(a),
                                 spec.center_y + spec.radius * std::sin(a),
                                 spec.z_start + spec.climb_rate * t);
      sig.pose.tail<3>() = spec.orientation;
      sig.pose_rate.head<3>() =
          Vec3d(-spec.radius * w * std::sin(a), spec.radius * w * std::cos(a), spec.climb_rate);
      sig.pose_accel.head<3>() =
          Vec3d(-spec.radius * w * w * std::cos(a), -spec.radius * w * w * std::sin(a), 0.0);
      break;
    }
    case ReferenceSpec::Kind::Polynomial: {
      for (int i = 0; i < 6; ++i) {
        eval_poly(spec.poly[i], t, sig.pose(i), sig.pose_rate(i), sig.pose_accel(i));
      }
      break;
    }
  }
  return sig;
}

}  // namespace amtk
