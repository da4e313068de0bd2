#ifndef AMTK_SLIPSTREAM_HPP
#define AMTK_SLIPSTREAM_HPP

#include <array>
#include <vector>

#include "amtk/types.hpp"

namespace amtk {

/// Solid of revolution bounding one rotor's exit-flow region: local x along
/// the thrust direction, radius given by a cubic profile on [x_min, x_max].
class SlipstreamVolume {
 public:
  static constexpr double kAxialMin = -0.06;  // m
  static constexpr double kAxialMax = 0.91;   // m
  // radius(x) = c3 x^3 + c2 x^2 + c1 x + c0
  static constexpr std::array<double, 4> kProfile = {-1.1, 1.56, -0.3, 0.11};

  explicit SlipstreamVolume(const ThrusterPose& pose);

  const ThrusterPose& pose() const { return pose_; }

  static double radius(double x) {
    return ((kProfile[0] * x + kProfile[1]) * x + kProfile[2]) * x + kProfile[3];
  }

  Vec3d to_local(const Vec3d& p_body) const { return rot_.transpose() * (p_body - pose_.r); }
  Vec3d to_body(const Vec3d& p_local) const { return rot_ * p_local + pose_.r; }

  /// Residuals (x'-x_max, x_min-x', y'^2+z'^2-radius(x')^2); all <= 0 inside.
  Vec3d membership_residuals(const Vec3d& p_body) const;

  bool contains(const Vec3d& p_body, double tol = 0.0) const {
    return (membership_residuals(p_body).array() <= tol).all();
  }

  /// Closest point of the (solid) volume to p_body. Exact up to the 1e-12
  /// tolerance of the 1-D profile search; returns p_body itself when inside.
  Vec3d project(const Vec3d& p_body) const;

  /// Deterministic multi-start seeds: cap centres, mid-surface ring,
  /// rotor-plane ring.
  std::vector<Vec3d> seed_points() const;

 private:
  ThrusterPose pose_;
  Mat3d rot_;  // thruster frame -> body, column 0 = thrust direction
};

struct ClearanceResult {
  double distance = 0.0;
  Vec3d p_i = Vec3d::Zero();  // witness in volume i (first argument)
  Vec3d p_j = Vec3d::Zero();  // witness in volume j / sphere centre
  bool converged = false;
};

/// Minimum distance between two slipstream volumes (problem P1): alternating
/// exact projections from 26 deterministic starts; intersecting volumes give
/// distance 0. Throws NoConvergenceError if no start meets the step tolerance.
ClearanceResult pairwise_clearance(const SlipstreamVolume& vol_i, const SlipstreamVolume& vol_j);

/// Distance from the end-effector sphere centre to a volume; the caller
/// compares against the sphere radius.
ClearanceResult effector_clearance(const Vec3d& r_effector, double sphere_radius,
                                   const SlipstreamVolume& vol);

}  // namespace amtk

#endif
