#ifndef AMTK_REFERENCE_HPP
#define AMTK_REFERENCE_HPP

#include <array>
#include <vector>

#include "amtk/controller.hpp"
#include "amtk/types.hpp"

namespace amtk {

/// Twice-differentiable reference trajectories.
struct ReferenceSpec {
  enum class Kind { Hold, Helix, Polynomial };
  Kind kind = Kind::Hold;

  // Hold
  Vec6d hold_pose = Vec6d::Zero();

  // Helix: p = (cx + R cos(w t), cy + R sin(w t), z0 + c t), fixed orientation
  double radius = 1.0;
  double angular_rate = 0.5;
  double center_x = 0.0, center_y = 0.0;
  double z_start = 1.5;
  double climb_rate = 0.3;
  Vec3d orientation = Vec3d::Zero();

  // Polynomial: per-axis coefficients, ascending powers
  std::array<std::vector<double>, 6> poly;
};

ReferenceSignal reference(double t, const ReferenceSpec& spec);

}  // namespace amtk

#endif
