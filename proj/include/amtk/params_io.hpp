#ifndef AMTK_PARAMS_IO_HPP
#define AMTK_PARAMS_IO_HPP

#include <string>
#include <vector>

#include "amtk/types.hpp"

namespace amtk {

/// Vehicle parameter file contents, kept exactly as stored on disk.
/// Thruster directions are NOT normalized here; the last list entry is the
/// auxiliary thruster.
struct ParamFile {
  RigidBodyParams body;
  double thruster_mass = 0.0;  // kg
  double torque_coeff = 0.0;   // mu
  double max_thrust = 0.0;     // N
  double structure_volume_diag = std::numeric_limits<double>::quiet_NaN();  // optional diagnostic
  std::vector<Vec3d> thruster_positions;
  std::vector<Vec3d> thruster_directions;  // as stored, possibly non-unit
};

ParamFile load_params(const std::string& path);
void save_params(const ParamFile& params, const std::string& path);

/// Builds the layout with normalized thruster directions (last entry -> auxiliary).
ThrusterLayout make_layout(const ParamFile& params);

/// Checks mass positivity and positive-definiteness of I_G and I_B.
void validate_body(const RigidBodyParams& body);

/// Checks n >= 6, unit directions, and (loosely) that the auxiliary direction
/// opposes the primary direction sum. `aux_tol` is per-component.
void validate_layout(const ThrusterLayout& layout, double aux_tol = 0.05);

}  // namespace amtk

#endif
