#ifndef AMTK_WRENCH_MAP_HPP
#define AMTK_WRENCH_MAP_HPP

#include <span>
#include <vector>

#include "amtk/types.hpp"

namespace amtk {

/// Linear map from thrust magnitudes to the net body wrench.
/// Column i is [dir_i; r_i x dir_i].
struct WrenchMap {
  MatXd D;  // 6 x n
  VecXd singular_values;
  double condition_number = 0.0;

  double sigma_min() const { return singular_values(singular_values.size() - 1); }
  double sigma_max() const { return singular_values(0); }
};

/// mu = (C_Q / C_lambda) * R for a rotor of radius R.
double rotor_torque_coeff(double c_q, double c_lambda, double rotor_radius);

Vec6d thruster_column(const ThrusterPose& t);

/// use_n = 6 builds the primary map, 7 appends the auxiliary column.
WrenchMap build_wrench_map(const ThrusterLayout& layout, int use_n);

/// Auxiliary thruster synthesized so its column cancels the primary column sum.
struct AuxiliaryThruster {
  Vec3d dir_raw;         // -sum of primary directions, NOT normalized
  double dir_norm = 0.0;
  Vec3d r_particular;    // minimum-norm solution of the moment equation
  Vec3d free_direction;  // unit; solutions are r_particular + t * free_direction
};

/// Throws DegenerateDirectionError when the primary directions cancel and
/// UnsolvableError when the moment equation is inconsistent (RHS component
/// along the auxiliary direction above 1e-9).
AuxiliaryThruster auxiliary_thruster(std::span<const ThrusterPose> primary);

/// Exact auxiliary wrench-map column -sum t_i.
Vec6d auxiliary_column(std::span<const ThrusterPose> primary);

/// Wrench the thrusters must produce for an actuation request at the
/// end-effector, with thruster/structure weights taken at the nominal hover
/// attitude (body z up). `lever` composes a gripped-object torque
/// lever x f_act into the end-effector torque.
Vec6d required_wrench(const Vec3d& f_act_e, const Vec3d& t_act_e, const Vec3d& lever,
                      const RigidBodyParams& body, const ThrusterLayout& layout);

/// lambda = D^{-1} w for the square primary map. Throws RankDeficientError.
Vec6d solve_thrust(const WrenchMap& map6, const Vec6d& wrench);

/// Maps a signed 6-thrust solution to 7 non-negative thrusts producing the
/// same wrench, using the auxiliary column (which must equal -sum of the
/// primary columns).
Eigen::Matrix<double, 7, 1> redistribute(const Vec6d& lambda6, const WrenchMap& map6,
                                         const Vec6d& aux_column);

struct SaturationReport {
  std::vector<int> over_limit;   // lambda_i > max_thrust
  std::vector<int> at_limit;     // lambda_i == max_thrust (within 1e-12)
  std::vector<int> negative;     // lambda_i < 0
  std::vector<double> excess;    // per over_limit entry, N above the limit
  bool clean() const { return over_limit.empty() && at_limit.empty() && negative.empty(); }
};

SaturationReport check_saturation(const VecXd& lambda, double max_thrust);

}  // namespace amtk

#endif
