#include "amtk/wrench_map.hpp"

#include <Eigen/SVD>

#include "amtk/errors.hpp"
#include "amtk/kinematics.hpp"

namespace amtk {

double rotor_torque_coeff(double c_q, double c_lambda, double rotor_radius) {
  return (c_q / c_lambda) * rotor_radius;
}

Vec6d thruster_column(const ThrusterPose& t) {
  Vec6d col;
  col << t.dir, t.r.cross(t.dir);
  return col;
}

WrenchMap build_wrench_map(const ThrusterLayout& layout, int use_n) {
  if (use_n != 6 && use_n != 7) throw ConfigError("build_wrench_map: use_n must be 6 or 7");
  if (layout.primary.size() < 6) throw ConfigError("build_wrench_map: need 6 primary thrusters");
  WrenchMap map;
  map.D.resize(6, use_n);
  for (int i = 0; i < 6; ++i) map.D.col(i) = thruster_column(layout.primary[i]);
  if (use_n == 7) map.D.col(6) = thruster_column(layout.auxiliary);
  Eigen::JacobiSVD<MatXd> svd(map.D);
  map.singular_values = svd.singularValues();
  map.condition_number = map.sigma_max() / map.sigma_min();
  return map;
}

AuxiliaryThruster auxiliary_thruster(std::span<const ThrusterPose> primary) {
  Vec3d f = Vec3d::Zero();
  Vec3d c = Vec3d::Zero();
  for (const auto& t : primary) {
    f -= t.dir;
    c -= t.dir.cross(t.r);  // -S(dir_i) r_i
  }
  const double norm = f.norm();
  if (norm < 1e-9) {
    throw DegenerateDirectionError("auxiliary_thruster: primary directions cancel");
  }
  const Vec3d f_hat = f / norm;
  // f x r = c is solvable only for c orthogonal to f.
  if (std::abs(f_hat.dot(c)) > 1e-9) {
    throw UnsolvableError("auxiliary_thruster: moment equation inconsistent");
  }
  AuxiliaryThruster aux;
  aux.dir_raw = f;
  aux.dir_norm = norm;
  aux.r_particular = c.cross(f) / f.squaredNorm();
  aux.free_direction = f_hat;
  return aux;
}

Vec6d auxiliary_column(std::span<const ThrusterPose> primary) {
  Vec6d col = Vec6d::Zero();
  for (const auto& t : primary) col -= thruster_column(t);
  return col;
}

Vec6d required_wrench(const Vec3d& f_act_e, const Vec3d& t_act_e, const Vec3d& lever,
                      const RigidBodyParams& body, const ThrusterLayout& layout) {
  // Body and end-effector frames share orientation, so F_act|B = F_act|E.
  const int n_thrusters = static_cast<int>(layout.primary.size()) + 1;
  const Vec3d weight_dir(0.0, 0.0, -1.0);  // nominal hover attitude
  const Vec3d w = layout.thruster_mass * body.gravity * weight_dir;
  const double struct_mass = body.mass - n_thrusters * layout.thruster_mass;
  const Vec3d w_s = struct_mass * body.gravity * weight_dir;

  const Vec3d f_bar = f_act_e - n_thrusters * w - w_s;

  const Vec3d t_act_e_total = t_act_e + lever.cross(f_act_e);
  const Vec3d t_act_b = t_act_e_total + body.r_effector.cross(f_act_e);

  Vec3d moment_of_weights = Vec3d::Zero();
  for (const auto& t : layout.primary) moment_of_weights += t.r.cross(w);
  moment_of_weights += layout.auxiliary.r.cross(w);

  Vec6d wrench;
  wrench.head<3>() = f_bar;
  wrench.tail<3>() =
      t_act_b - layout.torque_coeff * f_bar - moment_of_weights - body.r_struct.cross(w_s);
  return wrench;
}

Vec6d solve_thrust(const WrenchMap& map6, const Vec6d& wrench) {
  if (map6.D.cols() != 6) throw ConfigError("solve_thrust: map must be 6x6");
  if (map6.sigma_min() < 1e-12) {
    throw RankDeficientError("solve_thrust: wrench map is rank deficient");
  }
  return map6.D.partialPivLu().solve(wrench);
}

Eigen::Matrix<double, 7, 1> redistribute(const Vec6d& lambda6, const WrenchMap& map6,
                                         const Vec6d& aux_column) {
  const Vec6d column_sum = map6.D.rowwise().sum();
  if ((aux_column + column_sum).norm() > 1e-9 * std::max(1.0, column_sum.norm())) {
    throw ConfigError("redistribute: auxiliary column must cancel the primary column sum");
  }
  double total_negative = 0.0;
  for (int i = 0; i < 6; ++i) {
    if (lambda6(i) < 0.0) total_negative += -lambda6(i);
  }
  Eigen::Matrix<double, 7, 1> out;
  for (int i = 0; i < 6; ++i) {
    if (lambda6(i) < 0.0) {
      out(i) = total_negative - (-lambda6(i));  // sum of the other negatives
    } else {
      out(i) = lambda6(i) + total_negative;
    }
  }
  out(6) = total_negative;
  return out;
}

SaturationReport check_saturation(const VecXd& lambda, double max_thrust) {
  SaturationReport report;
  for (int i = 0; i < lambda.size(); ++i) {
    if (lambda(i) < 0.0) {
      report.negative.push_back(i);
    } else if (std::abs(lambda(i) - max_thrust) <= 1e-12) {
      report.at_limit.push_back(i);
    } else if (lambda(i) > max_thrust) {
      report.over_limit.push_back(i);
      report.excess.push_back(lambda(i) - max_thrust);
    }
  }
  return report;
}

}  // namespace amtk
