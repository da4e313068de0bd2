#include "amtk/params_io.hpp"

#include <fstream>
#include <limits>

#include <json.hpp>

#include "amtk/errors.hpp"
#include "amtk/kinematics.hpp"

namespace amtk {

using nlohmann::json;

namespace {

Vec3d read_vec3(const json& j, const std::string& key) {
  const auto& arr = j.at(key);
  if (!arr.is_array() || arr.size() != 3) {
    throw ConfigError("expected 3-element array for key '" + key + "'");
  }
  return Vec3d(arr[0].get<double>(), arr[1].get<double>(), arr[2].get<double>());
}

json vec3_to_json(const Vec3d& v) { return json::array({v.x(), v.y(), v.z()}); }

}  // namespace

ParamFile load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open parameter file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("malformed JSON in " + path + ": " + e.what());
  }

  ParamFile p;
  try {
    p.body.mass = j.at("mass_kg").get<double>();
    const auto& ig = j.at("inertia_G");
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) p.body.inertia_cog(r, c) = ig.at(r).at(c).get<double>();
    p.body.r_cog = read_vec3(j, "r_G");
    p.body.r_struct = read_vec3(j, "r_s");
    p.body.r_effector = read_vec3(j, "r_e");
    p.body.gravity = j.at("g").get<double>();
    p.torque_coeff = j.at("mu").get<double>();
    p.max_thrust = j.at("lambda_max_N").get<double>();
    p.thruster_mass = j.at("thruster_mass_kg").get<double>();
    if (j.contains("structure_volume_diag"))
      p.structure_volume_diag = j["structure_volume_diag"].get<double>();
    for (const auto& t : j.at("thrusters")) {
      p.thruster_positions.push_back(read_vec3(t, "r"));
      p.thruster_directions.push_back(read_vec3(t, "F_hat"));
    }
  } catch (const json::exception& e) {
    throw ConfigError("bad parameter file " + path + ": " + e.what());
  }
  if (p.thruster_positions.size() < 7) {
    throw ConfigError("parameter file must list at least 7 thrusters (primaries + auxiliary)");
  }
  return p;
}

void save_params(const ParamFile& p, const std::string& path) {
  json j;
  j["mass_kg"] = p.body.mass;
  j["thruster_mass_kg"] = p.thruster_mass;
  json ig = json::array();
  for (int r = 0; r < 3; ++r) {
    ig.push_back(json::array({p.body.inertia_cog(r, 0), p.body.inertia_cog(r, 1),
                              p.body.inertia_cog(r, 2)}));
  }
  j["inertia_G"] = ig;
  j["r_G"] = vec3_to_json(p.body.r_cog);
  j["r_s"] = vec3_to_json(p.body.r_struct);
  j["r_e"] = vec3_to_json(p.body.r_effector);
  j["g"] = p.body.gravity;
  j["mu"] = p.torque_coeff;
  j["lambda_max_N"] = p.max_thrust;
  if (std::isfinite(p.structure_volume_diag)) j["structure_volume_diag"] = p.structure_volume_diag;
  json list = json::array();
  for (std::size_t i = 0; i < p.thruster_positions.size(); ++i) {
    list.push_back({{"r", vec3_to_json(p.thruster_positions[i])},
                    {"F_hat", vec3_to_json(p.thruster_directions[i])}});
  }
  j["thrusters"] = list;
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write parameter file: " + path);
  out << j.dump(2) << "\n";
}

ThrusterLayout make_layout(const ParamFile& p) {
  ThrusterLayout layout;
  layout.thruster_mass = p.thruster_mass;
  layout.max_thrust = p.max_thrust;
  layout.torque_coeff = p.torque_coeff;
  const std::size_t n = p.thruster_positions.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double norm = p.thruster_directions[i].norm();
    if (norm < 1e-9) throw ConfigError("thruster direction has near-zero norm");
    ThrusterPose pose{p.thruster_positions[i], p.thruster_directions[i] / norm};
    if (i + 1 < n) {
      layout.primary.push_back(pose);
    } else {
      layout.auxiliary = pose;
    }
  }
  return layout;
}

void validate_body(const RigidBodyParams& body) {
  if (!(body.mass > 0)) throw ConfigError("mass must be positive");
  if ((body.inertia_cog - body.inertia_cog.transpose()).norm() > 1e-12) {
    throw ConfigError("inertia_G must be symmetric");
  }
  Eigen::LLT<Mat3d> llt_g(body.inertia_cog);
  if (llt_g.info() != Eigen::Success) {
    throw NotPositiveDefiniteError("inertia_G is not positive definite");
  }
  const Mat3d s = skew<double>(body.r_cog);
  const Mat3d i_b = body.inertia_cog - body.mass * s * s;
  Eigen::LLT<Mat3d> llt_b(i_b);
  if (llt_b.info() != Eigen::Success) {
    throw NotPositiveDefiniteError("body-frame inertia I_B is not positive definite");
  }
}

void validate_layout(const ThrusterLayout& layout, double aux_tol) {
  if (layout.primary.size() < 6) throw ConfigError("layout needs at least 6 primary thrusters");
  Vec3d sum = Vec3d::Zero();
  for (const auto& t : layout.primary) {
    if (std::abs(t.dir.norm() - 1.0) > 1e-9) throw ConfigError("primary direction not unit");
    sum += t.dir;
  }
  if (std::abs(layout.auxiliary.dir.norm() - 1.0) > 1e-9)
    throw ConfigError("auxiliary direction not unit");
  const Vec3d expected = -sum;
  if (expected.norm() > 1e-9) {
    const Vec3d diff = layout.auxiliary.dir - expected / expected.norm();
    if (diff.cwiseAbs().maxCoeff() > aux_tol) {
      throw ConfigError("auxiliary direction inconsistent with primary direction sum");
    }
  }
}

}  // namespace amtk
