#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "amtk/params_io.hpp"
#include "amtk/errors.hpp"

using namespace amtk;

static const std::string kParamsPath = std::string(AMTK_DATA_DIR) + "/table2_params.json";

TEST_CASE("bundled parameter file round-trips the printed values exactly") {
  const ParamFile p = load_params(kParamsPath);
  CHECK(p.body.mass == 1.90);
  CHECK(p.body.r_effector.x() == -0.23);
  CHECK(p.body.r_effector.y() == 0.015);
  CHECK(p.body.r_effector.z() == 0.23);
  CHECK(p.body.inertia_cog(0, 0) == 0.3488);
  CHECK(p.body.inertia_cog(2, 0) == -0.0457);
  CHECK(p.thruster_mass == 0.12);
  CHECK(p.torque_coeff == 0.1473);
  CHECK(p.max_thrust == 28.0);
  CHECK(p.body.gravity == 9.81);
  CHECK(p.thruster_positions.size() == 7);
  CHECK(p.thruster_positions[2] == Vec3d(0.1, -0.9, -0.2));
  CHECK(p.thruster_directions[6] == Vec3d(-0.59, 0.62, -0.51));
  CHECK(p.structure_volume_diag == 1.80018);
}

TEST_CASE("layout construction and validation") {
  const ParamFile p = load_params(kParamsPath);
  validate_body(p.body);
  const ThrusterLayout layout = make_layout(p);
  CHECK(layout.primary.size() == 6);
  for (const auto& t : layout.primary) {
    CHECK(std::abs(t.dir.norm() - 1.0) <= 1e-12);
  }
  CHECK(std::abs(layout.auxiliary.dir.norm() - 1.0) <= 1e-12);
  CHECK_NOTHROW(validate_layout(layout));

  SUBCASE("a flipped auxiliary direction is rejected") {
    ThrusterLayout bad = layout;
    bad.auxiliary.dir = -bad.auxiliary.dir;
    CHECK_THROWS_AS(validate_layout(bad), ConfigError);
  }
  SUBCASE("too few primaries are rejected") {
    ThrusterLayout bad = layout;
    bad.primary.resize(5);
    CHECK_THROWS_AS(validate_layout(bad), ConfigError);
  }
}

TEST_CASE("save/load round-trip preserves every field bit-exactly") {
  const ParamFile p = load_params(kParamsPath);
  const std::string tmp = "roundtrip_params.json";
  save_params(p, tmp);
  const ParamFile q = load_params(tmp);
  std::remove(tmp.c_str());
  CHECK(q.body.mass == p.body.mass);
  CHECK((q.body.inertia_cog - p.body.inertia_cog).norm() == 0.0);
  CHECK(q.body.r_cog == p.body.r_cog);
  CHECK(q.body.r_struct == p.body.r_struct);
  CHECK(q.structure_volume_diag == p.structure_volume_diag);
  for (std::size_t i = 0; i < 7; ++i) {
    CHECK(q.thruster_positions[i] == p.thruster_positions[i]);
    CHECK(q.thruster_directions[i] == p.thruster_directions[i]);
  }
}

TEST_CASE("config errors carry path context") {
  CHECK_THROWS_AS(load_params("does_not_exist.json"), ConfigError);

  const std::string tmp = "bad_params.json";
  {
    std::ofstream out(tmp);
    out << "{\"mass_kg\": 1.0}";
  }
  CHECK_THROWS_AS(load_params(tmp), ConfigError);
  std::remove(tmp.c_str());
}

TEST_CASE("body validation rejects non-physical inertia") {
  RigidBodyParams body;
  body.mass = 1.0;
  body.inertia_cog = Mat3d::Identity();
  CHECK_NOTHROW(validate_body(body));

  body.inertia_cog(0, 0) = -1.0;
  CHECK_THROWS_AS(validate_body(body), NotPositiveDefiniteError);

  body.inertia_cog = Mat3d::Identity();
  body.mass = -2.0;
  CHECK_THROWS_AS(validate_body(body), ConfigError);
}
