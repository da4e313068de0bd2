#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "amtk/dynamics.hpp"
#include "amtk/errors.hpp"
#include "amtk/kinematics.hpp"
#include "amtk/params_io.hpp"
#include "amtk/wrench_map.hpp"
#include "oracles.hpp"

using namespace amtk;

static const std::string kParamsPath = std::string(AMTK_DATA_DIR) + "/table2_params.json";

namespace {

RigidBodyParams table2_body() { return load_params(kParamsPath).body; }
ThrusterLayout table2_layout() { return make_layout(load_params(kParamsPath)); }

}  // namespace

TEST_CASE("inertia matrix") {
  SUBCASE("centered CoG gives a block-diagonal matrix") {
    RigidBodyParams body;
    body.mass = 2.5;
    body.inertia_cog = Vec3d(0.4, 0.3, 0.6).asDiagonal();
    const Mat6d m = inertia_matrix(body);
    CHECK((m.topLeftCorner<3, 3>() - 2.5 * Mat3d::Identity()).norm() == 0.0);
    CHECK(m.topRightCorner<3, 3>().norm() == 0.0);
    CHECK((m.bottomRightCorner<3, 3>() - body.inertia_cog).norm() == 0.0);
  }

  SUBCASE("bundled body: symmetric, positive definite") {
    const Mat6d m = inertia_matrix(table2_body());
    CHECK((m - m.transpose()).norm() == 0.0);
    Eigen::SelfAdjointEigenSolver<Mat6d> eig(m);
    CHECK(eig.eigenvalues().minCoeff() > 0.0);
  }

  SUBCASE("random perturbed bodies stay positive definite") {
    auto g = oracles::rng(41);
    for (int k = 0; k < 100; ++k) {
      RigidBodyParams body = table2_body();
      body.mass = oracles::uniform(g, 0.5, 5.0);
      const Vec3d d = Vec3d(oracles::uniform(g, 0.1, 1.0), oracles::uniform(g, 0.1, 1.0),
                            oracles::uniform(g, 0.1, 1.0));
      body.inertia_cog = d.asDiagonal();
      body.r_cog = oracles::random_vec3(g, 0.1);
      const Mat6d m = inertia_matrix(body);
      Eigen::SelfAdjointEigenSolver<Mat6d> eig(m);
      CHECK(eig.eigenvalues().minCoeff() > 0.0);
    }
  }
}

TEST_CASE("coriolis matrix is skew-symmetric") {
  const RigidBodyParams body = table2_body();
  CHECK(coriolis_matrix(body, Twist6{}).norm() == 0.0);

  auto g = oracles::rng(42);
  for (int k = 0; k < 1000; ++k) {
    Twist6 tw{oracles::random_vec3(g, 3.0), oracles::random_vec3(g, 3.0)};
    const Mat6d c = coriolis_matrix(body, tw);
    CHECK((c + c.transpose()).norm() < 1e-12 * std::max(1.0, c.norm()));
    const Vec6d nu = tw.stacked();
    CHECK(std::abs(nu.dot(c * nu)) < 1e-12 * std::max(1.0, nu.squaredNorm() * c.norm()));
  }
}

TEST_CASE("body wrench") {
  const RigidBodyParams body = table2_body();
  const ThrusterLayout layout = table2_layout();

  SUBCASE("zero thrust at level attitude leaves only gravity") {
    const Vec6d w = body_wrench(Pose6{}, Vec6d::Zero(), layout, body);
    CHECK(w.head<3>() == Vec3d(0, 0, -body.mass * body.gravity));
    CHECK((w.tail<3>() + body.mass * body.gravity * body.r_cog.cross(Vec3d::UnitZ())).norm() ==
          0.0);
  }

  SUBCASE("zero gravity, single thruster returns its column") {
    RigidBodyParams weightless = body;
    weightless.gravity = 0.0;
    const Vec6d w = body_wrench(Pose6{}, Vec6d::Unit(0), layout, weightless);
    Vec6d expected = thruster_column(layout.primary[0]);
    expected.tail<3>() += layout.torque_coeff * layout.primary[0].dir;
    CHECK((w - expected).norm() < 1e-15);
  }

  SUBCASE("hover thrust solve nulls the wrench") {
    Mat6d fe;
    for (int i = 0; i < 6; ++i) {
      fe.col(i) = thruster_column(layout.primary[i]);
      fe.col(i).tail<3>() += layout.torque_coeff * layout.primary[i].dir;
    }
    Vec6d gravity;
    gravity.head<3>() = body.mass * body.gravity * Vec3d::UnitZ();
    gravity.tail<3>() = body.mass * body.gravity * body.r_cog.cross(Vec3d::UnitZ());
    const Vec6d hover = fe.partialPivLu().solve(gravity);
    const Vec6d w = body_wrench(Pose6{}, hover, layout, body);
    CHECK(w.norm() < 1e-9);
  }
}

TEST_CASE("state derivative") {
  const RigidBodyParams body = table2_body();
  const ThrusterLayout layout = table2_layout();
  const DynamicsModel model = DynamicsModel::create(body, layout, Vec6d::Ones());

  SUBCASE("at rest only gravity accelerates") {
    const StateDerivative d = state_derivative(SimState{}, Vec6d::Zero(), model);
    CHECK(d.pose_rate.norm() == 0.0);
    CHECK((d.twist_rate - model.gravity_accel(Pose6{})).norm() == 0.0);
  }

  SUBCASE("matches the explicit inverse-dynamics form") {
    auto g = oracles::rng(43);
    for (int k = 0; k < 1000; ++k) {
      SimState s;
      s.pose = Pose6{oracles::random_vec3(g, 2.0), oracles::random_rpy(g)};
      s.twist = Twist6{oracles::random_vec3(g, 2.0), oracles::random_vec3(g, 2.0)};
      Vec6d lam;
      for (int i = 0; i < 6; ++i) lam(i) = oracles::uniform(g, -10.0, 10.0);
      const StateDerivative d = state_derivative(s, lam, model);

      const Mat6d m = inertia_matrix(body);
      const Vec6d explicit_rate = m.partialPivLu().solve(
          body_wrench(s.pose, lam, layout, body) -
          coriolis_matrix(body, s.twist) * s.twist.stacked());
      CHECK((d.twist_rate - explicit_rate).norm() < 1e-12 * std::max(1.0, explicit_rate.norm()));
      CHECK((d.pose_rate - system_jacobian(s.pose, body.r_effector) * s.twist.stacked()).norm() ==
            0.0);
    }
  }

  SUBCASE("effectiveness scales the propulsion term exactly") {
    const DynamicsModel faded =
        DynamicsModel::create(body, layout, 0.85 * Vec6d::Ones());
    const Vec6d lam = (Vec6d() << 1, -2, 3, 4, -5, 6).finished();
    const SimState s;
    const Vec6d full = state_derivative(s, lam, model).twist_rate;
    const Vec6d reduced = state_derivative(s, lam, faded).twist_rate;
    const Vec6d gravity = model.gravity_accel(s.pose);
    CHECK((reduced - gravity - 0.85 * (full - gravity)).norm() < 1e-12);
  }
}

TEST_CASE("rk4 integrator") {
  const RigidBodyParams body = table2_body();
  const ThrusterLayout layout = table2_layout();

  SUBCASE("free tumbling body conserves kinetic energy") {
    RigidBodyParams weightless = body;
    weightless.gravity = 0.0;
    const DynamicsModel model = DynamicsModel::create(weightless, layout, Vec6d::Ones());
    SimState s;
    s.pose = Pose6{Vec3d::Zero(), Vec3d(0.1, 0.05, -0.2)};
    s.twist = Twist6{Vec3d(0.3, -0.1, 0.2), Vec3d(0.05, 0.04, -0.12)};
    const Mat6d m = model.inertia;
    const double e0 = 0.5 * s.twist.stacked().dot(m * s.twist.stacked());
    int steps = 0;
    for (int k = 0; k < 10000; ++k) {
      s = step_rk4(s, Vec6d::Zero(), model, 1e-3);
      ++steps;
      if (std::abs(s.pose.rpy.y()) > M_PI / 2 - 0.1) break;  // stay off the gimbal singularity
    }
    CHECK(steps == 10000);  // the chosen tumble must cover the full 10 s horizon
    const double e1 = 0.5 * s.twist.stacked().dot(m * s.twist.stacked());
    CHECK(std::abs(e1 - e0) < 1e-8);
  }

  SUBCASE("halving dt shrinks the error about sixteenfold") {
    const DynamicsModel model = DynamicsModel::create(body, layout, Vec6d::Ones());
    const Vec6d lam = (Vec6d() << 2, 1, 3, 2, 1, 2).finished();
    auto propagate = [&](double dt, double horizon) {
      SimState s;
      const long n = std::lround(horizon / dt);
      for (long k = 0; k < n; ++k) s = step_rk4(s, lam, model, dt);
      return s;
    };
    const Vec6d ref = propagate(1e-5, 0.2).twist.stacked();
    const double err_coarse = (propagate(4e-3, 0.2).twist.stacked() - ref).norm();
    const double err_fine = (propagate(2e-3, 0.2).twist.stacked() - ref).norm();
    CHECK(err_coarse / err_fine > 8.0);
    CHECK(err_coarse / err_fine < 32.0);
  }

  SUBCASE("exact hover thrust is a fixed point") {
    const DynamicsModel model = DynamicsModel::create(body, layout, Vec6d::Ones());
    Mat6d fe;
    for (int i = 0; i < 6; ++i) {
      fe.col(i) = thruster_column(layout.primary[i]);
      fe.col(i).tail<3>() += layout.torque_coeff * layout.primary[i].dir;
    }
    Vec6d gravity;
    gravity.head<3>() = body.mass * body.gravity * Vec3d::UnitZ();
    gravity.tail<3>() = body.mass * body.gravity * body.r_cog.cross(Vec3d::UnitZ());
    const Vec6d hover = fe.partialPivLu().solve(gravity);
    SimState s;
    const SimState next = step_rk4(s, hover, model, 1e-3);
    CHECK((next.pose.stacked() - s.pose.stacked()).norm() < 1e-12);
    CHECK((next.twist.stacked() - s.twist.stacked()).norm() < 1e-12);
  }

  SUBCASE("rejects a non-positive step") {
    const DynamicsModel model = DynamicsModel::create(body, layout, Vec6d::Ones());
    CHECK_THROWS_AS(step_rk4(SimState{}, Vec6d::Zero(), model, 0.0), ConfigError);
  }
}
