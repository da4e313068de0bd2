#include <doctest.h>

#include "amtk/slipstream.hpp"
#include "oracles.hpp"

using namespace amtk;

TEST_CASE("membership residuals") {
  const ThrusterPose pose{Vec3d(0.3, -0.2, 0.5), Vec3d(0.0, 0.0, 1.0)};
  const SlipstreamVolume vol(pose);

  SUBCASE("rotor centre is inside with the expected radial slack") {
    const Vec3d res = vol.membership_residuals(pose.r);
    CHECK(res.x() <= 0.0);
    CHECK(res.y() <= 0.0);
    CHECK(res.z() == doctest::Approx(-0.11 * 0.11));
    CHECK(vol.contains(pose.r));
  }
  SUBCASE("0.2 m radial offset at the rotor plane is outside") {
    const Vec3d p = pose.r + Vec3d(0.2, 0.0, 0.0);  // radial for a +z axis
    const Vec3d res = vol.membership_residuals(p);
    CHECK(res.z() == doctest::Approx(0.2 * 0.2 - 0.11 * 0.11));
    CHECK_FALSE(vol.contains(p));
  }
  SUBCASE("beyond the axial extent is outside") {
    const Vec3d p = pose.r + Vec3d(0.0, 0.0, 1.0);
    CHECK(vol.membership_residuals(p).x() == doctest::Approx(1.0 - 0.91));
    CHECK_FALSE(vol.contains(p));
  }
}

TEST_CASE("profile constants") {
  CHECK(SlipstreamVolume::radius(0.0) == doctest::Approx(0.11));
  // The cubic stays positive on the whole axial range.
  double min_radius = 1e9;
  for (int k = 0; k <= 10000; ++k) {
    const double x =
        SlipstreamVolume::kAxialMin +
        (SlipstreamVolume::kAxialMax - SlipstreamVolume::kAxialMin) * k / 10000.0;
    min_radius = std::min(min_radius, SlipstreamVolume::radius(x));
  }
  CHECK(min_radius > 0.09);
}

TEST_CASE("projection returns feasible closest points") {
  auto g = oracles::rng(31);
  for (int k = 0; k < 200; ++k) {
    const ThrusterPose pose{oracles::random_vec3(g, 0.5), oracles::random_unit(g)};
    const SlipstreamVolume vol(pose);
    const Vec3d p = oracles::random_vec3(g, 2.0);
    const Vec3d proj = vol.project(p);
    CHECK((vol.membership_residuals(proj).array() <= 1e-8).all());
    if (vol.contains(p)) {
      CHECK((proj - p).norm() == 0.0);
    } else {
      // No sampled volume point may be closer than the projection.
      const double d = (proj - p).norm();
      const double d_oracle = oracles::dense_point_clearance(p, pose, 20000, 1000 + k);
      CHECK(d <= d_oracle + 1e-9);
      CHECK(d >= d_oracle - 2e-2);  // oracle is sample-limited
    }
  }
}

TEST_CASE("pairwise clearance axial cases") {
  const Vec3d axis = Vec3d(0.3, -0.5, 0.81).normalized();
  const ThrusterPose a{Vec3d(0.1, 0.2, -0.3), axis};

  SUBCASE("identical poses overlap") {
    const ClearanceResult res = pairwise_clearance(SlipstreamVolume(a), SlipstreamVolume(a));
    CHECK(res.distance == 0.0);
    CHECK(res.converged);
  }
  SUBCASE("coaxial volumes 2 m apart have a 1.03 m gap") {
    const ThrusterPose b{a.r + 2.0 * axis, axis};
    const ClearanceResult res = pairwise_clearance(SlipstreamVolume(a), SlipstreamVolume(b));
    CHECK(res.distance == doctest::Approx(2.0 - 0.91 - 0.06).epsilon(1e-6));
    CHECK(res.converged);
    // Witnesses sit on the facing caps along the common axis.
    CHECK(std::abs((res.p_j - res.p_i).normalized().dot(axis)) ==
          doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("effector clearance") {
  const Vec3d axis = Vec3d::UnitX();
  const ThrusterPose a{Vec3d::Zero(), axis};
  const SlipstreamVolume vol(a);

  SUBCASE("inside gives zero") {
    const ClearanceResult res = effector_clearance(Vec3d(0.1, 0.0, 0.0), 0.01, vol);
    CHECK(res.distance == 0.0);
  }
  SUBCASE("on-axis point past the exit plane") {
    const ClearanceResult res = effector_clearance(Vec3d(2.0, 0.0, 0.0), 0.01, vol);
    CHECK(res.distance == doctest::Approx(2.0 - 0.91).epsilon(1e-9));
  }
  SUBCASE("random points agree with the dense oracle") {
    auto g = oracles::rng(32);
    for (int k = 0; k < 20; ++k) {
      const ThrusterPose pose{oracles::random_vec3(g, 0.6), oracles::random_unit(g)};
      const Vec3d point = oracles::random_vec3(g, 1.5);
      const double d = effector_clearance(point, 0.01, SlipstreamVolume(pose)).distance;
      const double d_oracle = oracles::dense_point_clearance(point, pose, 50000, 2000 + k);
      CHECK(std::abs(d - d_oracle) <= std::max(0.02 * d_oracle, 0.005));
    }
  }
}

TEST_CASE("pairwise clearance properties") {
  auto g = oracles::rng(33);

  SUBCASE("symmetry") {
    for (int k = 0; k < 10; ++k) {
      const SlipstreamVolume va({oracles::random_vec3(g, 0.8), oracles::random_unit(g)});
      const SlipstreamVolume vb({oracles::random_vec3(g, 0.8), oracles::random_unit(g)});
      const double dab = pairwise_clearance(va, vb).distance;
      const double dba = pairwise_clearance(vb, va).distance;
      CHECK(std::abs(dab - dba) < 1e-6);
    }
  }

  SUBCASE("rigid-motion invariance") {
    for (int k = 0; k < 10; ++k) {
      const ThrusterPose pa{oracles::random_vec3(g, 0.8), oracles::random_unit(g)};
      const ThrusterPose pb{oracles::random_vec3(g, 0.8), oracles::random_unit(g)};
      const double base = pairwise_clearance(SlipstreamVolume(pa), SlipstreamVolume(pb)).distance;

      const Mat3d rot = Eigen::Quaterniond::FromTwoVectors(oracles::random_unit(g),
                                                           oracles::random_unit(g))
                            .toRotationMatrix();
      const Vec3d shift = oracles::random_vec3(g, 2.0);
      const ThrusterPose qa{rot * pa.r + shift, rot * pa.dir};
      const ThrusterPose qb{rot * pb.r + shift, rot * pb.dir};
      const double moved = pairwise_clearance(SlipstreamVolume(qa), SlipstreamVolume(qb)).distance;
      CHECK(std::abs(base - moved) < 1e-6);
    }
  }

  SUBCASE("witness feasibility") {
    for (int k = 0; k < 20; ++k) {
      const SlipstreamVolume va({oracles::random_vec3(g, 0.8), oracles::random_unit(g)});
      const SlipstreamVolume vb({oracles::random_vec3(g, 0.8), oracles::random_unit(g)});
      const ClearanceResult res = pairwise_clearance(va, vb);
      CHECK((va.membership_residuals(res.p_i).array() <= 1e-8).all());
      CHECK((vb.membership_residuals(res.p_j).array() <= 1e-8).all());
    }
  }

  SUBCASE("moving apart along the witness direction never decreases distance") {
    for (int k = 0; k < 10; ++k) {
      const ThrusterPose pa{oracles::random_vec3(g, 0.8), oracles::random_unit(g)};
      const ThrusterPose pb{oracles::random_vec3(g, 0.8), oracles::random_unit(g)};
      const ClearanceResult base = pairwise_clearance(SlipstreamVolume(pa), SlipstreamVolume(pb));
      if (base.distance <= 1e-9) continue;
      const Vec3d away = (base.p_j - base.p_i).normalized();
      double prev = base.distance;
      for (double shift : {0.05, 0.15, 0.4}) {
        const ThrusterPose pb_shift{pb.r + shift * away, pb.dir};
        const double d =
            pairwise_clearance(SlipstreamVolume(pa), SlipstreamVolume(pb_shift)).distance;
        CHECK(d >= prev - 1e-6);
        prev = d;
      }
    }
  }
}

TEST_CASE("pairwise clearance agrees with a dense oracle (small sample)") {
  // The acceptance suite runs the full 1e6-sample version; this is a fast
  // regression at 1e5 samples.
  auto g = oracles::rng(34);
  for (int k = 0; k < 6; ++k) {
    const ThrusterPose pa{oracles::random_vec3(g, 0.8), oracles::random_unit(g)};
    const ThrusterPose pb{oracles::random_vec3(g, 0.8), oracles::random_unit(g)};
    const double d = pairwise_clearance(SlipstreamVolume(pa), SlipstreamVolume(pb)).distance;
    const double d_oracle = oracles::dense_clearance(pa, pb, 100000, 4000 + k);
    CHECK(std::abs(d - d_oracle) <= std::max(0.03 * d_oracle, 0.01));
  }
}
