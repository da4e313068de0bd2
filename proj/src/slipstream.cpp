#include "amtk/slipstream.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "amtk/errors.hpp"

namespace amtk {

namespace {

constexpr int kProfileGrid = 64;
constexpr int kMaxIterations = 200;
constexpr double kStepTol = 1e-9;
constexpr double kTouchTol = 1e-12;

// Squared distance from (x0, rho0) to the profile point (x, radius(x)).
inline double profile_dist2(double x, double x0, double rho0) {
  const double dr = SlipstreamVolume::radius(x) - rho0;
  const double dx = x - x0;
  return dx * dx + dr * dr;
}

// Golden-section refinement of a bracketed 1-D minimum.
double golden_min(double lo, double hi, double x0, double rho0) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = profile_dist2(x1, x0, rho0);
  double f2 = profile_dist2(x2, x0, rho0);
  while (b - a > 1e-12) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = profile_dist2(x1, x0, rho0);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = profile_dist2(x2, x0, rho0);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

SlipstreamVolume::SlipstreamVolume(const ThrusterPose& pose) : pose_(pose) {
  const Vec3d axis = pose.dir.normalized();
  const Vec3d u = axis.unitOrthogonal();
  rot_.col(0) = axis;
  rot_.col(1) = u;
  rot_.col(2) = axis.cross(u);
}

Vec3d SlipstreamVolume::membership_residuals(const Vec3d& p_body) const {
  const Vec3d q = to_local(p_body);
  const double f = radius(q.x());
  return Vec3d(q.x() - kAxialMax, kAxialMin - q.x(),
               q.y() * q.y() + q.z() * q.z() - f * f);
}

Vec3d SlipstreamVolume::project(const Vec3d& p_body) const {
  const Vec3d q = to_local(p_body);
  const double x0 = q.x();
  const double rho0 = std::hypot(q.y(), q.z());
  if (x0 >= kAxialMin && x0 <= kAxialMax && rho0 <= radius(x0)) return p_body;

  // 2-D problem in the (axial, radial) half-plane. Candidates: the two cap
  // disks and the profile curve.
  double best_x = kAxialMin, best_rho = std::min(rho0, radius(kAxialMin));
  double best_d2 = (kAxialMin - x0) * (kAxialMin - x0) +
                   (rho0 - best_rho) * (rho0 - best_rho);
  {
    const double rho_cap = std::min(rho0, radius(kAxialMax));
    const double d2 = (kAxialMax - x0) * (kAxialMax - x0) + (rho0 - rho_cap) * (rho0 - rho_cap);
    if (d2 < best_d2) {
      best_d2 = d2;
      best_x = kAxialMax;
      best_rho = rho_cap;
    }
  }

  // Scan the profile for local minima, refine each bracket.
  std::array<double, kProfileGrid + 1> g;
  constexpr double span = kAxialMax - kAxialMin;
  for (int k = 0; k <= kProfileGrid; ++k) {
    g[k] = profile_dist2(kAxialMin + span * k / kProfileGrid, x0, rho0);
  }
  for (int k = 0; k <= kProfileGrid; ++k) {
    const bool left_ok = (k == 0) || g[k] <= g[k - 1];
    const bool right_ok = (k == kProfileGrid) || g[k] <= g[k + 1];
    if (!(left_ok && right_ok)) continue;
    const double lo = kAxialMin + span * std::max(k - 1, 0) / kProfileGrid;
    const double hi = kAxialMin + span * std::min(k + 1, kProfileGrid) / kProfileGrid;
    const double x_star = golden_min(lo, hi, x0, rho0);
    const double d2 = profile_dist2(x_star, x0, rho0);
    if (d2 < best_d2) {
      best_d2 = d2;
      best_x = x_star;
      best_rho = radius(x_star);
    }
  }

  Vec3d radial(0.0, 1.0, 0.0);
  if (rho0 > 1e-12) radial = Vec3d(0.0, q.y() / rho0, q.z() / rho0);
  return to_body(Vec3d(best_x, best_rho * radial.y(), best_rho * radial.z()));
}

std::vector<Vec3d> SlipstreamVolume::seed_points() const {
  std::vector<Vec3d> seeds;
  seeds.reserve(13);
  seeds.push_back(to_body(Vec3d(kAxialMin, 0.0, 0.0)));
  seeds.push_back(to_body(Vec3d(kAxialMax, 0.0, 0.0)));
  const double x_mid = 0.5 * (kAxialMin + kAxialMax);
  const double r_mid = radius(x_mid);
  for (int k = 0; k < 8; ++k) {
    const double a = 2.0 * M_PI * k / 8;
    seeds.push_back(to_body(Vec3d(x_mid, r_mid * std::cos(a), r_mid * std::sin(a))));
  }
  const double r0 = radius(0.0);
  for (int k = 0; k < 3; ++k) {
    const double a = 2.0 * M_PI * k / 3;
    seeds.push_back(to_body(Vec3d(0.0, r0 * std::cos(a), r0 * std::sin(a))));
  }
  return seeds;
}

namespace {

// One alternating-projection run. Returns true if the step tolerance was met.
// Plain alternating projections contract only linearly (witnesses slide
// tangentially), so a safeguarded geometric extrapolation closes the tail.
bool alternate(const SlipstreamVolume& vol_a, const SlipstreamVolume& vol_b, Vec3d& p, Vec3d& q) {
  double step_prev = std::numeric_limits<double>::infinity();
  double dist_prev = std::numeric_limits<double>::infinity();
  int plateau = 0;
  for (int it = 0; it < kMaxIterations; ++it) {
    const Vec3d p_old = p;
    const Vec3d q_old = q;
    p = vol_a.project(q);
    q = vol_b.project(p);
    const double step = std::max((p - p_old).norm(), (q - q_old).norm());
    const double dist = (p - q).norm();
    if (dist < kTouchTol) return true;  // volumes touch or overlap
    if (step < kStepTol) return true;
    // Witnesses can jitter at the profile-search resolution while the
    // distance is already stationary; certify convergence on the value.
    plateau = (std::abs(dist - dist_prev) <= 1e-13 * std::max(1.0, dist)) ? plateau + 1 : 0;
    dist_prev = dist;
    if (plateau >= 12) return true;

    const double ratio = step / step_prev;
    step_prev = step;
    if (it % 8 == 7 && ratio > 0.3 && ratio < 1.0) {
      // Full extrapolation overshoots on curved iterate paths; backtrack.
      double factor = std::min(ratio / (1.0 - ratio), 1e6);
      for (int bt = 0; bt < 6; ++bt, factor *= 0.5) {
        const Vec3d p_jump = vol_a.project(p + factor * (p - p_old));
        const Vec3d q_jump = vol_b.project(q + factor * (q - q_old));
        if ((p_jump - q_jump).norm() <= (p - q).norm()) {
          p = p_jump;
          q = q_jump;
          step_prev = std::numeric_limits<double>::infinity();
          break;
        }
      }
    }
  }
  return false;
}

}  // namespace

ClearanceResult pairwise_clearance(const SlipstreamVolume& vol_i, const SlipstreamVolume& vol_j) {
  // Overlap pre-check along both axes; catches deep intersections cheaply.
  for (int k = 0; k <= 32; ++k) {
    const double x = SlipstreamVolume::kAxialMin +
                     (SlipstreamVolume::kAxialMax - SlipstreamVolume::kAxialMin) * k / 32.0;
    const Vec3d on_i = vol_i.to_body(Vec3d(x, 0.0, 0.0));
    if (vol_j.contains(on_i)) return ClearanceResult{0.0, on_i, on_i, true};
    const Vec3d on_j = vol_j.to_body(Vec3d(x, 0.0, 0.0));
    if (vol_i.contains(on_j)) return ClearanceResult{0.0, on_j, on_j, true};
  }

  ClearanceResult best;
  best.distance = std::numeric_limits<double>::infinity();
  bool any_converged = false;

  auto run_start = [&](const Vec3d& seed, bool seed_on_i) {
    Vec3d p, q;
    if (seed_on_i) {
      if (vol_j.contains(seed)) {
        best = ClearanceResult{0.0, seed, seed, true};
        any_converged = true;
        return;
      }
      p = seed;
      q = vol_j.project(seed);
    } else {
      if (vol_i.contains(seed)) {
        best = ClearanceResult{0.0, seed, seed, true};
        any_converged = true;
        return;
      }
      q = seed;
      p = vol_i.project(seed);
    }
    const bool converged = alternate(vol_i, vol_j, p, q);
    const double d = (p - q).norm();
    any_converged = any_converged || converged;
    if (d < best.distance) {
      best = ClearanceResult{d, p, q, converged};
    }
  };

  for (const Vec3d& s : vol_i.seed_points()) {
    run_start(s, true);
    if (best.distance == 0.0) return best;
  }
  for (const Vec3d& s : vol_j.seed_points()) {
    run_start(s, false);
    if (best.distance == 0.0) return best;
  }

  if (!any_converged) {
    throw NoConvergenceError("pairwise_clearance: no start converged");
  }
  if (best.distance < kStepTol) {
    best.distance = 0.0;
    best.p_j = best.p_i;
  }
  return best;
}

ClearanceResult effector_clearance(const Vec3d& r_effector, double sphere_radius,
                                   const SlipstreamVolume& vol) {
  if (!(sphere_radius > 0.0)) throw ConfigError("effector_clearance: radius must be positive");
  const Vec3d closest = vol.project(r_effector);
  return ClearanceResult{(closest - r_effector).norm(), closest, r_effector, true};
}

}  // namespace amtk
