#include "amtk/design.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <ostream>
#include <random>
#include <thread>

#include <Eigen/SVD>

#include "amtk/errors.hpp"
#include "amtk/pattern_search.hpp"
#include "amtk/slipstream.hpp"
#include "amtk/wrench_map.hpp"

namespace amtk {

void OptimizerConfig::validate() const {
  if (!(epsilon1 > 0 && epsilon2 > 0 && effector_radius > 0 && aux_tol > 0)) {
    throw ConfigError("optimizer tolerances must be positive");
  }
  if (!(kappa_max >= 1.0)) throw ConfigError("kappa_max must be >= 1");
  if (n_lhs < 1 || top_k < 1 || gps_budget < 1) throw ConfigError("optimizer budgets must be >= 1");
  if (!(mesh_init > 0 && mesh_tol > 0 && position_bound > 0)) {
    throw ConfigError("mesh and bound parameters must be positive");
  }
}

DecodedDesign decode_design(const DesignVector& x) {
  DecodedDesign d;
  std::array<Vec3d, 6> dirs;
  for (int i = 0; i < 6; ++i) {
    const Vec3d raw = x.segment<3>(24 + 3 * i);
    const double norm = raw.norm();
    if (norm < 1e-9) {
      d.why = "direction parameters below the normalization floor";
      return d;
    }
    dirs[i] = raw / norm;
    d.thrusters[i].r = x.segment<3>(3 * i);
    d.thrusters[i].dir = dirs[i];
  }
  d.r_effector = x.segment<3>(21);

  Vec3d f = Vec3d::Zero();
  for (const auto& dir : dirs) f -= dir;
  const double f_norm = f.norm();
  if (f_norm < 1e-9) {
    d.why = "primary directions cancel; no auxiliary direction";
    return d;
  }
  const Vec3d f_hat = f / f_norm;

  // The moment equation f x r7 = c is solvable only for c orthogonal to f.
  // Project the primary positions onto that manifold by shifting the
  // best-conditioned thruster along f_hat x dir_j (a linear, exact move).
  auto moment_rhs = [&]() {
    Vec3d c = Vec3d::Zero();
    for (int i = 0; i < 6; ++i) c -= dirs[i].cross(d.thrusters[i].r);
    return c;
  };
  Vec3d c = moment_rhs();
  const double defect = f_hat.dot(c);
  int best_j = -1;
  double best_lever = 0.0;
  for (int i = 0; i < 6; ++i) {
    const double lever = f_hat.cross(dirs[i]).norm();
    if (lever > best_lever) {
      best_lever = lever;
      best_j = i;
    }
  }
  if (best_j < 0 || best_lever < 1e-9) {
    d.why = "all directions parallel to the auxiliary axis";
    return d;
  }
  const Vec3d shift_dir = f_hat.cross(dirs[best_j]).normalized();
  // Shifting r_j by a*u changes f_hat.c by -a * u.(f_hat x dir_j).
  d.thrusters[best_j].r += (defect / best_lever) * shift_dir;
  c = moment_rhs();

  d.thrusters[6].r = c.cross(f) / f.squaredNorm() + x(kFreeAxialIndex) * f_hat;
  d.thrusters[6].dir = f_hat;
  d.aux_dir_raw = f;
  d.valid = true;
  return d;
}

namespace {

// Runs fn(i) for i in [0, n) across a few threads; results land by index.
template <typename Fn>
void parallel_for(int n, bool parallel, Fn&& fn) {
  unsigned workers = parallel ? std::min(4u, std::thread::hardware_concurrency()) : 1u;
  if (workers <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
  };
  std::vector<std::future<void>> futs;
  for (unsigned w = 1; w < workers; ++w) futs.push_back(std::async(std::launch::async, worker));
  worker();
  for (auto& f : futs) f.get();
}

}  // namespace

CandidateEvaluation evaluate_geometry(const std::array<ThrusterPose, 7>& thrusters,
                                      const Vec3d& aux_dir_raw, const Vec3d& r_effector,
                                      const OptimizerConfig& cfg) {
  CandidateEvaluation ev;
  ev.decodable = true;

  double pos_sq = 0.0;
  for (const auto& t : thrusters) pos_sq += t.r.squaredNorm();
  ev.objective = std::sqrt(pos_sq);

  Mat6d d_map;
  for (int i = 0; i < 6; ++i) {
    d_map.col(i) << thrusters[i].dir, thrusters[i].r.cross(thrusters[i].dir);
  }
  Eigen::JacobiSVD<Mat6d> svd(d_map);
  ev.sigma_min = svd.singularValues()(5);
  ev.kappa = svd.singularValues()(0) / std::max(ev.sigma_min, 1e-300);

  Vec3d dir_sum = Vec3d::Zero();
  Vec3d moment_sum = Vec3d::Zero();
  for (int i = 0; i < 6; ++i) {
    dir_sum += thrusters[i].dir;
    moment_sum += thrusters[i].dir.cross(thrusters[i].r);
  }
  const double scale_mismatch =
      (thrusters[6].dir * aux_dir_raw.norm() - aux_dir_raw).norm();
  ev.aux_dir_residual = std::max((aux_dir_raw + dir_sum).norm(), scale_mismatch);
  ev.aux_moment_residual = (aux_dir_raw.cross(thrusters[6].r) + moment_sum).norm();

  std::vector<SlipstreamVolume> volumes;
  volumes.reserve(7);
  for (const auto& t : thrusters) volumes.emplace_back(t);

  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < 7; ++i) {
    for (int j = i + 1; j < 7; ++j) pairs.emplace_back(i, j);
  }
  parallel_for(static_cast<int>(pairs.size()) + 7, cfg.parallel, [&](int k) {
    if (k < static_cast<int>(pairs.size())) {
      ev.pairwise_clearances[k] =
          pairwise_clearance(volumes[pairs[k].first], volumes[pairs[k].second]).distance;
    } else {
      ev.effector_clearances[k - pairs.size()] =
          effector_clearance(r_effector, cfg.effector_radius, volumes[k - pairs.size()]).distance;
    }
  });

  double pen = 0.0;
  pen += std::max(0.0, cfg.epsilon1 - ev.sigma_min) / cfg.epsilon1;
  pen += std::max(0.0, ev.kappa - cfg.kappa_max) / cfg.kappa_max;
  for (double d : ev.pairwise_clearances) pen += std::max(0.0, cfg.epsilon2 - d) / cfg.epsilon2;
  for (double d : ev.effector_clearances) {
    pen += std::max(0.0, cfg.effector_radius - d) / cfg.effector_radius;
  }
  pen += std::max(0.0, ev.aux_dir_residual - cfg.aux_tol) / cfg.aux_tol;
  pen += std::max(0.0, ev.aux_moment_residual - cfg.aux_tol) / cfg.aux_tol;
  ev.penalty = pen;
  ev.feasible = (pen == 0.0);
  return ev;
}

CandidateEvaluation evaluate_candidate(const DesignVector& x, const OptimizerConfig& cfg) {
  const DecodedDesign d = decode_design(x);
  if (!d.valid) {
    CandidateEvaluation ev;
    ev.penalty = 1e30;
    return ev;
  }
  return evaluate_geometry(d.thrusters, d.aux_dir_raw, d.r_effector, cfg);
}

namespace {

bool better(const CandidateEvaluation& a, const CandidateEvaluation& b) {
  if (a.feasible != b.feasible) return a.feasible;
  if (a.feasible) return a.objective < b.objective;
  if (a.penalty != b.penalty) return a.penalty < b.penalty;
  return a.objective < b.objective;
}

}  // namespace

std::vector<RankedCandidate> lhs_presearch(const OptimizerConfig& cfg) {
  cfg.validate();
  const int n = cfg.n_lhs;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // One sample per stratum per dimension: permuted strata + in-stratum jitter.
  std::vector<DesignVector> samples(n, DesignVector::Zero());
  std::vector<int> strata(n);
  for (int dim = 0; dim < 45; ++dim) {
    const double bound = (dim < 24) ? cfg.position_bound : 1.0;
    std::iota(strata.begin(), strata.end(), 0);
    std::shuffle(strata.begin(), strata.end(), rng);
    for (int k = 0; k < n; ++k) {
      const double u = (strata[k] + unit(rng)) / n;  // in [0,1)
      samples[k](dim) = -bound + 2.0 * bound * u;
    }
  }

  std::vector<RankedCandidate> out(n);
  for (int k = 0; k < n; ++k) {
    out[k].x = samples[k];
    out[k].eval = evaluate_candidate(samples[k], cfg);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const RankedCandidate& a, const RankedCandidate& b) {
                     return better(a.eval, b.eval);
                   });
  return out;
}

RankedCandidate pattern_search(const DesignVector& start, const OptimizerConfig& cfg,
                               GpsTrace* trace) {
  cfg.validate();
  gps::Options opt;
  opt.mesh_init = cfg.mesh_init;
  opt.mesh_tol = cfg.mesh_tol;
  opt.budget = cfg.gps_budget;

  std::vector<gps::Iterate> iterates;
  const VecXd x_final = gps::search(
      VecXd(start), opt,
      [&](const VecXd& x) {
        const CandidateEvaluation ev = evaluate_candidate(DesignVector(x), cfg);
        return gps::Score{ev.feasible, ev.objective, ev.penalty};
      },
      trace ? &iterates : nullptr);
  if (trace) {
    for (const auto& it : iterates) {
      trace->iterates.push_back({it.iter, it.mesh, it.objective, it.feasible_count, it.feasible});
    }
  }
  RankedCandidate out;
  out.x = x_final;
  out.eval = evaluate_candidate(out.x, cfg);
  return out;
}

DesignResult run_design(const OptimizerConfig& cfg, std::ostream* log) {
  cfg.validate();
  const std::vector<RankedCandidate> ranked = lhs_presearch(cfg);
  DesignResult result;
  for (const auto& c : ranked) {
    if (c.eval.feasible) ++result.lhs_feasible;
  }

  bool have_best = false;
  const int k_starts = std::min<int>(cfg.top_k, static_cast<int>(ranked.size()));
  for (int k = 0; k < k_starts; ++k) {
    GpsTrace trace;
    try {
      RankedCandidate refined = pattern_search(ranked[k].x, cfg, &trace);
      if (!have_best || refined.eval.objective < result.best.eval.objective) {
        result.best = refined;
        have_best = true;
      }
    } catch (const NoFeasibleStartError&) {
      // This start never reached feasibility; try the next one.
    }
    if (log) {
      for (const auto& it : trace.iterates) {
        *log << it.iter << ',' << it.mesh << ',' << it.objective << ',' << it.feasible_count
             << '\n';
      }
    }
    result.trace.iterates.insert(result.trace.iterates.end(), trace.iterates.begin(),
                                 trace.iterates.end());
  }
  if (!have_best) {
    throw NoFeasibleDesignError("run_design: no feasible design within the configured budget");
  }
  return result;
}

}  // namespace amtk
