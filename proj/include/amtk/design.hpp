#ifndef AMTK_DESIGN_HPP
#define AMTK_DESIGN_HPP

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "amtk/types.hpp"

namespace amtk {

struct OptimizerConfig {
  double epsilon1 = 1e-3;         // singular-value floor for D
  double epsilon2 = 1e-2;         // m, minimum pairwise clearance
  double effector_radius = 1e-2;  // m, end-effector sphere
  double kappa_max = 5.0;
  double aux_tol = 1e-6;  // auxiliary equality residual bound
  int n_lhs = 1000;
  int top_k = 5;
  int gps_budget = 5000;  // evaluations per pattern-search run
  double mesh_init = 0.25;
  double mesh_tol = 1e-4;
  double position_bound = 1.0;  // +- m, sampling box for positions
  std::uint64_t seed = 0;
  bool parallel = true;

  void validate() const;
};

/// 45 reals: positions of thrusters 1..7 (21), end-effector position (3),
/// raw direction parameters for thrusters 1..7 (21). Thruster 7 is derived;
/// its slots hold one free axial coordinate plus reserved padding.
using DesignVector = Eigen::Matrix<double, 45, 1>;

constexpr int kFreeAxialIndex = 18;  // first slot of the thruster-7 position triple

struct DecodedDesign {
  bool valid = false;
  std::string why;  // set when !valid
  std::array<ThrusterPose, 7> thrusters{};  // unit directions; index 6 = auxiliary
  Vec3d aux_dir_raw = Vec3d::Zero();        // -sum of primary directions
  Vec3d r_effector = Vec3d::Zero();
};

/// Decodes the raw vector into a geometry satisfying both auxiliary
/// equalities exactly: normalizes directions, projects the primary positions
/// onto the moment-solvability manifold, then derives thruster 7.
DecodedDesign decode_design(const DesignVector& x);

struct CandidateEvaluation {
  bool decodable = false;
  bool feasible = false;
  double objective = 0.0;  // Frobenius norm of the stacked 3x7 position matrix
  double sigma_min = 0.0;
  double kappa = 0.0;
  std::array<double, 21> pairwise_clearances{};  // ordered (i<j) lexicographically
  std::array<double, 7> effector_clearances{};
  double aux_dir_residual = 0.0;
  double aux_moment_residual = 0.0;
  double penalty = 0.0;  // scaled constraint violation, 0 iff feasible
};

/// Runs the 21 + 7 clearance problems, the singular-value analysis and the
/// auxiliary residual checks for an explicit geometry.
CandidateEvaluation evaluate_geometry(const std::array<ThrusterPose, 7>& thrusters,
                                      const Vec3d& aux_dir_raw, const Vec3d& r_effector,
                                      const OptimizerConfig& cfg);

CandidateEvaluation evaluate_candidate(const DesignVector& x, const OptimizerConfig& cfg);

struct RankedCandidate {
  DesignVector x;
  CandidateEvaluation eval;
};

/// Stratified presearch: one sample per axis stratum per dimension,
/// ranked by (feasibility, penalty, objective). Deterministic under the seed.
std::vector<RankedCandidate> lhs_presearch(const OptimizerConfig& cfg);

struct GpsIterate {
  int iter = 0;
  double mesh = 0.0;
  double objective = 0.0;
  int feasible_count = 0;  // cumulative feasible evaluations
  bool feasible = false;   // current iterate
};

struct GpsTrace {
  std::vector<GpsIterate> iterates;
};

/// Generalized pattern search over the 90 coordinate poll directions with
/// opportunistic polling; extreme barrier once feasible, penalty descent
/// while infeasible. Throws NoFeasibleStartError if feasibility is never
/// reached within the budget.
RankedCandidate pattern_search(const DesignVector& start, const OptimizerConfig& cfg,
                               GpsTrace* trace = nullptr);

struct DesignResult {
  RankedCandidate best;
  GpsTrace trace;
  int lhs_feasible = 0;
};

/// LHS presearch, pattern search from the top-k candidates, best feasible
/// result. Progress CSV lines `iter,mesh,J,feasible_count` go to `log`.
DesignResult run_design(const OptimizerConfig& cfg, std::ostream* log = nullptr);

}  // namespace amtk

#endif
