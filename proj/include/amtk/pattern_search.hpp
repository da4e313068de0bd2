#ifndef AMTK_PATTERN_SEARCH_HPP
#define AMTK_PATTERN_SEARCH_HPP

#include <vector>

#include "amtk/errors.hpp"
#include "amtk/types.hpp"

// Generalized pattern search over the 2n coordinate poll directions with
// opportunistic polling. While the iterate is infeasible, polls are accepted
// on decreasing constraint penalty; once feasible, the extreme barrier applies
// (only feasible polls with a lower objective are accepted).

namespace amtk::gps {

struct Score {
  bool feasible = false;
  double objective = 0.0;
  double penalty = 0.0;  // 0 iff feasible
};

struct Options {
  double mesh_init = 0.25;
  double mesh_tol = 1e-4;
  double expand = 2.0;
  double contract = 0.5;
  int budget = 5000;  // total evaluations
};

struct Iterate {
  int iter = 0;
  double mesh = 0.0;
  double objective = 0.0;
  int feasible_count = 0;  // cumulative feasible evaluations
  bool feasible = false;
};

inline bool improves(const Score& candidate, const Score& current) {
  if (candidate.feasible != current.feasible) return candidate.feasible;
  if (candidate.feasible) return candidate.objective < current.objective;
  if (candidate.penalty != current.penalty) return candidate.penalty < current.penalty;
  return candidate.objective < current.objective;
}

/// Returns the final iterate; its score lands in `final_score`. Throws
/// NoFeasibleStartError if no feasible point is reached within the budget.
template <typename EvalFn>
VecXd search(VecXd x, const Options& opt, EvalFn&& eval, std::vector<Iterate>* trace = nullptr,
             Score* final_score = nullptr) {
  const int dim = static_cast<int>(x.size());
  Score cur = eval(x);
  int evals = 1;
  int feasible_count = cur.feasible ? 1 : 0;
  double mesh = opt.mesh_init;
  int iter = 0;

  auto record = [&]() {
    if (trace) trace->push_back({iter, mesh, cur.objective, feasible_count, cur.feasible});
  };
  record();

  while (mesh >= opt.mesh_tol && evals < opt.budget) {
    ++iter;
    bool success = false;
    for (int d = 0; d < dim && !success && evals < opt.budget; ++d) {
      for (double sign : {1.0, -1.0}) {
        if (evals >= opt.budget) break;
        VecXd y = x;
        y(d) += sign * mesh;
        const Score sy = eval(y);
        ++evals;
        if (sy.feasible) ++feasible_count;
        const bool accept =
            cur.feasible ? (sy.feasible && sy.objective < cur.objective) : improves(sy, cur);
        if (accept) {
          x = std::move(y);
          cur = sy;
          success = true;
          break;
        }
      }
    }
    mesh *= success ? opt.expand : opt.contract;
    record();
  }

  if (!cur.feasible) {
    throw NoFeasibleStartError("pattern search: no feasible point within budget");
  }
  if (final_score) *final_score = cur;
  return x;
}

}  // namespace amtk::gps

#endif
