#ifndef AMTK_ERRORS_HPP
#define AMTK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace amtk {

// Raised when the Euler-rate map degenerates (|cos(pitch)| below the guard band).
struct NearSingularError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RankDeficientError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thruster directions cancel out: no auxiliary direction exists.
struct DegenerateDirectionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Auxiliary moment equation has no exact solution for this thruster set.
struct UnsolvableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotPositiveDefiniteError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoFeasibleStartError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoFeasibleDesignError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EstimateOutOfRangeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace amtk

#endif
