#pragma once

#include <stdexcept>
#include <string>

namespace nls2d {

/// Bad user input (sizes, exponents, tolerances out of range).
struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct UnsupportedExponent : InvalidArgument {
  using InvalidArgument::InvalidArgument;
};

/// Ground-state shooting could not find an (undershoot, overshoot) pair.
struct BracketFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Requested bisection tolerance is below what double precision supports.
struct ToleranceUnreachable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UndefinedRatio : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UndefinedMargin : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Rescaling requires positive energy.
struct NotRescalable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Linear solve broke down (zero pivot or non-finite data).
struct SolverFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Morawetz weights would be truncated by the grid (2R >= r_max).
struct WeightOverflow : InvalidArgument {
  using InvalidArgument::InvalidArgument;
};

/// Space-time estimate asked for on a trajectory that halted in blow-up.
struct EstimateNotApplicable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InsufficientData : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace nls2d
