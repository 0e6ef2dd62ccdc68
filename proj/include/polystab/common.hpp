// Shared aliases, tolerances and error types used across the library.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace polystab {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr double pi = 3.14159265358979323846;

/// Numeric judgment knobs. Every semi-decision routine takes these explicitly
/// so that verdicts are reproducible and the thresholds show up in reports.
struct Tolerances {
  double tau_bnd = 1e-9;    ///< boundary classification slack for region tests
  double tau_rank = 1e-10;  ///< relative singular-value cutoff for rank decisions
  double tau_det = 1e-10;   ///< determinant interpolation truncation threshold
  double tol = 1e-10;       ///< generic residual / certificate tolerance
};

/// Budgets for the randomized searches. Deterministic under a fixed seed.
struct SearchBudget {
  std::uint64_t seed = 1;
  int x_samples = 32;        ///< directions sampled by the hyperstability engine
  int y_starts = 64;         ///< multistarts for certificate / isotropic searches
  int det_min_starts = 32;   ///< multistarts for |det| minimization
  int grid_size = 4096;      ///< one-dimensional grids (Riemann sphere, boundaries)
  int theta_grid = 720;      ///< supporting-angle grid for numerical range queries
  int refine_iters = 40;     ///< golden-section refinement steps
};

// Error taxonomy. Precondition violations carry the offending clause in
// what(); they are thrown, never encoded as verdicts.
struct SchemaError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct ShapeMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct HypothesisViolated : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct Unrepresentable : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct SizeCapExceeded : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NumericFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Principal argument in (-pi, pi] with the convention Arg 0 := 0.
inline double principal_arg(cplx z) {
  if (z == cplx(0.0, 0.0)) return 0.0;
  double a = std::arg(z);
  if (a <= -pi) a = pi;  // fold the branch point so -pi is never reported
  return a;
}

/// Wrap an angle into (-pi, pi].
inline double wrap_angle(double a) {
  while (a > pi) a -= 2 * pi;
  while (a <= -pi) a += 2 * pi;
  return a;
}

}  // namespace polystab
