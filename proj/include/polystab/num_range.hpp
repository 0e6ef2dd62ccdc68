// Numerical range machinery: lambda_H, the numerical radius, membership of 0
// in W(A), pointwise membership of lambda in W(P), and a semi-decision of
// W(P) "cap" D = emptyset with explicit certificates. All set questions are
// three-valued; Disjoint is only ever returned with a named certificate and
// Intersects only with a residual-checked witness.
#pragma once

#include <cstdint>
#include <string>

#include "polystab/common.hpp"
#include "polystab/matrix_poly.hpp"
#include "polystab/region.hpp"

namespace polystab {

/// Discretization knobs for the supporting-line tests on W(A).
struct FieldOfValuesQuery {
  int theta_grid = 720;     ///< angles sampled on [0, 2pi); must be >= 8
  int refine_iters = 40;    ///< golden-section steps inside the best bracket
  double tol = 1e-10;       ///< margin / residual tolerance; must be > 0

  void validate() const;
};

/// Largest (possibly negative) eigenvalue of the Hermitian part (X+X*)/2,
/// i.e. max_{|x|=1} re x*Xx.
double lambda_H(const Mat& x);

/// Smallest eigenvalue of the Hermitian part; companion of lambda_H.
double lambda_min_H(const Mat& x);

/// Numerical radius w(A) = max_theta lambda_max(Re(e^{i theta}A)), computed
/// on the angle grid with golden-section refinement. The classical sandwich
/// ||A||/2 <= w(A) <= ||A|| (2-norm) is asserted up to grid resolution; a
/// violation throws NumericFailure.
double numerical_radius(const Mat& a, const FieldOfValuesQuery& q = {});

enum class ZeroInRange { No, Yes, Unknown };

struct ZeroRangeResult {
  ZeroInRange status = ZeroInRange::Unknown;
  /// No: supporting angle with lambda_min(Re(e^{i theta}A)) = margin > tol,
  /// so e^{i theta} W(A) lies in {re z > 0} and 0 is separated.
  double theta = 0.0;
  /// Yes: unit witness with |x* A x| <= tol * max(1, ||A||_F).
  Vec x;
  /// Best separation found: max over theta of lambda_min(Re(e^{i theta}A)).
  /// Positive (> tol) exactly for No; negative when 0 sits inside W(A).
  double margin = 0.0;
};

/// Membership of 0 in the (convex) numerical range W(A). No is certified by a
/// supporting angle; Yes by an explicit witness built from eigenvector
/// combinations (two-dimensional compressions of A); otherwise Unknown.
ZeroRangeResult zero_in_numerical_range(const Mat& a,
                                        const FieldOfValuesQuery& q = {});

enum class Membership { True, False, Unknown };

struct WpMembership {
  Membership status = Membership::Unknown;
  Vec x;             ///< True: unit witness with |x*P(lambda)x| small
  double theta = 0.0;  ///< False: separating angle for 0 vs W(P(lambda))
  double margin = 0.0;
};

/// Is lambda in W(P) = {z : x*P(z)x = 0 for some x != 0}? Delegates to
/// zero_in_numerical_range(P(lambda)).
WpMembership wp_contains(const MatrixPolynomial& p, cplx lambda,
                         const FieldOfValuesQuery& q = {});

enum class RangeStatus { Disjoint, Intersects, Unknown };

struct NumRangeVerdict {
  RangeStatus status = RangeStatus::Unknown;
  cplx witness_lambda{0.0, 0.0};  ///< Intersects: the located point of W(P) in D
  Vec witness_x;                  ///< Intersects: unit vector, see residual bound
  int samples_used = 0;
  /// Disjoint: smallest supporting margin seen over the certificate samples.
  /// Intersects: the witness residual |x*P(lambda)x| (scaled).
  /// Unknown: the smallest scaled residual the search ever reached.
  double worst_margin = 0.0;
  std::string certificate;  ///< Disjoint: which certificate fired (may be grid-certified)
};

/// Budget for wp_disjoint_from. The monotonicity flag is a caller assertion
/// that checking supporting lines on the boundary grid of D suffices (e.g.
/// the caller knows W(P)'s distance to D is attained on the boundary); with
/// it set, interior grids and the at-infinity bound are skipped and the
/// certificate string records the assertion.
struct DisjointnessBudget {
  std::uint64_t seed = 1;
  int restarts = 32;        ///< alternating-search restarts
  int iters = 60;           ///< alternating steps per restart
  int boundary_grid = 256;  ///< samples on the boundary of D
  int interior_grid = 64;   ///< coarse interior samples
  bool assume_boundary_suffices = false;
  FieldOfValuesQuery query{};
};

/// Semi-decide W(P) cap D = emptyset.
///
/// Intersects requires a residual-checked witness: |x*P(lambda)x| <=
/// tol * s(lambda) with the evaluation scale s(lambda) = max(1, c) (1+|lambda|)^d,
/// c the largest coefficient norm (the evaluated norm ||P(lambda)|| itself can
/// vanish at the witness, e.g. for n = 1, so it cannot serve as the scale).
///
/// Disjoint fires only with a certificate, tried in this order:
///  - "constant":   d = 0 and 0 is separated from W(A_0);
///  - "scalar":     n = 1 and every root of the entry avoids D with a margin
///                  exceeding its first-order error bound;
///  - "factored":   P = p(lambda) A with 0 separated from W(A) and the roots
///                  of p avoid D as above;
///  - "grid":       supporting angles found at every sample of a boundary +
///                  interior grid, combined (for unbounded D) with a leading-
///                  coefficient bound killing |lambda| > R0; labelled
///                  grid-certified since the gaps between samples are unproven.
/// Everything else is Unknown.
NumRangeVerdict wp_disjoint_from(const MatrixPolynomial& p, const Region& d,
                                 const DisjointnessBudget& budget = {});

}  // namespace polystab
