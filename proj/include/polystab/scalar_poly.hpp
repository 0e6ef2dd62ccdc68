// Univariate complex polynomials: arithmetic, simultaneous root finding
// (Aberth-Ehrlich with a companion-matrix fallback and multiple-root
// consolidation), region stability, the scalar Gauss-Lucas check, the
// de Branges-type margin, and the classical stability-preserving transforms.
#pragma once

#include <vector>

#include "polystab/common.hpp"
#include "polystab/region.hpp"
#include "polystab/rng.hpp"

namespace polystab {

struct ZeroPolynomial : std::invalid_argument {
  ZeroPolynomial() : std::invalid_argument("operation undefined for the zero polynomial") {}
};
struct ConstantPolynomial : std::invalid_argument {
  ConstantPolynomial() : std::invalid_argument("constant polynomial has no roots") {}
};
struct ConstantDerivative : std::invalid_argument {
  ConstantDerivative() : std::invalid_argument("derivative is constant; Gauss-Lucas check needs degree >= 2") {}
};
struct NotNormalized : std::invalid_argument {
  NotNormalized() : std::invalid_argument("polynomial must satisfy p(0) = 1") {}
};
struct NotStable : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

class ComplexPolynomial {
 public:
  ComplexPolynomial() = default;  // the zero polynomial
  explicit ComplexPolynomial(std::vector<cplx> ascending_coeffs);

  static ComplexPolynomial constant(cplx c);
  /// Monomial c * lambda^k.
  static ComplexPolynomial monomial(cplx c, int k);
  static ComplexPolynomial from_roots(const std::vector<cplx>& roots,
                                      cplx leading = 1.0);

  bool is_zero() const { return c_.empty(); }
  /// Degree of the trimmed polynomial; -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<cplx>& coeffs() const { return c_; }
  /// Coefficient of lambda^j (0 beyond the stored range).
  cplx coeff(int j) const;
  cplx leading() const { return c_.empty() ? cplx(0) : c_.back(); }

  cplx evaluate(cplx lambda) const;  // Horner
  /// Value and derivative value in one Horner pass.
  std::pair<cplx, cplx> evaluate_with_derivative(cplx lambda) const;

  ComplexPolynomial derivative() const;
  ComplexPolynomial operator+(const ComplexPolynomial& q) const;
  ComplexPolynomial operator-(const ComplexPolynomial& q) const;
  ComplexPolynomial operator*(const ComplexPolynomial& q) const;
  ComplexPolynomial operator*(cplx s) const;
  bool operator==(const ComplexPolynomial& q) const { return c_ == q.c_; }

  /// p(alpha*lambda + beta), exact binomial re-expansion.
  ComplexPolynomial compose_affine(cplx alpha, cplx beta) const;
  /// lambda^d * p(-e^{-2 i phi} / lambda) - the inversion-with-rotation that
  /// maps H_phi-stable polynomials to H_phi-stable polynomials.
  ComplexPolynomial invert_rotate(double phi) const;

  /// Zero out coefficients below rel_tol * max|c_j| and re-trim. Used by the
  /// determinant interpolation, not by ordinary arithmetic.
  ComplexPolynomial truncated(double rel_tol) const;

  /// Largest |c_j| (0 for the zero polynomial).
  double coeff_scale() const;

 private:
  std::vector<cplx> c_;  // ascending, highest-order entry nonzero
  void trim();
};

struct RootSet {
  std::vector<cplx> roots;  // with multiplicity, sorted by (re, im)
  std::vector<double> backward_errors;
  double vieta_sum_residual = 0.0;   // relative residual of sum vs -a_{d-1}/a_d
  double vieta_prod_residual = 0.0;  // relative residual of product vs (-1)^d a_0/a_d
  bool used_companion_fallback = false;
};

/// All roots with multiplicity. Degree must be in [1, 64].
RootSet roots(const ComplexPolynomial& p);

struct StabilityCheck {
  bool stable = false;
  bool boundary_sensitive = false;  // some root within tau_bnd of the boundary
  cplx worst_root{0, 0};            // root of maximal region margin
  double worst_margin = 0.0;
};

/// Region stability: no root lies in D. Constants are stable w.r.t. every D.
StabilityCheck stability_check(const ComplexPolynomial& p, const Region& D,
                               double tau_bnd);
bool is_stable(const ComplexPolynomial& p, const Region& D, double tau_bnd);

/// Exact oracle for a*lambda^2 + b*lambda + a over H_0: stable iff b/a is
/// real with |b/a| >= 2 (then both roots are real).
bool palindromic_quadratic_stable(cplx a, cplx b);

/// Verifies that every root of p' lies in the convex hull of the roots of p,
/// inflated by tau_hull (relative to the root scale). Degree >= 2.
bool gauss_lucas_check(const ComplexPolynomial& p, double tau_hull = 1e-8);

/// exp(re(a1 l) + (|a1|^2 - 2 re a2)|l|^2 / 2) - |p(l)|; nonnegative whenever
/// p is H_0-stable with p(0) = 1.
double de_branges_margin(const ComplexPolynomial& p, cplx lambda);

enum class ScalarTransform { Scale, InvertRotate, Differentiate };

/// The one-variable stability-preserving transforms: p(a*lambda) for a > 0,
/// inversion-with-rotation, differentiation.
ComplexPolynomial transform(const ComplexPolynomial& p, ScalarTransform t,
                            double param = 0.0);

/// Property-test generator: roots drawn uniformly from the half-disc
/// {im z <= 0, |z| <= 2} bounded away from 0, normalized so p(0) = 1.
/// Every output is H_0-stable.
ComplexPolynomial random_h0_stable(RngEngine& rng, int max_degree);

}  // namespace polystab
