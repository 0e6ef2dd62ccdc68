// The decision engine. Region stability of matrix polynomials (exact up to
// root tolerance), a layered semi-decision of hyperstability with explicit
// certificates and falsifiers, structured sufficient conditions for families
// with positive semi-definite / skew-Hermitian coefficients, and the
// Gauss-Lucas transfer to the derivative.
//
// Hyperstability of P with respect to D asks: for every x != 0 there is a
// y != 0 such that the scalar section y*P(lambda)x has no zero in D. The
// quantifier order makes the property semi-decidable at best: sampling x can
// falsify, but a Certified verdict always names a theorem-backed route.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "polystab/common.hpp"
#include "polystab/matrix_poly.hpp"
#include "polystab/num_range.hpp"
#include "polystab/region.hpp"
#include "polystab/scalar_poly.hpp"

namespace polystab {

struct NotBlockTriangular : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct VariantPreconditionViolated : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct PreconditionViolated : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Stability
// ---------------------------------------------------------------------------

enum class StabilityStatus { Stable, NotStable, Singular };

struct StabilityResult {
  StabilityStatus status = StabilityStatus::Stable;
  /// NotStable: an eigenvalue mu with contains(D, mu) and
  /// |det P(mu)| <= tol * scale.
  std::optional<cplx> eigenvalue_in_region;
  /// Eigenvalues within tau_bnd of the boundary of D (the open/closed flag
  /// decided their membership).
  bool boundary_sensitive = false;
};

/// Stable <=> P is regular and det P has no root in D. The eigenvalue at
/// infinity never counts: D is a subset of the finite plane by construction.
StabilityResult check_stable(const MatrixPolynomial& p, const Region& d,
                             const Tolerances& tols = {});

// ---------------------------------------------------------------------------
// Hyperstability verdicts
// ---------------------------------------------------------------------------

enum class HyperStatus {
  CertifiedHyperstable,  ///< theorem-backed route succeeded (see method)
  Falsified,             ///< a direction x admits no stable section (proof attached)
  StableOnly,            ///< stable; positive but non-certifying hyperstability evidence
  NotStable,             ///< an eigenvalue of P lies in D
  Unknown,               ///< budget exhausted without a decision
};

enum class CertMethod {
  NumericalRange,       ///< W(P) disjoint from D
  PencilForm,           ///< P = p(lambda)A + q(lambda)B, hyperstable <=> stable
  BlockTriangular,      ///< strict equivalence to a block upper-triangular form
  Poly2a,               ///< bivariate z1^2 A2 + z2 A1 + A0 stable on D^2
  Poly2b,               ///< bivariate z1 z2 A2 + z2 A1 + A0 stable on D^2, 0 not in D
  Poly2c,               ///< bivariate z1^2 z2 A2 + z1^2 A1 + z2 A0, 0 not in D
  Poly3a,               ///< cube-root-of-(-1)-free variant for palindromic cubics
  Poly3b,               ///< bivariate z2^3 A0 + z1 z2 A2 + z2 A1 + A0, 0 not in D
  Poly3c,               ///< bivariate z1 z2^3 A0 + z1 z2^2 A2 + z2^2 A1 + z1 A0
  HalfPlaneStructured,  ///< PSD/skew split certifies the open right half-plane
  DirectionalSearch,    ///< per-direction certificates (never certifies alone)
};

std::string to_string(HyperStatus s);
std::string to_string(CertMethod m);

struct HyperVerdict {
  HyperStatus status = HyperStatus::Unknown;
  /// Set exactly when status == CertifiedHyperstable.
  std::optional<CertMethod> method;
  /// Falsified: the unit direction x for which no stable section exists.
  std::optional<Vec> falsifier;
  /// NotStable: the offending eigenvalue inside D.
  std::optional<cplx> eigenvalue_in_region;
  /// Routes that derive the region from their hypotheses (structured
  /// families) record the conclusion's region here.
  std::optional<Region> region;
  /// Hypothesis checklist, witnesses and diagnostics, one line each.
  std::vector<std::string> evidence;
};

// ---------------------------------------------------------------------------
// Directional certificates (the inner quantifier)
// ---------------------------------------------------------------------------

/// All scalar sections achievable at a fixed direction x: the coefficient
/// vectors c with c_j = y*A_j x form the row space of V = [A_0 x ... A_d x].
struct DirectionalProblem {
  Vec x;       ///< unit direction
  Mat V;       ///< n x (d+1), column j is A_j x
  Mat S;       ///< (d+1) x r, orthonormal basis of the achievable subspace
  int r = 0;   ///< rank of V above the tau_rank cutoff
};

DirectionalProblem directional_problem(const MatrixPolynomial& p, const Vec& x,
                                       double tau_rank = 1e-10);

enum class CertStatus { Certificate, NoCertificate, Unknown };

struct DirectionalCertificate {
  CertStatus status = CertStatus::Unknown;
  std::optional<Vec> y;       ///< Certificate: unit y, re-verified via is_stable
  ComplexPolynomial section;  ///< Certificate: the achieved y*P(lambda)x
  /// NoCertificate: the algebraic obstruction ("achievable space is trivial",
  /// the r=1 root, or the Vieta pattern); otherwise search notes.
  std::string proof;
  /// Certificate: the certified distance of the section's roots outside D
  /// (+inf-like large value for constant sections).
  double margin = 0.0;
  int rank = 0;               ///< dimension of the achievable subspace
};

/// Search the achievable section space at x for a D-stable polynomial.
/// r = 0 and r = 1 are decided exactly; r = 2 uses a Riemann-sphere grid and
/// claims NoCertificate only through the disc / disc-exterior Vieta
/// obstruction; r >= 3 only ever returns Certificate or Unknown.
DirectionalCertificate directional_certificate(const MatrixPolynomial& p,
                                               const Vec& x, const Region& d,
                                               const SearchBudget& budget = {});

// ---------------------------------------------------------------------------
// Pencil form p(lambda)A + q(lambda)B
// ---------------------------------------------------------------------------

/// For such P hyperstability is equivalent to stability (the two coefficient
/// directions can be simultaneously upper-triangularized).
struct PencilFormDecomposition {
  Mat A, B;                ///< Frobenius-orthonormal span of the coefficients
  ComplexPolynomial p, q;  ///< P(lambda) = p(lambda) A + q(lambda) B
  int rank = 0;            ///< 1 or 2
  double residual = 0.0;   ///< relative reconstruction error
};

/// Rank <= 2 test on the coefficient stack [vec A_0 | ... | vec A_d].
std::optional<PencilFormDecomposition> detect_pencil_form(
    const MatrixPolynomial& p, double tau_rank = 1e-10);

// ---------------------------------------------------------------------------
// The layered engine
// ---------------------------------------------------------------------------

/// Pipeline, first decisive answer wins:
///   1. check_stable: Singular => Falsified (kernel direction; every section
///      vanishes at an interior point of D), eigenvalue in D => NotStable.
///   2. PencilForm detection: hyperstable <=> stable.
///   3. Numerical range: W(P) disjoint from D certifies.
///   4. Structural routes by shape: quadratic norm gaps (disc / disc
///      exterior), the PSD/skew half-plane family, the PSD palindromic cubic.
///   5. Directional search over sampled x (quasi-random sphere points plus
///      adversarial refinement): any NoCertificate => Falsified; certificates
///      for every sample => StableOnly (positive evidence, never a proof);
///      otherwise Unknown.
HyperVerdict check_hyperstable(const MatrixPolynomial& p, const Region& d,
                               const SearchBudget& budget = {});

// ---------------------------------------------------------------------------
// Block upper-triangular certificates
// ---------------------------------------------------------------------------

/// Checks P == S * (block upper-triangular form) * T with the given constant
/// invertible S, T and diagonal block sizes, then certifies hyperstability
/// when every diagonal block is hyperstable w.r.t. D (1x1 blocks by scalar
/// stability, pencil-form blocks by stability, others recursively).
/// Throws ShapeMismatch for inconsistent sizes or singular S/T and
/// NotBlockTriangular when the below-diagonal residual exceeds 1e-10
/// relative.
HyperVerdict block_triangular_certificate(const MatrixPolynomial& p,
                                          const std::vector<int>& block_sizes,
                                          const Mat& s, const Mat& t,
                                          const Region& d,
                                          const SearchBudget& budget = {});

// ---------------------------------------------------------------------------
// Bivariate routes for quadratic and cubic polynomials
// ---------------------------------------------------------------------------

enum class BivariateVariant { A, B, C };

/// Quadratic route: stability of the variant's bivariate polynomial on D^2
/// implies hyperstability of lambda^2 A2 + lambda A1 + A0 on D. Sampling can
/// only falsify the bivariate condition; certification needs a structural
/// sub-certificate (the disc / disc-exterior norm gaps below) or the caller's
/// assertion that the bivariate polynomial is stable (recorded in evidence).
/// Variants b and c require 0 not in D (VariantPreconditionViolated).
HyperVerdict poly2_route(const Mat& a2, const Mat& a1, const Mat& a0,
                         const Region& d, BivariateVariant variant,
                         const SearchBudget& budget = {},
                         bool caller_asserts_bivariate_stable = false);

/// Cubic route for the palindromic-leading shape
/// lambda^3 A0 + lambda^2 A2 + lambda A1 + A0 (leading must equal constant;
/// pass a3 to have the equality checked, ShapeMismatch otherwise).
/// Variant a additionally requires -1 and (1 +- i sqrt 3)/2 outside D;
/// variants b, c require 0 not in D. Certification is structural (the PSD
/// family below) or caller-asserted; sampling only falsifies.
HyperVerdict poly3_route(const std::optional<Mat>& a3, const Mat& a2,
                         const Mat& a1, const Mat& a0, const Region& d,
                         BivariateVariant variant,
                         const SearchBudget& budget = {},
                         bool caller_asserts_bivariate_stable = false);

/// The bivariate polynomial each route checks, as exponent/coefficient pairs
/// (exposed for the diagonal-identity property tests and the falsifier).
struct BivariateShape {
  std::vector<std::pair<std::pair<int, int>, Mat>> terms;  ///< ((e1,e2), A)
  /// Diagonal multiplier m with det Q(lambda, lambda) = m(lambda)^n det P.
  ComplexPolynomial diagonal_multiplier;
};
BivariateShape poly2_shape(const Mat& a2, const Mat& a1, const Mat& a0,
                           BivariateVariant variant);
BivariateShape poly3_shape(const Mat& a2, const Mat& a1, const Mat& a0,
                           BivariateVariant variant);

// ---------------------------------------------------------------------------
// Structured coefficient families
// ---------------------------------------------------------------------------

/// P(lambda) = lambda^2 R2 + lambda (J + R1) + R0 with R0, R1, R2 Hermitian
/// PSD, J skew-Hermitian and ker R0 cap ker R1 cap ker R2 cap ker J = {0}
/// is hyperstable w.r.t. the open right half-plane (region recorded in the
/// verdict). Eigenvalue locations are re-verified numerically.
/// Throws HypothesisViolated naming the failing clause.
HyperVerdict structured_halfplane(const Mat& r2, const Mat& r1, const Mat& r0,
                                  const Mat& j);

/// Congruence variant: P(lambda) = lambda^2 A2 + lambda (J + R) Q + A0 with
/// Q*A2, Q*A0 Hermitian PSD, R Hermitian PSD, J skew-Hermitian and the
/// kernel condition on (Q*A0, Q*RQ, Q*JQ, Q*A2). Same conclusion.
HyperVerdict congruence_halfplane(const Mat& a2, const Mat& r, const Mat& j,
                                  const Mat& q, const Mat& a0);

/// Hermitian PSD coefficients of any degree d >= 1: eigenvalues lie in
/// {|Arg| >= pi/d} union {0}; returned as StableOnly w.r.t. the open sector
/// {|Arg| < pi/d} minus the origin (cross-checked to 1e-8).
HyperVerdict psd_coefficient_sector(const std::vector<Mat>& coeffs);

/// A2, A0, (A1+A1*)/2 Hermitian PSD: eigenvalues lie in the closed left
/// half-plane; returned as StableOnly w.r.t. the open right half-plane.
HyperVerdict psd_quadratic_left_halfplane(const Mat& a2, const Mat& a1,
                                          const Mat& a0);

/// lambda^3 R0 + lambda^2 R2 + lambda R1 + R0 with R0, R1, R2 Hermitian PSD
/// and ker R0 cap ker R1 cap ker R2 = {0}: hyperstable w.r.t. the open
/// sector {0 < Arg < pi/3} (certified through the variant-b bivariate form).
HyperVerdict psd_palindromic_cubic(const Mat& r0, const Mat& r2, const Mat& r1);

/// Cubic family lambda^3 R3 + lambda^2 R2 + lambda R1 + (A0 + G) with
/// R1, R2, R3 Hermitian PSD, A0 Hermitian, G skew-Hermitian with -iG PSD and
/// the five-fold kernel condition: stable w.r.t. {0 < Arg < pi/3}. The
/// `which` flag in {1,2,3} selects which of the three associated bivariate
/// polynomials (stable on the squared sectors of half-angle pi/6, pi/3,
/// pi/4) gets spot-falsified as evidence.
HyperVerdict skew_augmented_cubic_sector(const Mat& r3, const Mat& r2,
                                         const Mat& r1, const Mat& a0,
                                         const Mat& g, int which = 2,
                                         const SearchBudget& budget = {});

/// Degree-raising composition: from the half-plane family above,
/// Q(lambda) = lambda^3 R2 + (lambda^2 + lambda)(R1 + J) + R0 is hyperstable
/// w.r.t. the open sector {-pi/4 < Arg < pi/4} minus the origin.
HyperVerdict polarized_cubic_sector(const Mat& r2, const Mat& r1,
                                    const Mat& r0, const Mat& j);

/// (lambda^3 + a lambda^2) I + (b lambda + c) R with R Hermitian positive
/// definite, a > 1, b > c: hyperstable w.r.t. the open right half-plane via
/// the pencil-form equivalence (stability verified numerically).
HyperVerdict mgt_pencil_route(double a, double b, double c, const Mat& r);

// ---------------------------------------------------------------------------
// Gauss-Lucas transfer
// ---------------------------------------------------------------------------

struct GaussLucasReport {
  HyperVerdict base;          ///< engine verdict for P itself
  int sections_checked = 0;   ///< certificate sections re-tested on P'
  int transfer_failures = 0;  ///< derivative sections with a root in D
  std::vector<std::string> notes;
};

/// When the complement of D is convex and the entries of P' are linearly
/// independent, hyperstability transfers from P to P'. This runs the engine
/// on P and spot-checks the transfer construction: each certificate section
/// y*P(lambda)x must stay D-stable after differentiation. Failures indicate
/// P was not actually hyperstable (they are reported, never silently fixed).
/// Throws PreconditionViolated when the convexity or independence gate fails.
GaussLucasReport gauss_lucas_transfer(const MatrixPolynomial& p,
                                      const Region& d,
                                      const SearchBudget& budget = {});

}  // namespace polystab
