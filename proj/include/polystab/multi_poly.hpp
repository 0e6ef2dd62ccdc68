// Matrix polynomials in several variables: the symmetric multi-affine
// polarization T_kappa of a univariate polynomial (stored by level, never
// expanded into monomials), a small sparse multivariate type for searches and
// transforms, stability / hyperstability semi-decisions over product regions,
// the coincidence step of the Grace-Walsh-Szego reduction, and the transforms
// that preserve hyperstability over products of half-planes.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "polystab/common.hpp"
#include "polystab/matrix_poly.hpp"
#include "polystab/region.hpp"
#include "polystab/scalar_poly.hpp"
#include "polystab/stability.hpp"

namespace polystab {

struct IndexOutOfRange : std::out_of_range {
  using std::out_of_range::out_of_range;
};
struct KappaTooSmall : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct PointOutsideD : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct BoundarySpecialization : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NoRootFound : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Caps: the by-level representation is linear in kappa, the sparse monomial
/// type is combinatorial, so it gets tighter limits.
inline constexpr int kMaxKappa = 16;
inline constexpr int kMaxSparseKappa = 4;
inline constexpr int kMaxSparseDegree = 8;

/// Elementary symmetric polynomial s_j(z_1, ..., z_kappa), 0 <= j <= kappa,
/// by the product recurrence (prod (t + z_i), O(kappa^2), no cancellation
/// beyond the inherent one).
cplx elementary_symmetric(int j, const std::vector<cplx>& z);
/// All of s_0, ..., s_kappa in one pass.
std::vector<cplx> elementary_symmetric_all(const std::vector<cplx>& z);

// ---------------------------------------------------------------------------
// Symmetric multi-affine matrix polynomials, stored by level
// ---------------------------------------------------------------------------

/// Q(z_1, ..., z_kappa) = sum_j binom(kappa, j)^{-1} s_j(z) A_j.
/// This is exactly the image of the polarization operator T_kappa, and every
/// symmetric multi-affine polynomial has this form. Levels are stored
/// directly; evaluation costs O(kappa^2) scalar work plus the level sum.
class MultiAffineSymmetricMP {
 public:
  /// by_level holds A_0, ..., A_m with m <= kappa (higher levels zero).
  MultiAffineSymmetricMP(int kappa, std::vector<Mat> by_level);

  int kappa() const { return kappa_; }
  int size() const { return n_; }
  /// A_0, ..., A_kappa (padded with zero matrices).
  const std::vector<Mat>& levels() const { return levels_; }

  Mat evaluate(const std::vector<cplx>& z) const;

 private:
  int kappa_ = 0;
  int n_ = 0;
  std::vector<Mat> levels_;
};

/// T_kappa P. Requires kappa >= deg P (KappaTooSmall) and kappa <= kMaxKappa
/// (SizeCapExceeded).
MultiAffineSymmetricMP polarize(const MatrixPolynomial& p, int kappa);

/// The diagonal restriction Q(lambda, ..., lambda); inverse of polarize.
MatrixPolynomial diagonal(const MultiAffineSymmetricMP& q);

// ---------------------------------------------------------------------------
// Sparse multivariate matrix polynomials
// ---------------------------------------------------------------------------

/// Monomial-term map: exponent tuple -> coefficient matrix. Built for the
/// bivariate stability shapes, the polarized images of small polynomials and
/// the transform family; capped at kMaxSparseKappa variables and
/// kMaxSparseDegree per-variable degree.
class SparseMVMatrixPoly {
 public:
  SparseMVMatrixPoly(int kappa, int n);

  /// Accumulates a term (adds to an existing coefficient); drops exact zeros.
  void add_term(const std::vector<int>& exponents, const Mat& a);

  int kappa() const { return kappa_; }
  int size() const { return n_; }
  const std::map<std::vector<int>, Mat>& terms() const { return terms_; }

  /// Term-by-term evaluation.
  Mat evaluate(const std::vector<cplx>& z) const;
  /// Independent scheme (recursive Horner grouping by leading variable),
  /// used to cross-check evaluate in the tests.
  Mat evaluate_horner(const std::vector<cplx>& z) const;

  /// Partial derivative in variable j (1-based; IndexOutOfRange otherwise).
  SparseMVMatrixPoly partial_derivative(int j) const;

  int degree_in(int j) const;  ///< max exponent of variable j, 0 if absent
  int total_degree() const;    ///< max exponent sum, -1 for the zero polynomial

 private:
  int kappa_ = 0;
  int n_ = 0;
  std::map<std::vector<int>, Mat> terms_;
};

/// Expand a by-level polynomial into monomials. Requires
/// kappa <= kMaxSparseKappa (SizeCapExceeded) since the expansion has up to
/// 2^kappa terms.
SparseMVMatrixPoly to_sparse(const MultiAffineSymmetricMP& q);

/// Rank test on the entries of Q viewed as vectors of term coefficients
/// (needed by the multivariate Gauss-Lucas gate).
EntryIndependence entries_linearly_independent(const SparseMVMatrixPoly& q,
                                               double tau_rank = 1e-10);

// ---------------------------------------------------------------------------
// Grace-Walsh-Szego coincidence
// ---------------------------------------------------------------------------

/// For a scalar (1x1) symmetric multi-affine p and points zeta_1..zeta_kappa
/// in a disc or half-plane D, returns zeta_0 in D with
/// p(zeta_0, ..., zeta_0) = p(zeta_1, ..., zeta_kappa), by solving the
/// diagonal restriction. Throws ShapeMismatch (p not scalar),
/// PreconditionViolated (D not a disc or half-plane), PointOutsideD, and
/// NoRootFound when no root of the diagonal equation lies in the closure of
/// D within tolerance (which would contradict the coincidence theorem).
cplx gws_coincidence(const MultiAffineSymmetricMP& p,
                     const std::vector<cplx>& points, const Region& d,
                     const Tolerances& tols = {});

// ---------------------------------------------------------------------------
// Stability and hyperstability over product regions
// ---------------------------------------------------------------------------

struct MvStabilityResult {
  bool falsified = false;
  std::vector<cplx> witness;       ///< zero of det Q inside the product region
  double witness_residual = 0.0;   ///< |det Q(witness)| against the Hadamard scale
  int samples_used = 0;
  std::string note;
};

/// Searches for a zero of det Q inside D_1 x ... x D_kappa (multistart
/// coordinate descent with Newton polish, compact exhaustion of unbounded
/// factors by radii 2^k, k <= 6). Sampling cannot certify stability: when no
/// zero is found the result says so and nothing more.
MvStabilityResult mv_stable(const SparseMVMatrixPoly& q,
                            const std::vector<Region>& d_list,
                            const SearchBudget& budget = {});

/// Semi-decision of multivariate hyperstability (for every x != 0 some
/// section y*Q(z)x is zero-free on the product region):
///   - symmetric multi-affine Q over D^kappa with one disc / half-plane D
///     reduces exactly to the univariate engine on the diagonal restriction;
///   - upper-triangular Q with monomial diagonal entries is certified
///     directly (zero-freeness of a monomial is decidable);
///   - otherwise sampled directions x are falsified through the rank-0 / 1
///     achievable-space cases, and anything else stays Unknown.
HyperVerdict mv_hyperstable(const SparseMVMatrixPoly& q,
                            const std::vector<Region>& d_list,
                            const SearchBudget& budget = {});

struct CompositionResult {
  MatrixPolynomial composed;  ///< (T_kappa P)(p_1(lambda), ..., p_kappa(lambda))
  HyperVerdict base;          ///< engine verdict for P on D
  HyperVerdict verdict;       ///< transferred verdict on the claimed region
};

/// Degree-raising transfer: if P is hyperstable w.r.t. a disc or half-plane D
/// and kappa >= deg P, the composition of T_kappa P with any scalar
/// polynomials p_1, ..., p_kappa is hyperstable w.r.t. the common preimage
/// E = intersection of p_i^{-1}(D). The caller names E (claimed_region); the
/// claim is validated on a sample grid (PreconditionViolated on any sampled
/// point of E whose image leaves D) and the composed polynomial's eigenvalues
/// are spot-checked against E.
CompositionResult compose_and_check(const MatrixPolynomial& p, int kappa,
                                    const std::vector<ComplexPolynomial>& p_list,
                                    const Region& d,
                                    const Region& claimed_region,
                                    const SearchBudget& budget = {});

struct MvGaussLucasReport {
  bool precondition_ok = true;
  bool base_zero_found = false;     ///< p itself has a zero in the region
  int derivative_zeros_found = 0;   ///< zeros of dp/dz_j located inside
  int violations = 0;               ///< derivative zeros while p appears zero-free
  std::vector<std::string> notes;
};

/// Scalar multivariate Gauss-Lucas check in variable j: when the complement
/// of D_j is convex, zeros of dp/dz_j inside the product region are only
/// possible if p itself has one. Zeros are hunted by the mv_stable searcher;
/// any violation is reported (none are expected). Throws ShapeMismatch for
/// non-scalar input and PreconditionViolated when the complement of D_j is
/// not convex.
MvGaussLucasReport mv_gauss_lucas_harness(const SparseMVMatrixPoly& p, int j,
                                          const std::vector<Region>& d_list,
                                          const SearchBudget& budget = {});

// ---------------------------------------------------------------------------
// Hyperstability-preserving transforms over products of half-planes
// ---------------------------------------------------------------------------

/// Variable permutation z_i -> z_{sigma(i)} (sigma a permutation of 1..kappa).
SparseMVMatrixPoly permute_variables(const SparseMVMatrixPoly& q,
                                     const std::vector<int>& sigma);
/// Positive scaling z_j -> a z_j, a > 0 (HypothesisViolated otherwise).
SparseMVMatrixPoly scale_variable(const SparseMVMatrixPoly& q, int j, double a);
/// Merge the first j variables into one: Q(z_1, ..., z_1, z_{j+1}, ...).
SparseMVMatrixPoly diagonalize_prefix(const SparseMVMatrixPoly& q, int j);
/// Inversion with rotation in variable j for the half-plane H_phi:
/// z_j^{d_j} Q(..., -e^{-2 i phi} / z_j, ...), cleared of denominators.
SparseMVMatrixPoly invert_rotate_variable(const SparseMVMatrixPoly& q, int j,
                                          double phi);
/// Specialization z_j = a for a strictly interior to the half-plane factor h.
/// Boundary points are rejected (BoundarySpecialization): specializing on the
/// boundary can destroy hyperstability.
SparseMVMatrixPoly specialize_variable(const SparseMVMatrixPoly& q, int j,
                                       cplx a, const Region& h);

enum class MvTransform { Permute, Scale, Diagonalize, InvertRotate, Specialize };

struct MvTransformSpec {
  MvTransform kind = MvTransform::Permute;
  std::vector<int> permutation;       ///< Permute
  int variable = 1;                   ///< 1-based target variable
  double scale = 1.0;                 ///< Scale
  double phi = 0.0;                   ///< InvertRotate
  cplx value{0.0, 0.0};               ///< Specialize
  std::optional<Region> half_plane;   ///< Specialize: the factor region
};

/// Dispatcher over the five transforms above.
SparseMVMatrixPoly basic_transform(const SparseMVMatrixPoly& q,
                                   const MvTransformSpec& t);

}  // namespace polystab
