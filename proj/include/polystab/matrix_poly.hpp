// Univariate matrix polynomials P(lambda) = sum lambda^j A_j: evaluation,
// determinant by interpolation, eigenvalues (finite and at infinity),
// derivative/reversal/affine substitution, entry-independence, isotropic
// vectors, and the kernel-intersection singularity test.
#pragma once

#include <optional>
#include <vector>

#include "polystab/common.hpp"
#include "polystab/scalar_poly.hpp"

namespace polystab {

struct MatrixNorms {
  double two_norm = 0.0;
  double frobenius = 0.0;
  double sigma_min = 0.0;
};

/// SVD-based norms of a single matrix.
MatrixNorms norms(const Mat& m);

struct Eigenvalues {
  std::vector<cplx> finite;       // roots of det P, with multiplicity
  bool regular = false;           // det P is not identically zero
  bool at_infinity = false;       // reversal has eigenvalue 0
  int infinity_multiplicity = 0;  // d*n - deg(det P) when positive
};

class MatrixPolynomial {
 public:
  MatrixPolynomial() = default;  // the zero polynomial (n undetermined)
  /// Coefficients ascending: A_0, A_1, ..., A_d. All square of equal size.
  explicit MatrixPolynomial(std::vector<Mat> coeffs);

  static MatrixPolynomial zero(int n) {
    MatrixPolynomial p;
    p.n_ = n;
    return p;
  }
  /// Build from a grid of scalar polynomials (entry-wise).
  static MatrixPolynomial from_entries(
      const std::vector<std::vector<ComplexPolynomial>>& entries);

  bool is_zero() const { return coeffs_.empty(); }
  int size() const { return n_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Mat>& coeffs() const { return coeffs_; }
  /// A_j, a zero matrix beyond the stored degree.
  Mat coeff(int j) const;
  /// Entry (i,k) as a scalar polynomial.
  ComplexPolynomial entry(int i, int k) const;

  Mat evaluate(cplx lambda) const;  // Horner with matrix arithmetic

  MatrixPolynomial derivative() const;
  /// Reversal lambda^d P(1/lambda).
  MatrixPolynomial reversal() const;
  /// P(alpha*lambda + beta) by exact binomial re-expansion; alpha != 0.
  MatrixPolynomial substitute_affine(cplx alpha, cplx beta) const;

  MatrixPolynomial operator+(const MatrixPolynomial& q) const;
  MatrixPolynomial operator*(cplx s) const;

  /// Largest coefficient norm (Frobenius); 0 for the zero polynomial.
  double coeff_scale() const;

 private:
  int n_ = 0;
  std::vector<Mat> coeffs_;  // ascending, trimmed of zero leading matrices
  void trim();
};

/// det P as a scalar polynomial, via LU at d*n+1 scaled roots of unity and
/// inverse DFT; coefficients below tau_det * max|c| truncate to zero. A
/// singular input yields the zero polynomial (decided against per-sample
/// Hadamard noise bounds, same tau_det knob).
ComplexPolynomial determinant(const MatrixPolynomial& p, double tau_det = 1e-10);

/// Finite eigenvalues (roots of det P), regularity, and the eigenvalue at
/// infinity with multiplicity d*n - deg det P.
Eigenvalues eigenvalues(const MatrixPolynomial& p, double tau_det = 1e-10);

struct EntryIndependence {
  bool independent = false;
  int rank = 0;
  bool enough_coefficients = false;  // n^2 <= d+1 necessary condition
};

/// Are the n^2 entry polynomials linearly independent over C?
EntryIndependence entries_linearly_independent(const MatrixPolynomial& p,
                                               double tau_rank = 1e-10);

/// Multistart projected-gradient search for x with x* A_j x = 0 for all j.
/// Returns the witness when the objective reaches <= 1e-16; absence of a
/// witness is NOT a proof (heuristic search).
std::optional<Vec> common_isotropic_vector(const std::vector<Mat>& coeffs,
                                           int starts = 64,
                                           std::uint64_t seed = 1);

/// For P(lambda) = -lambda^j J + sum_i lambda^i A_i with J real skew and A_i
/// real symmetric PSD: singular  <=>  ker J intersect ker A_0 ... != {0}.
/// Returns that kernel-intersection verdict (stacked-matrix rank test) after
/// validating the structural hypotheses.
bool kernel_intersection_singularity(const Mat& J, const std::vector<Mat>& As,
                                     int j, double tau_rank = 1e-10);

}  // namespace polystab
