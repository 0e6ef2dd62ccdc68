// Szasz-type norm bounds for matrix polynomials and for the polynomial
// calculus p(A): the half-plane bound, the Frobenius product bounds with
// their alternative form, the three calculus bounds, the comparison report,
// and the two fixture families (all-ones factors; the sharpness sequence
// converging on the imaginary axis) with closed-form oracles.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "polystab/matrix_poly.hpp"
#include "polystab/num_range.hpp"
#include "polystab/scalar_poly.hpp"

namespace polystab {

struct NotMonic : std::invalid_argument {
  NotMonic() : std::invalid_argument("constant coefficient A_0 must be the identity") {}
};
struct NoApplicableBound : std::invalid_argument {
  NoApplicableBound() : std::invalid_argument("no bound's hypotheses are met") {}
};

/// A product P(lambda) = prod_j (I + lambda B_j) with Im B_j negative
/// semidefinite (largest eigenvalue of (B_j - B_j*)/(2i) <= 1e-10, verified).
/// Carries the expanded polynomial; construction checks A_1 = sum B_j and
/// A_2 = sum_{j<k} B_j B_k against the expansion.
struct FactoredPolynomial {
  int n = 0;
  int d = 0;
  std::vector<Mat> factors;
  MatrixPolynomial expanded = MatrixPolynomial::zero(1);

  static FactoredPolynomial from_factors(std::vector<Mat> bs);
};

/// p evaluated at the matrix A by Horner.
Mat poly_at_matrix(const ComplexPolynomial& p, const Mat& a);

/// 2 exp(lambda_H(lambda A_1 - |lambda|^2 A_2) + |lambda|^2 ||A_1||^2 / 2),
/// a two-norm bound; requires A_0 = I (throws NotMonic). A_2 := 0 when d < 2.
/// The half-plane hypothesis on W(P) is the caller's business; see
/// szasz_halfplane_check for the grid check the report uses.
double bound_thm_szasz(const MatrixPolynomial& p, cplx lambda);

/// n^{d/2} exp(tr re(lambda A_1)/n + (||A_1||_F^2 - 2 tr re A_2)|lambda|^2/(2n)),
/// a Frobenius bound for factored products.
double bound_frob(const FactoredPolynomial& f, cplx lambda);

/// exp(tr re(lambda A_1) + (||A_1||_F^2 - 2 tr re A_2)|lambda|^2/2 + d(n-1)/2).
double bound_alt(const FactoredPolynomial& f, cplx lambda);

/// The three calculus bounds for ||p(A)||, p stable w.r.t. the open upper
/// half-plane with p(0) = 1 (both verified; throw NotStable / NotNormalized).
/// pA1 bounds the Frobenius norm; pA2 and svn bound the two-norm.
double bound_pA1(const ComplexPolynomial& p, const Mat& a);
double bound_pA2(const ComplexPolynomial& p, const Mat& a);
double bound_svn(const ComplexPolynomial& p, const Mat& a);

/// sup_{|z| <= ||A||_2} |p(z)|, estimated by dense boundary sampling (the
/// maximum modulus principle reduces the sup to the circle).
double von_neumann_bound(const ComplexPolynomial& p, const Mat& a,
                         int samples = 4096);

/// Result of the sampled test whether W(P) fits inside a closed half-plane
/// through the origin {im(lambda e^{i phi}) <= 0}. Sample points of W(P) are
/// roots of sections x*P(lambda)x, so a failure is conclusive; success is a
/// finite-sample check only.
struct SzaszHypothesis {
  bool admits_half_plane = true;
  double phi = 0.0;   ///< a working angle when admits_half_plane
  int points = 0;     ///< W(P) sample points collected
};
SzaszHypothesis szasz_halfplane_check(const MatrixPolynomial& p,
                                      int directions = 200,
                                      std::uint64_t seed = 1);

struct BoundEntry {
  bool applicable = false;
  double value = 0.0;
  bool degenerate = false;  ///< excluded from "tightest" (d = 0 convention)
  std::string note;         ///< inapplicability reason / conversion note
};

struct BoundReport {
  cplx lambda{0.0, 0.0};
  double lhs = 0.0;              ///< measured norm; see lhs_norm
  std::string lhs_norm;          ///< "two" or "frobenius"
  std::map<std::string, BoundEntry> bounds;
  std::string tightest;          ///< key of the minimal applicable bound
  std::string szasz_hypothesis;  ///< grid-check / caller-assertion record
};

/// Compare the matrix-polynomial bound(s) at lambda; lhs is the two-norm.
BoundReport compare(const MatrixPolynomial& p, cplx lambda,
                    bool caller_asserts_halfplane = false);

/// Compare all product bounds at lambda; lhs is the Frobenius norm and
/// two-norm bounds are multiplied by sqrt(n) to be Frobenius-comparable.
BoundReport compare(const FactoredPolynomial& f, cplx lambda,
                    bool caller_asserts_halfplane = false);

/// Compare the calculus bounds for ||p(A)||_F (pA2/svn times sqrt(n)).
BoundReport compare(const ComplexPolynomial& p, const Mat& a);

/// B_j = all-ones for j = 1..d. Closed form (lambda > 0):
/// ||P(lambda)||_F^2 = (n lambda + 1)^{2d} + n - 1.
FactoredPolynomial ones_fixture(int n, int d);
double ones_frob_closed_form(int n, int d, double lambda);

/// The sharpness sequence P_k(lambda) =
///   (I + C1 lambda/k)^k (I + sqrt(D_k) lambda/sqrt(k))^k
///                        (I - sqrt(D_k) lambda/sqrt(k))^k,
/// C1 = all-ones, D_k = I + (n(k-1)/(2k)) C1 (PSD; principal square root).
/// Degrees grow with k, so evaluation is factored with binary powering; the
/// expanded polynomial is never formed.
struct CmvFixture {
  int n = 0;
  int k = 0;
  Mat c1, dk, sqrt_dk;

  Mat evaluate(cplx lambda) const;
  double frob_at(cplx lambda) const { return evaluate(lambda).norm(); }
  /// lim_k ||P_k(iy)||_F = e^{y^2} (e^{n^2 y^2} + n - 1)^{1/2}.
  double limit_at_iy(double y) const;
};
CmvFixture cmv_fixture(int n, int k);

}  // namespace polystab
