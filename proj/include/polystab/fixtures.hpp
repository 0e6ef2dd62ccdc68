// The worked-example corpus: deterministic constructors for every matrix
// polynomial the test suite and the self-test reproduce. Integer-entry
// fixtures are built exactly; seeded families draw through the library RNG
// so identical seeds give identical instances.
#pragma once

#include <cstdint>

#include "polystab/bounds.hpp"
#include "polystab/matrix_poly.hpp"
#include "polystab/multi_poly.hpp"
#include "polystab/smith.hpp"

namespace polystab::fixtures {

/// [[1, lambda],[lambda, lambda^2+1]] — unimodular (det = 1), stable with
/// respect to every region, yet not hyperstable on the closed unit disc.
MatrixPolynomial exa();

/// [[lambda^2, lambda],[lambda, 1]] — identically singular (det = 0).
MatrixPolynomial sing();

/// [[lambda p + q, p],[lambda, 1]] with q = lambda^2, p = lambda^3-4*lambda:
/// det P = q is zero-free on {|z|>1} but det P' = -p' is not; the canonical
/// failure of eigenvalue transfer to the derivative.
MatrixPolynomial nonGL();

/// nonGL with the (2,2) entry perturbed to 1 + eps*lambda^4, making the
/// leading coefficient diag(1, eps) invertible. Caution: det P equals
/// lambda^2 (1 + eps lambda^6 - 3 eps lambda^4), so for every eps > 0 six
/// eigenvalues of modulus ~ eps^(-1/6) > 1 lie inside {|z| > 1}; the
/// perturbed polynomial is NOT stable there (see the self-test's documented
/// deviation). The derivative keeps linearly independent entries and is
/// unstable on {|z| > 1}.
MatrixPolynomial hyper_nsinf(double eps);

/// All-ones product factors (I + lambda B)^d; closed-form Frobenius norm.
FactoredPolynomial ones(int n, int d);

/// The sharpness sequence P_k approaching the half-plane bound on iR.
CmvFixture cmv(int n, int k);

/// The three bound-comparison cases: (p, A) pairs whose pA1/pA2/svn values
/// are closed forms and whose tightest bound differs case to case.
struct CompCase {
  ComplexPolynomial p;
  Mat a;
};
/// which = 1: p = -(lambda-1)^3, A = all-ones 2x2.
/// which = 2: same p, A = [[-1,1],[1,-1]].
/// which = 3: p = (lambda-1)^2 (lambda+1), A = -I.
CompCase comp(int which);

/// Orbit witness built from S = diag((lambda-2)^{d-2}, 1): a matrix
/// polynomial stable on the closed unit disc whose whole equivalence orbit
/// fails hyperstability there. d = 2 reproduces exa() exactly.
OrbitWitness orbits(int d);

/// T_2 of exa(): det = 1 - ((z1-z2)/2)^2, so every pair with mu1 - mu2 = +-2
/// is a bivariate eigenvalue — polarisation does not preserve stability.
MultiAffineSymmetricMP nonstab();

/// The 3x3 half-plane instance: R0 tridiagonal with spectrum {0,1,3},
/// R1 = all-ones, R2 = tridiag(-1,2,-1), J skew with integer entries.
struct HalfPlane3x3 {
  Mat r0, r1, r2, j;
};
HalfPlane3x3 halfplane3x3();

/// Seeded Hermitian-PSD-coefficient polynomial (n <= 3, 2 <= d <= 4):
/// eigenvalues avoid the open sector |Arg| < pi/d around the positive axis.
MatrixPolynomial cube(std::uint64_t seed);

/// Seeded quadratic with A2, A0 and the Hermitian part of A1 PSD:
/// eigenvalues lie in the closed left half-plane.
MatrixPolynomial quad(std::uint64_t seed);

/// lambda^3 I + a lambda^2 I + b lambda R + c R with the fixed positive
/// definite R = [[2,1],[1,2]]; hyperstable on the open right half-plane
/// whenever a > 1 and b > c.
struct MgtInstance {
  double a = 0.0, b = 0.0, c = 0.0;
  Mat r;
  MatrixPolynomial p;
};
MgtInstance mgt(double a, double b, double c);

}  // namespace polystab::fixtures
