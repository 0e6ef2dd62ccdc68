#include <doctest.h>

#include <cmath>

#include "polystab/fixtures.hpp"
#include "polystab/num_range.hpp"
#include "polystab/region.hpp"
#include "polystab/rng.hpp"

using namespace polystab;

TEST_CASE("lambda_H and lambda_min_H on a diagonal Hermitian matrix") {
  Mat a = Mat::Zero(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = -2.0;
  CHECK(lambda_H(a) == doctest::Approx(1.0));
  CHECK(lambda_min_H(a) == doctest::Approx(-2.0));
  // For general X only the Hermitian part matters.
  Mat skew = Mat::Zero(2, 2);
  skew(0, 1) = cplx(0, 5);
  skew(1, 0) = cplx(0, 5);  // i*5 times symmetric: Hermitian part unaffected?
  CHECK(lambda_H(a + (skew - skew.adjoint()) / 2.0) == doctest::Approx(1.0));
}

TEST_CASE("numerical radius closed forms") {
  // Hermitian: w(A) = spectral radius = two-norm.
  Mat h = Mat::Zero(2, 2);
  h(0, 0) = 3.0;
  h(1, 1) = -1.0;
  CHECK(numerical_radius(h) == doctest::Approx(3.0).epsilon(1e-9));

  // Nilpotent Jordan block: W is the disc of radius 1/2, so w = 1/2, ||A|| = 1.
  Mat jb = Mat::Zero(2, 2);
  jb(0, 1) = 1.0;
  CHECK(numerical_radius(jb) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("numerical radius sandwich holds on random matrices") {
  RngEngine rng(21);
  for (int t = 0; t < 50; ++t) {
    int n = 2 + static_cast<int>(rng() % 2);
    Mat a = random_matrix(rng, n, 2.0);
    double w = numerical_radius(a);
    double two = norms(a).two_norm;
    CHECK(w >= 0.5 * two - 1e-8);
    CHECK(w <= two + 1e-8);
  }
}

TEST_CASE("membership of zero in the numerical range") {
  // A = I: W = {1}, zero separated with margin 1.
  ZeroRangeResult no = zero_in_numerical_range(Mat::Identity(2, 2));
  CHECK(no.status == ZeroInRange::No);
  CHECK(no.margin == doctest::Approx(1.0).epsilon(1e-6));

  // A = diag(1, -1) is normal: W = [-1, 1] contains 0, witness verified.
  Mat d = Mat::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = -1.0;
  ZeroRangeResult yes = zero_in_numerical_range(d);
  REQUIRE(yes.status == ZeroInRange::Yes);
  REQUIRE(yes.x.size() == 2);
  CHECK(std::abs(yes.x.norm() - 1.0) < 1e-9);
  CHECK(std::abs((yes.x.adjoint() * d * yes.x)(0)) < 1e-8);
}

TEST_CASE("pointwise membership of lambda in W(P)") {
  // P(lambda) = lambda I - diag(1, -1): W(P) = W(diag(1,-1)) = [-1, 1].
  Mat a = Mat::Zero(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = -1.0;
  MatrixPolynomial p({-a, Mat::Identity(2, 2)});
  WpMembership in = wp_contains(p, cplx(0.0, 0.0));
  CHECK(in.status == Membership::True);
  WpMembership out = wp_contains(p, cplx(5.0, 0.0));
  CHECK(out.status == Membership::False);
  CHECK(out.margin > 0);
}

TEST_CASE("disjointness: constant and scalar certificates") {
  // Constant polynomial with 0 separated from W(A0).
  NumRangeVerdict c = wp_disjoint_from(
      MatrixPolynomial({Mat::Identity(2, 2)}), Region::disc(cplx(0, 0), 1, true));
  CHECK(c.status == RangeStatus::Disjoint);
  CHECK(c.certificate.find("constant") != std::string::npos);

  // Scalar: W(P) is the root set; roots at 5, far from the unit disc.
  Mat m0(1, 1), m1(1, 1);
  m0(0, 0) = -5.0;
  m1(0, 0) = 1.0;
  NumRangeVerdict s = wp_disjoint_from(MatrixPolynomial({m0, m1}),
                                       Region::disc(cplx(0, 0), 1, true));
  CHECK(s.status == RangeStatus::Disjoint);
  CHECK(s.certificate.find("scalar") != std::string::npos);
}

TEST_CASE("disjointness: factored certificate for p(lambda) A") {
  // P(lambda) = (lambda - 3) I: factored route, roots avoid the disc and
  // 0 is separated from W(I).
  Mat i2 = Mat::Identity(2, 2);
  NumRangeVerdict f = wp_disjoint_from(MatrixPolynomial({-3.0 * i2, i2}),
                                       Region::disc(cplx(0, 0), 1, true));
  CHECK(f.status == RangeStatus::Disjoint);
}

TEST_CASE("intersection produces a residual-checked witness") {
  // P(lambda) = lambda I - diag(1, -1): 1 is in W(P) and in the closed disc.
  Mat a = Mat::Zero(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = -1.0;
  MatrixPolynomial p({-a, Mat::Identity(2, 2)});
  NumRangeVerdict v =
      wp_disjoint_from(p, Region::disc(cplx(0, 0), 1.0, true));
  REQUIRE(v.status == RangeStatus::Intersects);
  CHECK(Region::disc(cplx(0, 0), 1.0, true).contains(v.witness_lambda, 1e-9));
  // Residual: |x* P(lambda) x| at the witness is tiny on the evaluation scale.
  REQUIRE(v.witness_x.size() == 2);
  cplx resid = (v.witness_x.adjoint() * p.evaluate(v.witness_lambda) *
                v.witness_x)(0);
  CHECK(std::abs(resid) < 1e-6);
}

TEST_CASE("grid certificate separates a far-away disc for a full 2x2 example") {
  RngEngine rng(22);
  Mat a0 = random_matrix(rng, 2) + 10.0 * Mat::Identity(2, 2);
  Mat a1 = random_matrix(rng, 2);
  // W(P) sits near W(A0)/|small lambda| far from 0... keep it simple: the
  // region is a tiny disc around 100, far from every section root.
  MatrixPolynomial p({a0, a1, Mat::Identity(2, 2)});
  DisjointnessBudget budget;
  budget.boundary_grid = 128;
  budget.interior_grid = 32;
  NumRangeVerdict v =
      wp_disjoint_from(p, Region::disc(cplx(100.0, 0.0), 0.5, true), budget);
  CHECK(v.status == RangeStatus::Disjoint);
  CHECK(v.worst_margin > 0);
}

TEST_CASE("the non-hyperstable example is never declared range-disjoint") {
  // Hyperstability of exa is falsified on the closed unit disc, and range
  // disjointness would imply hyperstability, so Disjoint must not fire.
  NumRangeVerdict v = wp_disjoint_from(fixtures::exa(),
                                       Region::disc(cplx(0, 0), 1.0, true));
  CHECK(v.status != RangeStatus::Disjoint);
}

TEST_CASE("query validation rejects nonsense knobs") {
  FieldOfValuesQuery q;
  q.theta_grid = 4;
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  FieldOfValuesQuery q2;
  q2.tol = 0.0;
  CHECK_THROWS_AS(q2.validate(), std::invalid_argument);
}
