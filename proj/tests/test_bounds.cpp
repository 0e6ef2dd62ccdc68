#include <doctest.h>

#include <cmath>

#include "polystab/bounds.hpp"
#include "polystab/fixtures.hpp"
#include "polystab/rng.hpp"
#include "polystab/scalar_poly.hpp"

using namespace polystab;

TEST_CASE("poly_at_matrix matches the naive power sum") {
  RngEngine rng(31);
  for (int t = 0; t < 30; ++t) {
    int n = 2;
    Mat a = random_matrix(rng, n);
    std::vector<cplx> cs(4);
    for (auto& c : cs) c = random_complex(rng);
    ComplexPolynomial p(cs);
    Mat naive = Mat::Zero(n, n);
    Mat power = Mat::Identity(n, n);
    for (int j = 0; j <= p.degree(); ++j) {
      naive += p.coeff(j) * power;
      power = power * a;
    }
    CHECK((poly_at_matrix(p, a) - naive).norm() < 1e-11 * (1 + naive.norm()));
  }
}

TEST_CASE("all-ones factored family: closed-form Frobenius norm") {
  for (int n = 1; n <= 3; ++n) {
    for (int d = 1; d <= 4; ++d) {
      FactoredPolynomial f = ones_fixture(n, d);
      CHECK(f.n == n);
      CHECK(f.d == d);
      for (double lam : {0.25, 0.5, 1.0, 2.0}) {
        double measured = f.expanded.evaluate(cplx(lam, 0.0)).norm();
        double closed = ones_frob_closed_form(n, d, lam);
        double squared = std::pow(n * lam + 1.0, 2.0 * d) + n - 1.0;
        CHECK(closed * closed == doctest::Approx(squared).epsilon(1e-12));
        CHECK(measured == doctest::Approx(closed).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("fixtures::ones matches ones_fixture") {
  FactoredPolynomial a = fixtures::ones(2, 3);
  FactoredPolynomial b = ones_fixture(2, 3);
  REQUIRE(a.factors.size() == b.factors.size());
  for (std::size_t j = 0; j < a.factors.size(); ++j)
    CHECK((a.factors[j] - b.factors[j]).norm() == 0.0);
}

TEST_CASE("factored construction rejects factors with positive imaginary part") {
  // Im B = +I is not negative semidefinite.
  Mat bad = cplx(0.0, 1.0) * Mat::Identity(2, 2);
  CHECK_THROWS_AS(FactoredPolynomial::from_factors({bad}), HypothesisViolated);
}

TEST_CASE("product bounds dominate the measured norm on the ones family") {
  for (int n = 2; n <= 3; ++n) {
    FactoredPolynomial f = ones_fixture(n, 3);
    for (double lam : {0.5, 1.0, 2.0}) {
      BoundReport rep = compare(f, cplx(lam, 0.0));
      CHECK(rep.lhs_norm == "frobenius");
      REQUIRE(rep.bounds.count("frob") == 1);
      REQUIRE(rep.bounds.at("frob").applicable);
      CHECK(rep.lhs <= rep.bounds.at("frob").value * (1 + 1e-12));
      REQUIRE(rep.bounds.count("alt") == 1);
      CHECK(rep.lhs <= rep.bounds.at("alt").value * (1 + 1e-12));
      CHECK_FALSE(rep.tightest.empty());
      CHECK(rep.lhs <= rep.bounds.at(rep.tightest).value * (1 + 1e-12));
    }
  }
}

TEST_CASE("half-plane bound requires a monic constant term") {
  RngEngine rng(32);
  Mat a1 = random_matrix(rng, 2);
  MatrixPolynomial nonmonic({2.0 * Mat::Identity(2, 2), a1});
  CHECK_THROWS_AS(bound_thm_szasz(nonmonic, cplx(1.0, 0.0)), NotMonic);
}

TEST_CASE("half-plane bound dominates the two-norm for products with Im B <= 0") {
  RngEngine rng(33);
  for (int t = 0; t < 40; ++t) {
    int n = 2;
    // B = H - i P with P PSD has Im B = -P negative semidefinite.
    Mat b = random_hermitian(rng, n) - cplx(0, 1) * random_psd(rng, n);
    FactoredPolynomial f = FactoredPolynomial::from_factors({b});
    cplx lam = random_complex(rng, 1.5);
    double bound = bound_thm_szasz(f.expanded, lam);
    double two = norms(f.expanded.evaluate(lam)).two_norm;
    CHECK(two <= bound + 1e-9 * std::max(1.0, bound));
  }
}

TEST_CASE("calculus bound comparison on the three worked cases") {
  // Case 1: p = -(lambda-1)^3, A = all-ones 2x2. Closed forms:
  //   pA1 = 2 sqrt 2, pA2 = sqrt 2 e^6, svn = sqrt 2 e^12 (Frobenius-adjusted).
  fixtures::CompCase c1 = fixtures::comp(1);
  BoundReport r1 = compare(c1.p, c1.a);
  REQUIRE(r1.bounds.count("pA1") == 1);
  CHECK(r1.bounds.at("pA1").value ==
        doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-9));
  CHECK(r1.bounds.at("pA2").value ==
        doctest::Approx(std::sqrt(2.0) * std::exp(6.0)).epsilon(1e-9));
  CHECK(r1.bounds.at("svn").value ==
        doctest::Approx(std::sqrt(2.0) * std::exp(12.0)).epsilon(1e-9));
  CHECK(r1.tightest == "pA1");
  // The two-norm bounds carry a conversion note.
  CHECK(r1.bounds.at("pA2").note.find("sqrt(n)") != std::string::npos);
  // lhs = ||p(A)||_F: A is idempotent-like, p(A) computable directly.
  CHECK(r1.lhs <= r1.bounds.at(r1.tightest).value * (1 + 1e-9));

  fixtures::CompCase c2 = fixtures::comp(2);
  BoundReport r2 = compare(c2.p, c2.a);
  CHECK(r2.tightest == "pA2");

  fixtures::CompCase c3 = fixtures::comp(3);
  BoundReport r3 = compare(c3.p, c3.a);
  CHECK(r3.tightest == "svn");
}

TEST_CASE("calculus bounds reject unstable or unnormalized polynomials") {
  Mat a = Mat::Identity(2, 2);
  // Root at i lies in the open upper half-plane: not H_0-stable.
  ComplexPolynomial unstable({cplx(1, 0), cplx(0, 1)});
  CHECK_THROWS_AS(bound_pA1(unstable, a), NotStable);
  // p(0) != 1.
  ComplexPolynomial unnormalized({cplx(2, 0), cplx(1, 0)});
  CHECK_THROWS_AS(bound_pA2(unnormalized, a), NotNormalized);
}

TEST_CASE("calculus bounds dominate ||p(A)||_F on random stable inputs") {
  RngEngine rng(34);
  for (int t = 0; t < 60; ++t) {
    ComplexPolynomial p = random_h0_stable(rng, 4);
    int n = 1 + static_cast<int>(rng() % 3);
    Mat a = random_matrix(rng, n, 1.5);
    double lhs = poly_at_matrix(p, a).norm();
    double b1 = bound_pA1(p, a);
    double b2 = bound_pA2(p, a) * std::sqrt(static_cast<double>(n));
    double b3 = bound_svn(p, a) * std::sqrt(static_cast<double>(n));
    CHECK(lhs <= b1 + 1e-9 * std::max(1.0, b1));
    CHECK(lhs <= b2 + 1e-9 * std::max(1.0, b2));
    CHECK(lhs <= b3 + 1e-9 * std::max(1.0, b3));
  }
}

TEST_CASE("von Neumann style circle bound dominates ||p(A)|| (two-norm)") {
  RngEngine rng(35);
  for (int t = 0; t < 40; ++t) {
    int n = 2;
    Mat a = random_matrix(rng, n, 1.5);
    std::vector<cplx> cs(4);
    for (auto& c : cs) c = random_complex(rng);
    if (std::abs(cs.back()) < 0.2) cs.back() += cplx(0.5, 0.5);
    ComplexPolynomial p(cs);
    double lhs = norms(poly_at_matrix(p, a)).two_norm;
    CHECK(lhs <= von_neumann_bound(p, a, 4096) + 1e-9);
  }
}

TEST_CASE("sharpness sequence: factored evaluation and its limit formula") {
  CmvFixture f = cmv_fixture(2, 8);
  CHECK(f.n == 2);
  CHECK(f.k == 8);
  // Direct product evaluation oracle at small k.
  cplx lam(0.0, 1.0);
  double rk = std::sqrt(static_cast<double>(f.k));
  Mat t1 = Mat::Identity(2, 2) + f.c1 * (lam / static_cast<double>(f.k));
  Mat t2 = Mat::Identity(2, 2) + f.sqrt_dk * (lam / rk);
  Mat t3 = Mat::Identity(2, 2) - f.sqrt_dk * (lam / rk);
  Mat prod = Mat::Identity(2, 2);
  for (int j = 0; j < f.k; ++j) prod = prod * t1;
  Mat p2 = Mat::Identity(2, 2), p3 = Mat::Identity(2, 2);
  for (int j = 0; j < f.k; ++j) {
    p2 = p2 * t2;
    p3 = p3 * t3;
  }
  Mat direct = prod * p2 * p3;
  CHECK((f.evaluate(lam) - direct).norm() < 1e-8 * (1 + direct.norm()));

  // Limit formula: e^{y^2} (e^{n^2 y^2} + n - 1)^{1/2}.
  double y = 1.0;
  CHECK(f.limit_at_iy(y) ==
        doctest::Approx(std::exp(y * y) * std::sqrt(std::exp(4.0 * y * y) + 1.0))
            .epsilon(1e-12));
  // n = 1 collapses to e^{(1 + 1/2 + ... )}: just check against the formula.
  CmvFixture f1 = cmv_fixture(1, 8);
  CHECK(f1.limit_at_iy(1.0) == doctest::Approx(std::exp(1.5)).epsilon(1e-12));
}

TEST_CASE("sampled half-plane hypothesis check") {
  // P = (1 + lambda^3) I: section roots are the three cube roots of -1,
  // spread 120 degrees apart, so no closed half-plane through 0 holds W(P).
  Mat i2 = Mat::Identity(2, 2);
  Mat z = Mat::Zero(2, 2);
  SzaszHypothesis bad = szasz_halfplane_check(MatrixPolynomial({i2, z, z, i2}));
  CHECK_FALSE(bad.admits_half_plane);

  // P = I + lambda B with B = -i PSD: sections have roots in one half-plane.
  RngEngine rng(36);
  Mat b = cplx(0, -1) * (random_psd(rng, 2) + 0.5 * Mat::Identity(2, 2));
  SzaszHypothesis good = szasz_halfplane_check(MatrixPolynomial({i2, b}));
  CHECK(good.admits_half_plane);
  CHECK(good.points > 0);
}

TEST_CASE("matrix-polynomial report wiring: monic input, assertion recorded") {
  RngEngine rng(37);
  Mat b = random_hermitian(rng, 2) - cplx(0, 1) * random_psd(rng, 2);
  FactoredPolynomial f = FactoredPolynomial::from_factors({b, b});
  BoundReport rep = compare(f.expanded, cplx(0.5, 0.25), true);
  CHECK(rep.lhs_norm == "two");
  REQUIRE(rep.bounds.count("thm_szasz") == 1);
  CHECK(rep.bounds.at("thm_szasz").applicable);
  CHECK(rep.lhs <=
        rep.bounds.at("thm_szasz").value * (1 + 1e-12) + 1e-12);
  CHECK(rep.szasz_hypothesis.find("assert") != std::string::npos);
}
