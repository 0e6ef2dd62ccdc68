#include <doctest.h>

#include <cmath>

#include "polystab/fixtures.hpp"
#include "polystab/multi_poly.hpp"
#include "polystab/rng.hpp"

using namespace polystab;

namespace {

std::vector<cplx> random_tuple(RngEngine& rng, int kappa, double box = 1.5) {
  std::vector<cplx> z(static_cast<std::size_t>(kappa));
  for (auto& v : z) v = random_complex(rng, box);
  return z;
}

}  // namespace

TEST_CASE("elementary symmetric polynomials: pinned values and recurrence") {
  std::vector<cplx> z = {cplx(1, 0), cplx(2, 0), cplx(3, 0)};
  CHECK(elementary_symmetric(0, z) == cplx(1, 0));
  CHECK(std::abs(elementary_symmetric(1, z) - cplx(6, 0)) < 1e-14);
  CHECK(std::abs(elementary_symmetric(2, z) - cplx(11, 0)) < 1e-14);
  CHECK(std::abs(elementary_symmetric(3, z) - cplx(6, 0)) < 1e-14);

  // Vieta oracle: prod (t + z_i) has coefficients s_j.
  RngEngine rng(41);
  for (int t = 0; t < 20; ++t) {
    std::vector<cplx> w = random_tuple(rng, 4);
    std::vector<cplx> all = elementary_symmetric_all(w);
    REQUIRE(all.size() == 5);
    ComplexPolynomial prod = ComplexPolynomial::constant(cplx(1, 0));
    for (cplx v : w)
      prod = prod * ComplexPolynomial({v, cplx(1, 0)});
    for (int j = 0; j <= 4; ++j)
      CHECK(std::abs(prod.coeff(4 - j) - all[static_cast<std::size_t>(j)]) <
            1e-12);
    for (int j = 0; j <= 4; ++j)
      CHECK(std::abs(elementary_symmetric(j, w) -
                     all[static_cast<std::size_t>(j)]) < 1e-13);
  }
}

TEST_CASE("polarization: diagonal restriction inverts it exactly") {
  RngEngine rng(42);
  for (int t = 0; t < 20; ++t) {
    int n = 1 + static_cast<int>(rng() % 3);
    int d = 1 + static_cast<int>(rng() % 3);
    int kappa = d + static_cast<int>(rng() % 3);
    std::vector<Mat> cs;
    for (int j = 0; j <= d; ++j) cs.push_back(random_matrix(rng, n));
    cs.back() += Mat::Identity(n, n);
    MatrixPolynomial p(cs);
    MultiAffineSymmetricMP q = polarize(p, kappa);
    CHECK(q.kappa() == kappa);
    MatrixPolynomial back = diagonal(q);
    REQUIRE(back.degree() == p.degree());
    for (int j = 0; j <= d; ++j)
      CHECK((back.coeff(j) - p.coeff(j)).norm() < 1e-12);
    // Pointwise: Q on the diagonal equals P.
    cplx z = random_complex(rng, 1.5);
    std::vector<cplx> diag_z(static_cast<std::size_t>(kappa), z);
    CHECK((q.evaluate(diag_z) - p.evaluate(z)).norm() <
          1e-10 * (1 + p.evaluate(z).norm()));
  }
}

TEST_CASE("polarization of a pure power is the normalized symmetric level") {
  // T_2(lambda^2 A) = s_2(z) A (binom(2,2) = 1).
  Mat a = Mat::Ones(2, 2);
  MatrixPolynomial p({Mat::Zero(2, 2), Mat::Zero(2, 2), a});
  MultiAffineSymmetricMP q = polarize(p, 2);
  std::vector<cplx> z = {cplx(2, 1), cplx(-1, 3)};
  Mat expect = (z[0] * z[1]) * a;
  CHECK((q.evaluate(z) - expect).norm() < 1e-12 * (1 + expect.norm()));

  // T_2(lambda A) = s_1(z)/2 A: the level normalization binom(kappa, 1)^{-1}.
  MatrixPolynomial lin({Mat::Zero(2, 2), a});
  MultiAffineSymmetricMP ql = polarize(lin, 2);
  Mat expect_lin = ((z[0] + z[1]) / 2.0) * a;
  CHECK((ql.evaluate(z) - expect_lin).norm() < 1e-12 * (1 + expect_lin.norm()));
}

TEST_CASE("polarization guards: kappa too small or too large") {
  Mat a = Mat::Identity(2, 2);
  MatrixPolynomial p({a, a, a});  // degree 2
  CHECK_THROWS_AS(polarize(p, 1), KappaTooSmall);
  CHECK_THROWS_AS(polarize(p, kMaxKappa + 1), SizeCapExceeded);
}

TEST_CASE("sparse expansion agrees with the by-level evaluation") {
  RngEngine rng(43);
  for (int t = 0; t < 10; ++t) {
    std::vector<Mat> cs = {random_matrix(rng, 2), random_matrix(rng, 2),
                           random_matrix(rng, 2)};
    MatrixPolynomial p(cs);
    MultiAffineSymmetricMP q = polarize(p, 3);
    SparseMVMatrixPoly s = to_sparse(q);
    CHECK(s.kappa() == 3);
    std::vector<cplx> z = random_tuple(rng, 3);
    CHECK((s.evaluate(z) - q.evaluate(z)).norm() < 1e-11);
    // And the two sparse evaluation schemes cross-check each other.
    CHECK((s.evaluate(z) - s.evaluate_horner(z)).norm() < 1e-11);
  }
}

TEST_CASE("sparse partial derivative matches finite differences") {
  RngEngine rng(44);
  SparseMVMatrixPoly q(2, 2);
  for (int t = 0; t < 6; ++t)
    q.add_term({static_cast<int>(rng() % 3), static_cast<int>(rng() % 3)},
               random_matrix(rng, 2));
  std::vector<cplx> z = random_tuple(rng, 2);
  for (int j = 1; j <= 2; ++j) {
    SparseMVMatrixPoly dq = q.partial_derivative(j);
    double h = 1e-6;
    std::vector<cplx> zp = z, zm = z;
    zp[static_cast<std::size_t>(j - 1)] += h;
    zm[static_cast<std::size_t>(j - 1)] -= h;
    Mat fd = (q.evaluate(zp) - q.evaluate(zm)) / (2 * h);
    CHECK((dq.evaluate(z) - fd).norm() < 1e-5);
  }
  CHECK_THROWS_AS(q.partial_derivative(3), IndexOutOfRange);
  CHECK(q.degree_in(1) <= 2);
}

TEST_CASE("Grace-Walsh-Szego coincidence on a disc") {
  // p(lambda) = (lambda - 5)(lambda - 7), polarized into two variables.
  std::vector<Mat> cs;
  Mat one(1, 1);
  one(0, 0) = 1.0;
  cs.push_back(35.0 * one);
  cs.push_back(-12.0 * one);
  cs.push_back(one);
  MultiAffineSymmetricMP p = polarize(MatrixPolynomial(cs), 2);

  Region d = Region::disc(cplx(0, 0), 1.0, true);
  RngEngine rng(45);
  for (int t = 0; t < 25; ++t) {
    std::vector<cplx> pts = {random_in_disc(rng, cplx(0, 0), 0.9),
                             random_in_disc(rng, cplx(0, 0), 0.9)};
    cplx z0 = gws_coincidence(p, pts, d);
    CHECK(d.contains(z0, 1e-7));
    cplx val_diag = p.evaluate({z0, z0})(0, 0);
    cplx val_pts = p.evaluate(pts)(0, 0);
    CHECK(std::abs(val_diag - val_pts) < 1e-7 * (1 + std::abs(val_pts)));
  }
  CHECK_THROWS_AS(
      gws_coincidence(p, {cplx(5, 0), cplx(0, 0)}, d), PointOutsideD);
}

TEST_CASE("multivariate stability search falsifies the bivariate example") {
  SparseMVMatrixPoly q = to_sparse(fixtures::nonstab());
  std::vector<Region> upper(2, Region::upper_half_plane());
  MvStabilityResult mv = mv_stable(q, upper);
  REQUIRE(mv.falsified);
  REQUIRE(mv.witness.size() == 2);
  for (cplx w : mv.witness) CHECK(Region::upper_half_plane().contains(w, 1e-7));
  CHECK(mv.witness_residual < 1e-7);
}

TEST_CASE("multivariate hyperstability reduces to the diagonal for polarizations") {
  // P(lambda) = lambda I - 3I is hyperstable on the closed unit disc
  // (pencil form), so T_2 P is hyperstable over the product of discs.
  Mat i2 = Mat::Identity(2, 2);
  MultiAffineSymmetricMP q = polarize(MatrixPolynomial({-3.0 * i2, i2}), 2);
  std::vector<Region> discs(2, Region::disc(cplx(0, 0), 1.0, true));
  HyperVerdict hv = mv_hyperstable(to_sparse(q), discs);
  CHECK(hv.status == HyperStatus::CertifiedHyperstable);
}

TEST_CASE("composition transfer: squares pull the disc back to the disc") {
  Mat i2 = Mat::Identity(2, 2);
  MatrixPolynomial p({-3.0 * i2, i2});  // hyperstable on the closed unit disc
  Region d = Region::disc(cplx(0, 0), 1.0, true);
  // p_1(lambda) = p_2(lambda) = lambda^2; common preimage of the disc is the disc.
  ComplexPolynomial sq({cplx(0, 0), cplx(0, 0), cplx(1, 0)});
  CompositionResult cr = compose_and_check(p, 2, {sq, sq}, d, d);
  CHECK(cr.base.status == HyperStatus::CertifiedHyperstable);
  CHECK(cr.verdict.status == HyperStatus::CertifiedHyperstable);
  // The composed polynomial is T_2 P at (lambda^2, lambda^2) = P(lambda^2).
  cplx z(0.3, 0.4);
  Mat expect = p.evaluate(z * z);
  CHECK((cr.composed.evaluate(z) - expect).norm() < 1e-10);

  // Claiming a region whose image escapes D must be rejected.
  CHECK_THROWS_AS(
      compose_and_check(p, 2, {sq, sq}, d, Region::disc(cplx(0, 0), 2.0, true)),
      PreconditionViolated);
}

TEST_CASE("scalar multivariate Gauss-Lucas harness finds no violations") {
  // p = (lambda + 5)(lambda + 7) polarized; zero-free on the right half-plane
  // product, whose factors have convex complements.
  Mat one(1, 1);
  one(0, 0) = 1.0;
  MultiAffineSymmetricMP p =
      polarize(MatrixPolynomial({35.0 * one, 12.0 * one, one}), 2);
  std::vector<Region> rights(2, Region::right_half_plane());
  MvGaussLucasReport rep = mv_gauss_lucas_harness(to_sparse(p), 1, rights);
  CHECK(rep.precondition_ok);
  CHECK_FALSE(rep.base_zero_found);
  CHECK(rep.violations == 0);

  // A disc factor has a non-convex complement: the gate must refuse.
  std::vector<Region> discs(2, Region::disc(cplx(0, 0), 1.0, true));
  CHECK_THROWS_AS(mv_gauss_lucas_harness(to_sparse(p), 1, discs),
                  PreconditionViolated);
}

TEST_CASE("variable transforms satisfy their defining identities") {
  RngEngine rng(46);
  SparseMVMatrixPoly q(2, 2);
  q.add_term({0, 0}, random_matrix(rng, 2));
  q.add_term({1, 0}, random_matrix(rng, 2));
  q.add_term({0, 1}, random_matrix(rng, 2));
  q.add_term({1, 1}, random_matrix(rng, 2));
  q.add_term({2, 1}, random_matrix(rng, 2));
  std::vector<cplx> z = random_tuple(rng, 2);

  SUBCASE("permutation") {
    SparseMVMatrixPoly perm = permute_variables(q, {2, 1});
    CHECK((perm.evaluate({z[1], z[0]}) - q.evaluate(z)).norm() < 1e-12);
  }
  SUBCASE("positive scaling") {
    SparseMVMatrixPoly sc = scale_variable(q, 1, 2.5);
    CHECK((sc.evaluate(z) - q.evaluate({2.5 * z[0], z[1]})).norm() < 1e-11);
    CHECK_THROWS_AS(scale_variable(q, 1, -1.0), HypothesisViolated);
  }
  SUBCASE("prefix diagonalization") {
    SparseMVMatrixPoly dg = diagonalize_prefix(q, 2);
    CHECK(dg.kappa() == 1);
    CHECK((dg.evaluate({z[0]}) - q.evaluate({z[0], z[0]})).norm() < 1e-11);
  }
  SUBCASE("inversion with rotation") {
    double phi = 0.0;
    SparseMVMatrixPoly inv = invert_rotate_variable(q, 1, phi);
    int dj = q.degree_in(1);
    cplx w = z[0] + cplx(2.0, 0.0);  // keep away from 0
    Mat lhs = inv.evaluate({w, z[1]});
    Mat rhs = std::pow(w, dj) *
              q.evaluate({-std::exp(cplx(0, -2 * phi)) / w, z[1]});
    CHECK((lhs - rhs).norm() < 1e-9 * (1 + rhs.norm()));
  }
  SUBCASE("specialization rejects boundary points") {
    Region h = Region::right_half_plane();
    SparseMVMatrixPoly sp = specialize_variable(q, 1, cplx(1.0, 0.5), h);
    CHECK(sp.kappa() == 1);
    CHECK((sp.evaluate({z[1]}) - q.evaluate({cplx(1.0, 0.5), z[1]})).norm() <
          1e-11);
    CHECK_THROWS_AS(specialize_variable(q, 1, cplx(0.0, 1.0), h),
                    BoundarySpecialization);
  }
  SUBCASE("dispatcher routes to the same transforms") {
    MvTransformSpec spec;
    spec.kind = MvTransform::Scale;
    spec.variable = 1;
    spec.scale = 2.5;
    SparseMVMatrixPoly via = basic_transform(q, spec);
    SparseMVMatrixPoly direct = scale_variable(q, 1, 2.5);
    CHECK((via.evaluate(z) - direct.evaluate(z)).norm() < 1e-12);
  }
}

TEST_CASE("sparse size caps are enforced") {
  CHECK_THROWS_AS(SparseMVMatrixPoly(kMaxSparseKappa + 1, 1), SizeCapExceeded);
  SparseMVMatrixPoly q(1, 1);
  Mat one(1, 1);
  one(0, 0) = 1.0;
  CHECK_THROWS_AS(q.add_term({kMaxSparseDegree + 1}, one), SizeCapExceeded);
}
