#include <doctest.h>

#include <cmath>
#include <string>

#include "polystab/fixtures.hpp"
#include "polystab/rng.hpp"
#include "polystab/stability.hpp"

using namespace polystab;

namespace {

Region closed_disc() { return Region::disc(cplx(0, 0), 1.0, true); }

bool evidence_mentions(const HyperVerdict& v, const std::string& needle) {
  for (const std::string& line : v.evidence)
    if (line.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("plain stability: eigenvalue localization against the region") {
  Mat i2 = Mat::Identity(2, 2);
  Mat a = Mat::Zero(2, 2);
  a(0, 0) = 0.5;
  a(1, 1) = 3.0;
  MatrixPolynomial p({-a, i2});  // eigenvalues 0.5 and 3

  StabilityResult inside = check_stable(p, Region::disc(cplx(0, 0), 1, false));
  REQUIRE(inside.status == StabilityStatus::NotStable);
  REQUIRE(inside.eigenvalue_in_region.has_value());
  CHECK(std::abs(*inside.eigenvalue_in_region - cplx(0.5, 0.0)) < 1e-8);

  StabilityResult outside =
      check_stable(p, Region::disc(cplx(10, 0), 1, true));
  CHECK(outside.status == StabilityStatus::Stable);

  CHECK(check_stable(fixtures::sing(), closed_disc()).status ==
        StabilityStatus::Singular);
  CHECK(check_stable(fixtures::exa(), closed_disc()).status ==
        StabilityStatus::Stable);
}

TEST_CASE("boundary eigenvalues raise the sensitivity flag") {
  Mat one(1, 1);
  one(0, 0) = 1.0;
  Mat neg(1, 1);
  neg(0, 0) = -1.0;
  MatrixPolynomial p({neg, one});  // eigenvalue exactly 1
  StabilityResult open = check_stable(p, Region::disc(cplx(0, 0), 1, false));
  CHECK(open.status == StabilityStatus::Stable);
  CHECK(open.boundary_sensitive);
  StabilityResult closed = check_stable(p, closed_disc());
  CHECK(closed.status == StabilityStatus::NotStable);
}

TEST_CASE("directional problem: achievable sections at a direction") {
  MatrixPolynomial exa = fixtures::exa();
  Vec e1 = Vec::Zero(2), e2 = Vec::Zero(2);
  e1(0) = 1.0;
  e2(1) = 1.0;
  DirectionalProblem d1 = directional_problem(exa, e1);
  CHECK(d1.r >= 1);
  CHECK(d1.V.rows() == 2);
  CHECK(d1.V.cols() == exa.degree() + 1);

  // Certificate along e1, the documented Vieta obstruction along e2.
  DirectionalCertificate c1 = directional_certificate(exa, e1, closed_disc());
  CHECK(c1.status == CertStatus::Certificate);
  REQUIRE(c1.y.has_value());
  // Re-verify the certificate externally: the section is disc-stable.
  CHECK(is_stable(c1.section, closed_disc(), 1e-9));

  DirectionalCertificate c2 = directional_certificate(exa, e2, closed_disc());
  CHECK(c2.status == CertStatus::NoCertificate);
  CHECK(c2.proof.find("Vieta") != std::string::npos);
}

TEST_CASE("pencil form: detection, reconstruction, and absence") {
  RngEngine rng(61);
  Mat a = random_matrix(rng, 2), b = random_matrix(rng, 2);
  // P = p(lambda) A + q(lambda) B with fixed scalar polynomials.
  std::vector<Mat> cs(4, Mat::Zero(2, 2));
  // p = 1 + 2 lambda^3, q = lambda - lambda^2.
  cs[0] = a;
  cs[1] = b;
  cs[2] = -b;
  cs[3] = 2.0 * a;
  MatrixPolynomial p(cs);
  auto dec = detect_pencil_form(p);
  REQUIRE(dec.has_value());
  CHECK(dec->rank == 2);
  CHECK(dec->residual < 1e-10);
  // Reconstruction: p(lambda) A + q(lambda) B matches P pointwise.
  cplx z = random_complex(rng, 1.5);
  Mat rec = dec->p.evaluate(z) * dec->A + dec->q.evaluate(z) * dec->B;
  CHECK((rec - p.evaluate(z)).norm() < 1e-9 * (1 + p.evaluate(z).norm()));

  // The packaged example is NOT a pencil: its coefficient stack has rank 3.
  CHECK_FALSE(detect_pencil_form(fixtures::exa()).has_value());
}

TEST_CASE("the layered engine certifies a stable pencil and falsifies exa") {
  Mat i2 = Mat::Identity(2, 2);
  MatrixPolynomial pencil({-2.0 * i2, i2});  // eigenvalue 2, outside the disc
  HyperVerdict hv = check_hyperstable(pencil, closed_disc());
  REQUIRE(hv.status == HyperStatus::CertifiedHyperstable);
  REQUIRE(hv.method.has_value());
  CHECK(*hv.method == CertMethod::PencilForm);

  HyperVerdict bad = check_hyperstable(fixtures::exa(), closed_disc());
  REQUIRE(bad.status == HyperStatus::Falsified);
  REQUIRE(bad.falsifier.has_value());
  // The falsifying direction is (up to phase) the second coordinate axis.
  Vec x = *bad.falsifier;
  CHECK(std::abs(x(1)) > 1.0 - 1e-6);

  // An eigenvalue inside the region short-circuits to NotStable.
  MatrixPolynomial inside({-0.5 * i2, i2});
  CHECK(check_hyperstable(inside, closed_disc()).status ==
        HyperStatus::NotStable);

  // Singular polynomials are falsified through the kernel direction.
  CHECK(check_hyperstable(fixtures::sing(), closed_disc()).status ==
        HyperStatus::Falsified);
}

TEST_CASE("block upper-triangular certificates") {
  // Diagonal entries lambda - 3 and lambda - 5 (disc-stable), coupling above.
  Mat a0 = Mat::Zero(2, 2), a1 = Mat::Zero(2, 2);
  a0(0, 0) = -3.0;
  a0(1, 1) = -5.0;
  a0(0, 1) = 1.0;
  a1(0, 0) = 1.0;
  a1(1, 1) = 1.0;
  a1(0, 1) = 2.0;
  MatrixPolynomial p({a0, a1});
  HyperVerdict hv = block_triangular_certificate(
      p, {1, 1}, Mat::Identity(2, 2), Mat::Identity(2, 2), closed_disc());
  REQUIRE(hv.status == HyperStatus::CertifiedHyperstable);
  CHECK(*hv.method == CertMethod::BlockTriangular);

  // The packaged example has below-diagonal mass: the claim is rejected.
  CHECK_THROWS_AS(
      block_triangular_certificate(fixtures::exa(), {1, 1},
                                   Mat::Identity(2, 2), Mat::Identity(2, 2),
                                   closed_disc()),
      NotBlockTriangular);

  // Shape guards: singular S.
  CHECK_THROWS_AS(
      block_triangular_certificate(p, {1, 1}, Mat::Zero(2, 2),
                                   Mat::Identity(2, 2), closed_disc()),
      ShapeMismatch);
}

TEST_CASE("quadratic norm-gap route certifies and tags the disc variants") {
  RngEngine rng(62);
  for (int t = 0; t < 10; ++t) {
    int n = 2;
    // sigma_min(A0) >= 2, contraction of A1, A2 below the gap.
    Mat a0 = random_matrix(rng, n);
    a0 += (norms(a0).two_norm + 2.0) * Mat::Identity(n, n);
    double rad = 0.75;
    Mat a1 = random_matrix(rng, n), a2 = random_matrix(rng, n);
    double lhs = rad * norms(a1).two_norm + rad * rad * norms(a2).two_norm;
    double scale = 0.5 * norms(a0).sigma_min / lhs;
    a1 *= scale;
    a2 *= scale;
    Region d = Region::disc(cplx(0, 0), rad, true);
    HyperVerdict hv = poly2_route(a2, a1, a0, d, BivariateVariant::A);
    REQUIRE(hv.status == HyperStatus::CertifiedHyperstable);
    CHECK(*hv.method == CertMethod::Poly2a);
    // All eigenvalues must sit outside the disc.
    Eigenvalues ev = eigenvalues(MatrixPolynomial({a0, a1, a2}));
    for (cplx mu : ev.finite) CHECK(std::abs(mu) >= rad - 1e-8);
  }
}

TEST_CASE("bivariate variants b and c require the region to avoid zero") {
  RngEngine rng(63);
  Mat a2 = random_psd(rng, 2) + Mat::Identity(2, 2);
  Mat a1 = random_matrix(rng, 2);
  Mat a0 = random_matrix(rng, 2);
  CHECK_THROWS_AS(poly2_route(a2, a1, a0, closed_disc(), BivariateVariant::B),
                  VariantPreconditionViolated);
  CHECK_THROWS_AS(poly2_route(a2, a1, a0, closed_disc(), BivariateVariant::C),
                  VariantPreconditionViolated);
}

TEST_CASE("bivariate shapes satisfy the diagonal determinant identity") {
  RngEngine rng(64);
  Mat a2 = random_matrix(rng, 2), a1 = random_matrix(rng, 2),
      a0 = random_matrix(rng, 2);
  MatrixPolynomial p({a0, a1, a2});
  ComplexPolynomial detp = determinant(p);
  for (BivariateVariant v :
       {BivariateVariant::A, BivariateVariant::B, BivariateVariant::C}) {
    BivariateShape shape = poly2_shape(a2, a1, a0, v);
    for (int t = 0; t < 12; ++t) {
      cplx z = random_complex(rng, 1.2) + cplx(0.3, 0.0);
      Mat q = Mat::Zero(2, 2);
      for (const auto& [e, m] : shape.terms)
        q += std::pow(z, e.first) * std::pow(z, e.second) * m;
      cplx lhs = q.determinant();
      cplx rhs = std::pow(shape.diagonal_multiplier.evaluate(z), 2) *
                 detp.evaluate(z);
      CHECK(std::abs(lhs - rhs) < 1e-7 * (1.0 + std::abs(rhs)));
    }
  }
}

TEST_CASE("palindromic cubic route checks the leading = constant shape") {
  RngEngine rng(65);
  Mat a2 = random_matrix(rng, 2), a1 = random_matrix(rng, 2),
      a0 = random_matrix(rng, 2);
  Mat a3 = a0 + Mat::Identity(2, 2);
  CHECK_THROWS_AS(poly3_route(a3, a2, a1, a0,
                              Region::disc_exterior(cplx(0, 0), 3.0, true),
                              BivariateVariant::B),
                  ShapeMismatch);
}

TEST_CASE("structured half-plane family: certificate and hypothesis guard") {
  RngEngine rng(66);
  for (int t = 0; t < 10; ++t) {
    int n = 2 + static_cast<int>(rng() % 2);
    Mat r2 = random_psd(rng, n) + 0.5 * Mat::Identity(n, n);
    Mat r1 = random_psd(rng, n);
    Mat r0 = random_psd(rng, n);
    Mat j = random_skew_hermitian(rng, n);
    HyperVerdict hv = structured_halfplane(r2, r1, r0, j);
    REQUIRE(hv.status == HyperStatus::CertifiedHyperstable);
    CHECK(*hv.method == CertMethod::HalfPlaneStructured);
    REQUIRE(hv.region.has_value());
    CHECK(hv.region->kind == RegionKind::HalfPlane);
    // Conclusion re-verified: eigenvalues avoid the open right half-plane.
    Eigenvalues ev = eigenvalues(MatrixPolynomial({r0, r1 + j, r2}));
    for (cplx mu : ev.finite) CHECK(mu.real() <= 1e-8);
  }
  // A negative-definite R0 violates the PSD hypothesis.
  CHECK_THROWS_AS(
      structured_halfplane(Mat::Identity(2, 2), Mat::Identity(2, 2),
                           -Mat::Identity(2, 2), Mat::Zero(2, 2)),
      HypothesisViolated);
  // The packaged 3x3 instance goes through.
  fixtures::HalfPlane3x3 hp = fixtures::halfplane3x3();
  CHECK(structured_halfplane(hp.r2, hp.r1, hp.r0, hp.j).status ==
        HyperStatus::CertifiedHyperstable);
}

TEST_CASE("congruence variant reduces to the structured family at Q = I") {
  RngEngine rng(67);
  Mat a2 = random_psd(rng, 2) + 0.5 * Mat::Identity(2, 2);
  Mat r = random_psd(rng, 2);
  Mat j = random_skew_hermitian(rng, 2);
  Mat a0 = random_psd(rng, 2) + 0.1 * Mat::Identity(2, 2);
  HyperVerdict hv = congruence_halfplane(a2, r, j, Mat::Identity(2, 2), a0);
  CHECK(hv.status == HyperStatus::CertifiedHyperstable);
}

TEST_CASE("PSD coefficient families: sector and left half-plane localization") {
  RngEngine rng(68);
  for (int d = 2; d <= 4; ++d) {
    std::vector<Mat> cs;
    for (int j = 0; j <= d; ++j) cs.push_back(random_psd(rng, 2));
    cs.back() += 0.5 * Mat::Identity(2, 2);
    HyperVerdict hv = psd_coefficient_sector(cs);
    CHECK(hv.status == HyperStatus::StableOnly);
    REQUIRE(hv.region.has_value());
    CHECK(hv.region->kind == RegionKind::Sector);
    // Cross-check the sector claim on the eigenvalues directly.
    Eigenvalues ev = eigenvalues(MatrixPolynomial(cs));
    for (cplx mu : ev.finite) {
      if (std::abs(mu) <= 1e-8) continue;
      CHECK(std::abs(principal_arg(mu)) >= pi / d - 1e-8);
    }
  }

  Mat a2 = random_psd(rng, 2), a1 = random_psd(rng, 2), a0 = random_psd(rng, 2);
  a2 += 0.5 * Mat::Identity(2, 2);
  HyperVerdict lh = psd_quadratic_left_halfplane(a2, a1, a0);
  CHECK(lh.status == HyperStatus::StableOnly);
  Eigenvalues ev = eigenvalues(MatrixPolynomial({a0, a1, a2}));
  for (cplx mu : ev.finite) CHECK(mu.real() <= 1e-8);
}

TEST_CASE("PSD palindromic cubic is certified on the narrow sector") {
  RngEngine rng(69);
  Mat r0 = random_psd(rng, 2) + 0.2 * Mat::Identity(2, 2);
  Mat r2 = random_psd(rng, 2);
  Mat r1 = random_psd(rng, 2);
  HyperVerdict hv = psd_palindromic_cubic(r0, r2, r1);
  CHECK(hv.status == HyperStatus::CertifiedHyperstable);
  REQUIRE(hv.region.has_value());
  CHECK(hv.region->kind == RegionKind::Sector);
}

TEST_CASE("pencil route for the shifted-cubic family") {
  Mat r(2, 2);
  r << 2.0, 1.0, 1.0, 2.0;
  HyperVerdict ok = mgt_pencil_route(2.0, 3.0, 1.0, r);
  REQUIRE(ok.status == HyperStatus::CertifiedHyperstable);
  CHECK(*ok.method == CertMethod::PencilForm);
  REQUIRE(ok.region.has_value());
  CHECK(ok.region->kind == RegionKind::HalfPlane);

  CHECK_THROWS_AS(mgt_pencil_route(0.5, 3.0, 1.0, r), HypothesisViolated);
  CHECK_THROWS_AS(mgt_pencil_route(2.0, 1.0, 3.0, r), HypothesisViolated);
  CHECK_THROWS_AS(mgt_pencil_route(2.0, 3.0, 1.0, -r), HypothesisViolated);

  // The packaged generator agrees with the route's conclusion.
  fixtures::MgtInstance inst = fixtures::mgt(2.0, 3.0, 1.0);
  HyperVerdict engine = check_hyperstable(inst.p, Region::right_half_plane());
  CHECK(engine.status == HyperStatus::CertifiedHyperstable);
}

TEST_CASE("skew-augmented cubic sector family returns a sector verdict") {
  RngEngine rng(70);
  Mat r3 = random_psd(rng, 2) + 0.5 * Mat::Identity(2, 2);
  Mat r2 = random_psd(rng, 2);
  Mat r1 = random_psd(rng, 2);
  Mat a0 = random_hermitian(rng, 2);
  Mat g = cplx(0, 1) * random_psd(rng, 2);  // -iG = PSD
  HyperVerdict hv = skew_augmented_cubic_sector(r3, r2, r1, a0, g);
  CHECK(hv.region.has_value());
  CHECK(evidence_mentions(hv, "bivariate"));
}

TEST_CASE("degree-raising composition from the half-plane family") {
  RngEngine rng(71);
  Mat r2 = random_psd(rng, 2) + 0.5 * Mat::Identity(2, 2);
  Mat r1 = random_psd(rng, 2);
  Mat r0 = random_psd(rng, 2) + 0.1 * Mat::Identity(2, 2);
  Mat j = random_skew_hermitian(rng, 2);
  HyperVerdict hv = polarized_cubic_sector(r2, r1, r0, j);
  REQUIRE(hv.status == HyperStatus::CertifiedHyperstable);
  REQUIRE(hv.region.has_value());
  CHECK(hv.region->kind == RegionKind::Sector);
  // Conclusion check: Q(lambda) = lambda^3 R2 + (lambda^2+lambda)(R1+J) + R0
  // has no eigenvalue in the claimed sector.
  MatrixPolynomial q({r0, r1 + j, r1 + j, r2});
  Eigenvalues ev = eigenvalues(q);
  for (cplx mu : ev.finite) CHECK_FALSE(hv.region->contains(mu, 1e-8));
}

TEST_CASE("derivative transfer: happy path and the convexity gate") {
  // 1x1 polynomial with its only root inside the unit disc, checked against
  // the closed disc exterior (whose complement, the open disc, is convex).
  Mat c0(1, 1), c1(1, 1);
  c0(0, 0) = -0.5;
  c1(0, 0) = 1.0;
  MatrixPolynomial p({c0, c1});
  Region ext = Region::disc_exterior(cplx(0, 0), 1.0, true);
  GaussLucasReport rep = gauss_lucas_transfer(p, ext);
  CHECK(rep.base.status == HyperStatus::CertifiedHyperstable);
  CHECK(rep.transfer_failures == 0);

  // Non-convex complement: the disc's complement is not convex.
  CHECK_THROWS_AS(gauss_lucas_transfer(p, closed_disc()),
                  PreconditionViolated);
}

TEST_CASE("falsified implies not range-disjoint on the cross-checked corpus") {
  // Consistency of the implication chain on two known polynomials: a
  // certificate and a falsification can never coexist with the same region.
  HyperVerdict exa = check_hyperstable(fixtures::exa(), closed_disc());
  CHECK(exa.status == HyperStatus::Falsified);
  Mat i2 = Mat::Identity(2, 2);
  HyperVerdict good = check_hyperstable(MatrixPolynomial({-2.0 * i2, i2}),
                                        closed_disc());
  CHECK(good.status == HyperStatus::CertifiedHyperstable);
}
