#include <doctest.h>

#include <cmath>
#include <string>

#include "polystab/exact.hpp"
#include "polystab/fixtures.hpp"
#include "polystab/json_io.hpp"
#include "polystab/rng.hpp"
#include "polystab/smith.hpp"

using namespace polystab;

namespace {

GaussianRational gr(long re, long im = 0) { return GaussianRational(re, im); }

ExactPolynomial lambda_poly() {
  return ExactPolynomial::monomial(gr(1), 1);
}

/// All the Smith invariants a result must satisfy against its input.
void check_smith_invariants(const ExactPolyMatrix& m, const SmithResult& sr) {
  CHECK(is_unimodular(sr.U));
  CHECK(is_unimodular(sr.V));
  CHECK(sr.U * m * sr.V == sr.S);
  // Diagonal shape with the invariant factors in the leading positions.
  int r = sr.rank;
  REQUIRE(static_cast<int>(sr.invariant_factors.size()) == r);
  for (int i = 0; i < sr.S.rows(); ++i)
    for (int j = 0; j < sr.S.cols(); ++j) {
      if (i == j && i < r) {
        CHECK(sr.S.at(i, j) == sr.invariant_factors[static_cast<size_t>(i)]);
        CHECK(sr.S.at(i, j).is_monic());
      } else {
        CHECK(sr.S.at(i, j).is_zero());
      }
    }
  // Divisibility chain s_{j+1} | s_j.
  for (int i = 0; i + 1 < r; ++i) {
    auto [q, rem] = divrem(sr.invariant_factors[static_cast<size_t>(i)],
                           sr.invariant_factors[static_cast<size_t>(i + 1)]);
    CHECK(rem.is_zero());
  }
}

}  // namespace

TEST_CASE("rational parsing and formatting round trip") {
  CHECK(to_string(parse_rational("3/6")) == "1/2");
  CHECK(to_string(parse_rational("-4/2")) == "-2");
  CHECK(to_string(parse_rational("7")) == "7");
  CHECK_THROWS_AS(parse_rational("1/0"), SchemaError);
  CHECK_THROWS_AS(parse_rational("abc"), SchemaError);
}

TEST_CASE("Gaussian rational field operations are exact") {
  GaussianRational a(Rational(1), Rational(2));
  GaussianRational b(Rational(3), Rational(-1));
  CHECK((a / b) * b == a);
  CHECK(a * a.conj() == GaussianRational(a.norm2(), Rational(0)));
  CHECK_THROWS_AS(a / GaussianRational(0), HypothesisViolated);
}

TEST_CASE("exact polynomial division and gcd oracles") {
  // a = (x - 1)(x - 2), b = (x - 1)(x - 3): gcd = x - 1 (monic).
  ExactPolynomial x = lambda_poly();
  ExactPolynomial one = ExactPolynomial::constant(gr(1));
  ExactPolynomial a = (x - one) * (x - ExactPolynomial::constant(gr(2)));
  ExactPolynomial b = (x - one) * (x - ExactPolynomial::constant(gr(3)));
  ExactPolynomial g = poly_gcd(a, b);
  CHECK(g == x - one);

  auto [q, r] = divrem(a, b);
  CHECK(q * b + r == a);
  CHECK(r.degree() < b.degree());
  CHECK_THROWS_AS(divrem(a, ExactPolynomial()), HypothesisViolated);
  CHECK(poly_gcd(ExactPolynomial(), ExactPolynomial()).is_zero());
}

TEST_CASE("exactification accepts decimal/dyadic literals and rejects noise") {
  REQUIRE(exactify(0.1).has_value());
  CHECK(to_string(*exactify(0.1)) == "1/10");
  CHECK(to_string(*exactify(0.375)) == "3/8");
  CHECK(to_string(*exactify(-2.5)) == "-5/2");
  CHECK(exactify(1e20).has_value());
  CHECK_FALSE(exactify(1.0 / 3.0).has_value());
  CHECK_FALSE(exactify(3.14159265358979).has_value());
}

TEST_CASE("worked example: diag(lambda, 1) is its own Smith form") {
  ExactPolyMatrix m(2, 2);
  m.at(0, 0) = lambda_poly();
  m.at(1, 1) = ExactPolynomial::constant(gr(1));
  SmithResult sr = smith_form(m);
  CHECK(sr.rank == 2);
  REQUIRE(sr.invariant_factors.size() == 2);
  CHECK(sr.invariant_factors[0] == lambda_poly());
  CHECK(sr.invariant_factors[1] == ExactPolynomial::constant(gr(1)));
  check_smith_invariants(m, sr);
}

TEST_CASE("worked example: a unimodular matrix reduces to the identity") {
  ExactPolyMatrix m(2, 2);
  m.at(0, 0) = ExactPolynomial::constant(gr(1));
  m.at(0, 1) = ExactPolynomial::monomial(gr(1), 2);  // lambda^2
  m.at(1, 1) = ExactPolynomial::constant(gr(1));
  SmithResult sr = smith_form(m);
  CHECK(sr.rank == 2);
  CHECK(sr.S == ExactPolyMatrix::identity(2));
  check_smith_invariants(m, sr);
}

TEST_CASE("worked example: the singular fixture drops to rank 1") {
  ExactPolyMatrix m = io::exactify_matrix_poly(fixtures::sing());
  SmithResult sr = smith_form(m);
  CHECK(sr.rank == 1);
  REQUIRE(sr.invariant_factors.size() == 1);
  CHECK(sr.invariant_factors[0] == ExactPolynomial::constant(gr(1)));
  check_smith_invariants(m, sr);
}

TEST_CASE("random matrices: transform identity, divisibility, minor oracle") {
  RngEngine rng(51);
  auto random_exact_poly = [&](int maxdeg) {
    std::vector<GaussianRational> cs;
    int d = static_cast<int>(rng() % static_cast<std::uint64_t>(maxdeg + 1));
    for (int j = 0; j <= d; ++j) {
      long re = static_cast<long>(rng() % 7) - 3;
      long im = static_cast<long>(rng() % 7) - 3;
      if (rng() % 2 == 0) im = 0;
      long den = 1 + static_cast<long>(rng() % 2);
      cs.emplace_back(Rational(re, den), Rational(im, den));
    }
    return ExactPolynomial(std::move(cs));
  };
  for (int t = 0; t < 40; ++t) {
    int rows = 2 + static_cast<int>(rng() % 2);
    int cols = 2 + static_cast<int>(rng() % 2);
    ExactPolyMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        if (rng() % 10 < 7) m.at(i, j) = random_exact_poly(2);
    SmithResult sr = smith_form(m);
    check_smith_invariants(m, sr);
    // The independent reconstruction from gcds of k x k minors must agree.
    std::vector<ExactPolynomial> oracle = invariant_factors_via_minors(m);
    REQUIRE(oracle.size() == sr.invariant_factors.size());
    CHECK(oracle == sr.invariant_factors);
  }
}

TEST_CASE("unimodularity is a constant nonzero determinant") {
  CHECK(is_unimodular(ExactPolyMatrix::identity(3)));
  ExactPolyMatrix m(2, 2);
  m.at(0, 0) = ExactPolynomial::constant(gr(2));
  m.at(0, 1) = lambda_poly();
  m.at(1, 1) = ExactPolynomial::constant(gr(1, 1));
  CHECK(is_unimodular(m));  // det = 2(1+i), constant nonzero
  m.at(1, 1) = lambda_poly();
  CHECK_FALSE(is_unimodular(m));  // det = 2 lambda, degree 1
  ExactPolyMatrix zero(2, 2);
  CHECK_FALSE(is_unimodular(zero));
}

TEST_CASE("exact determinant agrees with the numeric interpolation route") {
  RngEngine rng(52);
  for (int t = 0; t < 15; ++t) {
    ExactPolyMatrix m(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        long re = static_cast<long>(rng() % 5) - 2;
        long im = static_cast<long>(rng() % 5) - 2;
        int k = static_cast<int>(rng() % 3);
        m.at(i, j) = ExactPolynomial::monomial(GaussianRational(re, im), k);
      }
    ComplexPolynomial exact_det = m.determinant().to_numeric();
    ComplexPolynomial numeric_det = determinant(m.to_numeric());
    cplx z = random_complex(rng, 1.5);
    cplx a = exact_det.evaluate(z), b = numeric_det.evaluate(z);
    CHECK(std::abs(a - b) < 1e-8 * (1.0 + std::abs(a)));
  }
}

TEST_CASE("orbit witness: construction, unimodularity and the designated direction") {
  SmithResult sr = smith_form(ExactPolyMatrix::identity(2));
  OrbitWitness ow = orbit_witness(sr, 2);
  CHECK(ow.d == 2);
  CHECK(ow.E == ExactPolyMatrix::identity(2));
  CHECK(is_unimodular(ow.F));
  CHECK(ow.Q == ow.E * sr.S * ow.F);
  REQUIRE(ow.x.size() == 2);
  CHECK(std::abs(ow.x(1) - cplx(1.0, 0.0)) < 1e-15);

  // The numeric image coincides with the packaged example polynomial.
  MatrixPolynomial qn = ow.Q.to_numeric();
  MatrixPolynomial exa = fixtures::exa();
  REQUIRE(qn.degree() == exa.degree());
  for (int j = 0; j <= qn.degree(); ++j)
    CHECK((qn.coeff(j) - exa.coeff(j)).norm() < 1e-15);
}

TEST_CASE("orbit witness rejects regions and forms outside its hypothesis") {
  SmithResult sr = smith_form(ExactPolyMatrix::identity(2));
  CHECK_THROWS_AS(orbit_witness(sr, 2, Region::disc(cplx(0, 0), 2.0, true)),
                  PreconditionViolated);
  CHECK_THROWS_AS(orbit_witness(sr, 5), PreconditionViolated);  // wrong degree

  // An invariant factor with a zero inside the disc disqualifies the form.
  ExactPolyMatrix m(2, 2);
  m.at(0, 0) = lambda_poly();  // zero at 0, inside the closed unit disc
  m.at(1, 1) = ExactPolynomial::constant(gr(1));
  CHECK_THROWS_AS(orbit_witness(smith_form(m), 3), PreconditionViolated);
}

TEST_CASE("exact JSON round trips") {
  ExactPolyMatrix m(2, 2);
  m.at(0, 0) = ExactPolynomial(
      {GaussianRational(Rational(1, 2), Rational(-3)), gr(0, 1)});
  m.at(1, 0) = lambda_poly();
  // Emit as input shape and re-parse.
  io::Json input{{"entries", io::Json::array()}};
  for (int i = 0; i < 2; ++i) {
    io::Json row = io::Json::array();
    for (int c = 0; c < 2; ++c) {
      io::Json poly = io::Json::array();
      for (const auto& g : m.at(i, c).coeffs())
        poly.push_back(io::Json{{"re", to_string(g.re)}, {"im", to_string(g.im)}});
      row.push_back(poly);
    }
    input["entries"].push_back(row);
  }
  ExactPolyMatrix back = io::exact_matrix_from_json(input, "");
  CHECK(back == m);
}
