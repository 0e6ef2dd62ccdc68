// Deterministic constructors for the worked-example corpus.
#include "polystab/fixtures.hpp"

#include "polystab/rng.hpp"

namespace polystab::fixtures {
namespace {

ComplexPolynomial mono(cplx c, int k) { return ComplexPolynomial::monomial(c, k); }

}  // namespace

MatrixPolynomial exa() {
  std::vector<std::vector<ComplexPolynomial>> e(2, std::vector<ComplexPolynomial>(2));
  e[0][0] = ComplexPolynomial::constant(1.0);
  e[0][1] = mono(1.0, 1);
  e[1][0] = mono(1.0, 1);
  e[1][1] = ComplexPolynomial({1.0, 0.0, 1.0});  // lambda^2 + 1
  return MatrixPolynomial::from_entries(e);
}

MatrixPolynomial sing() {
  std::vector<std::vector<ComplexPolynomial>> e(2, std::vector<ComplexPolynomial>(2));
  e[0][0] = mono(1.0, 2);
  e[0][1] = mono(1.0, 1);
  e[1][0] = mono(1.0, 1);
  e[1][1] = ComplexPolynomial::constant(1.0);
  return MatrixPolynomial::from_entries(e);
}

MatrixPolynomial nonGL() {
  // q = lambda^2, p = lambda^3 - 4 lambda, top-left = lambda p + q.
  std::vector<std::vector<ComplexPolynomial>> e(2, std::vector<ComplexPolynomial>(2));
  e[0][0] = ComplexPolynomial({0.0, 0.0, -3.0, 0.0, 1.0});  // lambda^4 - 3 lambda^2
  e[0][1] = ComplexPolynomial({0.0, -4.0, 0.0, 1.0});       // lambda^3 - 4 lambda
  e[1][0] = mono(1.0, 1);
  e[1][1] = ComplexPolynomial::constant(1.0);
  return MatrixPolynomial::from_entries(e);
}

MatrixPolynomial hyper_nsinf(double eps) {
  if (!(eps > 0.0))
    throw SchemaError("hyper_nsinf needs eps > 0 (eps = 0 is the nonGL fixture)");
  std::vector<std::vector<ComplexPolynomial>> e(2, std::vector<ComplexPolynomial>(2));
  e[0][0] = ComplexPolynomial({0.0, 0.0, -3.0, 0.0, 1.0});
  e[0][1] = ComplexPolynomial({0.0, -4.0, 0.0, 1.0});
  e[1][0] = mono(1.0, 1);
  e[1][1] = ComplexPolynomial({1.0, 0.0, 0.0, 0.0, eps});  // 1 + eps lambda^4
  return MatrixPolynomial::from_entries(e);
}

FactoredPolynomial ones(int n, int d) { return ones_fixture(n, d); }

CmvFixture cmv(int n, int k) { return cmv_fixture(n, k); }

CompCase comp(int which) {
  CompCase c;
  if (which == 1 || which == 2) {
    // -(lambda - 1)^3 = -lambda^3 + 3 lambda^2 - 3 lambda + 1
    c.p = ComplexPolynomial({1.0, -3.0, 3.0, -1.0});
  } else if (which == 3) {
    // (lambda - 1)^2 (lambda + 1) = lambda^3 - lambda^2 - lambda + 1
    c.p = ComplexPolynomial({1.0, -1.0, -1.0, 1.0});
  } else {
    throw SchemaError("comp case must be 1, 2 or 3");
  }
  c.a = Mat(2, 2);
  if (which == 1)
    c.a << 1, 1, 1, 1;
  else if (which == 2)
    c.a << -1, 1, 1, -1;
  else
    c.a << -1, 0, 0, -1;
  return c;
}

OrbitWitness orbits(int d) {
  if (d < 2) throw SchemaError("orbits fixture needs d >= 2");
  GaussianRational one(1, 0);
  ExactPolynomial s1 = ExactPolynomial::constant(one);
  const ExactPolynomial lm2 =
      ExactPolynomial::monomial(one, 1) -
      ExactPolynomial::constant(GaussianRational(2, 0));
  for (int k = 0; k < d - 2; ++k) s1 = s1 * lm2;
  ExactPolyMatrix p(2, 2);
  p.at(0, 0) = s1;
  p.at(1, 1) = ExactPolynomial::constant(one);
  return orbit_witness(smith_form(p), d);
}

MultiAffineSymmetricMP nonstab() { return polarize(exa(), 2); }

HalfPlane3x3 halfplane3x3() {
  HalfPlane3x3 f;
  f.r0 = Mat(3, 3);
  f.r0 << 1, 1, 0, 1, 2, 1, 0, 1, 1;
  f.r1 = Mat::Ones(3, 3);
  f.r2 = Mat(3, 3);
  f.r2 << 2, -1, 0, -1, 2, -1, 0, -1, 2;
  f.j = Mat(3, 3);
  f.j << 0, 1, 2, -1, 0, 1, -2, -1, 0;
  return f;
}

MatrixPolynomial cube(std::uint64_t seed) {
  RngEngine rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const int n = 1 + static_cast<int>(rng() % 3);
  const int d = 2 + static_cast<int>(rng() % 3);
  std::vector<Mat> coeffs;
  coeffs.reserve(static_cast<std::size_t>(d) + 1);
  for (int j = 0; j <= d; ++j) coeffs.push_back(random_psd(rng, n));
  // Keep the leading coefficient uniformly positive definite so the finite
  // eigenvalues stay at a moderate scale (the sector claim is unaffected).
  coeffs.back() += 0.5 * Mat::Identity(n, n);
  return MatrixPolynomial(std::move(coeffs));
}

MatrixPolynomial quad(std::uint64_t seed) {
  RngEngine rng(seed ^ 0xbf58476d1ce4e5b9ULL);
  const int n = 1 + static_cast<int>(rng() % 3);
  Mat a0 = random_psd(rng, n);
  Mat a1 = random_psd(rng, n) + random_skew_hermitian(rng, n);
  // A2 positive definite (not merely PSD) keeps all eigenvalues finite and
  // moderately sized; the half-plane hypothesis only needs PSD.
  Mat a2 = random_psd(rng, n) + 0.5 * Mat::Identity(n, n);
  return MatrixPolynomial({std::move(a0), std::move(a1), std::move(a2)});
}

MgtInstance mgt(double a, double b, double c) {
  MgtInstance m;
  m.a = a;
  m.b = b;
  m.c = c;
  m.r = Mat(2, 2);
  m.r << 2, 1, 1, 2;
  Mat id = Mat::Identity(2, 2);
  m.p = MatrixPolynomial({c * m.r, b * m.r, a * id, id});
  return m;
}

}  // namespace polystab::fixtures
