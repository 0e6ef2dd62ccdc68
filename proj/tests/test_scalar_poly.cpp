#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>

#include "polystab/region.hpp"
#include "polystab/rng.hpp"
#include "polystab/scalar_poly.hpp"

using namespace polystab;

namespace {

std::vector<cplx> sorted_by_re_im(std::vector<cplx> v) {
  std::sort(v.begin(), v.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return v;
}

}  // namespace

TEST_CASE("arithmetic identities on random polynomials") {
  RngEngine rng(1);
  for (int t = 0; t < 50; ++t) {
    std::vector<cplx> ca(4), cb(3);
    for (auto& c : ca) c = random_complex(rng);
    for (auto& c : cb) c = random_complex(rng);
    ComplexPolynomial a(ca), b(cb);
    cplx z = random_complex(rng, 2.0);
    CHECK(std::abs((a + b).evaluate(z) - (a.evaluate(z) + b.evaluate(z))) <
          1e-12);
    CHECK(std::abs((a - b).evaluate(z) - (a.evaluate(z) - b.evaluate(z))) <
          1e-12);
    CHECK(std::abs((a * b).evaluate(z) - a.evaluate(z) * b.evaluate(z)) <
          1e-10);
    auto [v, dv] = a.evaluate_with_derivative(z);
    CHECK(std::abs(v - a.evaluate(z)) < 1e-12);
    CHECK(std::abs(dv - a.derivative().evaluate(z)) < 1e-12);
  }
}

TEST_CASE("compose_affine and invert_rotate satisfy their definitions") {
  RngEngine rng(2);
  for (int t = 0; t < 30; ++t) {
    std::vector<cplx> cs(5);
    for (auto& c : cs) c = random_complex(rng);
    cs.back() += cplx(1.0, 0.0);  // keep the degree honest
    ComplexPolynomial p(cs);
    cplx alpha = random_complex(rng) + cplx(2.0, 0.0);
    cplx beta = random_complex(rng);
    cplx z = random_complex(rng, 2.0);
    CHECK(std::abs(p.compose_affine(alpha, beta).evaluate(z) -
                   p.evaluate(alpha * z + beta)) < 1e-9);

    double phi = 0.7;
    cplx w = random_complex(rng) + cplx(3.0, 0.0);  // away from 0
    cplx lhs = p.invert_rotate(phi).evaluate(w);
    cplx rhs = std::pow(w, p.degree()) *
               p.evaluate(-std::exp(cplx(0, -2 * phi)) / w);
    CHECK(std::abs(lhs - rhs) < 1e-8 * (1.0 + std::abs(rhs)));
  }
}

TEST_CASE("roots of lambda^2 + 1 are the two imaginary units") {
  RootSet rs = roots(ComplexPolynomial({cplx(1, 0), cplx(0, 0), cplx(1, 0)}));
  REQUIRE(rs.roots.size() == 2);
  auto r = sorted_by_re_im(rs.roots);
  CHECK(std::abs(r[0] - cplx(0, -1)) < 1e-12);
  CHECK(std::abs(r[1] - cplx(0, 1)) < 1e-12);
  CHECK(rs.vieta_sum_residual < 1e-10);
  CHECK(rs.vieta_prod_residual < 1e-10);
}

TEST_CASE("from_roots / roots round trip with backward-error certificates") {
  RngEngine rng(3);
  for (int t = 0; t < 40; ++t) {
    int d = 1 + static_cast<int>(rng() % 8);
    std::vector<cplx> planted(d);
    for (auto& z : planted) z = random_complex(rng, 2.0);
    ComplexPolynomial p = ComplexPolynomial::from_roots(planted);
    RootSet rs = roots(p);
    REQUIRE(static_cast<int>(rs.roots.size()) == d);
    // Backward errors certify each root independently of the planting.
    for (double be : rs.backward_errors) CHECK(be < 1e-8);
    // Each planted root is matched by some computed root (greedy pairing).
    std::vector<cplx> got = rs.roots;
    for (cplx z : planted) {
      auto it = std::min_element(got.begin(), got.end(), [z](cplx a, cplx b) {
        return std::abs(a - z) < std::abs(b - z);
      });
      REQUIRE(it != got.end());
      CHECK(std::abs(*it - z) < 1e-6);
      got.erase(it);
    }
  }
}

TEST_CASE("root finding rejects constants and the zero polynomial") {
  CHECK_THROWS_AS(roots(ComplexPolynomial::constant(cplx(2, 0))),
                  ConstantPolynomial);
  CHECK_THROWS_AS(roots(ComplexPolynomial()), ZeroPolynomial);
}

TEST_CASE("stability check agrees with direct root membership") {
  RngEngine rng(4);
  std::vector<Region> regions = {
      Region::disc(cplx(0, 0), 1.0, true),
      Region::upper_half_plane(),
      Region::disc_exterior(cplx(0, 0), 1.0, false),
  };
  for (int t = 0; t < 60; ++t) {
    int d = 1 + static_cast<int>(rng() % 6);
    std::vector<cplx> planted(d);
    for (auto& z : planted) z = random_complex(rng, 2.0);
    ComplexPolynomial p = ComplexPolynomial::from_roots(planted);
    for (const Region& reg : regions) {
      bool any_inside = false;
      bool near_boundary = false;
      for (cplx z : planted) {
        if (reg.contains(z)) any_inside = true;
        if (std::abs(reg.margin(z).value) < 1e-7) near_boundary = true;
      }
      if (near_boundary) continue;  // the oracle itself is ambiguous there
      StabilityCheck sc = stability_check(p, reg, 1e-9);
      CHECK(sc.stable == !any_inside);
      CHECK(is_stable(p, reg, 1e-9) == !any_inside);
    }
  }
}

TEST_CASE("constants are stable with respect to every region") {
  StabilityCheck sc = stability_check(ComplexPolynomial::constant(cplx(5, 1)),
                                      Region::disc(cplx(0, 0), 1.0, true), 1e-9);
  CHECK(sc.stable);
}

TEST_CASE("boundary roots flip with the closed flag and raise the flag") {
  ComplexPolynomial p({cplx(-1, 0), cplx(1, 0)});  // root at 1
  StabilityCheck open = stability_check(p, Region::disc(cplx(0, 0), 1, false), 1e-9);
  StabilityCheck closed = stability_check(p, Region::disc(cplx(0, 0), 1, true), 1e-9);
  CHECK(open.stable);
  CHECK_FALSE(closed.stable);
  CHECK(open.boundary_sensitive);
  CHECK(closed.boundary_sensitive);
}

TEST_CASE("palindromic quadratic oracle: stable iff b/a real with |b/a| >= 2") {
  CHECK(palindromic_quadratic_stable(cplx(1, 0), cplx(2, 0)));
  CHECK(palindromic_quadratic_stable(cplx(1, 0), cplx(-3.5, 0)));
  CHECK(palindromic_quadratic_stable(cplx(0, 2), cplx(0, 5)));  // ratio 2.5 real
  CHECK_FALSE(palindromic_quadratic_stable(cplx(1, 0), cplx(1.9, 0)));
  CHECK_FALSE(palindromic_quadratic_stable(cplx(1, 0), cplx(2, 0.3)));
  CHECK_FALSE(palindromic_quadratic_stable(cplx(1, 0), cplx(0, 0)));
  // Cross-check against the root locations themselves.
  RngEngine rng(5);
  Region h0 = Region::upper_half_plane();
  for (int t = 0; t < 200; ++t) {
    cplx a = random_complex(rng);
    cplx b = random_complex(rng, 3.0);
    if (std::abs(a) < 0.1) continue;
    ComplexPolynomial p({a, b, a});
    RootSet rs = roots(p);
    bool root_inside = false;
    for (cplx z : rs.roots)
      if (h0.contains(z) && h0.margin(z).value > 1e-8) root_inside = true;
    if (root_inside) CHECK_FALSE(palindromic_quadratic_stable(a, b));
  }
}

TEST_CASE("Gauss-Lucas holds for every polynomial (property sweep)") {
  RngEngine rng(6);
  for (int t = 0; t < 200; ++t) {
    int d = 2 + static_cast<int>(rng() % 7);
    std::vector<cplx> cs(static_cast<std::size_t>(d) + 1);
    for (auto& c : cs) c = random_complex(rng, 2.0);
    if (std::abs(cs.back()) < 0.2) cs.back() += cplx(0.5, 0.5);
    CHECK(gauss_lucas_check(ComplexPolynomial(cs)));
  }
  CHECK_THROWS_AS(gauss_lucas_check(ComplexPolynomial({cplx(1), cplx(1)})),
                  ConstantDerivative);
}

TEST_CASE("de Branges margin: closed form at one point, nonnegative in general") {
  // p = 1 + lambda (root -1, not in the open upper half-plane), at lambda = i:
  // exp(re(i) + |i|^2 (|1|^2 - 0) / 2) - |1 + i| = e^{1/2} - sqrt 2.
  ComplexPolynomial p({cplx(1, 0), cplx(1, 0)});
  double m = de_branges_margin(p, cplx(0, 1));
  CHECK(m == doctest::Approx(std::exp(0.5) - std::sqrt(2.0)).epsilon(1e-12));

  RngEngine rng(7);
  for (int t = 0; t < 300; ++t) {
    ComplexPolynomial q = random_h0_stable(rng, 6);
    cplx lam = random_in_disc(rng, cplx(0, 0), 2.0);
    CHECK(de_branges_margin(q, lam) >= -1e-12);
  }
}

TEST_CASE("stability-preserving transforms") {
  RngEngine rng(8);
  Region h0 = Region::upper_half_plane();
  for (int t = 0; t < 100; ++t) {
    ComplexPolynomial p = random_h0_stable(rng, 5);

    ComplexPolynomial scaled = transform(p, ScalarTransform::Scale, 2.0);
    cplx z = random_complex(rng, 2.0);
    CHECK(std::abs(scaled.evaluate(z) - p.evaluate(2.0 * z)) <
          1e-9 * (1 + std::abs(p.evaluate(2.0 * z))));
    CHECK(is_stable(scaled, h0, 1e-9));

    ComplexPolynomial inv = transform(p, ScalarTransform::InvertRotate, 0.0);
    CHECK(is_stable(inv, h0, 1e-9));

    if (p.degree() >= 1) {
      ComplexPolynomial dp = transform(p, ScalarTransform::Differentiate);
      CHECK(std::abs(dp.evaluate(z) - p.derivative().evaluate(z)) < 1e-12);
      if (dp.degree() >= 1) CHECK(is_stable(dp, h0, 1e-9));
    }
  }
}

TEST_CASE("random_h0_stable output really is upper-half-plane stable") {
  RngEngine rng(9);
  Region h0 = Region::upper_half_plane();
  for (int t = 0; t < 200; ++t) {
    ComplexPolynomial p = random_h0_stable(rng, 8);
    CHECK(std::abs(p.evaluate(cplx(0, 0)) - cplx(1, 0)) < 1e-12);
    CHECK(is_stable(p, h0, 1e-9));
  }
}
