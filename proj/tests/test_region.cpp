#include <doctest.h>

#include <cmath>

#include "polystab/json_io.hpp"
#include "polystab/region.hpp"
#include "polystab/rng.hpp"

using namespace polystab;

TEST_CASE("disc membership honors the closed flag") {
  Region open = Region::disc(cplx(0, 0), 1.0, false);
  Region closed = Region::disc(cplx(0, 0), 1.0, true);

  CHECK(open.contains(cplx(0, 0)));
  CHECK(open.contains(cplx(0.999, 0)));
  CHECK_FALSE(open.contains(cplx(1, 0)));
  CHECK_FALSE(open.contains(cplx(1.001, 0)));
  CHECK(closed.contains(cplx(1, 0)));
  CHECK(closed.contains(cplx(0, -1)));
  CHECK_FALSE(closed.contains(cplx(0, -1.0000001)));

  Region shifted = Region::disc(cplx(2, -1), 0.5, false);
  CHECK(shifted.contains(cplx(2.2, -1)));
  CHECK_FALSE(shifted.contains(cplx(2.6, -1)));
}

TEST_CASE("disc exterior membership and the degenerate radius-zero cases") {
  Region ext = Region::disc_exterior(cplx(0, 0), 1.0, false);
  CHECK(ext.contains(cplx(2, 0)));
  CHECK_FALSE(ext.contains(cplx(1, 0)));
  CHECK_FALSE(ext.contains(cplx(0.5, 0)));
  CHECK(Region::disc_exterior(cplx(0, 0), 1.0, true).contains(cplx(1, 0)));

  // Radius 0: open = punctured plane, closed = all of C.
  Region punctured = Region::disc_exterior(cplx(0, 0), 0.0, false);
  CHECK(punctured.contains(cplx(1e-12, 0)));
  CHECK_FALSE(punctured.contains(cplx(0, 0)));
  CHECK(Region::disc_exterior(cplx(0, 0), 0.0, true).contains(cplx(0, 0)));
}

TEST_CASE("half-plane membership: im(lambda e^{i phi}) > offset") {
  Region upper = Region::upper_half_plane();
  CHECK(upper.contains(cplx(0, 1)));
  CHECK(upper.contains(cplx(-3, 0.001)));
  CHECK_FALSE(upper.contains(cplx(0, 0)));
  CHECK_FALSE(upper.contains(cplx(5, -0.1)));

  Region right = Region::right_half_plane();
  CHECK(right.contains(cplx(0.1, 7)));
  CHECK_FALSE(right.contains(cplx(0, 1)));
  CHECK(Region::half_plane(pi / 2, 0.0, true).contains(cplx(0, 1)));

  Region left = Region::half_plane(-pi / 2);
  CHECK(left.contains(cplx(-0.1, 3)));
  CHECK_FALSE(left.contains(cplx(0.1, 3)));

  // Offset shifts the boundary line.
  Region above2 = Region::half_plane(0.0, 2.0);
  CHECK(above2.contains(cplx(0, 2.5)));
  CHECK_FALSE(above2.contains(cplx(0, 1.5)));
}

TEST_CASE("sector membership, zero handling and the angular margin") {
  Region s = Region::sector(-pi / 4, pi / 4, false, false);
  CHECK(s.contains(cplx(1, 0)));
  CHECK(s.contains(cplx(1, 0.9)));
  CHECK_FALSE(s.contains(cplx(1, 1.1)));
  CHECK_FALSE(s.contains(cplx(-1, 0)));
  CHECK_FALSE(s.contains(cplx(0, 0)));
  CHECK(Region::sector(-pi / 4, pi / 4, false, true).contains(cplx(0, 0)));

  // Closed sector includes the boundary rays.
  CHECK_FALSE(s.contains(std::polar(1.0, pi / 4)));
  CHECK(Region::sector(-pi / 4, pi / 4, true, false)
            .contains(std::polar(1.0, pi / 4)));

  RegionMargin m = s.margin(cplx(0, 0));
  CHECK(m.degenerate);
}

TEST_CASE("margin sign convention: positive inside, negative outside") {
  RngEngine rng(42);
  std::vector<Region> regions = {
      Region::disc(cplx(1, -1), 2.0, false),
      Region::disc_exterior(cplx(0, 0), 1.5, true),
      Region::half_plane(0.7, 0.0, false),
      Region::sector(-1.0, 0.5, false, false),
  };
  for (const Region& d : regions) {
    for (int t = 0; t < 200; ++t) {
      cplx z = random_complex(rng, 4.0);
      RegionMargin m = d.margin(z);
      if (m.degenerate) continue;
      if (m.value > 1e-9) CHECK(d.contains(z));
      if (m.value < -1e-9) CHECK_FALSE(d.contains(z));
    }
    // The designated interior point is strictly inside.
    CHECK(d.contains(d.interior_point()));
    CHECK(d.margin(d.interior_point()).value > 0);
  }
}

TEST_CASE("disc margin is the Euclidean distance to the circle") {
  Region d = Region::disc(cplx(0, 0), 2.0, false);
  CHECK(d.margin(cplx(0.5, 0)).value == doctest::Approx(1.5));
  CHECK(d.margin(cplx(3, 0)).value == doctest::Approx(-1.0));
  Region e = Region::disc_exterior(cplx(0, 0), 2.0, false);
  CHECK(e.margin(cplx(3, 0)).value == doctest::Approx(1.0));
  CHECK(e.margin(cplx(0.5, 0)).value == doctest::Approx(-1.5));
}

TEST_CASE("boundary sensitivity widens membership by tau_bnd") {
  Region open = Region::disc(cplx(0, 0), 1.0, false);
  Region closed = Region::disc(cplx(0, 0), 1.0, true);
  cplx near_edge(1.0 + 1e-12, 0.0);
  CHECK(open.boundary_sensitive(near_edge, 1e-9));
  CHECK_FALSE(open.boundary_sensitive(near_edge, 1e-14));
  // Within the widened band the closed flag decides.
  CHECK_FALSE(open.contains(near_edge, 1e-9));
  CHECK(closed.contains(near_edge, 1e-9));
}

TEST_CASE("complement convexity gate") {
  CHECK_FALSE(Region::disc(cplx(0, 0), 1.0, false).complement_is_convex());
  CHECK(Region::disc_exterior(cplx(0, 0), 1.0, true).complement_is_convex());
  CHECK(Region::upper_half_plane().complement_is_convex());
  CHECK_FALSE(
      Region::sector(-pi / 4, pi / 4, false, false).complement_is_convex());
}

TEST_CASE("affine pullback: z in pullback iff alpha z + beta in original") {
  RngEngine rng(7);
  cplx alpha(1.5, -0.25), beta(0.5, 2.0);
  std::vector<Region> regions = {
      Region::disc(cplx(1, 1), 2.0, true),
      Region::disc_exterior(cplx(-1, 0), 1.0, false),
      Region::half_plane(0.3, 0.2, false),
  };
  for (const Region& d : regions) {
    Region back = d.affine_pullback(alpha, beta);
    for (int t = 0; t < 300; ++t) {
      cplx z = random_complex(rng, 3.0);
      CHECK(back.contains(z) == d.contains(alpha * z + beta));
    }
  }
  // Sectors only admit beta = 0 with branch-preserving rotations.
  Region s = Region::sector(-0.5, 0.5, false, false);
  Region rot = s.affine_pullback(std::polar(2.0, 0.25), cplx(0, 0));
  for (int t = 0; t < 300; ++t) {
    cplx z = random_complex(rng, 3.0);
    CHECK(rot.contains(z) == s.contains(std::polar(2.0, 0.25) * z));
  }
  CHECK_THROWS_AS(s.affine_pullback(cplx(1, 0), cplx(1, 0)), Unrepresentable);
}

TEST_CASE("random points land strictly inside their region") {
  RngEngine rng(99);
  std::vector<Region> regions = {
      Region::disc(cplx(0, 0), 1.0, false),
      Region::disc_exterior(cplx(2, 0), 1.0, false),
      Region::half_plane(1.1, 0.0, false),
      Region::sector(0.1, 2.0, false, false),
  };
  for (const Region& d : regions)
    for (int t = 0; t < 500; ++t) CHECK(d.contains(random_point(d, rng)));
}

TEST_CASE("region JSON round trip preserves every parameter") {
  std::vector<Region> regions = {
      Region::disc(cplx(1, -2), 3.0, true),
      Region::disc_exterior(cplx(0, 0.5), 0.25, false),
      Region::half_plane(0.75, -1.0, true),
      Region::sector(-0.5, 1.25, false, true),
  };
  for (const Region& d : regions) {
    Region back = io::region_from_json(io::to_json(d), "");
    CHECK(back.kind == d.kind);
    CHECK(back.center == d.center);
    CHECK(back.radius == d.radius);
    CHECK(back.phi == d.phi);
    CHECK(back.offset == d.offset);
    CHECK(back.arg_lo == d.arg_lo);
    CHECK(back.arg_hi == d.arg_hi);
    CHECK(back.closed == d.closed);
    CHECK(back.contains_zero == d.contains_zero);
  }
}

TEST_CASE("region JSON rejects malformed input with a pointered message") {
  CHECK_THROWS_AS(io::region_from_json(io::Json{{"kind", "ball"}}, "/region"),
                  SchemaError);
  try {
    io::region_from_json(io::Json{{"radius", 1.0}}, "/region");
    FAIL("missing kind must throw");
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("/region") != std::string::npos);
  }
}
