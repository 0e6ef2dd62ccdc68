// Stability regions: the four canonical subsets of the complex plane the
// theory quantifies over (discs, disc exteriors, half-planes H_phi and
// sectors), with exact open/closed semantics and a signed margin function
// used as a continuous surrogate by the optimizers.
#pragma once

#include <optional>
#include <string>

#include "polystab/common.hpp"
#include "polystab/rng.hpp"

namespace polystab {

enum class RegionKind { Disc, DiscExterior, HalfPlane, Sector };

/// Signed distance-like membership surrogate. Positive strictly inside,
/// negative strictly outside, zero on the boundary. Units: Euclidean distance
/// to the circle for discs/exteriors, im(lambda e^{i phi}) - offset for
/// half-planes, angular slack in radians for sectors.
struct RegionMargin {
  double value = 0.0;
  bool degenerate = false;  ///< set for the sector margin at lambda = 0
};

class Region {
 public:
  RegionKind kind = RegionKind::Disc;
  cplx center{0.0, 0.0};  // Disc / DiscExterior
  double radius = 1.0;    // Disc: > 0. DiscExterior: >= 0 (0 gives the
                          // punctured plane when open, all of C when closed).
  double phi = 0.0;       // HalfPlane angle: {im(lambda e^{i phi}) > offset}
  double offset = 0.0;    // HalfPlane offset; the theory uses offset = 0
  double arg_lo = 0.0;    // Sector: -pi < arg_lo < arg_hi <= pi
  double arg_hi = 0.0;
  bool closed = false;
  bool contains_zero = false;  // Sector only: explicit membership of 0

  static Region disc(cplx center, double radius, bool closed);
  static Region disc_exterior(cplx center, double radius, bool closed);
  static Region half_plane(double phi, double offset = 0.0, bool closed = false);
  static Region sector(double arg_lo, double arg_hi, bool closed = false,
                       bool contains_zero = false);

  /// H_0, the open upper half-plane.
  static Region upper_half_plane() { return half_plane(0.0); }
  /// H_{pi/2}, the open right half-plane.
  static Region right_half_plane() { return half_plane(pi / 2); }

  RegionMargin margin(cplx lambda) const;

  /// Exact membership honoring the closed flag. tau_bnd > 0 widens the
  /// boundary: points with |margin| <= tau_bnd are classified by the closed
  /// flag (root-finding noise must not flip open/closed verdicts silently).
  bool contains(cplx lambda, double tau_bnd = 0.0) const;

  /// True when |margin(lambda)| <= tau_bnd, i.e. the verdict at lambda
  /// depended on the closed flag rather than on a clear sign.
  bool boundary_sensitive(cplx lambda, double tau_bnd) const;

  /// Gauss-Lucas gate: is the complement of this region convex?
  bool complement_is_convex() const;

  /// Region R' with lambda in R'  <=>  alpha*lambda + beta in *this.
  /// Sectors admit only beta = 0 and rotations that keep the arc inside the
  /// principal branch; anything else throws Unrepresentable.
  Region affine_pullback(cplx alpha, cplx beta) const;

  /// A deterministic strictly interior point (used as a sample witness).
  cplx interior_point() const;

  bool is_bounded() const { return kind == RegionKind::Disc; }

  std::string describe() const;
};

/// A random point of the region, strictly interior. Bounded regions sample
/// close to uniformly; unbounded ones draw the radial part from a heavy-ish
/// exponential law so optimizer restarts also probe far from the boundary.
cplx random_point(const Region& d, RngEngine& rng);

/// Closest-point-style projection of lambda into the closure of d (exact for
/// discs/exteriors and half-planes; for sectors the angle is clamped at fixed
/// modulus). Used to pull optimizer iterates back into the search domain.
cplx project_into(const Region& d, cplx lambda);

}  // namespace polystab
