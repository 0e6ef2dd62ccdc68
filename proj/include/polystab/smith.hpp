// Smith canonical form of exact polynomial matrices, invariant factors via
// the minor-GCD characterization (the independent oracle), unimodularity,
// and the orbit-witness construction that produces matrix polynomials whose
// entire equivalence orbit fails hyperstability on the closed unit disc.
#pragma once

#include <vector>

#include "polystab/exact.hpp"
#include "polystab/region.hpp"
#include "polystab/stability.hpp"

namespace polystab {

/// Result of the Smith reduction U * P * V = S with U, V unimodular and S
/// quasi-diagonal. Invariant factors are monic and ordered by decreasing
/// divisibility: s_{j+1} | s_j. U and V depend on pivot order and are not
/// canonical; S and the factors are.
struct SmithResult {
  ExactPolyMatrix U;  ///< row operations, det = nonzero constant
  ExactPolyMatrix V;  ///< column operations, det = nonzero constant
  ExactPolyMatrix S;  ///< diag(s_1, ..., s_r, 0, ..., 0) padded to P's shape
  std::vector<ExactPolynomial> invariant_factors;  ///< s_1, ..., s_r (monic)
  int rank = 0;
};

/// Smith form by classical elimination: move a nonzero entry of minimal
/// (degree, coefficient-height) to the pivot, clear its row and column by
/// exact division, restore divisibility with the add-row trick, recurse on
/// the trailing block, then normalize monic and reorder to decreasing
/// divisibility. Rectangular inputs are allowed. Dimensions are capped at 6
/// and entry degrees at 8 (SizeCapExceeded) because coefficient growth in
/// exact elimination is uncontrolled.
SmithResult smith_form(const ExactPolyMatrix& P);

/// Invariant factors from the determinantal characterization: p_j = monic
/// GCD of all j x j minors, r = largest j with p_j nonzero, and
/// s_j = p_{r-j+1} / p_{r-j}. Independent of the elimination path, so it
/// serves as the oracle for smith_form. Capped at 4 x 4 and degree 6
/// (SizeCapExceeded): the minor count and GCD chains grow quickly.
std::vector<ExactPolynomial> invariant_factors_via_minors(
    const ExactPolyMatrix& P);

/// Exact unimodularity test: det P is a nonzero constant. Throws NotSquare
/// on rectangular input.
bool is_unimodular(const ExactPolyMatrix& P);

/// The same factors listed in increasing divisibility order (s_j | s_{j+1}),
/// for interoperability with the convention most software uses.
std::vector<ExactPolynomial> factors_increasing(
    const std::vector<ExactPolynomial>& decreasing);

/// Witness that hyperstability is not invariant under equivalence: Q = E*S*F
/// together with the direction x = e_2 for which y* Q(mu) x has a zero in the
/// closed unit disc for every y != 0 (the Vieta argument: the section's first
/// and last coefficients coincide, so the product of its roots has modulus 1).
struct OrbitWitness {
  ExactPolyMatrix E;  ///< identity
  ExactPolyMatrix F;  ///< identity except the top-left 2x2 block; det F = 1
  ExactPolyMatrix Q;  ///< E * S * F
  int d = 0;          ///< deg(s_1/s_2) + 2, the degree of the bad sections
  Vec x;              ///< the designated direction e_2
};

/// Builds the witness from a Smith form whose invariant factors are all
/// zero-free on the closed unit disc. The degree parameter must equal
/// deg(s_1/s_2) + 2. The construction is stated for the closed unit disc;
/// other regions must be pulled back by an affine change of variables before
/// computing the Smith form. Throws PreconditionViolated when the region is
/// not the closed unit disc, the form is not square of full rank >= 2, a
/// factor has a zero in (or within tolerance of) the disc, or d is wrong.
OrbitWitness orbit_witness(const SmithResult& sr, int d,
                           const Region& D = Region::disc(cplx(0, 0), 1.0,
                                                          /*closed=*/true));

}  // namespace polystab
