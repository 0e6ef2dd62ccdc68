// JSON serialization of every public result type and validated parsing of
// the input types (regions, matrix polynomials, exact matrices). Parsing
// errors throw SchemaError carrying a JSON-pointer-style location so the CLI
// can report exactly which field is wrong.
#pragma once

#include <string>

#include <json.hpp>

#include "polystab/bounds.hpp"
#include "polystab/exact.hpp"
#include "polystab/matrix_poly.hpp"
#include "polystab/multi_poly.hpp"
#include "polystab/num_range.hpp"
#include "polystab/region.hpp"
#include "polystab/scalar_poly.hpp"
#include "polystab/smith.hpp"
#include "polystab/stability.hpp"

namespace polystab::io {

using Json = nlohmann::json;

/// Directory holding the shipped JSON schemas (baked in at build time).
std::string schema_dir();

// ---------------------------------------------------------------------------
// Parsing (validated; SchemaError on violation, message prefixed "at <ptr>:")
// ---------------------------------------------------------------------------

/// {"kind": "disc"|"disc_exterior"|"half_plane"|"sector", ...} with
/// per-kind fields (center [re,im], radius, phi, offset, arg_lo, arg_hi,
/// closed, contains_zero); omitted fields take the documented defaults.
Region region_from_json(const Json& j, const std::string& ptr = "/region");

/// {"coefficients": [M_0, M_1, ...]} with each M_j an n x n array of rows of
/// complex entries; a complex entry is [re, im] or a plain number.
MatrixPolynomial matrix_poly_from_json(const Json& j,
                                       const std::string& ptr = "/poly");

/// {"rows": m, "cols": n, "entries": [[poly, ...], ...]} with each poly an
/// ascending array of {"re": "p/q", "im": "r/s"} exact coefficients ("im"
/// may be omitted; a bare string means a real coefficient).
ExactPolyMatrix exact_matrix_from_json(const Json& j,
                                       const std::string& ptr = "/poly");

/// Rational reconstruction of a numeric matrix polynomial; throws
/// Unrepresentable naming the first entry that is not exactly a decimal or
/// dyadic value (the Smith form is discontinuous, so rounding is refused).
ExactPolyMatrix exactify_matrix_poly(const MatrixPolynomial& p);

/// {"kappa": k, "levels": [A_0, ..., A_m]} with m <= kappa; the represented
/// polynomial is sum_j binom(kappa, j)^{-1} s_j(z) A_j.
MultiAffineSymmetricMP multi_affine_from_json(const Json& j,
                                              const std::string& ptr = "/poly");

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

Json to_json(cplx z);
Json to_json(const Vec& v);
Json to_json(const Region& d);
Json to_json(const ComplexPolynomial& p);
Json to_json(const MatrixPolynomial& p);
Json to_json(const GaussianRational& g);
Json to_json(const ExactPolynomial& p);
Json to_json(const ExactPolyMatrix& m);
Json to_json(const RootSet& r);
Json to_json(const Eigenvalues& e);
Json to_json(const StabilityResult& r);
Json to_json(const HyperVerdict& v);
Json to_json(const DirectionalCertificate& c);
Json to_json(const NumRangeVerdict& v);
Json to_json(const BoundReport& r);
Json to_json(const SmithResult& r);
Json to_json(const OrbitWitness& w);
Json to_json(const MvStabilityResult& r);
Json to_json(const MultiAffineSymmetricMP& q);

}  // namespace polystab::io
