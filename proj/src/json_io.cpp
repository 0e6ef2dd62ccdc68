// JSON parsing with pointered schema errors, and emission of result types.
#include "polystab/json_io.hpp"

namespace polystab::io {
namespace {

[[noreturn]] void fail(const std::string& ptr, const std::string& what) {
  throw SchemaError("at " + ptr + ": " + what);
}

const Json& member(const Json& j, const char* key, const std::string& ptr) {
  if (!j.is_object()) fail(ptr, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(ptr + "/" + key, "missing required field");
  return *it;
}

double number_at(const Json& j, const std::string& ptr) {
  if (!j.is_number()) fail(ptr, "expected a number");
  return j.get<double>();
}

double number_or(const Json& j, const char* key, double dflt,
                 const std::string& ptr) {
  if (!j.is_object()) fail(ptr, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) return dflt;
  return number_at(*it, ptr + "/" + key);
}

bool bool_or(const Json& j, const char* key, bool dflt, const std::string& ptr) {
  auto it = j.find(key);
  if (it == j.end()) return dflt;
  if (!it->is_boolean()) fail(ptr + "/" + key, "expected a boolean");
  return it->get<bool>();
}

cplx complex_at(const Json& j, const std::string& ptr) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array()) {
    if (j.size() != 2) fail(ptr, "complex entry must be [re, im]");
    return {number_at(j[0], ptr + "/0"), number_at(j[1], ptr + "/1")};
  }
  fail(ptr, "expected a number or [re, im]");
}

Rational rational_at(const Json& j, const std::string& ptr) {
  if (!j.is_string()) fail(ptr, "expected a rational string \"p/q\"");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const SchemaError& e) {
    fail(ptr, e.what());
  }
}

}  // namespace

Region region_from_json(const Json& j, const std::string& ptr) {
  const Json& kind = member(j, "kind", ptr);
  if (!kind.is_string()) fail(ptr + "/kind", "expected a string");
  std::string k = kind.get<std::string>();
  bool closed = bool_or(j, "closed", false, ptr);
  try {
    if (k == "disc" || k == "disc_exterior") {
      cplx center{0.0, 0.0};
      if (j.contains("center")) center = complex_at(j["center"], ptr + "/center");
      double radius = number_or(j, "radius", 1.0, ptr);
      return k == "disc" ? Region::disc(center, radius, closed)
                         : Region::disc_exterior(center, radius, closed);
    }
    if (k == "half_plane") {
      double phi = number_or(j, "phi", 0.0, ptr);
      double offset = number_or(j, "offset", 0.0, ptr);
      return Region::half_plane(phi, offset, closed);
    }
    if (k == "sector") {
      if (!j.contains("arg_lo") || !j.contains("arg_hi"))
        fail(ptr, "sector needs arg_lo and arg_hi");
      double lo = number_at(j["arg_lo"], ptr + "/arg_lo");
      double hi = number_at(j["arg_hi"], ptr + "/arg_hi");
      bool zero = bool_or(j, "contains_zero", false, ptr);
      return Region::sector(lo, hi, closed, zero);
    }
  } catch (const std::invalid_argument& e) {
    fail(ptr, e.what());  // factory validation (radius > 0, arg order, ...)
  }
  fail(ptr + "/kind",
       "unknown region kind '" + k +
           "' (expected disc, disc_exterior, half_plane or sector)");
}

MatrixPolynomial matrix_poly_from_json(const Json& j, const std::string& ptr) {
  const Json& cs = member(j, "coefficients", ptr);
  std::string cptr = ptr + "/coefficients";
  if (!cs.is_array() || cs.empty()) fail(cptr, "expected a nonempty array");
  int n = -1;
  std::vector<Mat> coeffs;
  coeffs.reserve(cs.size());
  for (std::size_t t = 0; t < cs.size(); ++t) {
    const Json& mj = cs[t];
    std::string mptr = cptr + "/" + std::to_string(t);
    if (!mj.is_array() || mj.empty()) fail(mptr, "expected a matrix (array of rows)");
    int rows = static_cast<int>(mj.size());
    if (n < 0) n = rows;
    if (rows != n) fail(mptr, "coefficient size disagrees with the first one");
    Mat m(n, n);
    for (int i = 0; i < n; ++i) {
      const Json& row = mj[static_cast<std::size_t>(i)];
      std::string rptr = mptr + "/" + std::to_string(i);
      if (!row.is_array() || static_cast<int>(row.size()) != n)
        fail(rptr, "expected a row of " + std::to_string(n) + " entries");
      for (int c = 0; c < n; ++c)
        m(i, c) = complex_at(row[static_cast<std::size_t>(c)],
                             rptr + "/" + std::to_string(c));
    }
    coeffs.push_back(std::move(m));
  }
  return MatrixPolynomial(std::move(coeffs));
}

ExactPolyMatrix exact_matrix_from_json(const Json& j, const std::string& ptr) {
  const Json& entries = member(j, "entries", ptr);
  std::string eptr = ptr + "/entries";
  if (!entries.is_array() || entries.empty())
    fail(eptr, "expected a nonempty array of rows");
  int rows = static_cast<int>(entries.size());
  int cols = -1;
  std::vector<std::vector<ExactPolynomial>> out(static_cast<std::size_t>(rows));
  for (int i = 0; i < rows; ++i) {
    const Json& row = entries[static_cast<std::size_t>(i)];
    std::string rptr = eptr + "/" + std::to_string(i);
    if (!row.is_array()) fail(rptr, "expected an array of polynomials");
    if (cols < 0) cols = static_cast<int>(row.size());
    if (static_cast<int>(row.size()) != cols)
      fail(rptr, "ragged rows (expected " + std::to_string(cols) + " entries)");
    for (int c = 0; c < cols; ++c) {
      const Json& poly = row[static_cast<std::size_t>(c)];
      std::string pptr = rptr + "/" + std::to_string(c);
      if (!poly.is_array())
        fail(pptr, "expected an ascending array of exact coefficients");
      std::vector<GaussianRational> gs;
      gs.reserve(poly.size());
      for (std::size_t k = 0; k < poly.size(); ++k) {
        const Json& co = poly[k];
        std::string kptr = pptr + "/" + std::to_string(k);
        if (co.is_string()) {
          gs.emplace_back(rational_at(co, kptr), Rational(0));
        } else if (co.is_object()) {
          Rational re = co.contains("re") ? rational_at(co["re"], kptr + "/re")
                                          : Rational(0);
          Rational im = co.contains("im") ? rational_at(co["im"], kptr + "/im")
                                          : Rational(0);
          gs.emplace_back(std::move(re), std::move(im));
        } else {
          fail(kptr, "expected {\"re\": \"p/q\", \"im\": \"r/s\"} or a string");
        }
      }
      out[static_cast<std::size_t>(i)].push_back(ExactPolynomial(std::move(gs)));
    }
  }
  if (cols <= 0) fail(eptr, "rows must be nonempty");
  // size validation is left to the exact operations' own caps
  if (rows != static_cast<int>(out.size())) fail(eptr, "internal shape error");
  return ExactPolyMatrix(std::move(out));
}

ExactPolyMatrix exactify_matrix_poly(const MatrixPolynomial& p) {
  const int n = p.size();
  std::vector<std::vector<ExactPolynomial>> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < n; ++c) {
      ComplexPolynomial e = p.entry(i, c);
      std::vector<GaussianRational> gs;
      for (int k = 0; k <= e.degree(); ++k) {
        auto g = exactify(e.coeff(k));
        if (!g)
          throw Unrepresentable(
              "entry (" + std::to_string(i) + "," + std::to_string(c) +
              ") coefficient of lambda^" + std::to_string(k) +
              " is not exactly a decimal or dyadic value; provide exact "
              "rational input instead");
        gs.push_back(*g);
      }
      out[static_cast<std::size_t>(i)].push_back(ExactPolynomial(std::move(gs)));
    }
  }
  return ExactPolyMatrix(std::move(out));
}

MultiAffineSymmetricMP multi_affine_from_json(const Json& j,
                                              const std::string& ptr) {
  const Json& kj = member(j, "kappa", ptr);
  if (!kj.is_number_integer() || kj.get<int>() < 1)
    fail(ptr + "/kappa", "expected a positive integer");
  const Json& ls = member(j, "levels", ptr);
  std::string lptr = ptr + "/levels";
  if (!ls.is_array() || ls.empty()) fail(lptr, "expected a nonempty array");
  int n = -1;
  std::vector<Mat> levels;
  levels.reserve(ls.size());
  for (std::size_t t = 0; t < ls.size(); ++t) {
    const Json& mj = ls[t];
    std::string mptr = lptr + "/" + std::to_string(t);
    if (!mj.is_array() || mj.empty())
      fail(mptr, "expected a matrix (array of rows)");
    int rows = static_cast<int>(mj.size());
    if (n < 0) n = rows;
    if (rows != n) fail(mptr, "level size disagrees with the first one");
    Mat m(n, n);
    for (int i = 0; i < n; ++i) {
      const Json& row = mj[static_cast<std::size_t>(i)];
      std::string rptr = mptr + "/" + std::to_string(i);
      if (!row.is_array() || static_cast<int>(row.size()) != n)
        fail(rptr, "expected a row of " + std::to_string(n) + " entries");
      for (int c = 0; c < n; ++c)
        m(i, c) = complex_at(row[static_cast<std::size_t>(c)],
                             rptr + "/" + std::to_string(c));
    }
    levels.push_back(std::move(m));
  }
  try {
    return MultiAffineSymmetricMP(kj.get<int>(), std::move(levels));
  } catch (const std::invalid_argument& e) {
    fail(ptr, e.what());
  }
  throw NumericFailure("unreachable");  // fail() always throws
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

Json to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const Vec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(to_json(v(i)));
  return a;
}

Json to_json(const Region& d) {
  Json j;
  switch (d.kind) {
    case RegionKind::Disc:
      j["kind"] = "disc";
      j["center"] = to_json(d.center);
      j["radius"] = d.radius;
      break;
    case RegionKind::DiscExterior:
      j["kind"] = "disc_exterior";
      j["center"] = to_json(d.center);
      j["radius"] = d.radius;
      break;
    case RegionKind::HalfPlane:
      j["kind"] = "half_plane";
      j["phi"] = d.phi;
      j["offset"] = d.offset;
      break;
    case RegionKind::Sector:
      j["kind"] = "sector";
      j["arg_lo"] = d.arg_lo;
      j["arg_hi"] = d.arg_hi;
      j["contains_zero"] = d.contains_zero;
      break;
  }
  j["closed"] = d.closed;
  return j;
}

Json to_json(const ComplexPolynomial& p) {
  Json a = Json::array();
  for (int k = 0; k <= p.degree(); ++k) a.push_back(to_json(p.coeff(k)));
  return a;
}

Json to_json(const MatrixPolynomial& p) {
  Json cs = Json::array();
  for (int t = 0; t <= p.degree(); ++t) {
    Mat m = p.coeff(t);
    Json mj = Json::array();
    for (int i = 0; i < p.size(); ++i) {
      Json row = Json::array();
      for (int c = 0; c < p.size(); ++c) row.push_back(to_json(m(i, c)));
      mj.push_back(std::move(row));
    }
    cs.push_back(std::move(mj));
  }
  return Json{{"n", p.size()}, {"degree", p.degree()}, {"coefficients", cs}};
}

Json to_json(const GaussianRational& g) {
  return Json{{"re", to_string(g.re)}, {"im", to_string(g.im)}};
}

Json to_json(const ExactPolynomial& p) {
  Json a = Json::array();
  for (int k = 0; k <= p.degree(); ++k) a.push_back(to_json(p.coeff(k)));
  return a;
}

Json to_json(const ExactPolyMatrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(to_json(m.at(i, c)));
    rows.push_back(std::move(row));
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", rows}};
}

Json to_json(const RootSet& r) {
  Json roots = Json::array();
  for (cplx z : r.roots) roots.push_back(to_json(z));
  return Json{{"roots", roots},
              {"backward_errors", r.backward_errors},
              {"vieta_sum_residual", r.vieta_sum_residual},
              {"vieta_prod_residual", r.vieta_prod_residual},
              {"used_companion_fallback", r.used_companion_fallback}};
}

Json to_json(const Eigenvalues& e) {
  Json f = Json::array();
  for (cplx z : e.finite) f.push_back(to_json(z));
  return Json{{"finite", f},
              {"regular", e.regular},
              {"at_infinity", e.at_infinity},
              {"infinity_multiplicity", e.infinity_multiplicity}};
}

Json to_json(const StabilityResult& r) {
  Json j;
  switch (r.status) {
    case StabilityStatus::Stable: j["status"] = "Stable"; break;
    case StabilityStatus::NotStable: j["status"] = "NotStable"; break;
    case StabilityStatus::Singular: j["status"] = "Singular"; break;
  }
  if (r.eigenvalue_in_region)
    j["eigenvalue_in_region"] = to_json(*r.eigenvalue_in_region);
  j["boundary_sensitive"] = r.boundary_sensitive;
  return j;
}

Json to_json(const HyperVerdict& v) {
  Json j;
  j["status"] = to_string(v.status);
  if (v.method) j["method"] = to_string(*v.method);
  if (v.falsifier) j["falsifier"] = to_json(*v.falsifier);
  if (v.eigenvalue_in_region)
    j["eigenvalue_in_region"] = to_json(*v.eigenvalue_in_region);
  if (v.region) j["region"] = to_json(*v.region);
  j["evidence"] = v.evidence;
  return j;
}

Json to_json(const DirectionalCertificate& c) {
  Json j;
  switch (c.status) {
    case CertStatus::Certificate: j["status"] = "Certificate"; break;
    case CertStatus::NoCertificate: j["status"] = "NoCertificate"; break;
    case CertStatus::Unknown: j["status"] = "Unknown"; break;
  }
  if (c.y) j["y"] = to_json(*c.y);
  if (!c.section.is_zero() || c.status == CertStatus::Certificate)
    j["section"] = to_json(c.section);
  j["proof"] = c.proof;
  j["margin"] = c.margin;
  j["rank"] = c.rank;
  return j;
}

Json to_json(const NumRangeVerdict& v) {
  Json j;
  switch (v.status) {
    case RangeStatus::Disjoint: j["status"] = "Disjoint"; break;
    case RangeStatus::Intersects: j["status"] = "Intersects"; break;
    case RangeStatus::Unknown: j["status"] = "Unknown"; break;
  }
  if (v.status == RangeStatus::Intersects) {
    j["witness_lambda"] = to_json(v.witness_lambda);
    j["witness_x"] = to_json(v.witness_x);
  }
  j["samples_used"] = v.samples_used;
  j["worst_margin"] = v.worst_margin;
  j["certificate"] = v.certificate;
  return j;
}

Json to_json(const BoundReport& r) {
  Json bounds;
  for (const auto& [name, entry] : r.bounds) {
    Json e{{"applicable", entry.applicable}};
    if (entry.applicable) e["value"] = entry.value;
    if (entry.degenerate) e["degenerate"] = true;
    if (!entry.note.empty()) e["note"] = entry.note;
    bounds[name] = std::move(e);
  }
  return Json{{"lambda", to_json(r.lambda)},
              {"lhs", r.lhs},
              {"lhs_norm", r.lhs_norm},
              {"bounds", bounds},
              {"tightest", r.tightest},
              {"szasz_hypothesis", r.szasz_hypothesis}};
}

Json to_json(const SmithResult& r) {
  Json factors = Json::array();
  for (const auto& s : r.invariant_factors) factors.push_back(to_json(s));
  return Json{{"rank", r.rank},
              {"invariant_factors", factors},
              {"S", to_json(r.S)},
              {"U", to_json(r.U)},
              {"V", to_json(r.V)}};
}

Json to_json(const OrbitWitness& w) {
  return Json{{"d", w.d},
              {"E", to_json(w.E)},
              {"F", to_json(w.F)},
              {"Q", to_json(w.Q)},
              {"x", to_json(w.x)}};
}

Json to_json(const MvStabilityResult& r) {
  Json witness = Json::array();
  for (cplx z : r.witness) witness.push_back(to_json(z));
  return Json{{"falsified", r.falsified},
              {"witness", witness},
              {"witness_residual", r.witness_residual},
              {"samples_used", r.samples_used},
              {"note", r.note}};
}

std::string schema_dir() {
#ifdef POLYSTAB_SCHEMA_DIR
  return POLYSTAB_SCHEMA_DIR;
#else
  return "schemas";
#endif
}

Json to_json(const MultiAffineSymmetricMP& q) {
  Json levels = Json::array();
  for (const Mat& m : q.levels()) {
    Json mj = Json::array();
    for (int i = 0; i < q.size(); ++i) {
      Json row = Json::array();
      for (int c = 0; c < q.size(); ++c) row.push_back(to_json(m(i, c)));
      mj.push_back(std::move(row));
    }
    levels.push_back(std::move(mj));
  }
  return Json{{"kappa", q.kappa()}, {"n", q.size()}, {"levels", levels}};
}

}  // namespace polystab::io
