// Command-line front end. Subcommands: roots, eig, analyze, numrange, szasz,
// polarize, mvcheck, smith, orbit-witness, selftest. Inputs are JSON (files
// or inline); outputs are JSON reports that embed the seed, budget and
// tolerances used. Exit codes: 0 certified/stable/pass, 2 falsified or
// unstable, 3 unknown, 64 usage or schema errors.
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polystab/bounds.hpp"
#include "polystab/common.hpp"
#include "polystab/exact.hpp"
#include "polystab/fixtures.hpp"
#include "polystab/json_io.hpp"
#include "polystab/matrix_poly.hpp"
#include "polystab/multi_poly.hpp"
#include "polystab/num_range.hpp"
#include "polystab/region.hpp"
#include "polystab/scalar_poly.hpp"
#include "polystab/selftest.hpp"
#include "polystab/smith.hpp"
#include "polystab/stability.hpp"

namespace {

using namespace polystab;
using io::Json;

constexpr int kOk = 0;
constexpr int kBad = 2;
constexpr int kUnknown = 3;
constexpr int kUsage = 64;

struct Ctx {
  std::uint64_t seed = 1;
  bool compact = false;
  Tolerances tols{};
  SearchBudget budget{};

  std::string fixture;
  std::string input;
  std::string region_str;
  std::string regions_str;
  std::string coeffs_str;
  std::string lambda_str;

  // fixture parameters (overridden by a parenthesized fixture id)
  double eps = 0.01;
  int n = 2;
  int d = 2;
  int k = 1024;
  int comp_case = 1;
  int kappa = 2;
  double a = 2.0, b = 3.0, c = 1.0;
  std::uint64_t fixture_seed = 1;

  bool hyper = false;       // mvcheck: also run the hyperstability semi-decision
  bool assert_halfplane = false;  // szasz: caller asserts the W(P) hypothesis
  bool strict = false;      // selftest: expected failures also exit nonzero
  bool json_out = false;    // selftest: JSON instead of the text table
};

// --------------------------------------------------------------------------
// Small input helpers
// --------------------------------------------------------------------------

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SchemaError("at /" + what + ": not valid JSON (" + e.what() + ")");
  }
}

Json load_json(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return parse_json(buf.str(), "stdin");
  }
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open input file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str(), "input");
}

cplx parse_complex(const std::string& text, const std::string& what) {
  Json j = parse_json(text, what);
  if (j.is_number()) return cplx(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return cplx(j[0].get<double>(), j[1].get<double>());
  throw SchemaError("at /" + what + ": expected a number or [re, im]");
}

Region named_region(const std::string& name) {
  if (name == "closed-unit-disc") return Region::disc(cplx(0, 0), 1.0, true);
  if (name == "open-unit-disc") return Region::disc(cplx(0, 0), 1.0, false);
  if (name == "closed-unit-disc-exterior")
    return Region::disc_exterior(cplx(0, 0), 1.0, true);
  if (name == "open-unit-disc-exterior")
    return Region::disc_exterior(cplx(0, 0), 1.0, false);
  if (name == "upper-half-plane") return Region::upper_half_plane();
  if (name == "right-half-plane") return Region::right_half_plane();
  if (name == "left-half-plane") return Region::half_plane(-pi / 2.0);
  throw SchemaError(
      "at /region: unknown region name '" + name +
      "'; use JSON or one of closed-unit-disc, open-unit-disc, "
      "closed-unit-disc-exterior, open-unit-disc-exterior, upper-half-plane, "
      "right-half-plane, left-half-plane");
}

Region parse_region(const std::string& text) {
  if (text.empty()) throw SchemaError("at /region: --region is required");
  if (!text.empty() && text.front() != '{') return named_region(text);
  return io::region_from_json(parse_json(text, "region"), "/region");
}

// --------------------------------------------------------------------------
// Fixture resolution: "name" or "name(arg1,arg2,...)".
// --------------------------------------------------------------------------

struct FixtureSpec {
  std::string name;
  std::vector<double> args;
};

FixtureSpec parse_fixture_id(const std::string& id) {
  FixtureSpec f;
  auto open = id.find('(');
  if (open == std::string::npos) {
    f.name = id;
    return f;
  }
  if (id.back() != ')')
    throw SchemaError("at /fixture: '" + id + "' has an unclosed '('");
  f.name = id.substr(0, open);
  std::string inner = id.substr(open + 1, id.size() - open - 2);
  std::istringstream ss(inner);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      f.args.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw SchemaError("at /fixture: '" + tok + "' is not a number");
    }
  }
  return f;
}

double arg_or(const FixtureSpec& f, std::size_t i, double fallback) {
  return i < f.args.size() ? f.args[i] : fallback;
}

/// The fixtures that are plain matrix polynomials.
MatrixPolynomial fixture_poly(const Ctx& ctx) {
  FixtureSpec f = parse_fixture_id(ctx.fixture);
  if (f.name == "exa") return fixtures::exa();
  if (f.name == "sing") return fixtures::sing();
  if (f.name == "nonGL") return fixtures::nonGL();
  if (f.name == "hyper_nsinf")
    return fixtures::hyper_nsinf(arg_or(f, 0, ctx.eps));
  if (f.name == "ones")
    return fixtures::ones(static_cast<int>(arg_or(f, 0, ctx.n)),
                          static_cast<int>(arg_or(f, 1, ctx.d)))
        .expanded;
  if (f.name == "comp")
    throw SchemaError(
        "at /fixture: comp is a (polynomial, matrix) pair; use `szasz "
        "--fixture comp` or `roots --fixture comp`");
  if (f.name == "orbits")
    return fixtures::orbits(static_cast<int>(arg_or(f, 0, ctx.d)))
        .Q.to_numeric();
  if (f.name == "nonstab")
    throw SchemaError(
        "at /fixture: nonstab is multivariate; use `mvcheck --fixture "
        "nonstab`");
  if (f.name == "halfplane3x3") {
    fixtures::HalfPlane3x3 hp = fixtures::halfplane3x3();
    return MatrixPolynomial({hp.r0, hp.r1 + hp.j, hp.r2});
  }
  if (f.name == "cube")
    return fixtures::cube(static_cast<std::uint64_t>(
        arg_or(f, 0, static_cast<double>(ctx.fixture_seed))));
  if (f.name == "quad")
    return fixtures::quad(static_cast<std::uint64_t>(
        arg_or(f, 0, static_cast<double>(ctx.fixture_seed))));
  if (f.name == "mgt")
    return fixtures::mgt(arg_or(f, 0, ctx.a), arg_or(f, 1, ctx.b),
                         arg_or(f, 2, ctx.c))
        .p;
  if (f.name == "cmv")
    throw SchemaError(
        "at /fixture: cmv has degree 3k and is evaluated in factored form; "
        "use `szasz --fixture cmv`");
  throw SchemaError("at /fixture: unknown fixture '" + f.name + "'");
}

MatrixPolynomial resolve_poly(const Ctx& ctx) {
  if (!ctx.fixture.empty() && !ctx.input.empty())
    throw SchemaError("give either --fixture or --input, not both");
  if (!ctx.fixture.empty()) return fixture_poly(ctx);
  if (!ctx.input.empty()) {
    Json j = load_json(ctx.input);
    if (j.contains("poly")) return io::matrix_poly_from_json(j["poly"], "/poly");
    return io::matrix_poly_from_json(j, "");
  }
  throw SchemaError("provide a polynomial via --fixture or --input");
}

ExactPolyMatrix resolve_exact(const Ctx& ctx) {
  if (!ctx.fixture.empty()) return io::exactify_matrix_poly(fixture_poly(ctx));
  if (!ctx.input.empty()) {
    Json j = load_json(ctx.input);
    const Json& body = j.contains("poly") ? j["poly"] : j;
    const std::string ptr = j.contains("poly") ? "/poly" : "";
    if (body.contains("entries")) return io::exact_matrix_from_json(body, ptr);
    return io::exactify_matrix_poly(io::matrix_poly_from_json(body, ptr));
  }
  throw SchemaError("provide a matrix via --fixture or --input");
}

// --------------------------------------------------------------------------
// Output helpers
// --------------------------------------------------------------------------

Json config_json(const Ctx& ctx) {
  return Json{{"seed", ctx.seed},
              {"budget",
               {{"x_samples", ctx.budget.x_samples},
                {"y_starts", ctx.budget.y_starts},
                {"det_min_starts", ctx.budget.det_min_starts},
                {"grid_size", ctx.budget.grid_size},
                {"theta_grid", ctx.budget.theta_grid},
                {"refine_iters", ctx.budget.refine_iters}}},
              {"tolerances",
               {{"tau_bnd", ctx.tols.tau_bnd},
                {"tau_rank", ctx.tols.tau_rank},
                {"tau_det", ctx.tols.tau_det},
                {"tol", ctx.tols.tol}}}};
}

void emit(const Json& j, const Ctx& ctx) {
  std::cout << (ctx.compact ? j.dump() : j.dump(2)) << "\n";
}

// --------------------------------------------------------------------------
// Subcommand bodies (each returns the exit code)
// --------------------------------------------------------------------------

int run_roots(const Ctx& ctx) {
  ComplexPolynomial p;
  if (!ctx.coeffs_str.empty()) {
    Json arr = parse_json(ctx.coeffs_str, "coeffs");
    if (!arr.is_array() || arr.empty())
      throw SchemaError("at /coeffs: expected a nonempty array");
    std::vector<cplx> cs;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const Json& e = arr[i];
      if (e.is_number())
        cs.emplace_back(e.get<double>(), 0.0);
      else if (e.is_array() && e.size() == 2)
        cs.emplace_back(e[0].get<double>(), e[1].get<double>());
      else
        throw SchemaError("at /coeffs/" + std::to_string(i) +
                          ": expected a number or [re, im]");
    }
    p = ComplexPolynomial(std::move(cs));
  } else if (!ctx.fixture.empty()) {
    FixtureSpec f = parse_fixture_id(ctx.fixture);
    if (f.name != "comp")
      throw SchemaError(
          "at /fixture: only the comp fixture provides a scalar polynomial");
    p = fixtures::comp(static_cast<int>(arg_or(f, 0, ctx.comp_case))).p;
  } else if (!ctx.input.empty()) {
    Json j = load_json(ctx.input);
    const Json& cs = j.contains("coefficients") ? j["coefficients"] : j;
    if (!cs.is_array() || cs.empty())
      throw SchemaError("at /coefficients: expected a nonempty array");
    std::vector<cplx> v;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const Json& e = cs[i];
      if (e.is_number())
        v.emplace_back(e.get<double>(), 0.0);
      else if (e.is_array() && e.size() == 2)
        v.emplace_back(e[0].get<double>(), e[1].get<double>());
      else
        throw SchemaError("at /coefficients/" + std::to_string(i) +
                          ": expected a number or [re, im]");
    }
    p = ComplexPolynomial(std::move(v));
  } else {
    throw SchemaError("provide --coeffs, --input or --fixture comp");
  }

  RootSet rs = roots(p);
  Json out{{"roots", io::to_json(rs)}, {"config", config_json(ctx)}};
  int code = kOk;
  if (!ctx.region_str.empty()) {
    Region d = parse_region(ctx.region_str);
    StabilityCheck sc = stability_check(p, d, ctx.tols.tau_bnd);
    out["stability"] = Json{{"stable", sc.stable},
                            {"boundary_sensitive", sc.boundary_sensitive},
                            {"worst_root", io::to_json(sc.worst_root)},
                            {"worst_margin", sc.worst_margin},
                            {"region", io::to_json(d)}};
    code = sc.stable ? kOk : kBad;
  }
  emit(out, ctx);
  return code;
}

int run_eig(const Ctx& ctx) {
  MatrixPolynomial p = resolve_poly(ctx);
  Eigenvalues ev = eigenvalues(p, ctx.tols.tau_det);
  Json out{{"eigenvalues", io::to_json(ev)}, {"config", config_json(ctx)}};
  int code = kOk;
  if (!ctx.region_str.empty()) {
    Region d = parse_region(ctx.region_str);
    StabilityResult st = check_stable(p, d, ctx.tols);
    out["stability"] = io::to_json(st);
    code = st.status == StabilityStatus::Stable ? kOk : kBad;
  }
  emit(out, ctx);
  return code;
}

int run_analyze(const Ctx& ctx) {
  MatrixPolynomial p = resolve_poly(ctx);
  Region d = parse_region(ctx.region_str);
  StabilityResult st = check_stable(p, d, ctx.tols);
  HyperVerdict hv = check_hyperstable(p, d, ctx.budget);
  Json out{{"stability", io::to_json(st)},
           {"hyper", io::to_json(hv)},
           {"region", io::to_json(d)},
           {"config", config_json(ctx)}};
  emit(out, ctx);
  switch (hv.status) {
    case HyperStatus::CertifiedHyperstable:
      return kOk;
    case HyperStatus::Falsified:
    case HyperStatus::NotStable:
      return kBad;
    case HyperStatus::StableOnly:
    case HyperStatus::Unknown:
      return kUnknown;
  }
  return kUnknown;
}

int run_numrange(const Ctx& ctx) {
  MatrixPolynomial p = resolve_poly(ctx);
  Region d = parse_region(ctx.region_str);
  DisjointnessBudget db;
  db.seed = ctx.seed;
  NumRangeVerdict nr = wp_disjoint_from(p, d, db);
  Json out{{"numrange", io::to_json(nr)},
           {"region", io::to_json(d)},
           {"config", config_json(ctx)}};
  emit(out, ctx);
  switch (nr.status) {
    case RangeStatus::Disjoint:
      return kOk;
    case RangeStatus::Intersects:
      return kBad;
    case RangeStatus::Unknown:
      return kUnknown;
  }
  return kUnknown;
}

int run_szasz(const Ctx& ctx) {
  FixtureSpec f = parse_fixture_id(ctx.fixture);
  Json out{{"config", config_json(ctx)}};

  if (f.name == "comp") {
    fixtures::CompCase cc =
        fixtures::comp(static_cast<int>(arg_or(f, 0, ctx.comp_case)));
    out["bounds"] = io::to_json(compare(cc.p, cc.a));
    emit(out, ctx);
    return kOk;
  }
  if (f.name == "cmv") {
    int n = static_cast<int>(arg_or(f, 0, ctx.n));
    int k = static_cast<int>(arg_or(f, 1, ctx.k));
    CmvFixture fix = fixtures::cmv(n, k);
    cplx lam = ctx.lambda_str.empty() ? cplx(0.0, 1.0)
                                      : parse_complex(ctx.lambda_str, "lambda");
    out["cmv"] = Json{{"n", n},
                      {"k", k},
                      {"lambda", io::to_json(lam)},
                      {"frobenius_norm", fix.frob_at(lam)},
                      {"limit_at_iy", fix.limit_at_iy(lam.imag())}};
    emit(out, ctx);
    return kOk;
  }
  if (ctx.lambda_str.empty())
    throw SchemaError("at /lambda: --lambda is required for this input");
  cplx lam = parse_complex(ctx.lambda_str, "lambda");
  if (f.name == "ones") {
    FactoredPolynomial fp =
        fixtures::ones(static_cast<int>(arg_or(f, 0, ctx.n)),
                       static_cast<int>(arg_or(f, 1, ctx.d)));
    out["bounds"] = io::to_json(compare(fp, lam, ctx.assert_halfplane));
    emit(out, ctx);
    return kOk;
  }
  MatrixPolynomial p = resolve_poly(ctx);
  out["bounds"] = io::to_json(compare(p, lam, ctx.assert_halfplane));
  emit(out, ctx);
  return kOk;
}

int run_polarize(const Ctx& ctx) {
  MatrixPolynomial p = resolve_poly(ctx);
  int kappa = ctx.kappa < p.degree() ? p.degree() : ctx.kappa;
  MultiAffineSymmetricMP q = polarize(p, kappa);
  MatrixPolynomial back = diagonal(q);
  double err = 0.0;
  for (int j = 0; j <= std::max(p.degree(), back.degree()); ++j)
    err = std::max(err, (p.coeff(j) - back.coeff(j)).norm());
  Json out{{"polarized", io::to_json(q)},
           {"diagonal_roundtrip_max_error", err},
           {"config", config_json(ctx)}};
  emit(out, ctx);
  return kOk;
}

int run_mvcheck(const Ctx& ctx) {
  SparseMVMatrixPoly sq = [&] {
    if (!ctx.fixture.empty()) {
      FixtureSpec f = parse_fixture_id(ctx.fixture);
      if (f.name == "nonstab") return to_sparse(fixtures::nonstab());
      throw SchemaError(
          "at /fixture: mvcheck accepts the nonstab fixture or --input");
    }
    if (ctx.input.empty())
      throw SchemaError("provide --fixture nonstab or --input");
    Json j = load_json(ctx.input);
    const Json& body = j.contains("poly") ? j["poly"] : j;
    const std::string ptr = j.contains("poly") ? "/poly" : "";
    return to_sparse(io::multi_affine_from_json(body, ptr));
  }();

  std::vector<Region> ds;
  if (!ctx.regions_str.empty()) {
    Json arr = parse_json(ctx.regions_str, "regions");
    if (!arr.is_array() || arr.empty())
      throw SchemaError("at /regions: expected a nonempty array");
    for (std::size_t i = 0; i < arr.size(); ++i)
      ds.push_back(io::region_from_json(arr[i], "/regions/" + std::to_string(i)));
  } else if (!ctx.region_str.empty()) {
    Region d = parse_region(ctx.region_str);
    ds.assign(static_cast<std::size_t>(sq.kappa()), d);
  } else {
    throw SchemaError("provide --region (replicated) or --regions");
  }
  if (static_cast<int>(ds.size()) != sq.kappa())
    throw SchemaError("at /regions: expected " + std::to_string(sq.kappa()) +
                      " regions, got " + std::to_string(ds.size()));

  MvStabilityResult mv = mv_stable(sq, ds, ctx.budget);
  Json out{{"mv_stability", io::to_json(mv)}, {"config", config_json(ctx)}};
  int code = mv.falsified ? kBad : kUnknown;
  if (ctx.hyper) {
    HyperVerdict hv = mv_hyperstable(sq, ds, ctx.budget);
    out["hyper"] = io::to_json(hv);
    if (!mv.falsified && hv.status == HyperStatus::CertifiedHyperstable)
      code = kOk;
    if (hv.status == HyperStatus::Falsified ||
        hv.status == HyperStatus::NotStable)
      code = kBad;
  }
  emit(out, ctx);
  return code;
}

int run_smith(const Ctx& ctx) {
  ExactPolyMatrix m = resolve_exact(ctx);
  SmithResult sr = smith_form(m);
  Json out{{"smith", io::to_json(sr)}, {"config", config_json(ctx)}};
  try {
    std::vector<ExactPolynomial> oracle = invariant_factors_via_minors(m);
    out["minor_gcd_oracle"] = Json::array();
    for (const ExactPolynomial& p : oracle)
      out["minor_gcd_oracle"].push_back(io::to_json(p));
    out["minor_gcd_agrees"] = oracle == sr.invariant_factors;
  } catch (const SizeCapExceeded&) {
    out["minor_gcd_oracle"] = nullptr;  // above the oracle's size cap
  }
  emit(out, ctx);
  return kOk;
}

int run_orbit_witness(const Ctx& ctx) {
  OrbitWitness ow = [&] {
    if (!ctx.fixture.empty()) {
      FixtureSpec f = parse_fixture_id(ctx.fixture);
      if (f.name == "orbits")
        return fixtures::orbits(static_cast<int>(arg_or(f, 0, ctx.d)));
      throw SchemaError(
          "at /fixture: orbit-witness accepts the orbits fixture or --input");
    }
    ExactPolyMatrix m = resolve_exact(ctx);
    SmithResult sr = smith_form(m);
    if (sr.invariant_factors.size() < 2)
      throw SchemaError(
          "at /input: orbit-witness needs at least two invariant factors");
    auto [quot, rem] =
        divrem(sr.invariant_factors[0], sr.invariant_factors[1]);
    if (!rem.is_zero())
      throw SchemaError(
          "at /input: s1 is not divisible by s2, so the input is outside the "
          "construction's hypothesis");
    return orbit_witness(sr, quot.degree() + 2);
  }();

  Vec e2 = Vec::Zero(ow.x.size());
  e2(1) = cplx(1.0, 0.0);
  DirectionalCertificate dc =
      directional_certificate(ow.Q.to_numeric(), e2,
                              Region::disc(cplx(0.0, 0.0), 1.0, true),
                              ctx.budget);
  Json out{{"witness", io::to_json(ow)},
           {"directional_check", io::to_json(dc)},
           {"config", config_json(ctx)}};
  emit(out, ctx);
  return kOk;
}

int run_selftest(const Ctx& ctx) {
  std::vector<selftest::CriterionResult> results =
      selftest::run_all(ctx.seed, ctx.json_out ? nullptr : &std::cout);
  int unexpected = 0, expected = 0, passed = 0;
  for (const auto& r : results) {
    if (r.pass)
      ++passed;
    else if (r.expected_failure)
      ++expected;
    else
      ++unexpected;
  }
  if (ctx.json_out) {
    Json arr = Json::array();
    for (const auto& r : results)
      arr.push_back(Json{{"id", r.id},
                         {"name", r.name},
                         {"pass", r.pass},
                         {"expected_failure", r.expected_failure},
                         {"detail", r.detail}});
    emit(Json{{"criteria", arr},
              {"passed", passed},
              {"expected_failures", expected},
              {"failed", unexpected},
              {"config", config_json(ctx)}},
         ctx);
  } else {
    std::cout << passed << " passed";
    if (expected)
      std::cout << ", " << expected
                << " expected failure(s) (documented deviation)";
    if (unexpected) std::cout << ", " << unexpected << " FAILED";
    std::cout << " out of " << results.size() << "\n";
  }
  if (unexpected) return kBad;
  if (expected && ctx.strict) return kBad;
  return kOk;
}

// --------------------------------------------------------------------------
// Schema printing
// --------------------------------------------------------------------------

int print_schemas(const std::string& which) {
  namespace fs = std::filesystem;
  fs::path dir = io::schema_dir();
  if (!fs::is_directory(dir)) {
    std::cerr << "error: schema directory '" << dir.string()
              << "' is missing\n";
    return kUsage;
  }
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".json")
      names.push_back(e.path().stem().string());
  std::sort(names.begin(), names.end());
  if (which.empty() || which == "list") {
    for (const std::string& n : names) std::cout << n << "\n";
    return kOk;
  }
  auto print_one = [&](const std::string& n) {
    std::ifstream in(dir / (n + ".json"));
    std::cout << in.rdbuf();
  };
  if (which == "all") {
    for (const std::string& n : names) print_one(n);
    return kOk;
  }
  if (std::find(names.begin(), names.end(), which) == names.end()) {
    std::cerr << "error: no schema named '" << which << "'; available:";
    for (const std::string& n : names) std::cerr << " " << n;
    std::cerr << "\n";
    return kUsage;
  }
  print_one(which);
  return kOk;
}

// --------------------------------------------------------------------------
// Wiring
// --------------------------------------------------------------------------

void add_common(CLI::App* sc, Ctx& ctx) {
  sc->add_option("--seed", ctx.seed, "seed for every randomized search");
  sc->add_flag("--compact", ctx.compact, "single-line JSON output");
  sc->add_option("--tau-bnd", ctx.tols.tau_bnd, "boundary tolerance");
  sc->add_option("--tau-rank", ctx.tols.tau_rank, "rank cutoff");
  sc->add_option("--tau-det", ctx.tols.tau_det, "determinant cutoff");
  sc->add_option("--tol", ctx.tols.tol, "generic tolerance");
  sc->add_option("--x-samples", ctx.budget.x_samples,
                 "direction samples for the hyperstability search");
  sc->add_option("--y-starts", ctx.budget.y_starts,
                 "multistart count for section searches");
  sc->add_option("--det-min-starts", ctx.budget.det_min_starts,
                 "multistart count for determinant minimization");
  sc->add_option("--grid-size", ctx.budget.grid_size, "sampling grid size");
  sc->add_option("--theta-grid", ctx.budget.theta_grid,
                 "angle grid for numerical-range scans");
  sc->add_option("--refine-iters", ctx.budget.refine_iters,
                 "golden-section refinement steps");
}

void add_poly_source(CLI::App* sc, Ctx& ctx) {
  sc->add_option(
      "--fixture", ctx.fixture,
      "fixture id: exa, sing, nonGL, hyper_nsinf(eps), ones(n,d), cmv(n,k), "
      "comp(case), orbits(d), nonstab, halfplane3x3, cube(seed), quad(seed), "
      "mgt(a,b,c)");
  sc->add_option("--input", ctx.input, "JSON input file ('-' for stdin)");
  sc->add_option("--eps", ctx.eps, "hyper_nsinf perturbation size");
  sc->add_option("--n", ctx.n, "fixture dimension parameter");
  sc->add_option("--d", ctx.d, "fixture degree parameter");
  sc->add_option("--k", ctx.k, "cmv factor-power parameter");
  sc->add_option("--case", ctx.comp_case, "comp case selector (1..3)");
  sc->add_option("--a", ctx.a, "mgt parameter a (> 1)");
  sc->add_option("--b", ctx.b, "mgt parameter b (> c)");
  sc->add_option("--c", ctx.c, "mgt parameter c");
  sc->add_option("--fixture-seed", ctx.fixture_seed,
                 "seed for the cube/quad fixture families");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "polystab: eigenvalue localization, stability and hyperstability "
      "certificates, Szasz-type norm bounds, polarization, and exact Smith "
      "forms for matrix polynomials"};
  app.require_subcommand(0, 1);

  Ctx ctx;
  std::string schema_name;
  auto* schema_opt =
      app.add_option("--schema", schema_name,
                     "print shipped JSON schemas (bare: list; a name; 'all')")
          ->expected(0, 1);

  int code = kUsage;
  auto invoke = [&](int (*fn)(const Ctx&)) {
    ctx.budget.seed = ctx.seed;
    code = fn(ctx);
  };

  auto* roots_sc = app.add_subcommand(
      "roots", "roots of a scalar polynomial; optional region stability");
  add_common(roots_sc, ctx);
  add_poly_source(roots_sc, ctx);
  roots_sc->add_option("--coeffs", ctx.coeffs_str,
                       "inline JSON array of ascending coefficients");
  roots_sc->add_option("--region", ctx.region_str,
                       "region JSON or a named region");
  roots_sc->callback([&] { invoke(run_roots); });

  auto* eig_sc = app.add_subcommand(
      "eig", "eigenvalues of a matrix polynomial; optional region stability");
  add_common(eig_sc, ctx);
  add_poly_source(eig_sc, ctx);
  eig_sc->add_option("--region", ctx.region_str,
                     "region JSON or a named region");
  eig_sc->callback([&] { invoke(run_eig); });

  auto* an_sc = app.add_subcommand(
      "analyze", "stability + layered hyperstability verdict over a region");
  add_common(an_sc, ctx);
  add_poly_source(an_sc, ctx);
  an_sc->add_option("--region", ctx.region_str,
                    "region JSON or a named region (required)");
  an_sc->callback([&] { invoke(run_analyze); });

  auto* nr_sc = app.add_subcommand(
      "numrange", "semi-decide W(P) disjoint from a region");
  add_common(nr_sc, ctx);
  add_poly_source(nr_sc, ctx);
  nr_sc->add_option("--region", ctx.region_str,
                    "region JSON or a named region (required)");
  nr_sc->callback([&] { invoke(run_numrange); });

  auto* sz_sc = app.add_subcommand(
      "szasz", "norm-bound comparison report at a point");
  add_common(sz_sc, ctx);
  add_poly_source(sz_sc, ctx);
  sz_sc->add_option("--lambda", ctx.lambda_str,
                    "evaluation point (number or [re, im])");
  sz_sc->add_flag("--assert-halfplane", ctx.assert_halfplane,
                  "caller asserts the numerical-range half-plane hypothesis");
  sz_sc->callback([&] { invoke(run_szasz); });

  auto* po_sc = app.add_subcommand(
      "polarize", "apply the polarization operator T_kappa");
  add_common(po_sc, ctx);
  add_poly_source(po_sc, ctx);
  po_sc->add_option("--kappa", ctx.kappa,
                    "number of variables (raised to deg P when smaller)");
  po_sc->callback([&] { invoke(run_polarize); });

  auto* mv_sc = app.add_subcommand(
      "mvcheck", "multivariate stability search over a product region");
  add_common(mv_sc, ctx);
  add_poly_source(mv_sc, ctx);
  mv_sc->add_option("--region", ctx.region_str,
                    "one region, replicated across all variables");
  mv_sc->add_option("--regions", ctx.regions_str,
                    "inline JSON array of regions (one per variable)");
  mv_sc->add_flag("--hyper", ctx.hyper,
                  "also run the hyperstability semi-decision");
  mv_sc->callback([&] { invoke(run_mvcheck); });

  auto* sm_sc = app.add_subcommand(
      "smith", "exact Smith canonical form over Gaussian rationals");
  add_common(sm_sc, ctx);
  add_poly_source(sm_sc, ctx);
  sm_sc->callback([&] { invoke(run_smith); });

  auto* ow_sc = app.add_subcommand(
      "orbit-witness",
      "build the equivalence-orbit hyperstability counterexample");
  add_common(ow_sc, ctx);
  add_poly_source(ow_sc, ctx);
  ow_sc->callback([&] { invoke(run_orbit_witness); });

  auto* st_sc = app.add_subcommand(
      "selftest", "run the full acceptance suite and print the table");
  st_sc->add_option("--seed", ctx.seed, "suite seed")->default_val(7);
  st_sc->add_flag("--json", ctx.json_out, "emit JSON instead of the table");
  st_sc->add_flag("--strict", ctx.strict,
                  "exit nonzero even for documented expected failures");
  st_sc->callback([&] { invoke(run_selftest); });

  try {
    app.parse(argc, argv);
    if (schema_opt->count() > 0 && app.get_subcommands().empty())
      return print_schemas(schema_name);
    if (app.get_subcommands().empty()) {
      std::cerr << app.help() << "\n";
      return kUsage;
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kUsage;
  } catch (const Unrepresentable& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kUsage;
  } catch (const SizeCapExceeded& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const NumericFailure& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kUnknown;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return code;
}
