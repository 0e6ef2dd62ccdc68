#include "polystab/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "polystab/bounds.hpp"
#include "polystab/common.hpp"
#include "polystab/exact.hpp"
#include "polystab/fixtures.hpp"
#include "polystab/matrix_poly.hpp"
#include "polystab/multi_poly.hpp"
#include "polystab/num_range.hpp"
#include "polystab/region.hpp"
#include "polystab/rng.hpp"
#include "polystab/scalar_poly.hpp"
#include "polystab/smith.hpp"
#include "polystab/stability.hpp"

namespace polystab::selftest {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(3) << x;
  return os.str();
}

/// Uniform double in [0, 1) from the raw engine (no distribution objects, so
/// the stream is reproducible across standard libraries).
double u01(RngEngine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Collects sub-check outcomes; the first few failures are named in notes.
struct Tally {
  int checks = 0;
  int failures = 0;
  std::ostringstream notes;
  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok) {
      ++failures;
      if (notes.tellp() < 500) notes << " [" << what << "]";
    }
  }
  bool pass() const { return failures == 0; }
  std::string summary(const std::string& ok_detail) const {
    if (pass()) return ok_detail;
    std::ostringstream os;
    os << failures << "/" << checks << " sub-checks failed:" << notes.str();
    return os.str();
  }
};

// -------------------------------------------------------------------- 1 ---
CriterionResult crit_exa(std::uint64_t) {
  CriterionResult r{1, "exa: falsified on the closed unit disc, yet stable",
                    false, false, ""};
  const auto t0 = Clock::now();
  MatrixPolynomial p = fixtures::exa();
  Region disc = Region::disc(cplx(0.0, 0.0), 1.0, true);
  HyperVerdict hv = check_hyperstable(p, disc);
  StabilityResult st = check_stable(p, disc);
  const double dt = seconds_since(t0);

  Tally t;
  t.expect(hv.status == HyperStatus::Falsified, "engine verdict Falsified");
  double ang = -1.0;
  if (hv.falsifier && hv.falsifier->size() == 2) {
    Vec x = hv.falsifier->normalized();
    ang = std::acos(std::min(1.0, std::abs(x(1))));
    t.expect(ang <= 1e-6, "witness within 1e-6 of span{e2}");
  } else {
    t.expect(false, "falsifying direction reported");
  }
  t.expect(st.status == StabilityStatus::Stable, "check_stable says Stable");
  t.expect(dt < 5.0, "runtime < 5 s");
  r.pass = t.pass();
  r.detail = t.summary("witness angle " + fmt(ang) + " rad from e2, " +
                       fmt(dt) + " s");
  return r;
}

// -------------------------------------------------------------------- 2 ---
CriterionResult crit_comp(std::uint64_t) {
  CriterionResult r{2, "comp: calculus bound triples and tightest tags",
                    false, false, ""};
  const double rt2 = std::sqrt(2.0);
  struct Expected {
    int which;
    double pa1, pa2, svn;
    const char* tightest;
  };
  const Expected cases[] = {
      {1, 2.0 * rt2, rt2 * std::exp(6.0), rt2 * std::exp(12.0), "pA1"},
      {2, 2.0 * rt2 * std::exp(6.0), rt2 * std::exp(6.0),
       rt2 * std::exp(12.0), "pA2"},
      {3, 2.0 * rt2 * std::exp(2.5), rt2 * std::exp(3.0),
       rt2 * std::exp(2.5), "svn"},
  };
  Tally t;
  auto rel_ok = [](double got, double want) {
    return std::abs(got - want) <= 1e-9 * std::abs(want);
  };
  std::vector<std::string> tags;
  for (const Expected& e : cases) {
    fixtures::CompCase cc = fixtures::comp(e.which);
    BoundReport rep = compare(cc.p, cc.a);
    const std::string tag = "case " + std::to_string(e.which);
    t.expect(rel_ok(rep.bounds.at("pA1").value, e.pa1), tag + " pA1 value");
    t.expect(rel_ok(rep.bounds.at("pA2").value, e.pa2), tag + " pA2 value");
    t.expect(rel_ok(rep.bounds.at("svn").value, e.svn), tag + " svn value");
    t.expect(rep.tightest == e.tightest,
             tag + " tightest is " + e.tightest + " (got " + rep.tightest +
                 ")");
    t.expect(rep.lhs <= rep.bounds.at(rep.tightest).value + 1e-9,
             tag + " measured norm below the tightest bound");
    tags.push_back(rep.tightest);
  }
  t.expect(tags.size() == 3 && tags[0] != tags[1] && tags[1] != tags[2] &&
               tags[0] != tags[2],
           "tightest tags differ across the three cases");
  r.pass = t.pass();
  r.detail =
      t.summary("tightest: pA1 / pA2 / svn, all values to 1e-9 relative");
  return r;
}

// -------------------------------------------------------------------- 3 ---
CriterionResult crit_ones(std::uint64_t) {
  CriterionResult r{3, "ones: Frobenius norm closed form and frob bound",
                    false, false, ""};
  Tally t;
  double worst = 0.0;
  for (int n : {2, 3})
    for (int d = 1; d <= 4; ++d)
      for (double lam : {0.5, 1.0, 2.0}) {
        FactoredPolynomial f = ones_fixture(n, d);
        const std::string tag = "n=" + std::to_string(n) +
                                " d=" + std::to_string(d) + " l=" + fmt(lam);
        double lhs = f.expanded.evaluate(cplx(lam, 0.0)).norm();
        double closed = ones_frob_closed_form(n, d, lam);
        double rel = std::abs(lhs * lhs - closed * closed) / (closed * closed);
        worst = std::max(worst, rel);
        t.expect(rel <= 1e-10, tag + " closed form");
        double fb = bound_frob(f, cplx(lam, 0.0));
        t.expect(lhs <= fb + 1e-10 * std::max(1.0, fb), tag + " frob bound");
      }
  r.pass = t.pass();
  r.detail = t.summary("24 (n,d,lambda) combinations, worst relative error " +
                       fmt(worst));
  return r;
}

// -------------------------------------------------------------------- 4 ---
CriterionResult crit_cmv(std::uint64_t) {
  CriterionResult r{4, "cmv: factored-product norms approach the limit",
                    false, false, ""};
  Tally t;
  std::ostringstream have;
  for (int n : {2, 1}) {
    const double limit = cmv_fixture(n, 2).limit_at_iy(1.0);
    double prev = std::numeric_limits<double>::infinity();
    bool monotone = true;
    double last = prev;
    for (int k : {1 << 10, 1 << 11, 1 << 12, 1 << 13}) {
      CmvFixture f = cmv_fixture(n, k);
      double err = std::abs(f.frob_at(cplx(0.0, 1.0)) - limit);
      monotone = monotone && err < prev;
      prev = err;
      last = err;
    }
    const std::string tag = "n=" + std::to_string(n);
    t.expect(monotone, tag + " error decreases over k = 2^10..2^13");
    t.expect(last < 0.05, tag + " error at k = 2^13 below 0.05");
    have << " " << tag << ": err(2^13) = " << fmt(last);
  }
  r.pass = t.pass();
  r.detail = t.summary("limits e(e^4+1)^(1/2) and e^(3/2) reached;" +
                       have.str());
  return r;
}

// -------------------------------------------------------------------- 5 ---
CriterionResult crit_nonstab(std::uint64_t seed) {
  CriterionResult r{5, "nonstab: bivariate determinant and falsification",
                    false, false, ""};
  Tally t;
  MultiAffineSymmetricMP q = fixtures::nonstab();
  RngEngine rng(seed ^ 0xa1b2c3d4e5f60718ULL);
  for (int i = 0; i < 32; ++i) {
    cplx z1 = random_complex(rng, 2.0), z2 = random_complex(rng, 2.0);
    Mat m = q.evaluate({z1, z2});
    cplx det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    cplx w = (z1 - z2) / 2.0;
    cplx expected = cplx(1.0, 0.0) - w * w;
    t.expect(std::abs(det - expected) <=
                 1e-10 * std::max(1.0, std::abs(expected)),
             "determinant identity at sample " + std::to_string(i));
  }
  SparseMVMatrixPoly sq = to_sparse(q);
  MvStabilityResult mv =
      mv_stable(sq, {Region::upper_half_plane(), Region::upper_half_plane()});
  t.expect(mv.falsified, "mv_stable falsifies over H0 x H0");
  double gap = -1.0;
  if (mv.witness.size() == 2) {
    gap = std::abs(mv.witness[0] - mv.witness[1]);
    t.expect(std::abs(gap - 2.0) <= 1e-6, "|mu1 - mu2| within 1e-6 of 2");
  } else {
    t.expect(false, "two-coordinate witness reported");
  }
  r.pass = t.pass();
  r.detail = t.summary("32 determinant samples, witness gap " + fmt(gap));
  return r;
}

// -------------------------------------------------------------------- 6 ---
CriterionResult crit_inequalities(std::uint64_t seed) {
  CriterionResult r{6, "inequality property suites (1e4 trials each)",
                    false, false, ""};
  const auto t0 = Clock::now();
  const int trials = 10000;
  Tally t;

  {  // log-Frobenius bound: log||n^{-1/2} I + A||_F <= n^{-1/2} tr Re A +
     // ||A||_F^2 / 2.
    RngEngine rng(seed ^ 0x1111111111111111ULL);
    int viol = 0;
    for (int i = 0; i < trials; ++i) {
      int n = 1 + static_cast<int>(rng() % 3);
      Mat a = random_matrix(rng, n, 1.5);
      double fn =
          (std::pow(static_cast<double>(n), -0.5) * Mat::Identity(n, n) + a)
              .norm();
      if (fn == 0.0) continue;
      double rhs = std::pow(static_cast<double>(n), -0.5) *
                       a.real().trace() +
                   0.5 * a.squaredNorm();
      if (std::log(fn) > rhs + 1e-12) ++viol;
    }
    t.expect(viol == 0, "log-Frobenius suite: " + std::to_string(viol) +
                            " violations");
  }

  {  // Frobenius sum bound for factors with Im B_j <= 0.
    RngEngine rng(seed ^ 0x2222222222222222ULL);
    int viol = 0;
    for (int i = 0; i < trials; ++i) {
      int m = 2 + static_cast<int>(rng() % 2);
      int n = 2 + static_cast<int>(rng() % 2);
      std::vector<Mat> bs;
      for (int j = 0; j < m; ++j)
        bs.push_back(random_hermitian(rng, n) -
                     cplx(0.0, 1.0) * random_psd(rng, n));
      Mat sum = Mat::Zero(n, n);
      double lhs = 0.0;
      for (const Mat& b : bs) {
        sum += b;
        lhs += b.squaredNorm();
      }
      double cross = 0.0;
      for (int j = 0; j < m; ++j)
        for (int k = j + 1; k < m; ++k)
          cross += (bs[static_cast<std::size_t>(j)] *
                    bs[static_cast<std::size_t>(k)])
                       .trace()
                       .real();
      if (lhs > sum.squaredNorm() - 2.0 * cross + 1e-10) ++viol;
    }
    t.expect(viol == 0,
             "factor-sum suite: " + std::to_string(viol) + " violations");
  }

  {  // Operator-norm log bound: log||I + A|| <= ||A||.
    RngEngine rng(seed ^ 0x3333333333333333ULL);
    int viol = 0;
    for (int i = 0; i < trials; ++i) {
      int n = 1 + static_cast<int>(rng() % 3);
      Mat a = random_matrix(rng, n, 2.0);
      double ni = norms(Mat::Identity(n, n) + a).two_norm;
      if (ni > 0.0 && std::log(ni) > norms(a).two_norm + 1e-10) ++viol;
    }
    t.expect(viol == 0,
             "log-operator suite: " + std::to_string(viol) + " violations");
  }

  {  // Coefficient-exponential margin on the stable generator.
    RngEngine rng(seed ^ 0x4444444444444444ULL);
    int viol = 0;
    for (int i = 0; i < trials; ++i) {
      ComplexPolynomial p = random_h0_stable(rng, 8);
      cplx lam = random_in_disc(rng, cplx(0.0, 0.0), 2.0);
      if (de_branges_margin(p, lam) < -1e-12) ++viol;
    }
    t.expect(viol == 0, "exponential-margin suite: " + std::to_string(viol) +
                            " violations");
  }

  {  // Spectral-sup scaling form: ||p(A)|| <= sup_{|z| <= ||A||} |p(z)|.
    RngEngine rng(seed ^ 0x5555555555555555ULL);
    int viol = 0;
    for (int i = 0; i < trials; ++i) {
      int deg = 1 + static_cast<int>(rng() % 4);
      std::vector<cplx> cs(static_cast<std::size_t>(deg) + 1);
      for (cplx& c : cs) c = random_complex(rng, 1.0);
      if (std::abs(cs.back()) < 0.2) cs.back() += cplx(0.5, 0.5);
      ComplexPolynomial p(std::move(cs));
      int n = 1 + static_cast<int>(rng() % 3);
      Mat a = random_matrix(rng, n, 1.5);
      double lhs = norms(poly_at_matrix(p, a)).two_norm;
      if (lhs > von_neumann_bound(p, a, 4096) + 1e-9) ++viol;
    }
    t.expect(viol == 0,
             "spectral-sup suite: " + std::to_string(viol) + " violations");
  }

  {  // Numerical-radius sandwich ||A||/2 <= w(A) <= ||A||.
    RngEngine rng(seed ^ 0x6666666666666666ULL);
    int viol = 0;
    for (int i = 0; i < trials; ++i) {
      int n = 2 + static_cast<int>(rng() % 2);
      Mat a = random_matrix(rng, n, 2.0);
      try {
        double w = numerical_radius(a);
        double nrm = norms(a).two_norm;
        if (w < 0.5 * nrm - 1e-10 || w > nrm + 1e-10) ++viol;
      } catch (const NumericFailure&) {
        ++viol;
      }
    }
    t.expect(viol == 0,
             "radius-sandwich suite: " + std::to_string(viol) + " violations");
  }

  const double dt = seconds_since(t0);
  t.expect(dt < 60.0, "total runtime < 60 s (took " + fmt(dt) + ")");
  r.pass = t.pass();
  r.detail = t.summary("6 suites x 10^4 trials, no violations, " + fmt(dt) +
                       " s");
  return r;
}

// -------------------------------------------------------------------- 7 ---
CriterionResult crit_structured(std::uint64_t) {
  CriterionResult r{7, "structured families: eigenvalue localization",
                    false, false, ""};
  Tally t;

  for (int s = 1; s <= 100; ++s) {  // PSD coefficients of any degree.
    MatrixPolynomial p = fixtures::cube(static_cast<std::uint64_t>(s));
    const double lo = pi / p.degree() - 1e-8;
    Eigenvalues ev = eigenvalues(p);
    t.expect(ev.regular, "sector family #" + std::to_string(s) + " regular");
    for (cplx mu : ev.finite)
      t.expect(std::abs(mu) <= 1e-8 || std::abs(principal_arg(mu)) >= lo,
               "sector family #" + std::to_string(s) + " eigenvalue " +
                   fmt(std::abs(mu)) + "@" + fmt(principal_arg(mu)));
  }

  for (int s = 1; s <= 100; ++s) {  // PSD quadratic: closed left half-plane.
    MatrixPolynomial p = fixtures::quad(static_cast<std::uint64_t>(s));
    for (cplx mu : eigenvalues(p).finite)
      t.expect(mu.real() <= 1e-8,
               "left-half-plane family #" + std::to_string(s));
  }

  {  // PSD/skew half-plane family, random instances plus the 3x3 instance.
    RngEngine rng(0x7777777777777777ULL);
    for (int s = 1; s <= 100; ++s) {
      int n = 2 + static_cast<int>(rng() % 2);
      Mat r2 = random_psd(rng, n) + 0.5 * Mat::Identity(n, n);
      Mat r1 = random_psd(rng, n);
      Mat r0 = random_psd(rng, n);
      Mat j = random_skew_hermitian(rng, n);
      HyperVerdict v = structured_halfplane(r2, r1, r0, j);
      t.expect(v.status == HyperStatus::CertifiedHyperstable,
               "half-plane family #" + std::to_string(s) + " certified");
      MatrixPolynomial p({r0, r1 + j, r2});
      for (cplx mu : eigenvalues(p).finite)
        t.expect(mu.real() <= 1e-8,
                 "half-plane family #" + std::to_string(s) + " eigenvalues");
    }
    fixtures::HalfPlane3x3 hp = fixtures::halfplane3x3();
    HyperVerdict v = structured_halfplane(hp.r2, hp.r1, hp.r0, hp.j);
    t.expect(v.status == HyperStatus::CertifiedHyperstable,
             "3x3 half-plane instance certified");
    MatrixPolynomial p({hp.r0, hp.r1 + hp.j, hp.r2});
    for (cplx mu : eigenvalues(p).finite)
      t.expect(mu.real() <= 1e-8, "3x3 half-plane instance eigenvalues");
  }

  {  // Monic cubic pencil family: eigenvalues outside the right half-plane.
    RngEngine rng(0x8888888888888888ULL);
    for (int s = 1; s <= 100; ++s) {
      double a = 1.05 + 2.0 * u01(rng);
      double c = -1.0 + 2.0 * u01(rng);
      double b = c + 0.05 + 2.0 * u01(rng);
      int n = 2 + static_cast<int>(rng() % 2);
      Mat rr = random_psd(rng, n) + 0.1 * Mat::Identity(n, n);
      HyperVerdict v = mgt_pencil_route(a, b, c, rr);
      t.expect(v.status == HyperStatus::CertifiedHyperstable,
               "pencil family #" + std::to_string(s) + " certified");
      Mat id = Mat::Identity(n, n);
      MatrixPolynomial p({c * rr, b * rr, a * id, id});
      for (cplx mu : eigenvalues(p).finite)
        t.expect(mu.real() <= 1e-8,
                 "pencil family #" + std::to_string(s) + " eigenvalues");
    }
  }

  r.pass = t.pass();
  r.detail = t.summary(
      "4 x 100 seeded instances + the 3x3 instance, all localized");
  return r;
}

// -------------------------------------------------------------------- 8 ---
CriterionResult crit_norm_gap(std::uint64_t) {
  CriterionResult r{8, "quadratic norm-gap certificates (disc / exterior)",
                    false, false, ""};
  Tally t;

  {  // Constant coefficient dominates on a disc: eigenvalues stay outside.
    RngEngine rng(0x9999999999999999ULL);
    for (int s = 1; s <= 100; ++s) {
      int n = 2 + static_cast<int>(rng() % 2);
      double rad = 0.5 + u01(rng);
      Mat a0 = random_matrix(rng, n, 1.0);
      a0 += (norms(a0).two_norm + 2.0) * Mat::Identity(n, n);
      Mat a1 = random_matrix(rng, n, 1.0);
      Mat a2 = random_matrix(rng, n, 1.0);
      double lhs = rad * norms(a1).two_norm + rad * rad * norms(a2).two_norm;
      if (lhs > 0.0) {
        double scale =
            (0.2 + 0.6 * u01(rng)) * norms(a0).sigma_min / lhs;
        a1 *= scale;
        a2 *= scale;
      }
      Region d = Region::disc(cplx(0.0, 0.0), rad, true);
      HyperVerdict v = poly2_route(a2, a1, a0, d, BivariateVariant::A);
      t.expect(v.status == HyperStatus::CertifiedHyperstable &&
                   v.method && *v.method == CertMethod::Poly2a,
               "disc gap #" + std::to_string(s) + " certified");
      for (cplx mu : eigenvalues(MatrixPolynomial({a0, a1, a2})).finite)
        t.expect(std::abs(mu) >= rad - 1e-8,
                 "disc gap #" + std::to_string(s) + " eigenvalues outside");
    }
  }

  {  // Leading coefficient dominates on a disc exterior: eigenvalues inside.
    RngEngine rng(0xaaaaaaaaaaaaaaabULL);
    for (int s = 1; s <= 100; ++s) {
      int n = 2 + static_cast<int>(rng() % 2);
      double rad = 0.5 + u01(rng);
      Mat a2 = random_matrix(rng, n, 1.0);
      a2 += (norms(a2).two_norm + 2.0) * Mat::Identity(n, n);
      Mat a1 = random_matrix(rng, n, 1.0);
      Mat a0 = random_matrix(rng, n, 1.0);
      double lhs = rad * norms(a1).two_norm + norms(a0).two_norm;
      if (lhs > 0.0) {
        double scale = (0.2 + 0.6 * u01(rng)) * rad * rad *
                       norms(a2).sigma_min / lhs;
        a1 *= scale;
        a0 *= scale;
      }
      Region d = Region::disc_exterior(cplx(0.0, 0.0), rad, true);
      HyperVerdict v = poly2_route(a2, a1, a0, d, BivariateVariant::B);
      t.expect(v.status == HyperStatus::CertifiedHyperstable &&
                   v.method && *v.method == CertMethod::Poly2b,
               "exterior gap #" + std::to_string(s) + " certified");
      for (cplx mu : eigenvalues(MatrixPolynomial({a0, a1, a2})).finite)
        t.expect(std::abs(mu) <= rad + 1e-8,
                 "exterior gap #" + std::to_string(s) + " eigenvalues inside");
    }
  }

  r.pass = t.pass();
  r.detail = t.summary("2 x 100 seeded instances, certificates and "
                       "eigenvalue margins agree");
  return r;
}

// -------------------------------------------------------------------- 9 ---
ExactPolyMatrix random_exact_matrix(RngEngine& rng) {
  ExactPolyMatrix m(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      int kind = static_cast<int>(rng() % 10);
      if (kind < 3) continue;  // leave the entry zero
      int deg = static_cast<int>(rng() % 3);
      std::vector<GaussianRational> cs(static_cast<std::size_t>(deg) + 1);
      for (GaussianRational& c : cs) {
        long re = static_cast<long>(rng() % 7) - 3;
        long im = kind < 6 ? 0 : static_cast<long>(rng() % 7) - 3;
        long den = 1 + static_cast<long>(rng() % 2);
        c = GaussianRational(Rational(re, den), Rational(im, den));
      }
      m.at(i, j) = ExactPolynomial(std::move(cs));
    }
  return m;
}

CriterionResult crit_smith(std::uint64_t seed) {
  CriterionResult r{9, "smith: exact canonical form, random corpus + examples",
                    false, false, ""};
  Tally t;
  RngEngine rng(seed ^ 0xbbbbbbbbbbbbbbbbULL);
  for (int s = 1; s <= 200; ++s) {
    ExactPolyMatrix m = random_exact_matrix(rng);
    const std::string tag = "corpus #" + std::to_string(s);
    SmithResult sr = smith_form(m);
    t.expect(sr.U * m * sr.V == sr.S, tag + " U P V = S");
    t.expect(is_unimodular(sr.U) && is_unimodular(sr.V),
             tag + " U, V unimodular");
    for (std::size_t j = 0; j + 1 < sr.invariant_factors.size(); ++j) {
      const ExactPolynomial& hi = sr.invariant_factors[j];
      const ExactPolynomial& lo = sr.invariant_factors[j + 1];
      if (lo.is_zero()) continue;
      t.expect(divrem(hi, lo).second.is_zero(),
               tag + " divisibility s" + std::to_string(j + 2) + " | s" +
                   std::to_string(j + 1));
    }
    std::vector<ExactPolynomial> oracle = invariant_factors_via_minors(m);
    t.expect(oracle == sr.invariant_factors, tag + " minor-gcd oracle");
  }

  {  // diag(lambda, 1) is already canonical.
    ExactPolyMatrix m(2, 2);
    m.at(0, 0) = ExactPolynomial::monomial(GaussianRational(1, 0), 1);
    m.at(1, 1) = ExactPolynomial::constant(GaussianRational(1, 0));
    SmithResult sr = smith_form(m);
    t.expect(sr.S == m && sr.rank == 2 &&
                 sr.invariant_factors.size() == 2 &&
                 sr.invariant_factors[0] ==
                     ExactPolynomial::monomial(GaussianRational(1, 0), 1) &&
                 sr.invariant_factors[1] ==
                     ExactPolynomial::constant(GaussianRational(1, 0)),
             "diag(lambda, 1) example");
  }
  {  // A unimodular matrix reduces to the identity.
    ExactPolyMatrix m(2, 2);
    m.at(0, 0) = ExactPolynomial::constant(GaussianRational(1, 0));
    m.at(0, 1) = ExactPolynomial::monomial(GaussianRational(1, 0), 2);
    m.at(1, 1) = ExactPolynomial::constant(GaussianRational(1, 0));
    SmithResult sr = smith_form(m);
    t.expect(sr.S == ExactPolyMatrix::identity(2) && sr.rank == 2,
             "unimodular example");
  }
  {  // The singular example: rank 1, s1 = 1.
    ExactPolyMatrix m(2, 2);
    m.at(0, 0) = ExactPolynomial::monomial(GaussianRational(1, 0), 2);
    m.at(0, 1) = ExactPolynomial::monomial(GaussianRational(1, 0), 1);
    m.at(1, 0) = ExactPolynomial::monomial(GaussianRational(1, 0), 1);
    m.at(1, 1) = ExactPolynomial::constant(GaussianRational(1, 0));
    SmithResult sr = smith_form(m);
    ExactPolyMatrix want(2, 2);
    want.at(0, 0) = ExactPolynomial::constant(GaussianRational(1, 0));
    t.expect(sr.S == want && sr.rank == 1 &&
                 sr.invariant_factors.size() == 1 &&
                 sr.invariant_factors[0] ==
                     ExactPolynomial::constant(GaussianRational(1, 0)),
             "singular example");
  }

  r.pass = t.pass();
  r.detail = t.summary("200 random 3x3 matrices + 3 worked examples, exact");
  return r;
}

// ------------------------------------------------------------------- 10 ---
CriterionResult crit_orbit(std::uint64_t) {
  CriterionResult r{10, "orbit witness: S = I reproduces exa, obstruction",
                    false, false, ""};
  Tally t;
  SmithResult sr = smith_form(ExactPolyMatrix::identity(2));
  OrbitWitness ow = orbit_witness(sr, 2);

  ExactPolyMatrix expected(2, 2);
  expected.at(0, 0) = ExactPolynomial::constant(GaussianRational(1, 0));
  expected.at(0, 1) = ExactPolynomial::monomial(GaussianRational(1, 0), 1);
  expected.at(1, 0) = ExactPolynomial::monomial(GaussianRational(1, 0), 1);
  expected.at(1, 1) =
      ExactPolynomial::monomial(GaussianRational(1, 0), 2) +
      ExactPolynomial::constant(GaussianRational(1, 0));
  t.expect(ow.Q == expected, "constructed Q equals the exa matrix exactly");
  t.expect(is_unimodular(ow.F), "F unimodular (exact)");
  t.expect(ow.d == 2, "section degree d = 2");

  MatrixPolynomial qn = ow.Q.to_numeric();
  MatrixPolynomial exa = fixtures::exa();
  bool same = qn.degree() == exa.degree() && qn.size() == exa.size();
  if (same)
    for (int j = 0; j <= qn.degree(); ++j)
      same = same && (qn.coeff(j) - exa.coeff(j)).norm() <= 1e-15;
  t.expect(same, "numeric image matches the exa fixture");

  Vec e2 = Vec::Zero(2);
  e2(1) = cplx(1.0, 0.0);
  DirectionalCertificate dc = directional_certificate(
      qn, e2, Region::disc(cplx(0.0, 0.0), 1.0, true));
  t.expect(dc.status == CertStatus::NoCertificate,
           "engine refuses a certificate at x = e2");
  t.expect(dc.proof.find("Vieta") != std::string::npos,
           "refusal cites the Vieta obstruction");

  r.pass = t.pass();
  r.detail = t.summary("Q = exa exactly, F unimodular, NoCertificate via "
                       "the Vieta obstruction");
  return r;
}

// ------------------------------------------------------------------- 11 ---
CriterionResult crit_derivative_transfer(std::uint64_t seed) {
  CriterionResult r{11, "derivative transfer: scalar sweep + hyper_nsinf",
                    false, false, ""};
  Tally t;

  {  // Scalar sweep: critical points stay in the root hull.
    RngEngine rng(seed ^ 0xccccccccccccccccULL);
    int bad = 0;
    for (int s = 0; s < 500; ++s) {
      int deg = 2 + static_cast<int>(rng() % 7);
      std::vector<cplx> cs(static_cast<std::size_t>(deg) + 1);
      for (cplx& c : cs) c = random_complex(rng, 2.0);
      if (std::abs(cs.back()) < 0.2) cs.back() += cplx(0.7, 0.7);
      if (!gauss_lucas_check(ComplexPolynomial(std::move(cs)))) ++bad;
    }
    t.expect(bad == 0, "scalar sweep: " + std::to_string(bad) +
                           "/500 hull failures");
  }

  MatrixPolynomial p = fixtures::hyper_nsinf(0.01);
  MatrixPolynomial pd = p.derivative();
  Region ext = Region::disc_exterior(cplx(0.0, 0.0), 1.0, false);

  t.expect(entries_linearly_independent(pd).independent,
           "entries of P' linearly independent");

  StabilityResult sp = check_stable(p, ext);
  const bool p_stable = sp.status == StabilityStatus::Stable;
  // The advertised premise. It is mathematically unattainable: det P equals
  // lambda^2 (1 + eps lambda^6 - 3 eps lambda^4), so for every eps > 0 six
  // eigenvalues of modulus about eps^(-1/6) > 1 lie inside {|z| > 1}.
  t.expect(p_stable, "P stable w.r.t. {|z| > 1} (advertised premise)");

  Eigenvalues ev = eigenvalues(p);
  int outside = 0;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (cplx mu : ev.finite)
    if (std::abs(mu) > 1.0) {
      ++outside;
      lo = std::min(lo, std::abs(mu));
      hi = std::max(hi, std::abs(mu));
    }

  StabilityResult spd = check_stable(pd, ext);
  t.expect(spd.status == StabilityStatus::NotStable,
           "P' unstable w.r.t. {|z| > 1}");

  HyperVerdict hv = check_hyperstable(p, ext);
  t.expect(hv.status != HyperStatus::CertifiedHyperstable,
           "engine never certifies P");

  r.pass = t.pass();
  // The premise is the only sub-check allowed to fail; when it is indeed the
  // only failure, mark the criterion as the documented deviation.
  r.expected_failure = !p_stable && t.failures == 1;
  std::ostringstream os;
  os << "sweep 500/500; P' independent and unstable; engine verdict "
     << to_string(hv.status) << "; premise check: " << outside
     << " eigenvalues of modulus " << fmt(lo) << ".." << fmt(hi)
     << " lie inside {|z| > 1}, so the advertised stability of P fails "
        "for every eps > 0 (documented deviation)";
  r.detail = r.expected_failure ? os.str() : t.summary(os.str());
  return r;
}

// ------------------------------------------------------------------- 12 ---
CriterionResult crit_implication_chain(std::uint64_t) {
  CriterionResult r{12, "implication chain: range => hyperstable => stable",
                    false, false, ""};
  Tally t;
  SearchBudget small;
  small.x_samples = 8;
  small.y_starts = 16;
  small.det_min_starts = 8;
  small.grid_size = 1024;

  std::vector<std::pair<std::string, MatrixPolynomial>> corpus;
  corpus.emplace_back("exa", fixtures::exa());
  corpus.emplace_back("sing", fixtures::sing());
  corpus.emplace_back("nonGL", fixtures::nonGL());
  corpus.emplace_back("hyper_nsinf", fixtures::hyper_nsinf(0.01));
  corpus.emplace_back("sector#1", fixtures::cube(1));
  corpus.emplace_back("quad#1", fixtures::quad(1));
  corpus.emplace_back("mgt", fixtures::mgt(2.0, 3.0, 1.0).p);
  corpus.emplace_back("orbits#3", fixtures::orbits(3).Q.to_numeric());

  std::vector<std::pair<std::string, Region>> regions;
  regions.emplace_back("closed unit disc",
                       Region::disc(cplx(0.0, 0.0), 1.0, true));
  regions.emplace_back("closed unit disc exterior",
                       Region::disc_exterior(cplx(0.0, 0.0), 1.0, true));
  regions.emplace_back("upper half-plane", Region::upper_half_plane());

  int runs = 0;
  for (const auto& [pname, p] : corpus)
    for (const auto& [dname, d] : regions) {
      ++runs;
      const std::string tag = pname + " / " + dname;
      StabilityResult st = check_stable(p, d);
      NumRangeVerdict nr = wp_disjoint_from(p, d);
      HyperVerdict hv = check_hyperstable(p, d, small);
      t.expect(!(nr.status == RangeStatus::Disjoint &&
                 st.status == StabilityStatus::NotStable),
               tag + ": range disjoint yet not stable");
      t.expect(!(nr.status == RangeStatus::Disjoint &&
                 st.status == StabilityStatus::Singular),
               tag + ": range disjoint yet singular");
      t.expect(!(hv.status == HyperStatus::CertifiedHyperstable &&
                 st.status != StabilityStatus::Stable),
               tag + ": certified hyperstable yet not stable");
      t.expect(!(hv.status == HyperStatus::Falsified &&
                 nr.status == RangeStatus::Disjoint),
               tag + ": falsified yet range disjoint");
    }

  r.pass = t.pass();
  r.detail = t.summary(std::to_string(runs) +
                       " (polynomial, region) runs, no implication violated");
  return r;
}

}  // namespace

std::string render_line(const CriterionResult& r) {
  std::ostringstream os;
  os << "[" << std::setw(2) << r.id << "/12] "
     << (r.pass ? "PASS"
                : (r.expected_failure ? "FAIL (documented deviation)"
                                      : "FAIL"))
     << "  " << r.name;
  if (!r.detail.empty()) os << "\n        " << r.detail;
  return os.str();
}

std::vector<CriterionResult> run_all(std::uint64_t seed, std::ostream* log) {
  using CritFn = CriterionResult (*)(std::uint64_t);
  const CritFn fns[] = {
      crit_exa,        crit_comp,     crit_ones,
      crit_cmv,        crit_nonstab,  crit_inequalities,
      crit_structured, crit_norm_gap, crit_smith,
      crit_orbit,      crit_derivative_transfer, crit_implication_chain,
  };
  std::vector<CriterionResult> out;
  int id = 0;
  for (CritFn fn : fns) {
    ++id;
    CriterionResult r;
    try {
      r = fn(seed);
    } catch (const std::exception& e) {
      r.id = id;
      r.name = "criterion " + std::to_string(id);
      r.pass = false;
      r.detail = std::string("unexpected exception: ") + e.what();
    }
    if (log) *log << render_line(r) << std::endl;
    out.push_back(std::move(r));
  }
  return out;
}

bool report(std::ostream& os, const std::vector<CriterionResult>& results) {
  int passed = 0, expected = 0, failed = 0;
  for (const CriterionResult& r : results) {
    os << render_line(r) << "\n";
    if (r.pass)
      ++passed;
    else if (r.expected_failure)
      ++expected;
    else
      ++failed;
  }
  os << passed << " passed";
  if (expected) os << ", " << expected << " expected failure(s) (documented)";
  if (failed) os << ", " << failed << " FAILED";
  os << " out of " << results.size() << "\n";
  return failed == 0;
}

}  // namespace polystab::selftest
