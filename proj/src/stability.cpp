// Engine implementation: exact region stability through determinant roots,
// directional certificates with the Vieta obstruction, the layered
// hyperstability pipeline, block-triangular and bivariate routes, and the
// structured PSD / skew-Hermitian coefficient families.
#include "polystab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "polystab/multi_poly.hpp"
#include "polystab/rng.hpp"

namespace polystab {

namespace {

constexpr double kHuge = 1e100;

std::string fmt(cplx z) {
  std::ostringstream os;
  os.precision(6);
  os << std::real(z);
  os << (std::imag(z) < 0.0 ? " - " : " + ") << std::abs(std::imag(z)) << "i";
  return os.str();
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

ComplexPolynomial section_from(const Vec& c) {
  std::vector<cplx> coeffs(static_cast<size_t>(c.size()));
  for (int i = 0; i < c.size(); ++i) coeffs[static_cast<size_t>(i)] = c(i);
  return ComplexPolynomial(std::move(coeffs));
}

/// Is m Hermitian within a relative tolerance?
bool is_hermitian(const Mat& m, double tol) {
  return (m - m.adjoint()).norm() <= tol * std::max(1.0, m.norm());
}

bool is_skew_hermitian(const Mat& m, double tol) {
  return (m + m.adjoint()).norm() <= tol * std::max(1.0, m.norm());
}

/// Smallest eigenvalue of a Hermitian matrix; requires is_hermitian first.
double min_eig(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  return es.eigenvalues().minCoeff();
}

bool is_psd(const Mat& m, double tol) {
  if (!is_hermitian(m, tol)) return false;
  return min_eig((m + m.adjoint()) / 2.0) >= -tol * std::max(1.0, m.norm());
}

void require_hermitian_psd(const Mat& m, const char* name, double tol) {
  if (!is_hermitian(m, tol))
    throw HypothesisViolated(std::string(name) + " must be Hermitian");
  double me = min_eig((m + m.adjoint()) / 2.0);
  if (me < -tol * std::max(1.0, m.norm()))
    throw HypothesisViolated(std::string(name) +
                             " must be positive semidefinite (min eigenvalue " +
                             fmt(me) + ")");
}

/// Smallest singular value of the stacked matrices, relative to the largest:
/// positive iff the joint kernel is trivial.
double joint_kernel_gap(const std::vector<Mat>& ms) {
  const int n = static_cast<int>(ms.front().cols());
  Mat stack(static_cast<int>(ms.size()) * n, n);
  for (size_t i = 0; i < ms.size(); ++i)
    stack.middleRows(static_cast<int>(i) * n, n) = ms[i];
  Eigen::JacobiSVD<Mat> svd(stack);
  double smax = svd.singularValues()(0);
  if (smax == 0.0) return 0.0;
  return svd.singularValues()(svd.singularValues().size() - 1) / smax;
}

// --- region inclusion helpers (conservative: false when unsure) -----------

/// inner subset of the open half-plane {im(lambda e^{i phi}) > 0}?
bool subset_of_halfplane(const Region& inner, double phi) {
  switch (inner.kind) {
    case RegionKind::Disc: {
      if (inner.radius < 0.0) return false;
      double m = std::imag(inner.center * std::polar(1.0, phi)) - inner.radius;
      return inner.closed ? m > 0.0 : m >= 0.0;
    }
    case RegionKind::HalfPlane: {
      if (std::abs(wrap_angle(inner.phi - phi)) > 1e-12) return false;
      return inner.offset > 0.0 || (inner.offset == 0.0 && !inner.closed);
    }
    case RegionKind::Sector: {
      if (inner.contains_zero) return false;
      double lo = inner.arg_lo + phi, hi = inner.arg_hi + phi;
      if (hi - lo >= pi) return false;
      // slide the interval so that lo lands in [0, 2 pi)
      double shift = std::floor(lo / (2.0 * pi)) * 2.0 * pi;
      lo -= shift;
      hi -= shift;
      return inner.closed ? (lo > 0.0 && hi < pi) : (lo >= 0.0 && hi <= pi);
    }
    case RegionKind::DiscExterior:
      return false;  // unbounded in every direction
  }
  return false;
}

/// inner subset of an open sector that excludes the origin?
bool subset_of_open_sector(const Region& inner, const Region& outer) {
  auto angles_within = [&](double a, double b, bool attained) {
    // align [a, b] with the outer sector's branch
    double omid = 0.5 * (outer.arg_lo + outer.arg_hi);
    double shift = std::round((omid - 0.5 * (a + b)) / (2.0 * pi)) * 2.0 * pi;
    a += shift;
    b += shift;
    if (attained) return a > outer.arg_lo && b < outer.arg_hi;
    return a >= outer.arg_lo && b <= outer.arg_hi;
  };
  switch (inner.kind) {
    case RegionKind::Sector:
      if (inner.contains_zero && !outer.contains_zero) return false;
      return angles_within(inner.arg_lo, inner.arg_hi, inner.closed);
    case RegionKind::Disc: {
      double ac = std::abs(inner.center);
      if (inner.radius < 0.0) return false;
      if (inner.closed ? ac <= inner.radius : ac < inner.radius)
        return false;  // contains (or touches) the origin
      if (ac == 0.0) return false;
      double dev = std::asin(std::min(1.0, inner.radius / ac));
      double a = std::arg(inner.center);
      return angles_within(a - dev, a + dev, inner.closed);
    }
    default:
      return false;  // half-planes / exteriors never fit an angular wedge
  }
}

bool subset_of(const Region& inner, const Region& outer) {
  if (outer.kind == RegionKind::HalfPlane && outer.offset == 0.0 &&
      !outer.closed)
    return subset_of_halfplane(inner, outer.phi);
  if (outer.kind == RegionKind::Sector && !outer.closed)
    return subset_of_open_sector(inner, outer);
  return false;
}

// --- root classification with explicit uncertainty -------------------------

struct RootClass {
  bool any_certified_in = false;
  bool all_certified_out = true;
  bool ambiguous = false;
  double min_outside = kHuge;  // smallest certified distance outside D
  cplx inside_root{0.0, 0.0};
};

/// Classify each root of s against D, treating tau as the root-location
/// uncertainty. Sector margins are angular, so the uncertainty is divided by
/// the root's modulus there.
RootClass classify_roots(const ComplexPolynomial& s, const Region& d,
                         double tau) {
  RootClass rc;
  if (s.degree() < 1) return rc;  // constants have no roots
  RootSet rs = roots(s);
  for (cplx r : rs.roots) {
    double u = tau;
    RegionMargin mm = d.margin(r);
    if (d.kind == RegionKind::Sector) {
      double ar = std::abs(r);
      if (mm.degenerate || ar <= tau) {
        rc.ambiguous = true;
        rc.all_certified_out = false;
        continue;
      }
      u = tau / ar;
    }
    double m = mm.value;
    bool cin = d.closed ? (m - u >= 0.0) : (m - u > 0.0);
    bool cout = d.closed ? (m + u < 0.0) : (m + u <= 0.0);
    if (cin) {
      rc.any_certified_in = true;
      rc.all_certified_out = false;
      rc.inside_root = r;
    } else if (cout) {
      rc.min_outside = std::min(rc.min_outside, -(m + u));
    } else {
      rc.ambiguous = true;
      rc.all_certified_out = false;
    }
  }
  return rc;
}

/// Signed search score for a candidate section: min over roots of the
/// distance outside D (negative when some root is inside); +huge for
/// nonzero constants, -huge for the zero section.
double section_score(const ComplexPolynomial& s, const Region& d) {
  if (s.is_zero()) return -kHuge;
  if (s.degree() < 1) return kHuge;
  RootSet rs = roots(s);
  double sc = kHuge;
  for (cplx r : rs.roots) {
    RegionMargin mm = d.margin(r);
    double m = mm.degenerate ? 0.0 : mm.value;
    sc = std::min(sc, -m);
  }
  return sc;
}

SparseMVMatrixPoly shape_to_sparse(const BivariateShape& shape, int n) {
  SparseMVMatrixPoly q(2, n);
  for (const auto& [e, a] : shape.terms) q.add_term({e.first, e.second}, a);
  return q;
}

}  // namespace

std::string to_string(HyperStatus s) {
  switch (s) {
    case HyperStatus::CertifiedHyperstable:
      return "CertifiedHyperstable";
    case HyperStatus::Falsified:
      return "Falsified";
    case HyperStatus::StableOnly:
      return "StableOnly";
    case HyperStatus::NotStable:
      return "NotStable";
    case HyperStatus::Unknown:
      return "Unknown";
  }
  return "Unknown";
}

std::string to_string(CertMethod m) {
  switch (m) {
    case CertMethod::NumericalRange:
      return "NumericalRange";
    case CertMethod::PencilForm:
      return "PencilForm";
    case CertMethod::BlockTriangular:
      return "BlockTriangular";
    case CertMethod::Poly2a:
      return "Poly2(a)";
    case CertMethod::Poly2b:
      return "Poly2(b)";
    case CertMethod::Poly2c:
      return "Poly2(c)";
    case CertMethod::Poly3a:
      return "Poly3(a)";
    case CertMethod::Poly3b:
      return "Poly3(b)";
    case CertMethod::Poly3c:
      return "Poly3(c)";
    case CertMethod::HalfPlaneStructured:
      return "HalfPlaneStructured";
    case CertMethod::DirectionalSearch:
      return "DirectionalSearch";
  }
  return "DirectionalSearch";
}

// ---------------------------------------------------------------------------
// Stability
// ---------------------------------------------------------------------------

StabilityResult check_stable(const MatrixPolynomial& p, const Region& d,
                             const Tolerances& tols) {
  StabilityResult out;
  if (p.is_zero() || p.size() == 0) {
    out.status = StabilityStatus::Singular;
    return out;
  }
  ComplexPolynomial det = determinant(p, tols.tau_det);
  if (det.is_zero()) {
    out.status = StabilityStatus::Singular;
    return out;
  }
  if (det.degree() == 0) return out;  // constant nonzero determinant
  RootSet rs = roots(det);
  double best = -kHuge;
  cplx worst{0.0, 0.0};
  for (cplx r : rs.roots) {
    if (d.boundary_sensitive(r, tols.tau_bnd)) out.boundary_sensitive = true;
    if (d.contains(r)) {
      double m = d.margin(r).value;
      if (m > best) {
        best = m;
        worst = r;
      }
    }
  }
  if (best > -kHuge) {
    out.status = StabilityStatus::NotStable;
    out.eigenvalue_in_region = worst;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pencil form
// ---------------------------------------------------------------------------

std::optional<PencilFormDecomposition> detect_pencil_form(
    const MatrixPolynomial& p, double tau_rank) {
  if (p.is_zero() || p.size() == 0) return std::nullopt;
  const int n = p.size(), d = p.degree();
  Mat stack(n * n, d + 1);
  for (int j = 0; j <= d; ++j) {
    Mat a = p.coeff(j);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) stack(r * n + c, j) = a(r, c);
  }
  Eigen::JacobiSVD<Mat> svd(stack, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  double s0 = sv.size() > 0 ? sv(0) : 0.0;
  if (s0 == 0.0) return std::nullopt;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > tau_rank * s0) ++rank;
  if (rank > 2 || rank == 0) return std::nullopt;

  auto unvec = [&](const Vec& v) {
    Mat m(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) m(r, c) = v(r * n + c);
    return m;
  };
  PencilFormDecomposition dec;
  dec.rank = rank;
  Vec u1 = svd.matrixU().col(0);
  dec.A = unvec(u1);
  std::vector<cplx> pc(static_cast<size_t>(d) + 1), qc(static_cast<size_t>(d) + 1, cplx(0.0, 0.0));
  for (int j = 0; j <= d; ++j) pc[static_cast<size_t>(j)] = u1.dot(stack.col(j));
  if (rank == 2) {
    Vec u2 = svd.matrixU().col(1);
    dec.B = unvec(u2);
    for (int j = 0; j <= d; ++j) qc[static_cast<size_t>(j)] = u2.dot(stack.col(j));
  } else {
    dec.B = Mat::Zero(n, n);
  }
  dec.p = ComplexPolynomial(pc);
  dec.q = ComplexPolynomial(qc);
  double tail = 0.0;
  for (int i = rank; i < sv.size(); ++i) tail += sv(i) * sv(i);
  dec.residual = std::sqrt(tail) / s0;
  return dec;
}

// ---------------------------------------------------------------------------
// Directional certificates
// ---------------------------------------------------------------------------

DirectionalProblem directional_problem(const MatrixPolynomial& p, const Vec& x,
                                       double tau_rank) {
  if (p.is_zero() || p.size() == 0)
    throw ShapeMismatch("directional_problem: the zero polynomial has no sections");
  if (x.size() != p.size())
    throw ShapeMismatch("directional_problem: x has the wrong dimension");
  double nx = x.norm();
  if (nx == 0.0) throw ShapeMismatch("directional_problem: x must be nonzero");

  DirectionalProblem dp;
  dp.x = x / nx;
  const int n = p.size(), d = p.degree();
  dp.V = Mat(n, d + 1);
  for (int j = 0; j <= d; ++j) dp.V.col(j) = p.coeff(j) * dp.x;
  Eigen::JacobiSVD<Mat> svd(dp.V, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  double s0 = sv.size() > 0 ? sv(0) : 0.0;
  int r = 0;
  if (s0 > 0.0)
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > tau_rank * s0) ++r;
  dp.r = r;
  dp.S = svd.matrixV().leftCols(r).conjugate();
  return dp;
}

namespace {

/// Exact no-certificate pattern on discs and disc exteriors for a rank-2
/// achievable space. In the normalized variable w with lambda = gamma + rho w
/// the region becomes the unit disc (or its exterior); when the constant and
/// effective-top coefficient functionals are proportional on the achievable
/// plane, Vieta's product identity pins a root inside the region for every
/// candidate section.
std::optional<std::string> vieta_obstruction(const DirectionalProblem& dp,
                                             const Region& d, double tau) {
  if (d.radius <= 0.0) return std::nullopt;
  const cplx gamma = d.center;
  const double rho = d.radius;
  ComplexPolynomial s1 = section_from(dp.S.col(0));
  ComplexPolynomial s2 = section_from(dp.S.col(1));
  if (s1.is_zero() || s2.is_zero()) return std::nullopt;
  ComplexPolynomial t1 = s1.compose_affine(rho, gamma);
  ComplexPolynomial t2 = s2.compose_affine(rho, gamma);
  // Common roots certified outside the normalized region divide out of every
  // section without changing where sections vanish inside it; removing them
  // exposes the product pattern when the basis shares a zero-free factor.
  if (t1.degree() >= 1 && t2.degree() >= 1) {
    std::vector<cplx> keep1 = roots(t1).roots, keep2 = roots(t2).roots;
    bool deflated = false;
    for (cplx r : std::vector<cplx>(keep1)) {
      size_t best = keep2.size();
      double bd = 1e-7 * (1.0 + std::abs(r));
      for (size_t i = 0; i < keep2.size(); ++i)
        if (std::abs(keep2[i] - r) < bd) {
          bd = std::abs(keep2[i] - r);
          best = i;
        }
      if (best == keep2.size()) continue;
      bool outside = d.kind == RegionKind::Disc ? std::abs(r) > 1.0 + 1e-6
                                                : std::abs(r) < 1.0 - 1e-6;
      if (!outside) continue;
      auto it = std::find_if(keep1.begin(), keep1.end(),
                             [&](cplx k) { return k == r; });
      if (it == keep1.end()) continue;
      keep1.erase(it);
      keep2.erase(keep2.begin() + static_cast<std::ptrdiff_t>(best));
      deflated = true;
    }
    if (deflated) {
      t1 = ComplexPolynomial::from_roots(keep1, t1.leading());
      t2 = ComplexPolynomial::from_roots(keep2, t2.leading());
    }
  }
  const int dd = std::max(t1.degree(), t2.degree());
  if (dd < 1) return std::nullopt;
  double oscale = 0.0;
  for (int k = 0; k <= dd; ++k)
    oscale = std::max(oscale,
                      std::hypot(std::abs(t1.coeff(k)), std::abs(t2.coeff(k))));
  if (oscale == 0.0) return std::nullopt;
  int ktop = -1;
  for (int k = dd; k >= 1; --k) {
    if (std::hypot(std::abs(t1.coeff(k)), std::abs(t2.coeff(k))) >
        1e-12 * oscale) {
      ktop = k;
      break;
    }
  }
  if (ktop < 1) return std::nullopt;
  const cplx a01 = t1.coeff(0), a02 = t2.coeff(0);
  const cplx at1 = t1.coeff(ktop), at2 = t2.coeff(ktop);
  const double n0 = std::hypot(std::abs(a01), std::abs(a02));

  if (d.kind == RegionKind::Disc) {
    if (n0 <= 1e-12 * oscale) {
      std::ostringstream os;
      os << "every achievable section vanishes at the disc center " << fmt(gamma)
         << ", which lies in D";
      return os.str();
    }
    cplx cross = a01 * at2 - a02 * at1;
    if (std::abs(cross) > 1e-12 * oscale * oscale) return std::nullopt;
    cplx eta = std::abs(a01) >= std::abs(a02) ? at1 / a01 : at2 / a02;
    double ae = std::abs(eta);
    bool fires = d.closed ? (ae >= 1.0 - 1e-12) : (ae >= 1.0 + 1e-12);
    if (!fires) return std::nullopt;
    std::ostringstream os;
    os << "Vieta obstruction: in the disc-normalized variable every achievable "
          "section has top coefficient = eta * constant coefficient with |eta| = "
       << fmt(ae)
       << " >= 1, so the root product has modulus <= 1 and some root lies in "
          "the disc (sections with zero constant term vanish at the center)";
    return os.str();
  }

  // Disc exterior.
  if (n0 <= 1e-12 * oscale) return std::nullopt;  // all sections vanish at the
                                                  // center of the hole: harmless
  cplx cross = a01 * at2 - a02 * at1;
  if (std::abs(cross) > 1e-12 * oscale * oscale) return std::nullopt;
  cplx eta = std::abs(a01) >= std::abs(a02) ? at1 / a01 : at2 / a02;
  double ae = std::abs(eta);
  bool fires = d.closed ? (ae <= 1.0 + 1e-12) : (ae < 1.0 - 1e-12);
  if (!fires) return std::nullopt;
  // Sections in the kernel of the constant functional escape the product
  // argument (their normalized constant term is zero); the kernel is one
  // line, and the obstruction is complete only if that line also fails.
  Vec ker = (-a02) * dp.S.col(0) + a01 * dp.S.col(1);
  ComplexPolynomial g = section_from(ker);
  if (!g.is_zero()) {
    RootClass rc = classify_roots(g, d, tau);
    if (!rc.any_certified_in) return std::nullopt;
  }
  std::ostringstream os;
  os << "Vieta obstruction: in the normalized variable every achievable "
        "section with nonzero value at the excluded center has top coefficient "
        "= eta * constant coefficient with |eta| = "
     << fmt(ae)
     << " <= 1, so the root product has modulus >= 1 and some root lies in the "
        "exterior; the one remaining line of sections has a certified root in D";
  return os.str();
}

}  // namespace

DirectionalCertificate directional_certificate(const MatrixPolynomial& p,
                                               const Vec& x, const Region& d,
                                               const SearchBudget& budget) {
  DirectionalProblem dp = directional_problem(p, x, 1e-10);
  DirectionalCertificate cert;
  cert.rank = dp.r;
  const double tau = 1e-9;

  // Reconstruct y from a coefficient vector (least squares on V^T conj(y) = c)
  // and re-verify the achieved section through the public stability checker.
  auto accept = [&](const Vec& c) -> bool {
    ComplexPolynomial s = section_from(c);
    if (s.is_zero()) return false;
    RootClass rc = classify_roots(s, d, tau);
    if (rc.any_certified_in || !rc.all_certified_out) return false;
    Vec w = dp.V.transpose().completeOrthogonalDecomposition().solve(c);
    double resid = (dp.V.transpose() * w - c).norm();
    if (resid > 1e-10 * std::max(1.0, c.norm())) return false;
    Vec y = w.conjugate();
    double ny = y.norm();
    if (ny == 0.0) return false;
    y /= ny;
    Vec achieved = dp.V.transpose() * y.conjugate();
    ComplexPolynomial sa = section_from(achieved);
    if (sa.is_zero()) return false;
    if (!stability_check(sa, d, tau).stable) return false;
    RootClass rca = classify_roots(sa, d, tau);
    if (rca.any_certified_in || !rca.all_certified_out) return false;
    cert.status = CertStatus::Certificate;
    cert.y = y;
    cert.section = sa;
    cert.margin = rca.min_outside;
    cert.proof = "all roots of the achieved section are certified outside D";
    return true;
  };

  if (dp.r == 0) {
    cert.status = CertStatus::NoCertificate;
    cert.proof =
        "P(lambda)x vanishes identically: every section is the zero polynomial";
    return cert;
  }

  if (dp.r == 1) {
    ComplexPolynomial g = section_from(dp.S.col(0));
    RootClass rc = classify_roots(g, d, tau);
    if (rc.any_certified_in) {
      std::ostringstream os;
      os << "the achievable sections form a single line; its generator has a "
            "root at "
         << fmt(rc.inside_root) << " inside D";
      cert.status = CertStatus::NoCertificate;
      cert.proof = os.str();
      cert.section = g;
      return cert;
    }
    if (rc.all_certified_out && accept(dp.S.col(0))) return cert;
    cert.status = CertStatus::Unknown;
    cert.proof =
        "the rank-1 generator has a root too close to the boundary of D to "
        "classify";
    return cert;
  }

  // Cheap canonical candidates first: the basis sections, simple two-term
  // combinations (rank 2), coordinate directions for y, and y = A_j x (the
  // constructions used by the quadratic routes).
  {
    std::vector<Vec> cands;
    for (int k = 0; k < dp.r; ++k) cands.push_back(dp.S.col(k));
    if (dp.r >= 2) {
      Vec b1 = dp.S.col(0), b2 = dp.S.col(1);
      cands.push_back(b1 + b2);
      cands.push_back(b1 - b2);
      cands.push_back(b1 + cplx(0, 1) * b2);
      cands.push_back(b1 - cplx(0, 1) * b2);
    }
    const int n = p.size();
    for (int k = 0; k < n; ++k) {
      Vec y = Vec::Zero(n);
      y(k) = 1.0;
      cands.push_back(dp.V.transpose() * y.conjugate());
    }
    for (int j = 0; j < dp.V.cols(); ++j)
      cands.push_back(dp.V.transpose() * Vec(dp.V.col(j)).conjugate());
    for (const Vec& c : cands)
      if (c.norm() > 0.0 && accept(c)) return cert;
  }

  if (dp.r == 2) {
    Vec b1 = dp.S.col(0), b2 = dp.S.col(1);
    // Two-chart sweep of the section projective line: c = b1 + t b2 and
    // c = t b1 + b2 with |t| <= 1 jointly cover every ratio.
    const int grid = std::max(64, budget.grid_size);
    const int nr = std::max(4, static_cast<int>(std::sqrt(grid / 32.0)));
    const int nt = std::max(16, grid / (2 * nr));
    double best = -kHuge;
    int best_chart = 0;
    cplx best_t{0.0, 0.0};
    auto consider = [&](int chart, cplx t) {
      Vec c = chart == 0 ? Vec(b1 + t * b2) : Vec(t * b1 + b2);
      double sc = section_score(section_from(c), d);
      if (sc > best) {
        best = sc;
        best_chart = chart;
        best_t = t;
      }
    };
    for (int chart = 0; chart < 2; ++chart) {
      consider(chart, cplx(0.0, 0.0));
      for (int ir = 0; ir < nr; ++ir) {
        double rr = std::tan((ir + 0.5) / nr * (pi / 4.0));
        for (int it = 0; it < nt; ++it)
          consider(chart, std::polar(rr, 2.0 * pi * it / nt));
      }
    }
    // local refinement around the best parameter
    double step = 0.25;
    for (int round = 0; round < std::max(8, budget.refine_iters); ++round) {
      bool improved = false;
      for (int k = 0; k < 8; ++k) {
        cplx t2 = best_t + std::polar(step, k * pi / 4.0);
        if (std::abs(t2) > 1.25) continue;
        double prev = best;
        consider(best_chart, t2);
        if (best > prev) improved = true;
      }
      if (!improved) step *= 0.5;
      if (step < 1e-6) break;
    }
    if (best > tau) {
      Vec c = best_chart == 0 ? Vec(b1 + best_t * b2) : Vec(best_t * b1 + b2);
      if (accept(c)) return cert;
    }
    if (d.kind == RegionKind::Disc || d.kind == RegionKind::DiscExterior) {
      if (auto obs = vieta_obstruction(dp, d, tau)) {
        cert.status = CertStatus::NoCertificate;
        cert.proof = *obs;
        return cert;
      }
    }
    cert.status = CertStatus::Unknown;
    cert.proof =
        "rank-2 sweep found no certified-stable section and no algebraic "
        "obstruction applies";
    return cert;
  }

  // r >= 3: multistart maximization of the stability score over the unit
  // sphere of the achievable coefficient space. Certificates only.
  {
    RngEngine rng(budget.seed);
    double best = -kHuge;
    Vec bestw;
    const int starts = std::max(8, budget.y_starts);
    for (int s = 0; s < starts; ++s) {
      Vec w = random_unit_vector(rng, dp.r);
      if (s < dp.r) {
        w = Vec::Zero(dp.r);
        w(s) = 1.0;
      }
      double sc = section_score(section_from(Vec(dp.S * w)), d);
      double step = 0.5;
      for (int it = 0; it < budget.refine_iters; ++it) {
        bool improved = false;
        for (int k = 0; k < dp.r; ++k) {
          for (int q = 0; q < 4; ++q) {
            Vec w2 = w;
            w2(k) += step * std::polar(1.0, q * pi / 2.0);
            w2.normalize();
            double sc2 = section_score(section_from(Vec(dp.S * w2)), d);
            if (sc2 > sc) {
              sc = sc2;
              w = w2;
              improved = true;
            }
          }
        }
        if (!improved) {
          step *= 0.5;
          if (step < 1e-6) break;
        }
      }
      if (sc > best) {
        best = sc;
        bestw = w;
      }
      if (best > tau && accept(Vec(dp.S * bestw))) return cert;
    }
    if (best > tau && accept(Vec(dp.S * bestw))) return cert;
    cert.status = CertStatus::Unknown;
    std::ostringstream os;
    os << "rank-" << dp.r
       << " search found no certified-stable section (best score " << fmt(best)
       << "); absence of a certificate is not provable by search here";
    cert.proof = os.str();
    return cert;
  }
}

// ---------------------------------------------------------------------------
// The layered engine
// ---------------------------------------------------------------------------

namespace {

/// Non-throwing recognition of the half-plane structure for the engine.
std::optional<HyperVerdict> try_structured_halfplane(const Mat& a2,
                                                     const Mat& a1,
                                                     const Mat& a0) {
  const double tol = 1e-10;
  if (!is_psd(a2, tol) || !is_psd(a0, tol)) return std::nullopt;
  Mat r1 = (a1 + a1.adjoint()) / 2.0;
  Mat j = (a1 - a1.adjoint()) / 2.0;
  if (!is_psd(r1, tol)) return std::nullopt;
  if (joint_kernel_gap({a0, r1, a2, j}) <= 1e-10) return std::nullopt;
  return structured_halfplane(a2, r1, a0, j);
}

std::optional<HyperVerdict> try_psd_palindromic(const Mat& r0, const Mat& r2,
                                                const Mat& r1) {
  const double tol = 1e-10;
  if (!is_psd(r0, tol) || !is_psd(r1, tol) || !is_psd(r2, tol))
    return std::nullopt;
  if (joint_kernel_gap({r0, r1, r2}) <= 1e-10) return std::nullopt;
  return psd_palindromic_cubic(r0, r2, r1);
}

}  // namespace

HyperVerdict check_hyperstable(const MatrixPolynomial& p, const Region& d,
                               const SearchBudget& budget) {
  HyperVerdict v;
  if (p.is_zero() || p.size() == 0) {
    v.status = HyperStatus::Falsified;
    v.evidence.push_back("the zero polynomial admits no nonzero section");
    return v;
  }
  const int n = p.size();
  Tolerances tols;

  // Layer 1: stability is necessary, and singularity falsifies outright.
  StabilityResult st = check_stable(p, d, tols);
  if (st.status == StabilityStatus::Singular) {
    cplx mu = d.interior_point();
    Eigen::JacobiSVD<Mat> svd(p.evaluate(mu), Eigen::ComputeFullV);
    Vec x = svd.matrixV().col(n - 1);
    v.status = HyperStatus::Falsified;
    v.falsifier = x;
    v.evidence.push_back(
        "P is singular (det P == 0); at mu = " + fmt(mu) +
        " in D the kernel direction x makes every section vanish");
    return v;
  }
  if (st.status == StabilityStatus::NotStable) {
    v.status = HyperStatus::NotStable;
    v.eigenvalue_in_region = st.eigenvalue_in_region;
    v.evidence.push_back("an eigenvalue of P lies inside D: " +
                         fmt(*st.eigenvalue_in_region));
    return v;
  }
  v.evidence.push_back("stability verified: no eigenvalue of P lies in D");
  if (st.boundary_sensitive)
    v.evidence.push_back(
        "note: an eigenvalue sits within tolerance of the boundary of D");

  // Layer 2: rank <= 2 coefficient span.
  if (auto pf = detect_pencil_form(p)) {
    std::ostringstream os;
    os << "P(lambda) = p(lambda) A + q(lambda) B (coefficient span rank "
       << pf->rank << ", residual " << fmt(pf->residual)
       << "): hyperstability coincides with stability";
    v.status = HyperStatus::CertifiedHyperstable;
    v.method = CertMethod::PencilForm;
    v.evidence.push_back(os.str());
    return v;
  }

  // Layer 3: numerical range disjointness.
  {
    DisjointnessBudget db;
    db.seed = budget.seed;
    db.restarts = std::max(8, budget.det_min_starts);
    db.query.theta_grid = budget.theta_grid;
    db.query.refine_iters = budget.refine_iters;
    NumRangeVerdict nr = wp_disjoint_from(p, d, db);
    if (nr.status == RangeStatus::Disjoint) {
      v.status = HyperStatus::CertifiedHyperstable;
      v.method = CertMethod::NumericalRange;
      v.evidence.push_back("W(P) is disjoint from D (certificate: " +
                           nr.certificate + ", supporting margin " +
                           fmt(nr.worst_margin) + ")");
      return v;
    }
  }

  // Layer 4: structural routes by shape.
  if (p.degree() == 2) {
    if (d.kind == RegionKind::Disc && d.radius > 0.0) {
      MatrixPolynomial sh = p.substitute_affine(1.0, d.center);
      double lhs = d.radius * norms(sh.coeff(1)).two_norm +
                   d.radius * d.radius * norms(sh.coeff(2)).two_norm;
      double rhs = norms(sh.coeff(0)).sigma_min;
      if (lhs < rhs) {
        std::ostringstream os;
        os << "norm gap on the recentred disc: r||A1|| + r^2||A2|| = "
           << fmt(lhs) << " < sigma_min(A0) = " << fmt(rhs)
           << "; the variant-a bivariate polynomial is stable on D^2";
        v.status = HyperStatus::CertifiedHyperstable;
        v.method = CertMethod::Poly2a;
        v.region = d;
        v.evidence.push_back(os.str());
        return v;
      }
    }
    if (d.kind == RegionKind::DiscExterior && d.radius > 0.0) {
      MatrixPolynomial sh = p.substitute_affine(1.0, d.center);
      double lhs = d.radius * norms(sh.coeff(1)).two_norm +
                   norms(sh.coeff(0)).two_norm;
      double rhs = d.radius * d.radius * norms(sh.coeff(2)).sigma_min;
      if (lhs < rhs) {
        std::ostringstream os;
        os << "norm gap on the recentred disc exterior: r||A1|| + ||A0|| = "
           << fmt(lhs) << " < r^2 sigma_min(A2) = " << fmt(rhs)
           << "; the variant-b bivariate polynomial is stable on D^2 and 0 is "
              "excluded";
        v.status = HyperStatus::CertifiedHyperstable;
        v.method = CertMethod::Poly2b;
        v.region = d;
        v.evidence.push_back(os.str());
        return v;
      }
    }
    if (subset_of(d, Region::half_plane(pi / 2.0))) {
      if (auto hv = try_structured_halfplane(p.coeff(2), p.coeff(1), p.coeff(0))) {
        hv->evidence.insert(hv->evidence.begin(), v.evidence.begin(),
                            v.evidence.end());
        hv->evidence.push_back(
            "D is contained in the open right half-plane, so the certificate "
            "applies to D");
        return *hv;
      }
    }
  }
  if (p.degree() == 3) {
    double sc = std::max(1.0, p.coeff_scale());
    if ((p.coeff(3) - p.coeff(0)).norm() <= 1e-10 * sc &&
        subset_of(d, Region::sector(0.0, pi / 3.0))) {
      if (auto hv = try_psd_palindromic(p.coeff(0), p.coeff(2), p.coeff(1))) {
        hv->evidence.insert(hv->evidence.begin(), v.evidence.begin(),
                            v.evidence.end());
        hv->evidence.push_back(
            "D is contained in the open sector of half-angle pi/3, so the "
            "certificate applies to D");
        return *hv;
      }
    }
  }

  // Layer 5: directional sampling with adversarial refinement. Sampling can
  // falsify; agreement across samples is only positive evidence.
  RngEngine rng(budget.seed);
  int certs = 0, unknowns = 0;
  double worst_margin = kHuge;
  Vec worst_x;
  std::vector<Vec> queue;
  const int total = std::max(4, budget.x_samples);
  for (int i = 0; i < n && static_cast<int>(queue.size()) < total; ++i) {
    Vec e = Vec::Zero(n);
    e(i) = 1.0;
    queue.push_back(e);
  }
  for (int j = 0; j <= p.degree() && static_cast<int>(queue.size()) < total;
       ++j) {
    Eigen::JacobiSVD<Mat> svd(p.coeff(j), Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= 1e-8 * std::max(1.0, sv(0)))
      queue.push_back(svd.matrixV().col(n - 1));  // near-kernel direction
  }
  while (static_cast<int>(queue.size()) < total)
    queue.push_back(random_unit_vector(rng, n));

  auto falsified_verdict = [&](const Vec& xx,
                               const DirectionalCertificate& c) {
    HyperVerdict f;
    f.status = HyperStatus::Falsified;
    f.falsifier = xx / xx.norm();
    f.evidence = v.evidence;
    f.evidence.push_back("falsifying direction found: " + c.proof);
    return f;
  };

  std::optional<std::pair<Vec, double>> weakest;
  for (const Vec& xx : queue) {
    DirectionalCertificate c = directional_certificate(p, xx, d, budget);
    if (c.status == CertStatus::NoCertificate) return falsified_verdict(xx, c);
    if (c.status == CertStatus::Certificate) {
      ++certs;
      if (c.margin < worst_margin) {
        worst_margin = c.margin;
        worst_x = xx;
        weakest = {xx, c.margin};
      }
    } else {
      ++unknowns;
    }
  }
  // adversarial refinement around the weakest certified direction
  if (weakest) {
    Vec x0 = weakest->first;
    double m0 = weakest->second;
    double step = 0.5;
    const int rounds = std::max(2, budget.refine_iters / 10);
    for (int it = 0; it < rounds && step > 1e-3; ++it) {
      bool improved = false;
      for (int k = 0; k < n; ++k) {
        for (int q = 0; q < 4; ++q) {
          Vec xp = x0;
          xp(k) += step * std::polar(1.0, q * pi / 2.0);
          xp.normalize();
          DirectionalCertificate c = directional_certificate(p, xp, d, budget);
          if (c.status == CertStatus::NoCertificate)
            return falsified_verdict(xp, c);
          if (c.status == CertStatus::Unknown) {
            ++unknowns;
          } else if (c.margin < m0) {
            m0 = c.margin;
            x0 = xp;
            improved = true;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    worst_margin = std::min(worst_margin, m0);
  }

  if (unknowns == 0 && certs > 0) {
    v.status = HyperStatus::StableOnly;
    v.evidence.push_back(
        "no falsifier found; certificates exist for all " +
        std::to_string(certs) +
        " sampled directions (sampling cannot certify hyperstability)");
    v.evidence.push_back("weakest sampled certificate margin: " +
                         fmt(worst_margin));
  } else {
    v.status = HyperStatus::Unknown;
    v.evidence.push_back(std::to_string(certs) + " certificates and " +
                         std::to_string(unknowns) +
                         " unresolved directions among " +
                         std::to_string(queue.size()) + " samples");
  }
  return v;
}

// ---------------------------------------------------------------------------
// Block upper-triangular certificates
// ---------------------------------------------------------------------------

HyperVerdict block_triangular_certificate(const MatrixPolynomial& p,
                                          const std::vector<int>& block_sizes,
                                          const Mat& s, const Mat& t,
                                          const Region& d,
                                          const SearchBudget& budget) {
  if (p.is_zero() || p.size() == 0)
    throw ShapeMismatch("block_triangular_certificate: zero polynomial");
  const int n = p.size();
  int sum = 0;
  for (int b : block_sizes) {
    if (b <= 0)
      throw ShapeMismatch("block_triangular_certificate: block sizes must be positive");
    sum += b;
  }
  if (sum != n)
    throw ShapeMismatch(
        "block_triangular_certificate: block sizes must sum to the matrix size");
  if (s.rows() != n || s.cols() != n || t.rows() != n || t.cols() != n)
    throw ShapeMismatch("block_triangular_certificate: S and T must be n x n");

  auto cond_of = [&](const Mat& m, const char* name) {
    Eigen::JacobiSVD<Mat> svd(m);
    double smax = svd.singularValues()(0);
    double smin = svd.singularValues()(svd.singularValues().size() - 1);
    if (smax == 0.0 || smin <= 1e-14 * smax)
      throw ShapeMismatch(std::string("block_triangular_certificate: ") + name +
                          " is numerically singular");
    return smax / smin;
  };
  double cond_s = cond_of(s, "S");
  double cond_t = cond_of(t, "T");

  Eigen::PartialPivLU<Mat> lus(s), lut(t.transpose());
  std::vector<Mat> f;
  double fscale = 0.0;
  for (int j = 0; j <= p.degree(); ++j) {
    // S^{-1} A_j T^{-1}  computed by two solves
    Mat m = lus.solve(p.coeff(j));
    m = lut.solve(m.transpose()).transpose();
    fscale = std::max(fscale, m.norm());
    f.push_back(m);
  }
  std::vector<int> offset(block_sizes.size() + 1, 0);
  for (size_t i = 0; i < block_sizes.size(); ++i)
    offset[i + 1] = offset[i] + block_sizes[i];
  double below = 0.0;
  for (const Mat& m : f)
    for (size_t bi = 1; bi < block_sizes.size(); ++bi)
      for (size_t bj = 0; bj < bi; ++bj)
        below = std::max(below, m.block(offset[bi], offset[bj],
                                        block_sizes[bi], block_sizes[bj])
                                    .norm());
  if (below > 1e-10 * std::max(1.0, fscale)) {
    std::ostringstream os;
    os << "the strict equivalence does not reduce P to the requested block "
          "upper-triangular form (below-diagonal residual "
       << fmt(below) << " against scale " << fmt(fscale) << ")";
    throw NotBlockTriangular(os.str());
  }

  HyperVerdict v;
  {
    std::ostringstream os;
    os << "block form recovered: cond(S) = " << fmt(cond_s)
       << ", cond(T) = " << fmt(cond_t) << ", below-diagonal residual "
       << fmt(below);
    v.evidence.push_back(os.str());
  }

  auto falsify_singular = [&]() {
    // some diagonal block (hence P) is singular: exhibit the kernel direction
    cplx mu = d.interior_point();
    Mat fm = Mat::Zero(n, n);
    for (int j = static_cast<int>(f.size()) - 1; j >= 0; --j)
      fm = fm * mu + f[static_cast<size_t>(j)];
    Eigen::JacobiSVD<Mat> svd(fm, Eigen::ComputeFullV);
    Vec k = svd.matrixV().col(n - 1);
    Vec x = t.partialPivLu().solve(k);
    HyperVerdict fv;
    fv.status = HyperStatus::Falsified;
    fv.falsifier = x / x.norm();
    fv.evidence = v.evidence;
    fv.evidence.push_back(
        "a diagonal block is singular, so P is singular; the kernel direction "
        "at an interior point of D falsifies");
    return fv;
  };

  for (size_t bi = 0; bi < block_sizes.size(); ++bi) {
    const int bs = block_sizes[bi];
    std::vector<Mat> bc;
    bc.reserve(f.size());
    for (const Mat& m : f) bc.push_back(m.block(offset[bi], offset[bi], bs, bs));
    MatrixPolynomial blockp(bc);
    std::string label = "diagonal block " + std::to_string(bi + 1);

    StabilityResult sr = check_stable(blockp, d);
    if (sr.status == StabilityStatus::Singular) return falsify_singular();
    if (sr.status == StabilityStatus::NotStable) {
      v.status = HyperStatus::NotStable;
      v.eigenvalue_in_region = sr.eigenvalue_in_region;
      v.evidence.push_back(label + " has an eigenvalue inside D: " +
                           fmt(*sr.eigenvalue_in_region) +
                           " (eigenvalues of the blocks are eigenvalues of P)");
      return v;
    }
    if (bs == 1) {
      v.evidence.push_back(label + " is scalar and stable, hence hyperstable");
      continue;
    }
    if (detect_pencil_form(blockp)) {
      v.evidence.push_back(label +
                           " has a rank <= 2 coefficient span and is stable, "
                           "hence hyperstable (pencil form)");
      continue;
    }
    HyperVerdict bv = check_hyperstable(blockp, d, budget);
    if (bv.status == HyperStatus::CertifiedHyperstable) {
      v.evidence.push_back(label + " certified hyperstable (" +
                           to_string(*bv.method) + ")");
      continue;
    }
    v.status = HyperStatus::Unknown;
    v.evidence.push_back(label + " was not certified hyperstable (status " +
                         to_string(bv.status) +
                         "); the block route gives no conclusion");
    return v;
  }
  v.status = HyperStatus::CertifiedHyperstable;
  v.method = CertMethod::BlockTriangular;
  v.evidence.push_back(
      "all diagonal blocks hyperstable: the block upper-triangular form "
      "certifies P");
  return v;
}

// ---------------------------------------------------------------------------
// Bivariate routes
// ---------------------------------------------------------------------------

namespace {

void check_square_triple(const Mat& a, const Mat& b, const Mat& c,
                         const char* where) {
  const auto n = a.rows();
  if (a.cols() != n || b.rows() != n || b.cols() != n || c.rows() != n ||
      c.cols() != n || n < 1)
    throw ShapeMismatch(std::string(where) +
                        ": coefficients must be square matrices of equal size");
}

}  // namespace

BivariateShape poly2_shape(const Mat& a2, const Mat& a1, const Mat& a0,
                           BivariateVariant variant) {
  check_square_triple(a2, a1, a0, "poly2_shape");
  BivariateShape s;
  switch (variant) {
    case BivariateVariant::A:
      s.terms = {{{2, 0}, a2}, {{0, 1}, a1}, {{0, 0}, a0}};
      s.diagonal_multiplier = ComplexPolynomial::constant(1.0);
      break;
    case BivariateVariant::B:
      s.terms = {{{1, 1}, a2}, {{0, 1}, a1}, {{0, 0}, a0}};
      s.diagonal_multiplier = ComplexPolynomial::constant(1.0);
      break;
    case BivariateVariant::C:
      s.terms = {{{2, 1}, a2}, {{2, 0}, a1}, {{0, 1}, a0}};
      s.diagonal_multiplier = ComplexPolynomial::monomial(1.0, 1);
      break;
  }
  return s;
}

BivariateShape poly3_shape(const Mat& a2, const Mat& a1, const Mat& a0,
                           BivariateVariant variant) {
  check_square_triple(a2, a1, a0, "poly3_shape");
  BivariateShape s;
  switch (variant) {
    case BivariateVariant::A:
      s.terms = {{{3, 3}, a0}, {{3, 0}, a0}, {{0, 3}, a0}, {{2, 3}, a2},
                 {{2, 0}, a2}, {{3, 1}, a1}, {{0, 1}, a1}, {{0, 0}, a0}};
      s.diagonal_multiplier =
          ComplexPolynomial({cplx(1.0, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0),
                             cplx(1.0, 0.0)});  // lambda^3 + 1
      break;
    case BivariateVariant::B:
      s.terms = {{{0, 3}, a0}, {{1, 1}, a2}, {{0, 1}, a1}, {{0, 0}, a0}};
      s.diagonal_multiplier = ComplexPolynomial::constant(1.0);
      break;
    case BivariateVariant::C:
      s.terms = {{{1, 3}, a0}, {{1, 2}, a2}, {{0, 2}, a1}, {{1, 0}, a0}};
      s.diagonal_multiplier = ComplexPolynomial::monomial(1.0, 1);
      break;
  }
  return s;
}

namespace {

/// Shared tail of the bivariate routes once the shape is fixed: sample-check
/// the bivariate stability hypothesis, certify structurally or by caller
/// assertion, otherwise report the honest middle ground.
HyperVerdict bivariate_route(const MatrixPolynomial& p,
                             const BivariateShape& shape, const Region& d,
                             CertMethod tag, bool structural_certificate,
                             const std::string& structural_note,
                             bool caller_asserts, const SearchBudget& budget) {
  HyperVerdict v;
  SparseMVMatrixPoly q = shape_to_sparse(shape, p.size());
  MvStabilityResult ms = mv_stable(q, {d, d}, budget);
  if (ms.falsified) {
    std::ostringstream os;
    os << "the bivariate polynomial is NOT stable on D^2 (" << ms.note
       << "); the route's hypothesis fails and nothing follows";
    v.status = HyperStatus::Unknown;
    v.evidence.push_back(os.str());
    return v;
  }
  v.evidence.push_back("no bivariate determinant zero found on D^2 (" +
                       std::to_string(ms.samples_used) +
                       " determinant samples)");
  if (structural_certificate) v.evidence.push_back(structural_note);
  if (caller_asserts)
    v.evidence.push_back(
        "caller asserts bivariate stability on D^2 (recorded, not verified)");
  if (structural_certificate || caller_asserts) {
    v.status = HyperStatus::CertifiedHyperstable;
    v.method = tag;
    v.region = d;
    // defense in depth: the univariate conclusion must at least be stable
    StabilityResult sr = check_stable(p, d);
    if (sr.status != StabilityStatus::Stable)
      throw NumericFailure(
          "bivariate route certified hyperstability, but the univariate "
          "polynomial is not stable on D; inconsistent inputs or numerics");
    v.evidence.push_back("univariate eigenvalues re-verified outside D");
    return v;
  }
  StabilityResult sr = check_stable(p, d);
  if (sr.status == StabilityStatus::NotStable) {
    v.status = HyperStatus::NotStable;
    v.eigenvalue_in_region = sr.eigenvalue_in_region;
    v.evidence.push_back("an eigenvalue of P lies inside D: " +
                         fmt(*sr.eigenvalue_in_region));
  } else if (sr.status == StabilityStatus::Stable) {
    v.status = HyperStatus::StableOnly;
    v.evidence.push_back(
        "univariate stability holds and the bivariate hypothesis survived "
        "sampling, but it was not certified");
  } else {
    v.status = HyperStatus::Unknown;
    v.evidence.push_back("P is singular");
  }
  return v;
}

}  // namespace

HyperVerdict poly2_route(const Mat& a2, const Mat& a1, const Mat& a0,
                         const Region& d, BivariateVariant variant,
                         const SearchBudget& budget,
                         bool caller_asserts_bivariate_stable) {
  check_square_triple(a2, a1, a0, "poly2_route");
  if (variant != BivariateVariant::A && d.contains(cplx(0.0, 0.0)))
    throw VariantPreconditionViolated(
        "poly2_route: variants (b) and (c) require 0 to lie outside D");
  BivariateShape shape = poly2_shape(a2, a1, a0, variant);
  MatrixPolynomial p({a0, a1, a2});

  bool structural = false;
  std::string note;
  if (d.center == cplx(0.0, 0.0) && d.radius > 0.0) {
    if (variant == BivariateVariant::A && d.kind == RegionKind::Disc) {
      double lhs = d.radius * norms(a1).two_norm +
                   d.radius * d.radius * norms(a2).two_norm;
      double rhs = norms(a0).sigma_min;
      if (lhs < rhs) {
        structural = true;
        note = "norm gap certifies the bivariate hypothesis: r||A1|| + "
               "r^2||A2|| = " +
               fmt(lhs) + " < sigma_min(A0) = " + fmt(rhs);
      }
    }
    if (variant == BivariateVariant::B && d.kind == RegionKind::DiscExterior) {
      double lhs = d.radius * norms(a1).two_norm + norms(a0).two_norm;
      double rhs = d.radius * d.radius * norms(a2).sigma_min;
      if (lhs < rhs) {
        structural = true;
        note = "norm gap certifies the bivariate hypothesis: r||A1|| + ||A0|| "
               "= " +
               fmt(lhs) + " < r^2 sigma_min(A2) = " + fmt(rhs);
      }
    }
  }
  CertMethod tag = variant == BivariateVariant::A   ? CertMethod::Poly2a
                   : variant == BivariateVariant::B ? CertMethod::Poly2b
                                                    : CertMethod::Poly2c;
  return bivariate_route(p, shape, d, tag, structural, note,
                         caller_asserts_bivariate_stable, budget);
}

HyperVerdict poly3_route(const std::optional<Mat>& a3, const Mat& a2,
                         const Mat& a1, const Mat& a0, const Region& d,
                         BivariateVariant variant, const SearchBudget& budget,
                         bool caller_asserts_bivariate_stable) {
  check_square_triple(a2, a1, a0, "poly3_route");
  if (a3) {
    if (a3->rows() != a0.rows() || a3->cols() != a0.cols())
      throw ShapeMismatch("poly3_route: A3 has the wrong size");
    if ((*a3 - a0).norm() > 1e-10 * std::max(1.0, a0.norm()))
      throw ShapeMismatch(
          "poly3_route: the route needs the leading coefficient to equal the "
          "constant coefficient");
  }
  if (variant == BivariateVariant::A) {
    const cplx cube_roots[] = {cplx(-1.0, 0.0),
                               cplx(0.5, std::sqrt(3.0) / 2.0),
                               cplx(0.5, -std::sqrt(3.0) / 2.0)};
    for (cplx z : cube_roots)
      if (d.contains(z))
        throw VariantPreconditionViolated(
            "poly3_route: variant (a) requires the cube roots of -1 to lie "
            "outside D");
  } else if (d.contains(cplx(0.0, 0.0))) {
    throw VariantPreconditionViolated(
        "poly3_route: variants (b) and (c) require 0 to lie outside D");
  }
  BivariateShape shape = poly3_shape(a2, a1, a0, variant);
  MatrixPolynomial p({a0, a1, a2, a0});
  CertMethod tag = variant == BivariateVariant::A   ? CertMethod::Poly3a
                   : variant == BivariateVariant::B ? CertMethod::Poly3b
                                                    : CertMethod::Poly3c;
  return bivariate_route(p, shape, d, tag, false, "",
                         caller_asserts_bivariate_stable, budget);
}

// ---------------------------------------------------------------------------
// Structured families
// ---------------------------------------------------------------------------

HyperVerdict structured_halfplane(const Mat& r2, const Mat& r1, const Mat& r0,
                                  const Mat& j) {
  check_square_triple(r2, r1, r0, "structured_halfplane");
  if (j.rows() != r0.rows() || j.cols() != r0.cols())
    throw ShapeMismatch("structured_halfplane: J has the wrong size");
  const double tol = 1e-10;
  require_hermitian_psd(r0, "R0", tol);
  require_hermitian_psd(r1, "R1", tol);
  require_hermitian_psd(r2, "R2", tol);
  if (!is_skew_hermitian(j, tol))
    throw HypothesisViolated("structured_halfplane: J must be skew-Hermitian");
  double gap = joint_kernel_gap({r0, r1, r2, j});
  if (gap <= 1e-10)
    throw HypothesisViolated(
        "structured_halfplane: the joint kernel of R0, R1, R2, J must be "
        "trivial (the polynomial would be singular)");

  HyperVerdict v;
  v.status = HyperStatus::CertifiedHyperstable;
  v.method = CertMethod::HalfPlaneStructured;
  v.region = Region::half_plane(pi / 2.0);
  v.evidence.push_back(
      "R0, R1, R2 Hermitian PSD, J skew-Hermitian, joint kernel trivial "
      "(stacked singular-value gap " +
      fmt(gap) + ")");
  v.evidence.push_back(
      "the variant-b bivariate polynomial z1 z2 R2 + z2 (J + R1) + R0 is "
      "zero-free on the squared open right half-plane: a zero would force "
      "re(mu1) x*R2 x + x*R1 x + re(1/mu2) x*R0 x = 0 with every term "
      "nonnegative, contradicting the kernel condition");
  MatrixPolynomial p({r0, Mat(j + r1), r2});
  StabilityResult sr = check_stable(p, *v.region);
  if (sr.status == StabilityStatus::NotStable)
    throw NumericFailure(
        "structured_halfplane: hypotheses hold but an eigenvalue was located "
        "in the open right half-plane at " +
        fmt(*sr.eigenvalue_in_region) + "; numerical failure");
  if (sr.status == StabilityStatus::Singular)
    throw NumericFailure(
        "structured_halfplane: hypotheses hold but the determinant vanished "
        "identically; numerical failure");
  v.evidence.push_back(
      "eigenvalue locations re-verified: none inside the open right "
      "half-plane");
  return v;
}

HyperVerdict congruence_halfplane(const Mat& a2, const Mat& r, const Mat& j,
                                  const Mat& q, const Mat& a0) {
  check_square_triple(a2, r, a0, "congruence_halfplane");
  if (j.rows() != r.rows() || j.cols() != r.cols() || q.rows() != r.rows() ||
      q.cols() != r.cols())
    throw ShapeMismatch("congruence_halfplane: J and Q must match the size");
  const double tol = 1e-10;
  require_hermitian_psd(r, "R", tol);
  if (!is_skew_hermitian(j, tol))
    throw HypothesisViolated("congruence_halfplane: J must be skew-Hermitian");
  Mat qa2 = q.adjoint() * a2;
  Mat qa0 = q.adjoint() * a0;
  require_hermitian_psd(qa2, "Q*A2", tol);
  require_hermitian_psd(qa0, "Q*A0", tol);
  Mat qrq = q.adjoint() * r * q;
  Mat qjq = q.adjoint() * j * q;

  HyperVerdict inner = structured_halfplane(qa2, qrq, qa0, qjq);
  HyperVerdict v;
  v.status = HyperStatus::CertifiedHyperstable;
  v.method = CertMethod::HalfPlaneStructured;
  v.region = inner.region;
  v.evidence.push_back(
      "congruence route: Q*P(lambda) = lambda^2 Q*A2 + lambda (Q*JQ + Q*RQ) + "
      "Q*A0 satisfies the structured half-plane hypotheses");
  v.evidence.insert(v.evidence.end(), inner.evidence.begin(),
                    inner.evidence.end());
  v.evidence.push_back(
      "hyperstability of Q*P transfers to P (sections of Q*P are sections of "
      "P with the left vector Qy)");
  MatrixPolynomial p({a0, Mat((j + r) * q), a2});
  StabilityResult sr = check_stable(p, *v.region);
  if (sr.status == StabilityStatus::NotStable || sr.status == StabilityStatus::Singular)
    throw NumericFailure(
        "congruence_halfplane: hypotheses hold but P itself failed the "
        "half-plane stability re-verification; numerical failure");
  v.evidence.push_back("eigenvalues of P re-verified outside the open right half-plane");
  return v;
}

HyperVerdict psd_coefficient_sector(const std::vector<Mat>& coeffs) {
  if (coeffs.size() < 2)
    throw ShapeMismatch("psd_coefficient_sector: degree must be at least 1");
  const double tol = 1e-10;
  for (size_t i = 0; i < coeffs.size(); ++i)
    require_hermitian_psd(coeffs[i], ("A" + std::to_string(i)).c_str(), tol);
  MatrixPolynomial p(coeffs);
  const int deg = static_cast<int>(coeffs.size()) - 1;
  if (p.degree() != deg)
    throw HypothesisViolated(
        "psd_coefficient_sector: the leading coefficient vanishes");
  Eigenvalues ev = eigenvalues(p);
  if (!ev.regular)
    throw HypothesisViolated(
        "psd_coefficient_sector: the polynomial is singular; eigenvalue "
        "localization is vacuous");
  for (cplx mu : ev.finite) {
    if (std::abs(mu) <= 1e-8) continue;
    if (std::abs(principal_arg(mu)) < pi / deg - 1e-8)
      throw NumericFailure(
          "psd_coefficient_sector: an eigenvalue violates the sector bound at " +
          fmt(mu) + "; numerical failure");
  }
  HyperVerdict v;
  v.status = HyperStatus::StableOnly;
  v.region = Region::sector(-pi / deg, pi / deg);
  v.evidence.push_back(
      "Hermitian PSD coefficients: every eigenvalue satisfies |Arg mu| >= "
      "pi/" +
      std::to_string(deg) + " or mu = 0 (verified on " +
      std::to_string(ev.finite.size()) + " finite eigenvalues)");
  v.evidence.push_back(
      "P is stable w.r.t. the open sector of half-angle pi/" +
      std::to_string(deg) + " around the positive axis, origin excluded");
  return v;
}

HyperVerdict psd_quadratic_left_halfplane(const Mat& a2, const Mat& a1,
                                          const Mat& a0) {
  check_square_triple(a2, a1, a0, "psd_quadratic_left_halfplane");
  const double tol = 1e-10;
  require_hermitian_psd(a2, "A2", tol);
  require_hermitian_psd(a0, "A0", tol);
  Mat h1 = (a1 + a1.adjoint()) / 2.0;
  require_hermitian_psd(h1, "(A1 + A1*)/2", tol);
  MatrixPolynomial p({a0, a1, a2});
  Eigenvalues ev = eigenvalues(p);
  if (!ev.regular)
    throw HypothesisViolated(
        "psd_quadratic_left_halfplane: the polynomial is singular");
  for (cplx mu : ev.finite)
    if (std::real(mu) > 1e-8)
      throw NumericFailure(
          "psd_quadratic_left_halfplane: an eigenvalue has positive real part "
          "at " +
          fmt(mu) + "; numerical failure");
  HyperVerdict v;
  v.status = HyperStatus::StableOnly;
  v.region = Region::half_plane(pi / 2.0);
  v.evidence.push_back(
      "A2, A0 and the Hermitian part of A1 are PSD: all eigenvalues lie in "
      "the closed left half-plane (verified on " +
      std::to_string(ev.finite.size()) + " finite eigenvalues)");
  return v;
}

HyperVerdict psd_palindromic_cubic(const Mat& r0, const Mat& r2,
                                   const Mat& r1) {
  check_square_triple(r0, r2, r1, "psd_palindromic_cubic");
  const double tol = 1e-10;
  require_hermitian_psd(r0, "R0", tol);
  require_hermitian_psd(r1, "R1", tol);
  require_hermitian_psd(r2, "R2", tol);
  double gap = joint_kernel_gap({r0, r1, r2});
  if (gap <= 1e-10)
    throw HypothesisViolated(
        "psd_palindromic_cubic: the joint kernel of R0, R1, R2 must be "
        "trivial (the polynomial would be singular)");

  Region d = Region::sector(0.0, pi / 3.0);
  HyperVerdict v;
  v.status = HyperStatus::CertifiedHyperstable;
  v.method = CertMethod::Poly3b;
  v.region = d;
  v.evidence.push_back(
      "R0, R1, R2 Hermitian PSD with trivial joint kernel (stacked "
      "singular-value gap " +
      fmt(gap) + ")");
  v.evidence.push_back(
      "the variant-b bivariate polynomial z2^3 R0 + z1 z2 R2 + z2 R1 + R0 is "
      "zero-free on the squared open sector {0 < Arg < pi/3}: a zero would "
      "force a vanishing positive combination of x*R_i x terms, contradicting "
      "the kernel condition");

  MatrixPolynomial p({r0, r1, r2, r0});
  StabilityResult sr = check_stable(p, d);
  if (sr.status != StabilityStatus::Stable)
    throw NumericFailure(
        "psd_palindromic_cubic: hypotheses hold but the re-verification of "
        "stability on the sector failed; numerical failure");
  v.evidence.push_back("eigenvalues re-verified outside the open sector");
  BivariateShape shape = poly3_shape(r2, r1, r0, BivariateVariant::B);
  SparseMVMatrixPoly q = shape_to_sparse(shape, static_cast<int>(r0.rows()));
  MvStabilityResult ms = mv_stable(q, {d, d});
  if (ms.falsified)
    throw NumericFailure(
        "psd_palindromic_cubic: a bivariate determinant zero was located "
        "despite the hypotheses; numerical failure");
  v.evidence.push_back("bivariate hypothesis spot-checked (" +
                       std::to_string(ms.samples_used) +
                       " determinant samples, no zero)");
  return v;
}

HyperVerdict skew_augmented_cubic_sector(const Mat& r3, const Mat& r2,
                                         const Mat& r1, const Mat& a0,
                                         const Mat& g, int which,
                                         const SearchBudget& budget) {
  check_square_triple(r3, r2, r1, "skew_augmented_cubic_sector");
  if (a0.rows() != r1.rows() || a0.cols() != r1.cols() ||
      g.rows() != r1.rows() || g.cols() != r1.cols())
    throw ShapeMismatch("skew_augmented_cubic_sector: A0 and G must match");
  if (which < 1 || which > 3)
    throw ShapeMismatch("skew_augmented_cubic_sector: which must be 1, 2 or 3");
  const double tol = 1e-10;
  require_hermitian_psd(r1, "R1", tol);
  require_hermitian_psd(r2, "R2", tol);
  require_hermitian_psd(r3, "R3", tol);
  if (!is_hermitian(a0, tol))
    throw HypothesisViolated("skew_augmented_cubic_sector: A0 must be Hermitian");
  if (!is_skew_hermitian(g, tol))
    throw HypothesisViolated(
        "skew_augmented_cubic_sector: G must be skew-Hermitian");
  Mat mig = cplx(0.0, -1.0) * g;
  require_hermitian_psd(mig, "-iG", tol);
  double gap = joint_kernel_gap({g, a0, r1, r2, r3});
  if (gap <= 1e-10)
    throw HypothesisViolated(
        "skew_augmented_cubic_sector: the joint kernel of G, A0, R1, R2, R3 "
        "must be trivial");

  const int n = static_cast<int>(r1.rows());
  Mat c0 = a0 + g;
  SparseMVMatrixPoly q(2, n);
  Region dj = Region::sector(0.0, pi / 3.0);
  if (which == 1) {
    dj = Region::sector(0.0, pi / 6.0);
    q.add_term({3, 3}, r3);
    q.add_term({3, 0}, r3);
    q.add_term({0, 3}, r3);
    q.add_term({2, 3}, r2);
    q.add_term({2, 0}, r2);
    q.add_term({3, 1}, r1);
    q.add_term({0, 1}, r1);
    q.add_term({0, 0}, c0);
  } else if (which == 2) {
    q.add_term({0, 3}, r3);
    q.add_term({1, 1}, r2);
    q.add_term({0, 1}, r1);
    q.add_term({0, 0}, c0);
  } else {
    dj = Region::sector(0.0, pi / 4.0);
    q.add_term({1, 3}, r3);
    q.add_term({1, 2}, r2);
    q.add_term({0, 2}, r1);
    q.add_term({1, 0}, c0);
  }
  MvStabilityResult ms = mv_stable(q, {dj, dj}, budget);
  if (ms.falsified)
    throw NumericFailure(
        "skew_augmented_cubic_sector: a bivariate determinant zero was found "
        "despite the hypotheses; numerical failure");

  Region d2 = Region::sector(0.0, pi / 3.0);
  MatrixPolynomial p({c0, r1, r2, r3});
  StabilityResult sr = check_stable(p, d2);
  if (sr.status != StabilityStatus::Stable)
    throw NumericFailure(
        "skew_augmented_cubic_sector: the univariate polynomial failed the "
        "sector stability re-verification; numerical failure");

  HyperVerdict v;
  v.status = HyperStatus::StableOnly;
  v.region = d2;
  v.evidence.push_back(
      "R1, R2, R3 Hermitian PSD, A0 Hermitian, -iG PSD, joint kernel trivial "
      "(gap " +
      fmt(gap) + ")");
  v.evidence.push_back("associated bivariate polynomial " +
                       std::to_string(which) +
                       " spot-checked on its squared sector (" +
                       std::to_string(ms.samples_used) +
                       " determinant samples, no zero)");
  v.evidence.push_back(
      "conclusion: lambda^3 R3 + lambda^2 R2 + lambda R1 + (A0 + G) is stable "
      "w.r.t. the open sector {0 < Arg < pi/3} (eigenvalues re-verified)");
  return v;
}

HyperVerdict polarized_cubic_sector(const Mat& r2, const Mat& r1,
                                    const Mat& r0, const Mat& j) {
  // base: lambda^2 R2 + 2 lambda (R1 + J) + R0 through the half-plane family
  HyperVerdict base = structured_halfplane(r2, Mat(2.0 * r1), r0, Mat(2.0 * j));
  Region e = Region::sector(-pi / 4.0, pi / 4.0);
  HyperVerdict v;
  v.status = HyperStatus::CertifiedHyperstable;
  v.method = CertMethod::HalfPlaneStructured;
  v.region = e;
  v.evidence.push_back(
      "base quadratic lambda^2 R2 + 2 lambda (R1 + J) + R0 certified "
      "hyperstable on the open right half-plane");
  v.evidence.insert(v.evidence.end(), base.evidence.begin(),
                    base.evidence.end());
  v.evidence.push_back(
      "degree-raising composition with (p1, p2) = (lambda^2, lambda): "
      "Q(lambda) = lambda^3 R2 + (lambda^2 + lambda)(R1 + J) + R0 is "
      "hyperstable on the common preimage {-pi/4 < Arg < pi/4} minus the "
      "origin");
  Mat m = r1 + j;
  MatrixPolynomial qp({r0, m, m, r2});
  StabilityResult sr = check_stable(qp, e);
  if (sr.status != StabilityStatus::Stable)
    throw NumericFailure(
        "polarized_cubic_sector: the composed polynomial failed the sector "
        "stability re-verification; numerical failure");
  v.evidence.push_back("eigenvalues of the composition re-verified outside the sector");
  return v;
}

HyperVerdict mgt_pencil_route(double a, double b, double c, const Mat& r) {
  if (r.rows() != r.cols() || r.rows() < 1)
    throw ShapeMismatch("mgt_pencil_route: R must be square");
  const double tol = 1e-10;
  if (!is_hermitian(r, tol))
    throw HypothesisViolated("mgt_pencil_route: R must be Hermitian");
  double me = min_eig((r + r.adjoint()) / 2.0);
  if (me <= tol * std::max(1.0, r.norm()))
    throw HypothesisViolated(
        "mgt_pencil_route: R must be positive definite (min eigenvalue " +
        fmt(me) + ")");
  if (!(a > 1.0))
    throw HypothesisViolated("mgt_pencil_route: a > 1 is required");
  if (!(b > c))
    throw HypothesisViolated("mgt_pencil_route: b > c is required");

  const int n = static_cast<int>(r.rows());
  Mat id = Mat::Identity(n, n);
  MatrixPolynomial p({Mat(c * r), Mat(b * r), Mat(a * id), id});
  Region d = Region::half_plane(pi / 2.0);
  HyperVerdict v;
  v.evidence.push_back("R Hermitian positive definite (min eigenvalue " +
                       fmt(me) + "), a = " + fmt(a) + " > 1, b = " + fmt(b) +
                       " > c = " + fmt(c));
  v.evidence.push_back(
      "P(lambda) = (lambda^3 + a lambda^2) I + (b lambda + c) R is a pencil "
      "in the two directions I and R: hyperstability coincides with "
      "stability");
  StabilityResult sr = check_stable(p, d);
  if (sr.status == StabilityStatus::NotStable) {
    v.status = HyperStatus::NotStable;
    v.eigenvalue_in_region = sr.eigenvalue_in_region;
    v.evidence.push_back(
        "an eigenvalue lies in the open right half-plane at " +
        fmt(*sr.eigenvalue_in_region) +
        "; the stability hypothesis fails for these parameters");
    return v;
  }
  if (sr.status == StabilityStatus::Singular) {
    v.status = HyperStatus::Unknown;
    v.evidence.push_back("P is singular; no conclusion");
    return v;
  }
  v.status = HyperStatus::CertifiedHyperstable;
  v.method = CertMethod::PencilForm;
  v.region = d;
  v.evidence.push_back(
      "stability w.r.t. the open right half-plane verified, hence "
      "hyperstability");
  return v;
}

// ---------------------------------------------------------------------------
// Gauss-Lucas transfer
// ---------------------------------------------------------------------------

GaussLucasReport gauss_lucas_transfer(const MatrixPolynomial& p,
                                      const Region& d,
                                      const SearchBudget& budget) {
  if (p.is_zero() || p.size() == 0)
    throw ShapeMismatch("gauss_lucas_transfer: zero polynomial");
  if (!d.complement_is_convex())
    throw PreconditionViolated(
        "gauss_lucas_transfer: the complement of D must be convex (half-plane "
        "or disc exterior)");
  MatrixPolynomial dp = p.derivative();
  EntryIndependence ind = entries_linearly_independent(dp);
  if (!ind.independent) {
    std::ostringstream os;
    os << "gauss_lucas_transfer: the entries of P' are linearly dependent "
          "(rank "
       << ind.rank << " of " << p.size() * p.size()
       << "); the transfer theorem does not apply";
    throw PreconditionViolated(os.str());
  }

  GaussLucasReport rep;
  rep.base = check_hyperstable(p, d, budget);
  rep.notes.push_back("base verdict for P: " + to_string(rep.base.status));
  if (rep.base.status != HyperStatus::CertifiedHyperstable &&
      rep.base.status != HyperStatus::StableOnly) {
    rep.notes.push_back(
        "no positive base evidence, so the transfer is not exercised");
    return rep;
  }

  RngEngine rng(budget.seed + 17);
  const int n = p.size();
  const int checks = std::max(4, budget.x_samples / 2);
  for (int s = 0; s < checks; ++s) {
    Vec x;
    if (s < n) {
      x = Vec::Zero(n);
      x(s) = 1.0;
    } else {
      x = random_unit_vector(rng, n);
    }
    DirectionalCertificate c = directional_certificate(p, x, d, budget);
    if (c.status != CertStatus::Certificate) continue;
    ++rep.sections_checked;
    ComplexPolynomial ds = c.section.derivative();
    if (ds.is_zero()) {
      ++rep.transfer_failures;
      rep.notes.push_back(
          "a certificate section has an identically zero derivative, which "
          "contradicts the entry-independence gate");
      continue;
    }
    StabilityCheck sc = stability_check(ds, d, 1e-9);
    if (!sc.stable) {
      ++rep.transfer_failures;
      std::ostringstream os;
      os << "derivative section at sample " << s + 1
         << " has a root inside D (worst root " << fmt(sc.worst_root) << ")";
      rep.notes.push_back(os.str());
    }
  }
  {
    std::ostringstream os;
    os << rep.sections_checked << " certificate sections differentiated, "
       << rep.transfer_failures << " transfer failures";
    rep.notes.push_back(os.str());
  }
  return rep;
}

}  // namespace polystab
