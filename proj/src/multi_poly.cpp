// Polarization of matrix polynomials, sparse multivariate matrix
// polynomials, zero hunts over product regions, the multivariate
// hyperstability routes, and the stability-preserving variable transforms.
#include "polystab/multi_poly.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "polystab/rng.hpp"

namespace polystab {

namespace {

double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / i;
  return r;
}

cplx cpow_int(cplx z, int k) {
  cplx r = 1.0;
  for (int i = 0; i < k; ++i) r *= z;
  return r;
}

std::string fmt(cplx z) {
  std::ostringstream os;
  os.precision(6);
  os << std::real(z) << (std::imag(z) < 0.0 ? " - " : " + ")
     << std::abs(std::imag(z)) << "i";
  return os.str();
}

std::string fmt(const std::vector<cplx>& z) {
  std::string s = "(";
  for (size_t i = 0; i < z.size(); ++i) {
    if (i > 0) s += ", ";
    s += fmt(z[i]);
  }
  return s + ")";
}

/// |det m| together with the Hadamard noise scale (product of row norms).
std::pair<double, double> abs_det_and_scale(const Mat& m) {
  double scale = 1.0;
  for (int i = 0; i < m.rows(); ++i) scale *= m.row(i).norm();
  cplx det = Eigen::PartialPivLU<Mat>(m).determinant();
  return {std::abs(det), std::max(scale, 1e-300)};
}

/// Project into the region and, if the projection landed on the boundary of
/// an open region, walk toward an interior anchor until membership holds.
cplx nudge_inside(const Region& d, cplx z) {
  z = project_into(d, z);
  if (d.contains(z)) return z;
  cplx anchor = d.interior_point();
  double t = 1e-9;
  while (!d.contains(z) && t < 1.0) {
    z += t * (anchor - z);
    t *= 10.0;
  }
  return d.contains(z) ? z : anchor;
}

}  // namespace

// ---------------------------------------------------------------------------
// Elementary symmetric polynomials
// ---------------------------------------------------------------------------

std::vector<cplx> elementary_symmetric_all(const std::vector<cplx>& z) {
  const int k = static_cast<int>(z.size());
  std::vector<cplx> e(static_cast<size_t>(k) + 1, cplx(0.0, 0.0));
  e[0] = 1.0;
  for (int i = 0; i < k; ++i)
    for (int j = std::min(i + 1, k); j >= 1; --j)
      e[static_cast<size_t>(j)] += z[static_cast<size_t>(i)] * e[static_cast<size_t>(j) - 1];
  return e;
}

cplx elementary_symmetric(int j, const std::vector<cplx>& z) {
  if (j < 0 || j > static_cast<int>(z.size()))
    throw IndexOutOfRange("elementary_symmetric: j must lie in [0, kappa]");
  return elementary_symmetric_all(z)[static_cast<size_t>(j)];
}

// ---------------------------------------------------------------------------
// Symmetric multi-affine polynomials and polarization
// ---------------------------------------------------------------------------

MultiAffineSymmetricMP::MultiAffineSymmetricMP(int kappa,
                                               std::vector<Mat> by_level)
    : kappa_(kappa) {
  if (kappa < 1)
    throw ShapeMismatch("MultiAffineSymmetricMP: kappa must be at least 1");
  if (kappa > kMaxKappa)
    throw SizeCapExceeded("MultiAffineSymmetricMP: kappa exceeds the cap of " +
                          std::to_string(kMaxKappa));
  if (by_level.empty())
    throw ShapeMismatch("MultiAffineSymmetricMP: at least one level required");
  if (static_cast<int>(by_level.size()) > kappa + 1)
    throw ShapeMismatch(
        "MultiAffineSymmetricMP: more levels than kappa + 1 were given");
  n_ = static_cast<int>(by_level[0].rows());
  if (n_ < 1) throw ShapeMismatch("MultiAffineSymmetricMP: empty coefficient");
  for (const Mat& a : by_level)
    if (a.rows() != n_ || a.cols() != n_)
      throw ShapeMismatch(
          "MultiAffineSymmetricMP: levels must be square matrices of equal "
          "size");
  levels_ = std::move(by_level);
  levels_.resize(static_cast<size_t>(kappa_) + 1, Mat::Zero(n_, n_));
}

Mat MultiAffineSymmetricMP::evaluate(const std::vector<cplx>& z) const {
  if (static_cast<int>(z.size()) != kappa_)
    throw ShapeMismatch(
        "MultiAffineSymmetricMP::evaluate: expected kappa variables");
  std::vector<cplx> s = elementary_symmetric_all(z);
  Mat q = Mat::Zero(n_, n_);
  for (int j = 0; j <= kappa_; ++j)
    q += (s[static_cast<size_t>(j)] / binom(kappa_, j)) * levels_[static_cast<size_t>(j)];
  return q;
}

MultiAffineSymmetricMP polarize(const MatrixPolynomial& p, int kappa) {
  if (p.is_zero() || p.size() == 0)
    throw ShapeMismatch("polarize: the zero polynomial has no size");
  if (kappa < std::max(1, p.degree()))
    throw KappaTooSmall("polarize: kappa must be at least deg P");
  return MultiAffineSymmetricMP(kappa, p.coeffs());
}

MatrixPolynomial diagonal(const MultiAffineSymmetricMP& q) {
  // s_j(lambda, ..., lambda) = binom(kappa, j) lambda^j, so the weights cancel
  // and the diagonal restriction has exactly the levels as coefficients.
  return MatrixPolynomial(q.levels());
}

// ---------------------------------------------------------------------------
// Sparse multivariate matrix polynomials
// ---------------------------------------------------------------------------

SparseMVMatrixPoly::SparseMVMatrixPoly(int kappa, int n)
    : kappa_(kappa), n_(n) {
  if (kappa < 1)
    throw ShapeMismatch("SparseMVMatrixPoly: kappa must be at least 1");
  if (kappa > kMaxSparseKappa)
    throw SizeCapExceeded("SparseMVMatrixPoly: at most " +
                          std::to_string(kMaxSparseKappa) +
                          " variables are supported");
  if (n < 1) throw ShapeMismatch("SparseMVMatrixPoly: n must be at least 1");
}

void SparseMVMatrixPoly::add_term(const std::vector<int>& exponents,
                                  const Mat& a) {
  if (static_cast<int>(exponents.size()) != kappa_)
    throw ShapeMismatch(
        "SparseMVMatrixPoly::add_term: exponent tuple has the wrong length");
  for (int e : exponents) {
    if (e < 0)
      throw ShapeMismatch("SparseMVMatrixPoly::add_term: negative exponent");
    if (e > kMaxSparseDegree)
      throw SizeCapExceeded(
          "SparseMVMatrixPoly::add_term: per-variable degree exceeds " +
          std::to_string(kMaxSparseDegree));
  }
  if (a.rows() != n_ || a.cols() != n_)
    throw ShapeMismatch(
        "SparseMVMatrixPoly::add_term: coefficient has the wrong size");
  if (a.norm() == 0.0 && terms_.find(exponents) == terms_.end()) return;
  Mat& slot = terms_.try_emplace(exponents, Mat::Zero(n_, n_)).first->second;
  slot += a;
  if (slot.norm() == 0.0) terms_.erase(exponents);
}

Mat SparseMVMatrixPoly::evaluate(const std::vector<cplx>& z) const {
  if (static_cast<int>(z.size()) != kappa_)
    throw ShapeMismatch(
        "SparseMVMatrixPoly::evaluate: expected kappa variables");
  Mat q = Mat::Zero(n_, n_);
  for (const auto& [e, a] : terms_) {
    cplx m = 1.0;
    for (int i = 0; i < kappa_; ++i) m *= cpow_int(z[static_cast<size_t>(i)], e[static_cast<size_t>(i)]);
    q += m * a;
  }
  return q;
}

namespace {

using TermRef = std::pair<const std::vector<int>*, const Mat*>;

/// Horner evaluation over variable v with descending-exponent grouping.
Mat horner_rec(const std::vector<TermRef>& terms, int v, int kappa, int n,
               const std::vector<cplx>& z) {
  Mat acc = Mat::Zero(n, n);
  if (terms.empty()) return acc;
  if (v == kappa) {
    for (const TermRef& t : terms) acc += *t.second;
    return acc;
  }
  std::map<int, std::vector<TermRef>, std::greater<int>> groups;
  for (const TermRef& t : terms) groups[(*t.first)[static_cast<size_t>(v)]].push_back(t);
  int prev = -1;
  for (const auto& [e, g] : groups) {
    if (prev < 0) {
      acc = horner_rec(g, v + 1, kappa, n, z);
    } else {
      for (int i = 0; i < prev - e; ++i) acc *= z[static_cast<size_t>(v)];
      acc += horner_rec(g, v + 1, kappa, n, z);
    }
    prev = e;
  }
  for (int i = 0; i < prev; ++i) acc *= z[static_cast<size_t>(v)];
  return acc;
}

}  // namespace

Mat SparseMVMatrixPoly::evaluate_horner(const std::vector<cplx>& z) const {
  if (static_cast<int>(z.size()) != kappa_)
    throw ShapeMismatch(
        "SparseMVMatrixPoly::evaluate_horner: expected kappa variables");
  std::vector<TermRef> refs;
  refs.reserve(terms_.size());
  for (const auto& [e, a] : terms_) refs.emplace_back(&e, &a);
  return horner_rec(refs, 0, kappa_, n_, z);
}

SparseMVMatrixPoly SparseMVMatrixPoly::partial_derivative(int j) const {
  if (j < 1 || j > kappa_)
    throw IndexOutOfRange(
        "SparseMVMatrixPoly::partial_derivative: variable index out of range");
  SparseMVMatrixPoly d(kappa_, n_);
  for (const auto& [e, a] : terms_) {
    const int ej = e[static_cast<size_t>(j) - 1];
    if (ej == 0) continue;
    std::vector<int> e2 = e;
    e2[static_cast<size_t>(j) - 1] -= 1;
    d.add_term(e2, static_cast<double>(ej) * a);
  }
  return d;
}

int SparseMVMatrixPoly::degree_in(int j) const {
  if (j < 1 || j > kappa_)
    throw IndexOutOfRange(
        "SparseMVMatrixPoly::degree_in: variable index out of range");
  int d = 0;
  for (const auto& [e, a] : terms_) d = std::max(d, e[static_cast<size_t>(j) - 1]);
  return d;
}

int SparseMVMatrixPoly::total_degree() const {
  if (terms_.empty()) return -1;
  int d = 0;
  for (const auto& [e, a] : terms_) {
    int s = 0;
    for (int x : e) s += x;
    d = std::max(d, s);
  }
  return d;
}

SparseMVMatrixPoly to_sparse(const MultiAffineSymmetricMP& q) {
  const int k = q.kappa();
  if (k > kMaxSparseKappa)
    throw SizeCapExceeded("to_sparse: expansion needs kappa <= " +
                          std::to_string(kMaxSparseKappa));
  SparseMVMatrixPoly s(k, q.size());
  const auto& lv = q.levels();
  for (int mask = 0; mask < (1 << k); ++mask) {
    int bits = 0;
    std::vector<int> e(static_cast<size_t>(k), 0);
    for (int i = 0; i < k; ++i)
      if (mask & (1 << i)) {
        e[static_cast<size_t>(i)] = 1;
        ++bits;
      }
    if (lv[static_cast<size_t>(bits)].norm() == 0.0) continue;
    s.add_term(e, lv[static_cast<size_t>(bits)] / binom(k, bits));
  }
  return s;
}

EntryIndependence entries_linearly_independent(const SparseMVMatrixPoly& q,
                                               double tau_rank) {
  const int n = q.size();
  const int m = static_cast<int>(q.terms().size());
  EntryIndependence out;
  out.enough_coefficients = m >= n * n;
  if (m == 0) return out;
  Mat stack(n * n, m);
  int col = 0;
  for (const auto& [e, a] : q.terms()) {
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) stack(i * n + k, col) = a(i, k);
    ++col;
  }
  Eigen::JacobiSVD<Mat> svd(stack);
  const auto& sv = svd.singularValues();
  double s0 = sv.size() > 0 ? sv(0) : 0.0;
  if (s0 > 0.0)
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > tau_rank * s0) ++out.rank;
  out.independent = out.rank == n * n;
  return out;
}

// ---------------------------------------------------------------------------
// Grace-Walsh-Szego coincidence
// ---------------------------------------------------------------------------

cplx gws_coincidence(const MultiAffineSymmetricMP& p,
                     const std::vector<cplx>& points, const Region& d,
                     const Tolerances& tols) {
  if (p.size() != 1)
    throw ShapeMismatch("gws_coincidence: a scalar (1 x 1) polynomial is required");
  if (static_cast<int>(points.size()) != p.kappa())
    throw ShapeMismatch("gws_coincidence: expected kappa points");
  const bool circular_ok =
      d.kind == RegionKind::Disc || d.kind == RegionKind::HalfPlane ||
      (d.kind == RegionKind::DiscExterior &&
       p.levels()[static_cast<size_t>(p.kappa())].norm() > 0.0);
  if (!circular_ok)
    throw PreconditionViolated(
        "gws_coincidence: D must be a disc or a half-plane (a disc exterior "
        "needs full degree)");
  for (size_t i = 0; i < points.size(); ++i)
    if (!d.contains(points[i]))
      throw PointOutsideD("gws_coincidence: point " + std::to_string(i + 1) +
                          " lies outside D");

  cplx target = p.evaluate(points)(0, 0);
  std::vector<cplx> dc(static_cast<size_t>(p.kappa()) + 1);
  for (int j = 0; j <= p.kappa(); ++j)
    dc[static_cast<size_t>(j)] = p.levels()[static_cast<size_t>(j)](0, 0);
  ComplexPolynomial diag(dc);
  ComplexPolynomial eq = diag - ComplexPolynomial::constant(target);
  if (eq.is_zero()) return points[0];  // every point of D works
  if (eq.degree() < 1)
    throw NoRootFound(
        "gws_coincidence: the diagonal equation is a nonzero constant");
  RootSet rs = roots(eq);
  double best = -std::numeric_limits<double>::infinity();
  cplx zeta{0.0, 0.0};
  for (cplx r : rs.roots) {
    if (!d.contains(r, -tols.tau_bnd) && !d.contains(r)) continue;
    double m = d.margin(r).value;
    if (m > best) {
      best = m;
      zeta = r;
    }
  }
  if (best == -std::numeric_limits<double>::infinity()) {
    std::ostringstream os;
    os << "gws_coincidence: no root of the diagonal equation lies in D "
          "(closest candidates:";
    for (cplx r : rs.roots) os << " " << fmt(r);
    os << ")";
    throw NoRootFound(os.str());
  }
  return zeta;
}

// ---------------------------------------------------------------------------
// Zero hunts over product regions
// ---------------------------------------------------------------------------

MvStabilityResult mv_stable(const SparseMVMatrixPoly& q,
                            const std::vector<Region>& d_list,
                            const SearchBudget& budget) {
  if (static_cast<int>(d_list.size()) != q.kappa())
    throw ShapeMismatch("mv_stable: one region per variable is required");
  const int k = q.kappa();
  MvStabilityResult out;
  RngEngine rng(budget.seed);
  int evals = 0;
  auto det_at = [&](const std::vector<cplx>& z) {
    ++evals;
    return abs_det_and_scale(q.evaluate(z));
  };

  double best = std::numeric_limits<double>::infinity();
  double best_scale = 1.0;
  std::vector<cplx> bestz;
  const int starts = std::max(8, budget.det_min_starts);
  for (int s = 0; s < starts; ++s) {
    // sweep scales on unbounded factors: shells of radius 2^(s mod 7)
    double shell = std::pow(2.0, static_cast<double>(s % 7));
    std::vector<cplx> z(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) {
      cplx c = random_point(d_list[static_cast<size_t>(i)], rng);
      if (!d_list[static_cast<size_t>(i)].is_bounded() && (rng() & 1u) == 0u)
        c = nudge_inside(d_list[static_cast<size_t>(i)],
                         shell * random_complex(rng, 1.0));
      z[static_cast<size_t>(i)] = c;
    }
    auto [val, scale] = det_at(z);
    for (int it = 0; it < budget.refine_iters && val > 1e-14 * scale; ++it) {
      bool improved = false;
      for (int i = 0; i < k; ++i) {
        const double h = 1e-6 * (1.0 + std::abs(z[static_cast<size_t>(i)]));
        std::vector<cplx> zp = z, zm = z;
        zp[static_cast<size_t>(i)] += h;
        zm[static_cast<size_t>(i)] -= h;
        cplx fp = Eigen::PartialPivLU<Mat>(q.evaluate(zp)).determinant();
        cplx fm = Eigen::PartialPivLU<Mat>(q.evaluate(zm)).determinant();
        cplx f0 = Eigen::PartialPivLU<Mat>(q.evaluate(z)).determinant();
        evals += 3;
        cplx der = (fp - fm) / (2.0 * h);
        if (std::abs(der) < 1e-300) continue;
        cplx step = f0 / der;
        for (double damp = 1.0; damp >= 1.0 / 64.0; damp /= 2.0) {
          std::vector<cplx> zn = z;
          zn[static_cast<size_t>(i)] = nudge_inside(
              d_list[static_cast<size_t>(i)], z[static_cast<size_t>(i)] - damp * step);
          auto [vn, sn] = det_at(zn);
          if (vn < val) {
            z = zn;
            val = vn;
            scale = sn;
            improved = true;
            break;
          }
        }
      }
      if (!improved) break;
    }
    if (val < best) {
      best = val;
      best_scale = scale;
      bestz = z;
    }
    if (best <= 1e-9 * best_scale) {
      bool inside = true;
      for (int i = 0; i < k; ++i)
        inside = inside && d_list[static_cast<size_t>(i)].contains(bestz[static_cast<size_t>(i)]);
      if (inside) {
        out.falsified = true;
        out.witness = bestz;
        out.witness_residual = best;
        out.samples_used = evals;
        out.note = "determinant zero located at " + fmt(bestz);
        return out;
      }
    }
  }
  out.witness = bestz;
  out.witness_residual = best;
  out.samples_used = evals;
  out.note =
      "no determinant zero found within budget (sampling cannot certify "
      "stability); smallest |det| seen: " +
      fmt(cplx(best, 0.0));
  return out;
}

// ---------------------------------------------------------------------------
// Multivariate hyperstability
// ---------------------------------------------------------------------------

namespace {

bool regions_equal(const Region& a, const Region& b) {
  return a.kind == b.kind && a.center == b.center && a.radius == b.radius &&
         a.phi == b.phi && a.offset == b.offset && a.arg_lo == b.arg_lo &&
         a.arg_hi == b.arg_hi && a.closed == b.closed &&
         a.contains_zero == b.contains_zero;
}

/// If q is symmetric and multi-affine, recover the by-level form.
std::optional<MultiAffineSymmetricMP> recover_symmetric(
    const SparseMVMatrixPoly& q) {
  const int k = q.kappa();
  const int n = q.size();
  std::vector<Mat> lv(static_cast<size_t>(k) + 1, Mat::Zero(n, n));
  std::vector<bool> seen(static_cast<size_t>(k) + 1, false);
  std::vector<int> count(static_cast<size_t>(k) + 1, 0);
  for (const auto& [e, a] : q.terms()) {
    int j = 0;
    for (int i = 0; i < k; ++i) {
      if (e[static_cast<size_t>(i)] > 1) return std::nullopt;  // not multi-affine
      j += e[static_cast<size_t>(i)];
    }
    Mat scaled = binom(k, j) * a;
    if (!seen[static_cast<size_t>(j)]) {
      lv[static_cast<size_t>(j)] = scaled;
      seen[static_cast<size_t>(j)] = true;
    } else if ((lv[static_cast<size_t>(j)] - scaled).norm() >
               1e-12 * std::max(1.0, lv[static_cast<size_t>(j)].norm())) {
      return std::nullopt;  // coefficients differ across one level
    }
    ++count[static_cast<size_t>(j)];
  }
  for (int j = 0; j <= k; ++j)
    if (seen[static_cast<size_t>(j)] &&
        count[static_cast<size_t>(j)] != static_cast<int>(binom(k, j)))
      return std::nullopt;  // a level is only partially populated
  return MultiAffineSymmetricMP(k, lv);
}

}  // namespace

HyperVerdict mv_hyperstable(const SparseMVMatrixPoly& q,
                            const std::vector<Region>& d_list,
                            const SearchBudget& budget) {
  if (static_cast<int>(d_list.size()) != q.kappa())
    throw ShapeMismatch("mv_hyperstable: one region per variable is required");
  const int k = q.kappa();
  const int n = q.size();
  HyperVerdict v;
  if (q.terms().empty()) {
    v.status = HyperStatus::Falsified;
    v.evidence.push_back("the zero polynomial admits no nonzero section");
    return v;
  }

  // Route 0: a determinant zero in the product region falsifies outright
  // (the kernel direction makes every section vanish there).
  {
    MvStabilityResult ms = mv_stable(q, d_list, budget);
    if (ms.falsified) {
      Mat a = q.evaluate(ms.witness);
      Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
      Vec x = svd.matrixV().col(n - 1);
      v.status = HyperStatus::Falsified;
      v.falsifier = x;
      v.evidence.push_back("Q is singular inside the product region: " +
                           ms.note +
                           "; the kernel direction makes every section vanish");
      return v;
    }
    v.evidence.push_back("no determinant zero found in the product region (" +
                         std::to_string(ms.samples_used) +
                         " determinant samples)");
  }

  // Route 1: symmetric multi-affine over a common circular factor reduces to
  // the univariate diagonal (both directions of the polarization transfer).
  bool same = true;
  for (int i = 1; i < k; ++i)
    same = same && regions_equal(d_list[0], d_list[static_cast<size_t>(i)]);
  if (same && (d_list[0].kind == RegionKind::Disc ||
               d_list[0].kind == RegionKind::HalfPlane)) {
    if (auto sym = recover_symmetric(q)) {
      HyperVerdict base = check_hyperstable(diagonal(*sym), d_list[0], budget);
      std::vector<std::string> pre = v.evidence;
      pre.push_back(
          "Q is symmetric multi-affine over a common disc / half-plane "
          "factor: hyperstability is equivalent to that of the diagonal "
          "restriction");
      switch (base.status) {
        case HyperStatus::CertifiedHyperstable:
        case HyperStatus::Falsified:
          v = base;  // certificates and falsifiers transfer verbatim
          break;
        case HyperStatus::NotStable:
          v.status = HyperStatus::NotStable;
          v.eigenvalue_in_region = base.eigenvalue_in_region;
          break;
        case HyperStatus::StableOnly:
        case HyperStatus::Unknown:
          v.status = HyperStatus::Unknown;  // stability itself does not transfer
          break;
      }
      pre.insert(pre.end(), base.evidence.begin(), base.evidence.end());
      if (base.status == HyperStatus::StableOnly)
        pre.push_back(
            "the diagonal restriction found no falsifier, but multivariate "
            "stability is not implied by diagonal stability");
      v.evidence = pre;
      return v;
    }
  }

  // Route 2: upper-triangular coefficients with monomial diagonal entries.
  {
    bool upper = true;
    for (const auto& [e, a] : q.terms()) {
      for (int i = 1; i < n && upper; ++i)
        for (int c = 0; c < i; ++c)
          if (std::abs(a(i, c)) != 0.0) {
            upper = false;
            break;
          }
      if (!upper) break;
    }
    if (upper) {
      bool all_ok = true;
      std::vector<std::string> notes;
      for (int i = 0; i < n && all_ok; ++i) {
        std::vector<std::pair<std::vector<int>, cplx>> entry;
        for (const auto& [e, a] : q.terms())
          if (std::abs(a(i, i)) != 0.0) entry.emplace_back(e, a(i, i));
        if (entry.size() != 1) {
          all_ok = false;
          break;
        }
        const auto& [e, c] = entry.front();
        for (int vix = 0; vix < k; ++vix) {
          if (e[static_cast<size_t>(vix)] > 0 &&
              d_list[static_cast<size_t>(vix)].contains(cplx(0.0, 0.0))) {
            all_ok = false;
            break;
          }
        }
        if (all_ok) {
          std::ostringstream os;
          os << "diagonal entry " << i + 1
             << " is a monomial that cannot vanish on the product region";
          notes.push_back(os.str());
        }
      }
      if (all_ok) {
        v.status = HyperStatus::CertifiedHyperstable;
        v.method = CertMethod::BlockTriangular;
        v.evidence.push_back(
            "Q is upper-triangular with monomial diagonal entries that are "
            "zero-free on the product region: the 1 x 1 diagonal blocks are "
            "hyperstable");
        v.evidence.insert(v.evidence.end(), notes.begin(), notes.end());
        return v;
      }
    }
  }

  // Route 3: sampled directions x; only falsification is conclusive.
  {
    RngEngine rng(budget.seed + 7919);
    const auto& tm = q.terms();
    const int m = static_cast<int>(tm.size());
    int unresolved = 0;
    const int total = std::max(4, budget.x_samples);
    for (int s = 0; s < total; ++s) {
      Vec x;
      if (s < n) {
        x = Vec::Zero(n);
        x(s) = 1.0;
      } else {
        x = random_unit_vector(rng, n);
      }
      Mat vmat(n, m);
      std::vector<const std::vector<int>*> keys;
      keys.reserve(static_cast<size_t>(m));
      int col = 0;
      for (const auto& [e, a] : tm) {
        vmat.col(col) = a * x;
        keys.push_back(&e);
        ++col;
      }
      Eigen::JacobiSVD<Mat> svd(vmat, Eigen::ComputeThinV);
      const auto& sv = svd.singularValues();
      double s0 = sv.size() > 0 ? sv(0) : 0.0;
      int r = 0;
      if (s0 > 0.0)
        for (int i = 0; i < sv.size(); ++i)
          if (sv(i) > 1e-10 * s0) ++r;
      if (r == 0) {
        v.status = HyperStatus::Falsified;
        v.falsifier = x;
        v.evidence.push_back(
            "Q(z)x vanishes identically for this direction: every section is "
            "the zero polynomial");
        return v;
      }
      if (r == 1) {
        // every section is a scalar multiple of one generator; a zero of the
        // generator inside the product region falsifies
        Vec b = svd.matrixV().col(0).conjugate();
        SparseMVMatrixPoly gen(k, 1);
        for (int t = 0; t < m; ++t) {
          Mat c(1, 1);
          c(0, 0) = b(t);
          gen.add_term(*keys[static_cast<size_t>(t)], c);
        }
        MvStabilityResult zr = mv_stable(gen, d_list, budget);
        if (zr.falsified) {
          v.status = HyperStatus::Falsified;
          v.falsifier = x;
          v.evidence.push_back(
              "all sections for this direction are multiples of one scalar "
              "generator, and the generator vanishes inside the product "
              "region: " +
              zr.note);
          return v;
        }
        ++unresolved;
      } else {
        ++unresolved;
      }
    }
    v.status = HyperStatus::Unknown;
    v.evidence.push_back("no falsifying direction among " +
                         std::to_string(total) +
                         " samples (sampling cannot certify hyperstability)");
    (void)unresolved;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Degree-raising composition
// ---------------------------------------------------------------------------

CompositionResult compose_and_check(const MatrixPolynomial& p, int kappa,
                                    const std::vector<ComplexPolynomial>& p_list,
                                    const Region& d,
                                    const Region& claimed_region,
                                    const SearchBudget& budget) {
  if (p.is_zero() || p.size() == 0)
    throw ShapeMismatch("compose_and_check: zero polynomial");
  if (static_cast<int>(p_list.size()) != kappa)
    throw ShapeMismatch(
        "compose_and_check: expected kappa scalar polynomials");
  if (kappa < std::max(1, p.degree()))
    throw KappaTooSmall("compose_and_check: kappa must be at least deg P");
  if (kappa > kMaxKappa)
    throw SizeCapExceeded("compose_and_check: kappa exceeds the cap of " +
                          std::to_string(kMaxKappa));
  if (!(d.kind == RegionKind::Disc || d.kind == RegionKind::HalfPlane))
    throw PreconditionViolated(
        "compose_and_check: D must be a disc or a half-plane");

  // elementary symmetric polynomials of p_1, ..., p_kappa
  std::vector<ComplexPolynomial> e(static_cast<size_t>(kappa) + 1);
  e[0] = ComplexPolynomial::constant(1.0);
  for (int i = 0; i < kappa; ++i)
    for (int j = std::min(i + 1, kappa); j >= 1; --j)
      e[static_cast<size_t>(j)] =
          e[static_cast<size_t>(j)] +
          p_list[static_cast<size_t>(i)] * e[static_cast<size_t>(j) - 1];

  const int n = p.size();
  int dmax = 0;
  for (int j = 0; j <= kappa; ++j)
    if (p.coeff(j).norm() > 0.0 && !e[static_cast<size_t>(j)].is_zero())
      dmax = std::max(dmax, e[static_cast<size_t>(j)].degree());
  std::vector<Mat> cs(static_cast<size_t>(dmax) + 1, Mat::Zero(n, n));
  for (int j = 0; j <= kappa; ++j) {
    Mat aj = p.coeff(j);
    if (aj.norm() == 0.0 || e[static_cast<size_t>(j)].is_zero()) continue;
    const double w = 1.0 / binom(kappa, j);
    for (int t = 0; t <= e[static_cast<size_t>(j)].degree(); ++t)
      cs[static_cast<size_t>(t)] += (w * e[static_cast<size_t>(j)].coeff(t)) * aj;
  }

  CompositionResult out{MatrixPolynomial(cs), HyperVerdict{}, HyperVerdict{}};
  out.base = check_hyperstable(p, d, budget);

  // sample-validate the claimed region: each p_i must map it into D
  RngEngine rng(budget.seed + 101);
  const int checks = 64;
  for (int s = 0; s < checks; ++s) {
    cplx lam = random_point(claimed_region, rng);
    for (int i = 0; i < kappa; ++i) {
      cplx img = p_list[static_cast<size_t>(i)].evaluate(lam);
      if (!d.contains(img)) {
        std::ostringstream os;
        os << "compose_and_check: sampled lambda = " << fmt(lam)
           << " in the claimed region maps outside D through p_" << i + 1
           << " (image " << fmt(img) << ")";
        throw PreconditionViolated(os.str());
      }
    }
  }

  HyperVerdict tv;
  if (out.base.status == HyperStatus::CertifiedHyperstable) {
    StabilityResult sr = check_stable(out.composed, claimed_region);
    if (sr.status == StabilityStatus::NotStable) {
      tv.status = HyperStatus::NotStable;
      tv.eigenvalue_in_region = sr.eigenvalue_in_region;
      tv.evidence.push_back(
          "the composed polynomial has an eigenvalue inside the claimed "
          "region at " +
          fmt(*sr.eigenvalue_in_region) +
          "; the claimed region cannot lie inside the common preimage");
    } else if (sr.status == StabilityStatus::Singular) {
      tv.status = HyperStatus::Unknown;
      tv.evidence.push_back(
          "the composed polynomial is singular; the transfer is rejected");
    } else {
      tv.status = HyperStatus::CertifiedHyperstable;
      tv.method = out.base.method;
      tv.region = claimed_region;
      tv.evidence.push_back(
          "degree-raising transfer from the certified base polynomial (" +
          std::to_string(checks) +
          " sample points validated that the claimed region maps into D "
          "under every p_i)");
    }
  } else {
    tv.status = HyperStatus::Unknown;
    tv.evidence.push_back("the base polynomial was not certified (status " +
                          to_string(out.base.status) +
                          "); the composition inherits no certificate");
  }
  out.verdict = tv;
  return out;
}

// ---------------------------------------------------------------------------
// Multivariate Gauss-Lucas harness
// ---------------------------------------------------------------------------

MvGaussLucasReport mv_gauss_lucas_harness(const SparseMVMatrixPoly& p, int j,
                                          const std::vector<Region>& d_list,
                                          const SearchBudget& budget) {
  if (p.size() != 1)
    throw ShapeMismatch(
        "mv_gauss_lucas_harness: a scalar (1 x 1) polynomial is required");
  if (j < 1 || j > p.kappa())
    throw IndexOutOfRange(
        "mv_gauss_lucas_harness: variable index out of range");
  if (static_cast<int>(d_list.size()) != p.kappa())
    throw ShapeMismatch(
        "mv_gauss_lucas_harness: one region per variable is required");
  if (!d_list[static_cast<size_t>(j) - 1].complement_is_convex())
    throw PreconditionViolated(
        "mv_gauss_lucas_harness: the complement of D_" + std::to_string(j) +
        " must be convex");

  MvGaussLucasReport rep;
  SparseMVMatrixPoly dp = p.partial_derivative(j);
  if (dp.terms().empty()) {
    rep.notes.push_back(
        "the partial derivative vanishes identically; nothing to check");
    return rep;
  }
  MvStabilityResult base = mv_stable(p, d_list, budget);
  rep.base_zero_found = base.falsified;
  rep.notes.push_back(base.falsified
                          ? "p itself has a zero in the product region: " +
                                base.note
                          : "no zero of p found in the product region");
  MvStabilityResult der = mv_stable(dp, d_list, budget);
  if (der.falsified) {
    rep.derivative_zeros_found = 1;
    rep.notes.push_back("zero of the partial derivative: " + der.note);
    if (!base.falsified) {
      rep.violations = 1;
      rep.notes.push_back(
          "violation: the derivative vanishes in the product region while p "
          "appears zero-free there, contrary to the convex-complement "
          "transfer");
    }
  } else {
    rep.notes.push_back("no zero of the partial derivative found: " + der.note);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Stability-preserving transforms
// ---------------------------------------------------------------------------

SparseMVMatrixPoly permute_variables(const SparseMVMatrixPoly& q,
                                     const std::vector<int>& sigma) {
  const int k = q.kappa();
  if (static_cast<int>(sigma.size()) != k)
    throw ShapeMismatch("permute_variables: sigma must have kappa entries");
  std::vector<bool> hit(static_cast<size_t>(k), false);
  for (int v : sigma) {
    if (v < 1 || v > k || hit[static_cast<size_t>(v) - 1])
      throw ShapeMismatch(
          "permute_variables: sigma is not a permutation of 1..kappa");
    hit[static_cast<size_t>(v) - 1] = true;
  }
  SparseMVMatrixPoly out(k, q.size());
  for (const auto& [e, a] : q.terms()) {
    std::vector<int> e2(static_cast<size_t>(k), 0);
    for (int i = 0; i < k; ++i)
      e2[static_cast<size_t>(sigma[static_cast<size_t>(i)]) - 1] = e[static_cast<size_t>(i)];
    out.add_term(e2, a);
  }
  return out;
}

SparseMVMatrixPoly scale_variable(const SparseMVMatrixPoly& q, int j,
                                  double a) {
  if (j < 1 || j > q.kappa())
    throw IndexOutOfRange("scale_variable: variable index out of range");
  if (!(a > 0.0))
    throw HypothesisViolated(
        "scale_variable: the factor must be positive (rotations go through "
        "invert_rotate_variable)");
  SparseMVMatrixPoly out(q.kappa(), q.size());
  for (const auto& [e, m] : q.terms())
    out.add_term(e, std::pow(a, e[static_cast<size_t>(j) - 1]) * m);
  return out;
}

SparseMVMatrixPoly diagonalize_prefix(const SparseMVMatrixPoly& q, int j) {
  if (j < 1 || j > q.kappa())
    throw IndexOutOfRange("diagonalize_prefix: variable index out of range");
  if (j == 1) return q;
  const int k = q.kappa();
  SparseMVMatrixPoly out(k - j + 1, q.size());
  for (const auto& [e, m] : q.terms()) {
    int s = 0;
    for (int i = 0; i < j; ++i) s += e[static_cast<size_t>(i)];
    if (s > kMaxSparseDegree)
      throw SizeCapExceeded(
          "diagonalize_prefix: the merged exponent exceeds the degree cap");
    std::vector<int> e2(static_cast<size_t>(k - j + 1), 0);
    e2[0] = s;
    for (int i = j; i < k; ++i) e2[static_cast<size_t>(i - j + 1)] = e[static_cast<size_t>(i)];
    out.add_term(e2, m);
  }
  return out;
}

SparseMVMatrixPoly invert_rotate_variable(const SparseMVMatrixPoly& q, int j,
                                          double phi) {
  if (j < 1 || j > q.kappa())
    throw IndexOutOfRange(
        "invert_rotate_variable: variable index out of range");
  const int dj = q.degree_in(j);
  const cplx f = -std::polar(1.0, -2.0 * phi);
  SparseMVMatrixPoly out(q.kappa(), q.size());
  for (const auto& [e, m] : q.terms()) {
    const int ej = e[static_cast<size_t>(j) - 1];
    std::vector<int> e2 = e;
    e2[static_cast<size_t>(j) - 1] = dj - ej;
    out.add_term(e2, cpow_int(f, ej) * m);
  }
  return out;
}

SparseMVMatrixPoly specialize_variable(const SparseMVMatrixPoly& q, int j,
                                       cplx a, const Region& h) {
  if (j < 1 || j > q.kappa())
    throw IndexOutOfRange("specialize_variable: variable index out of range");
  if (h.kind != RegionKind::HalfPlane)
    throw PreconditionViolated(
        "specialize_variable: specialization is established for half-plane "
        "factors");
  if (!(h.margin(a).value > 0.0))
    throw BoundarySpecialization(
        "specialize_variable: the value must lie strictly inside the "
        "half-plane (boundary points do not preserve hyperstability)");
  if (q.kappa() == 1)
    throw ShapeMismatch("specialize_variable: cannot remove the only variable");
  SparseMVMatrixPoly out(q.kappa() - 1, q.size());
  for (const auto& [e, m] : q.terms()) {
    std::vector<int> e2;
    e2.reserve(static_cast<size_t>(q.kappa()) - 1);
    for (int i = 0; i < q.kappa(); ++i)
      if (i != j - 1) e2.push_back(e[static_cast<size_t>(i)]);
    out.add_term(e2, cpow_int(a, e[static_cast<size_t>(j) - 1]) * m);
  }
  return out;
}

SparseMVMatrixPoly basic_transform(const SparseMVMatrixPoly& q,
                                   const MvTransformSpec& t) {
  switch (t.kind) {
    case MvTransform::Permute:
      return permute_variables(q, t.permutation);
    case MvTransform::Scale:
      return scale_variable(q, t.variable, t.scale);
    case MvTransform::Diagonalize:
      return diagonalize_prefix(q, t.variable);
    case MvTransform::InvertRotate:
      return invert_rotate_variable(q, t.variable, t.phi);
    case MvTransform::Specialize:
      if (!t.half_plane)
        throw ShapeMismatch(
            "basic_transform: Specialize requires the half-plane factor");
      return specialize_variable(q, t.variable, t.value, *t.half_plane);
  }
  throw ShapeMismatch("basic_transform: unknown transform kind");
}

}  // namespace polystab
