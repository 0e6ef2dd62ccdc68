#include "polystab/scalar_poly.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace polystab {

ComplexPolynomial::ComplexPolynomial(std::vector<cplx> ascending_coeffs)
    : c_(std::move(ascending_coeffs)) {
  trim();
}

void ComplexPolynomial::trim() {
  while (!c_.empty() && c_.back() == cplx(0.0, 0.0)) c_.pop_back();
}

ComplexPolynomial ComplexPolynomial::constant(cplx c) {
  return ComplexPolynomial(std::vector<cplx>{c});
}

ComplexPolynomial ComplexPolynomial::monomial(cplx c, int k) {
  std::vector<cplx> v(static_cast<std::size_t>(k) + 1, cplx(0.0));
  v.back() = c;
  return ComplexPolynomial(std::move(v));
}

ComplexPolynomial ComplexPolynomial::from_roots(const std::vector<cplx>& roots,
                                                cplx leading) {
  std::vector<cplx> c{leading};
  for (cplx r : roots) {
    c.push_back(0.0);
    for (int j = static_cast<int>(c.size()) - 1; j >= 1; --j)
      c[j] = c[j - 1] - r * c[j];
    c[0] *= -r;
  }
  return ComplexPolynomial(std::move(c));
}

cplx ComplexPolynomial::coeff(int j) const {
  if (j < 0 || j >= static_cast<int>(c_.size())) return {0.0, 0.0};
  return c_[j];
}

cplx ComplexPolynomial::evaluate(cplx lambda) const {
  cplx acc(0.0, 0.0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * lambda + *it;
  return acc;
}

std::pair<cplx, cplx> ComplexPolynomial::evaluate_with_derivative(
    cplx lambda) const {
  cplx p(0.0), dp(0.0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    dp = dp * lambda + p;
    p = p * lambda + *it;
  }
  return {p, dp};
}

ComplexPolynomial ComplexPolynomial::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<cplx> d(c_.size() - 1);
  for (std::size_t j = 1; j < c_.size(); ++j)
    d[j - 1] = static_cast<double>(j) * c_[j];
  return ComplexPolynomial(std::move(d));
}

ComplexPolynomial ComplexPolynomial::operator+(const ComplexPolynomial& q) const {
  std::vector<cplx> s(std::max(c_.size(), q.c_.size()), cplx(0.0));
  for (std::size_t j = 0; j < c_.size(); ++j) s[j] += c_[j];
  for (std::size_t j = 0; j < q.c_.size(); ++j) s[j] += q.c_[j];
  return ComplexPolynomial(std::move(s));
}

ComplexPolynomial ComplexPolynomial::operator-(const ComplexPolynomial& q) const {
  std::vector<cplx> s(std::max(c_.size(), q.c_.size()), cplx(0.0));
  for (std::size_t j = 0; j < c_.size(); ++j) s[j] += c_[j];
  for (std::size_t j = 0; j < q.c_.size(); ++j) s[j] -= q.c_[j];
  return ComplexPolynomial(std::move(s));
}

ComplexPolynomial ComplexPolynomial::operator*(const ComplexPolynomial& q) const {
  if (is_zero() || q.is_zero()) return {};
  std::vector<cplx> s(c_.size() + q.c_.size() - 1, cplx(0.0));
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < q.c_.size(); ++j) s[i + j] += c_[i] * q.c_[j];
  return ComplexPolynomial(std::move(s));
}

ComplexPolynomial ComplexPolynomial::operator*(cplx s) const {
  std::vector<cplx> c = c_;
  for (auto& x : c) x *= s;
  return ComplexPolynomial(std::move(c));
}

ComplexPolynomial ComplexPolynomial::compose_affine(cplx alpha, cplx beta) const {
  // Horner in the substituted variable: result = sum c_j (alpha l + beta)^j.
  ComplexPolynomial lin({beta, alpha});
  ComplexPolynomial acc;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it)
    acc = acc * lin + constant(*it);
  return acc;
}

ComplexPolynomial ComplexPolynomial::invert_rotate(double phi) const {
  if (is_zero()) throw ZeroPolynomial();
  int d = degree();
  cplx w = -std::polar(1.0, -2.0 * phi);  // -e^{-2 i phi}
  std::vector<cplx> b(static_cast<std::size_t>(d) + 1, cplx(0.0));
  cplx wj = 1.0;
  for (int j = 0; j <= d; ++j) {
    b[static_cast<std::size_t>(d - j)] = c_[static_cast<std::size_t>(j)] * wj;
    wj *= w;
  }
  return ComplexPolynomial(std::move(b));
}

double ComplexPolynomial::coeff_scale() const {
  double m = 0.0;
  for (cplx c : c_) m = std::max(m, std::abs(c));
  return m;
}

ComplexPolynomial ComplexPolynomial::truncated(double rel_tol) const {
  double cut = rel_tol * coeff_scale();
  std::vector<cplx> c = c_;
  for (auto& x : c)
    if (std::abs(x) < cut) x = 0.0;
  return ComplexPolynomial(std::move(c));
}

// ---------------------------------------------------------------------------
// Root finding
// ---------------------------------------------------------------------------

namespace {

// One sweep of Aberth-Ehrlich corrections; returns true when every
// correction is below the convergence threshold.
bool aberth_sweep(const ComplexPolynomial& p, std::vector<cplx>& z) {
  const int d = static_cast<int>(z.size());
  bool all_small = true;
  for (int k = 0; k < d; ++k) {
    auto [pv, dv] = p.evaluate_with_derivative(z[k]);
    if (pv == cplx(0.0, 0.0)) continue;
    cplx w = (dv == cplx(0.0, 0.0)) ? pv / cplx(1e-30, 0) : pv / dv;
    cplx s(0.0, 0.0);
    for (int j = 0; j < d; ++j) {
      if (j == k) continue;
      cplx diff = z[k] - z[j];
      if (diff == cplx(0.0, 0.0)) diff = cplx(1e-30, 1e-30);
      s += 1.0 / diff;
    }
    cplx denom = 1.0 - w * s;
    cplx delta = (denom == cplx(0.0, 0.0)) ? w : w / denom;
    z[k] -= delta;
    if (std::abs(delta) > 1e-14 * (1.0 + std::abs(z[k]))) all_small = false;
  }
  return all_small;
}

std::vector<cplx> companion_roots(const std::vector<cplx>& monic) {
  // monic: a_0..a_{d-1} of l^d + a_{d-1} l^{d-1} + ... + a_0
  const int d = static_cast<int>(monic.size());
  Mat C = Mat::Zero(d, d);
  for (int i = 1; i < d; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) C(i, d - 1) = -monic[static_cast<std::size_t>(i)];
  Eigen::ComplexEigenSolver<Mat> es(C, false);
  std::vector<cplx> z(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) z[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
  return z;
}

double backward_error(const ComplexPolynomial& p, cplx z) {
  double denom = 0.0, az = std::abs(z), pw = 1.0;
  for (cplx c : p.coeffs()) {
    denom += std::abs(c) * pw;
    pw *= az;
  }
  if (denom == 0.0) denom = 1.0;
  return std::abs(p.evaluate(z)) / denom;
}

double reconstruction_residual(const ComplexPolynomial& p,
                               const std::vector<cplx>& roots) {
  ComplexPolynomial q = ComplexPolynomial::from_roots(roots, p.leading());
  double res = 0.0, scale = p.coeff_scale();
  for (int j = 0; j <= p.degree(); ++j)
    res = std::max(res, std::abs(p.coeff(j) - q.coeff(j)));
  return res / (scale > 0 ? scale : 1.0);
}

// Consolidate near-coincident roots into exact multiple roots when doing so
// reproduces the coefficients at least as well. A cluster {z_i} of size m is
// replaced by Schroeder-refined iterates z <- z - m p(z)/p'(z) from the
// cluster mean (quadratic convergence to an m-fold root, where plain
// iterations are only linear and leave O(eps^{1/m}) scatter).
std::vector<cplx> consolidate_clusters(const ComplexPolynomial& p,
                                       std::vector<cplx> z) {
  const std::size_t d = z.size();
  std::vector<int> comp(d);
  std::iota(comp.begin(), comp.end(), 0);
  auto find = [&](int i) {
    while (comp[static_cast<std::size_t>(i)] != i) i = comp[static_cast<std::size_t>(i)];
    return i;
  };
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      if (std::abs(z[i] - z[j]) <= 1e-5 * (1.0 + std::abs(z[i])))
        comp[static_cast<std::size_t>(find(static_cast<int>(j)))] =
            find(static_cast<int>(i));

  std::vector<cplx> merged = z;
  bool any = false;
  for (std::size_t c = 0; c < d; ++c) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < d; ++i)
      if (static_cast<std::size_t>(find(static_cast<int>(i))) == c)
        members.push_back(i);
    if (members.size() < 2) continue;
    any = true;
    cplx mean(0.0, 0.0);
    for (auto i : members) mean += z[i];
    mean /= static_cast<double>(members.size());
    double m = static_cast<double>(members.size());
    cplx y = mean;
    for (int it = 0; it < 8; ++it) {
      auto [pv, dv] = p.evaluate_with_derivative(y);
      if (dv == cplx(0.0, 0.0)) break;
      cplx step = m * pv / dv;
      y -= step;
      if (std::abs(step) <= 1e-15 * (1.0 + std::abs(y))) break;
    }
    for (auto i : members) merged[i] = y;
  }
  if (!any) return z;
  // Adopt the merged set only if it reconstructs the coefficients as well.
  return reconstruction_residual(p, merged) <=
                 reconstruction_residual(p, z) * (1.0 + 1e-3) + 1e-15
             ? merged
             : z;
}

}  // namespace

RootSet roots(const ComplexPolynomial& p) {
  if (p.is_zero()) throw ZeroPolynomial();
  if (p.degree() == 0) throw ConstantPolynomial();
  if (p.degree() > 64)
    throw SizeCapExceeded("root finder accepts degree <= 64");

  RootSet out;
  std::vector<cplx> work = p.coeffs();
  // Exact zero roots peel off without iteration.
  while (work.size() > 1 && work.front() == cplx(0.0, 0.0)) {
    out.roots.push_back({0.0, 0.0});
    work.erase(work.begin());
  }
  const int d = static_cast<int>(work.size()) - 1;
  if (d >= 1) {
    std::vector<cplx> monic(work.begin(), work.end() - 1);
    for (auto& c : monic) c /= work.back();
    ComplexPolynomial pm = [&] {
      std::vector<cplx> full = monic;
      full.push_back(1.0);
      return ComplexPolynomial(std::move(full));
    }();

    std::vector<cplx> z;
    if (d == 1) {
      z = {-monic[0]};
    } else if (d == 2) {
      // Numerically stable quadratic formula.
      cplx b = monic[1], c0 = monic[0];
      cplx disc = std::sqrt(b * b - 4.0 * c0);
      if (std::real(std::conj(b) * disc) < 0.0) disc = -disc;
      cplx q = -0.5 * (b + disc);
      z = {q, (q == cplx(0.0, 0.0)) ? q : c0 / q};
    } else {
      double maxc = 0.0;
      for (cplx c : monic) maxc = std::max(maxc, std::abs(c));
      double cauchy = 1.0 + maxc;
      double rho = std::pow(std::max(std::abs(monic[0]), 1e-300), 1.0 / d);
      rho = std::clamp(rho, 1e-3, cauchy);
      z.resize(static_cast<std::size_t>(d));
      for (int k = 0; k < d; ++k)
        z[static_cast<std::size_t>(k)] =
            std::polar(rho, 2.0 * pi * (k + 0.35) / d);
      bool converged = false;
      for (int it = 0; it < 200 && !converged; ++it)
        converged = aberth_sweep(pm, z);
      if (!converged) {
        z = companion_roots(monic);
        out.used_companion_fallback = true;
      }
    }
    z = consolidate_clusters(pm, z);
    for (cplx r : z) out.roots.push_back(r);
  }

  std::sort(out.roots.begin(), out.roots.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  out.backward_errors.reserve(out.roots.size());
  for (cplx r : out.roots) out.backward_errors.push_back(backward_error(p, r));

  // Vieta residuals, relative to the coefficient targets.
  const int deg = p.degree();
  cplx lead = p.leading();
  cplx sum_target = -p.coeff(deg - 1) / lead;
  cplx prod_target = ((deg % 2 == 0) ? 1.0 : -1.0) * p.coeff(0) / lead;
  cplx s(0.0), pr(1.0);
  for (cplx r : out.roots) {
    s += r;
    pr *= r;
  }
  out.vieta_sum_residual = std::abs(s - sum_target) / (1.0 + std::abs(sum_target));
  out.vieta_prod_residual =
      std::abs(pr - prod_target) / (1.0 + std::abs(prod_target));
  return out;
}

StabilityCheck stability_check(const ComplexPolynomial& p, const Region& D,
                               double tau_bnd) {
  if (p.is_zero()) throw ZeroPolynomial();
  StabilityCheck r;
  r.stable = true;
  r.worst_margin = -std::numeric_limits<double>::infinity();
  if (p.degree() == 0) return r;  // constants have no roots
  for (cplx root : roots(p).roots) {
    if (D.contains(root, tau_bnd)) r.stable = false;
    if (D.boundary_sensitive(root, tau_bnd)) r.boundary_sensitive = true;
    double m = D.margin(root).value;
    if (m > r.worst_margin) {
      r.worst_margin = m;
      r.worst_root = root;
    }
  }
  return r;
}

bool is_stable(const ComplexPolynomial& p, const Region& D, double tau_bnd) {
  return stability_check(p, D, tau_bnd).stable;
}

bool palindromic_quadratic_stable(cplx a, cplx b) {
  if (a == cplx(0.0, 0.0))
    throw SchemaError("palindromic quadratic requires a != 0");
  cplx mu = b / a;
  return std::abs(mu.imag()) <= 1e-14 * (1.0 + std::abs(mu)) &&
         std::abs(mu.real()) >= 2.0;
}

namespace {

// Convex hull (monotone chain); degenerate hulls come out as 1 or 2 points.
std::vector<cplx> convex_hull(std::vector<cplx> pts) {
  std::sort(pts.begin(), pts.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const std::size_t n = pts.size();
  if (n <= 2) return pts;
  auto cross = [](cplx o, cplx a, cplx b) {
    return (a.real() - o.real()) * (b.imag() - o.imag()) -
           (a.imag() - o.imag()) * (b.real() - o.real());
  };
  std::vector<cplx> h(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

double dist_to_segment(cplx p, cplx a, cplx b) {
  cplx ab = b - a;
  double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  double t = std::clamp(
      ((p - a).real() * ab.real() + (p - a).imag() * ab.imag()) / len2, 0.0,
      1.0);
  return std::abs(p - (a + t * ab));
}

double dist_to_hull(cplx p, const std::vector<cplx>& hull) {
  if (hull.empty()) return std::numeric_limits<double>::infinity();
  if (hull.size() == 1) return std::abs(p - hull[0]);
  if (hull.size() == 2) return dist_to_segment(p, hull[0], hull[1]);
  // CCW polygon: inside iff all cross products >= 0.
  bool inside = true;
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < hull.size(); ++i) {
    cplx a = hull[i], b = hull[(i + 1) % hull.size()];
    double cr = (b.real() - a.real()) * (p.imag() - a.imag()) -
                (b.imag() - a.imag()) * (p.real() - a.real());
    if (cr < 0) inside = false;
    d = std::min(d, dist_to_segment(p, a, b));
  }
  return inside ? 0.0 : d;
}

}  // namespace

bool gauss_lucas_check(const ComplexPolynomial& p, double tau_hull) {
  if (p.degree() < 2) throw ConstantDerivative();
  RootSet rp = roots(p);
  RootSet rd = roots(p.derivative());
  std::vector<cplx> hull = convex_hull(rp.roots);
  double scale = 1.0;
  for (cplx r : rp.roots) scale = std::max(scale, std::abs(r));
  for (cplx w : rd.roots)
    if (dist_to_hull(w, hull) > tau_hull * scale) return false;
  return true;
}

double de_branges_margin(const ComplexPolynomial& p, cplx lambda) {
  if (std::abs(p.coeff(0) - cplx(1.0, 0.0)) > 1e-12) throw NotNormalized();
  cplx a1 = p.coeff(1), a2 = p.coeff(2);
  double quad = std::norm(a1) - 2.0 * a2.real();
  double rhs = std::exp(std::real(a1 * lambda) + 0.5 * quad * std::norm(lambda));
  return rhs - std::abs(p.evaluate(lambda));
}

ComplexPolynomial transform(const ComplexPolynomial& p, ScalarTransform t,
                            double param) {
  switch (t) {
    case ScalarTransform::Scale:
      if (!(param > 0.0)) throw SchemaError("scale transform needs a > 0");
      return p.compose_affine(cplx(param, 0.0), cplx(0.0, 0.0));
    case ScalarTransform::InvertRotate:
      return p.invert_rotate(param);
    case ScalarTransform::Differentiate:
      return p.derivative();
  }
  throw NumericFailure("unreachable transform kind");
}

ComplexPolynomial random_h0_stable(RngEngine& rng, int max_degree) {
  if (max_degree < 1) throw SchemaError("generator needs max_degree >= 1");
  std::uniform_int_distribution<int> dd(1, max_degree);
  int d = dd(rng);
  std::vector<cplx> rts;
  rts.reserve(static_cast<std::size_t>(d));
  while (static_cast<int>(rts.size()) < d) {
    cplx z = random_in_disc(rng, {0.0, 0.0}, 2.0);
    if (z.imag() > 0.0) z = std::conj(z);  // fold into the closed lower half
    if (std::abs(z) < 1e-3) continue;      // p(0)=1 needs roots away from 0
    rts.push_back(z);
  }
  ComplexPolynomial p = ComplexPolynomial::from_roots(rts);
  return p * (1.0 / p.coeff(0));
}

}  // namespace polystab
