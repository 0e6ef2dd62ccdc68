#include "polystab/bounds.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "polystab/rng.hpp"

namespace polystab {

namespace {

double two_norm(const Mat& m) { return norms(m).two_norm; }

void check_im_psd_neg(const Mat& b, int index) {
  Mat im_part = (b - b.adjoint()) / cplx(0.0, 2.0);
  Eigen::SelfAdjointEigenSolver<Mat> es(im_part, Eigen::EigenvaluesOnly);
  double top = es.eigenvalues()(es.eigenvalues().size() - 1);
  if (top > 1e-10 * std::max(1.0, b.norm()))
    throw HypothesisViolated("factor B_" + std::to_string(index) +
                             " has Im B not negative semidefinite");
}

void require_monic(const MatrixPolynomial& p) {
  Mat a0 = p.coeff(0);
  if ((a0 - Mat::Identity(p.size(), p.size())).norm() >
      1e-12 * std::max(1.0, a0.norm()))
    throw NotMonic();
}

void require_calculus_hypotheses(const ComplexPolynomial& p) {
  if (p.is_zero() || std::abs(p.evaluate(cplx(0.0, 0.0)) - 1.0) > 1e-12)
    throw NotNormalized();
  if (p.degree() >= 1 &&
      !is_stable(p, Region::upper_half_plane(), /*tau_bnd=*/1e-9))
    throw NotStable("p must have no roots in the open upper half-plane");
}

/// |a_1|^2 - 2 re a_2; nonnegative for normalized H_0-stable p, clamped
/// against rounding for the square root uses.
double second_order_term(const ComplexPolynomial& p) {
  cplx a1 = p.coeff(1), a2 = p.coeff(2);
  return std::norm(a1) - 2.0 * a2.real();
}

Mat matrix_power(Mat base, int k) {
  Mat acc = Mat::Identity(base.rows(), base.cols());
  while (k > 0) {
    if (k & 1) acc = acc * base;
    base = base * base;
    k >>= 1;
  }
  return acc;
}

const char* kBoundOrder[] = {"thm_szasz", "frob", "alt", "pA1", "pA2", "svn"};

void select_tightest(BoundReport& r) {
  double best = 0.0;
  for (const char* key : kBoundOrder) {
    auto it = r.bounds.find(key);
    if (it == r.bounds.end() || !it->second.applicable || it->second.degenerate)
      continue;
    if (r.tightest.empty() || it->second.value < best) {
      r.tightest = key;
      best = it->second.value;
    }
  }
  if (r.tightest.empty()) throw NoApplicableBound();
}

}  // namespace

FactoredPolynomial FactoredPolynomial::from_factors(std::vector<Mat> bs) {
  FactoredPolynomial f;
  f.d = static_cast<int>(bs.size());
  f.n = f.d > 0 ? static_cast<int>(bs[0].rows()) : 1;
  for (int j = 0; j < f.d; ++j) {
    const Mat& b = bs[static_cast<std::size_t>(j)];
    if (b.rows() != f.n || b.cols() != f.n)
      throw ShapeMismatch("factors must be square of equal size");
    check_im_psd_neg(b, j + 1);
  }

  // Expand prod (I + lambda B_j) by sequential convolution.
  std::vector<Mat> coeffs{Mat::Identity(f.n, f.n)};
  for (const Mat& b : bs) {
    std::vector<Mat> next(coeffs.size() + 1, Mat::Zero(f.n, f.n));
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      next[i] += coeffs[i];
      next[i + 1] += coeffs[i] * b;
    }
    coeffs = std::move(next);
  }
  f.expanded = MatrixPolynomial(std::move(coeffs));
  f.factors = std::move(bs);

  // Cross-check the leading structure coefficients against the factors.
  Mat a1 = Mat::Zero(f.n, f.n), a2 = Mat::Zero(f.n, f.n);
  for (int j = 0; j < f.d; ++j) {
    a1 += f.factors[static_cast<std::size_t>(j)];
    for (int k2 = j + 1; k2 < f.d; ++k2)
      a2 += f.factors[static_cast<std::size_t>(j)] * f.factors[static_cast<std::size_t>(k2)];
  }
  double s1 = std::max(1.0, a1.norm()), s2 = std::max(1.0, a2.norm());
  if ((f.expanded.coeff(1) - a1).norm() > 1e-10 * s1 ||
      (f.expanded.coeff(2) - a2).norm() > 1e-10 * s2)
    throw NumericFailure("factored expansion drifted from sum/pair-product identities");
  return f;
}

Mat poly_at_matrix(const ComplexPolynomial& p, const Mat& a) {
  if (a.rows() != a.cols()) throw ShapeMismatch("p(A) needs a square matrix");
  const int n = static_cast<int>(a.rows());
  Mat acc = Mat::Zero(n, n);
  if (p.is_zero()) return acc;
  const auto& c = p.coeffs();
  for (auto it = c.rbegin(); it != c.rend(); ++it)
    acc = acc * a + *it * Mat::Identity(n, n);
  return acc;
}

double bound_thm_szasz(const MatrixPolynomial& p, cplx lambda) {
  require_monic(p);
  Mat a1 = p.coeff(1), a2 = p.coeff(2);
  double abs2 = std::norm(lambda);
  double lh = lambda_H(lambda * a1 - abs2 * a2);
  double na1 = two_norm(a1);
  return 2.0 * std::exp(lh + 0.5 * abs2 * na1 * na1);
}

double bound_frob(const FactoredPolynomial& f, cplx lambda) {
  Mat a1 = f.expanded.coeff(1), a2 = f.expanded.coeff(2);
  double abs2 = std::norm(lambda);
  double t1 = (lambda * a1).trace().real() / f.n;
  double t2 = (a1.squaredNorm() - 2.0 * a2.trace().real()) * abs2 / (2.0 * f.n);
  return std::pow(static_cast<double>(f.n), 0.5 * f.d) * std::exp(t1 + t2);
}

double bound_alt(const FactoredPolynomial& f, cplx lambda) {
  Mat a1 = f.expanded.coeff(1), a2 = f.expanded.coeff(2);
  double abs2 = std::norm(lambda);
  double t1 = (lambda * a1).trace().real();
  double t2 = (a1.squaredNorm() - 2.0 * a2.trace().real()) * abs2 / 2.0;
  return std::exp(t1 + t2 + 0.5 * f.d * (f.n - 1));
}

double bound_pA1(const ComplexPolynomial& p, const Mat& a) {
  require_calculus_hypotheses(p);
  const double n = static_cast<double>(a.rows());
  cplx a1 = p.coeff(1);
  double t1 = (a1 * a).trace().real() / n;
  double t2 = second_order_term(p) * a.squaredNorm() / (2.0 * n);
  return std::pow(n, 0.5 * p.degree()) * std::exp(t1 + t2);
}

double bound_pA2(const ComplexPolynomial& p, const Mat& a) {
  require_calculus_hypotheses(p);
  double q = std::max(0.0, second_order_term(p));
  return std::exp(two_norm(a) * std::sqrt(p.degree() * q));
}

double bound_svn(const ComplexPolynomial& p, const Mat& a) {
  require_calculus_hypotheses(p);
  double na = two_norm(a);
  return std::exp(std::abs(p.coeff(1)) * na + 0.5 * second_order_term(p) * na * na);
}

double von_neumann_bound(const ComplexPolynomial& p, const Mat& a, int samples) {
  double r = two_norm(a);
  double sup = 0.0;
  for (int k = 0; k < samples; ++k)
    sup = std::max(sup, std::abs(p.evaluate(std::polar(r, 2.0 * pi * k / samples))));
  return sup;
}

SzaszHypothesis szasz_halfplane_check(const MatrixPolynomial& p, int directions,
                                      std::uint64_t seed) {
  SzaszHypothesis h;
  const int n = p.size();
  std::vector<cplx> pts;
  RngEngine rng(seed);
  for (int s = 0; s < directions; ++s) {
    Vec x = s < n ? Vec(Vec::Unit(n, s)) : random_unit_vector(rng, n);
    std::vector<cplx> sec(static_cast<std::size_t>(p.degree()) + 1);
    for (int j = 0; j <= p.degree(); ++j)
      sec[static_cast<std::size_t>(j)] = x.dot(p.coeff(j) * x);
    ComplexPolynomial spoly{std::move(sec)};
    if (spoly.degree() < 1) continue;
    for (cplx r : roots(spoly).roots) pts.push_back(r);
  }
  h.points = static_cast<int>(pts.size());
  const int phi_grid = 1440;
  for (int k = 0; k < phi_grid; ++k) {
    double phi = -pi + 2.0 * pi * k / phi_grid;
    bool ok = true;
    for (cplx z : pts)
      if (std::imag(z * std::polar(1.0, phi)) > 1e-9 * (1.0 + std::abs(z))) {
        ok = false;
        break;
      }
    if (ok) {
      h.admits_half_plane = true;
      h.phi = phi;
      return h;
    }
  }
  h.admits_half_plane = false;
  return h;
}

BoundReport compare(const MatrixPolynomial& p, cplx lambda,
                    bool caller_asserts_halfplane) {
  BoundReport r;
  r.lambda = lambda;
  r.lhs = two_norm(p.evaluate(lambda));
  r.lhs_norm = "two";
  BoundEntry sz;
  if (caller_asserts_halfplane) {
    r.szasz_hypothesis = "caller-asserted half-plane containment of W(P)";
    sz.applicable = true;
  } else {
    SzaszHypothesis h = szasz_halfplane_check(p);
    if (h.admits_half_plane) {
      r.szasz_hypothesis = "grid-checked: " + std::to_string(h.points) +
                           " sampled points of W(P) fit a half-plane";
      sz.applicable = true;
    } else {
      r.szasz_hypothesis = "grid check failed: sampled points of W(P) admit no "
                           "half-plane through 0";
      sz.note = "hypothesis not met";
    }
  }
  if (sz.applicable) sz.value = bound_thm_szasz(p, lambda);
  r.bounds["thm_szasz"] = sz;
  for (const char* key : {"frob", "alt"})
    r.bounds[key] = BoundEntry{false, 0.0, false, "no factorization supplied"};
  for (const char* key : {"pA1", "pA2", "svn"})
    r.bounds[key] = BoundEntry{false, 0.0, false, "calculus bound; input is a matrix polynomial"};
  select_tightest(r);
  return r;
}

BoundReport compare(const FactoredPolynomial& f, cplx lambda,
                    bool caller_asserts_halfplane) {
  BoundReport r;
  r.lambda = lambda;
  r.lhs = f.expanded.evaluate(lambda).norm();
  r.lhs_norm = "frobenius";
  const double root_n = std::sqrt(static_cast<double>(f.n));

  BoundEntry sz;
  if (caller_asserts_halfplane) {
    r.szasz_hypothesis = "caller-asserted half-plane containment of W(P)";
    sz.applicable = true;
  } else {
    SzaszHypothesis h = szasz_halfplane_check(f.expanded);
    if (h.admits_half_plane) {
      r.szasz_hypothesis = "grid-checked: " + std::to_string(h.points) +
                           " sampled points of W(P) fit a half-plane";
      sz.applicable = true;
    } else {
      r.szasz_hypothesis = "grid check failed: sampled points of W(P) admit no "
                           "half-plane through 0";
      sz.note = "hypothesis not met";
    }
  }
  if (sz.applicable) {
    sz.value = root_n * bound_thm_szasz(f.expanded, lambda);
    sz.note = "two-norm bound times sqrt(n)";
  }
  r.bounds["thm_szasz"] = sz;

  BoundEntry fb{true, bound_frob(f, lambda), f.d == 0,
                f.d == 0 ? "degenerate: bound formula assumes d >= 1" : ""};
  BoundEntry ab{true, bound_alt(f, lambda), f.d == 0,
                f.d == 0 ? "degenerate: bound formula assumes d >= 1" : ""};
  r.bounds["frob"] = fb;
  r.bounds["alt"] = ab;
  for (const char* key : {"pA1", "pA2", "svn"})
    r.bounds[key] = BoundEntry{false, 0.0, false, "calculus bound; input is a factored product"};
  select_tightest(r);
  return r;
}

BoundReport compare(const ComplexPolynomial& p, const Mat& a) {
  BoundReport r;
  r.lambda = cplx(0.0, 0.0);
  r.lhs = poly_at_matrix(p, a).norm();
  r.lhs_norm = "frobenius";
  r.szasz_hypothesis = "not applicable to the calculus bounds";
  const double root_n = std::sqrt(static_cast<double>(a.rows()));
  for (const char* key : {"thm_szasz", "frob", "alt"})
    r.bounds[key] = BoundEntry{false, 0.0, false,
                               "matrix-polynomial bound; input is p(A)"};
  r.bounds["pA1"] = BoundEntry{true, bound_pA1(p, a), false, ""};
  r.bounds["pA2"] = BoundEntry{true, root_n * bound_pA2(p, a), false,
                               "two-norm bound times sqrt(n)"};
  r.bounds["svn"] = BoundEntry{true, root_n * bound_svn(p, a), false,
                               "two-norm bound times sqrt(n)"};
  select_tightest(r);
  return r;
}

FactoredPolynomial ones_fixture(int n, int d) {
  if (n < 1 || d < 0) throw SchemaError("ones_fixture needs n >= 1, d >= 0");
  std::vector<Mat> bs(static_cast<std::size_t>(d), Mat::Ones(n, n));
  return FactoredPolynomial::from_factors(std::move(bs));
}

double ones_frob_closed_form(int n, int d, double lambda) {
  if (!(lambda > 0.0)) throw SchemaError("closed form stated for lambda > 0");
  return std::sqrt(std::pow(n * lambda + 1.0, 2.0 * d) + n - 1.0);
}

Mat CmvFixture::evaluate(cplx lambda) const {
  Mat id = Mat::Identity(n, n);
  double rk = std::sqrt(static_cast<double>(k));
  Mat f1 = id + (lambda / static_cast<double>(k)) * c1;
  Mat f2 = id + (lambda / rk) * sqrt_dk;
  Mat f3 = id - (lambda / rk) * sqrt_dk;
  return matrix_power(f1, k) * matrix_power(f2, k) * matrix_power(f3, k);
}

double CmvFixture::limit_at_iy(double y) const {
  double y2 = y * y;
  return std::exp(y2) * std::sqrt(std::exp(static_cast<double>(n) * n * y2) + n - 1.0);
}

CmvFixture cmv_fixture(int n, int k) {
  if (n < 1 || k < 1) throw SchemaError("cmv_fixture needs n >= 1, k >= 1");
  CmvFixture f;
  f.n = n;
  f.k = k;
  f.c1 = Mat::Ones(n, n);
  f.dk = Mat::Identity(n, n) +
         (n * (k - 1.0) / (2.0 * k)) * f.c1;
  Eigen::SelfAdjointEigenSolver<Mat> es(f.dk);
  Vec root_ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().cast<cplx>();
  f.sqrt_dk = es.eigenvectors() * root_ev.asDiagonal() *
              es.eigenvectors().adjoint();
  return f;
}

}  // namespace polystab
