#include "polystab/num_range.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "polystab/rng.hpp"
#include "polystab/scalar_poly.hpp"

namespace polystab {

namespace {

Mat herm_part(const Mat& a) { return 0.5 * (a + a.adjoint()); }

double lam_min_theta(const Mat& a, double theta) {
  Eigen::SelfAdjointEigenSolver<Mat> es(herm_part(std::polar(1.0, theta) * a),
                                        Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double lam_max_theta(const Mat& a, double theta) {
  Eigen::SelfAdjointEigenSolver<Mat> es(herm_part(std::polar(1.0, theta) * a),
                                        Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

/// Golden-section maximization on [lo, hi]; returns (argmax, max).
std::pair<double, double> golden_max(const std::function<double(double)>& f,
                                     double lo, double hi, int iters) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return fc > fd ? std::make_pair(c, fc) : std::make_pair(d, fd);
}

/// Best supporting angle: maximize theta -> lambda_min(Re(e^{i theta}A)) over
/// the grid, then refine the winning bracket.
std::pair<double, double> best_support(const Mat& a, int grid, int refine) {
  double best_theta = 0.0, best_m = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < grid; ++k) {
    double theta = 2.0 * pi * k / grid;
    double m = lam_min_theta(a, theta);
    if (m > best_m) {
      best_m = m;
      best_theta = theta;
    }
  }
  double h = 2.0 * pi / grid;
  auto [th, m] = golden_max([&](double t) { return lam_min_theta(a, t); },
                            best_theta - h, best_theta + h, refine);
  return m > best_m ? std::make_pair(wrap_angle(th), m)
                    : std::make_pair(wrap_angle(best_theta), best_m);
}

/// Distance from 0 to the segment [a, b] in the complex plane.
double segment_distance_to_zero(cplx a, cplx b) {
  cplx v = b - a;
  double vv = std::norm(v);
  if (vv == 0.0) return std::abs(a);
  double t = std::clamp(-(a.real() * v.real() + a.imag() * v.imag()) / vv, 0.0, 1.0);
  return std::abs(a + t * v);
}

/// Minimize |x*Ax| over the unit sphere by projected Wirtinger-gradient
/// descent; returns the best iterate found.
std::pair<Vec, double> sphere_minimize(const Mat& a, Vec x, int iters) {
  double f = std::abs(x.dot(a * x));
  double step = 0.5;
  for (int it = 0; it < iters; ++it) {
    cplx q = x.dot(a * x);
    Vec g = std::conj(q) * (a * x) + q * (a.adjoint() * x);
    g -= x * x.dot(g);
    double gn = g.norm();
    if (gn < 1e-300) break;
    bool improved = false;
    for (int bt = 0; bt < 40; ++bt) {
      Vec y = x - step * g;
      double ny = y.norm();
      if (ny == 0.0) break;
      y /= ny;
      double fy = std::abs(y.dot(a * y));
      if (fy < f) {
        x = y;
        f = fy;
        step *= 1.6;
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;
  }
  return {x, f};
}

/// Zero search inside the 2x2 compression B of A onto an orthonormal pair:
/// x(t, phi) = cos t q1 + e^{i phi} sin t q2, g = x*Ax. Coarse grid followed
/// by a damped Gauss-Newton polish on (t, phi).
std::pair<bool, std::pair<double, double>> compression_zero(
    const Eigen::Matrix2cd& b, double target) {
  auto g_of = [&](double t, double phi) -> cplx {
    cplx cross = std::polar(1.0, phi) * b(0, 1) + std::polar(1.0, -phi) * b(1, 0);
    double ct = std::cos(t), st = std::sin(t);
    return ct * ct * b(0, 0) + st * st * b(1, 1) + ct * st * cross;
  };
  double bt = 0.0, bphi = 0.0;
  double bval = std::abs(g_of(0.0, 0.0));
  const int nt = 48, nphi = 48;
  for (int i = 0; i <= nt; ++i)
    for (int j = 0; j < nphi; ++j) {
      double t = 0.5 * pi * i / nt, phi = 2.0 * pi * j / nphi;
      double v = std::abs(g_of(t, phi));
      if (v < bval) {
        bval = v;
        bt = t;
        bphi = phi;
      }
    }
  double mu = 1e-10;
  for (int it = 0; it < 60 && bval > 0.01 * target; ++it) {
    double ct = std::cos(bt), st = std::sin(bt);
    cplx e = std::polar(1.0, bphi);
    cplx cross = e * b(0, 1) + std::conj(e) * b(1, 0);
    cplx g = ct * ct * b(0, 0) + st * st * b(1, 1) + ct * st * cross;
    cplx dg_dt = std::sin(2.0 * bt) * (b(1, 1) - b(0, 0)) + std::cos(2.0 * bt) * cross;
    cplx dg_dphi = ct * st * (cplx(0, 1) * e * b(0, 1) - cplx(0, 1) * std::conj(e) * b(1, 0));
    Eigen::Matrix2d J;
    J << dg_dt.real(), dg_dphi.real(), dg_dt.imag(), dg_dphi.imag();
    Eigen::Vector2d r(g.real(), g.imag());
    bool stepped = false;
    for (int damp = 0; damp < 12; ++damp) {
      Eigen::Matrix2d M = J.transpose() * J + mu * Eigen::Matrix2d::Identity();
      Eigen::Vector2d delta = M.ldlt().solve(-J.transpose() * r);
      double t2 = bt + delta(0), p2 = bphi + delta(1);
      double v2 = std::abs(g_of(t2, p2));
      if (v2 < bval) {
        bt = t2;
        bphi = p2;
        bval = v2;
        mu = std::max(mu * 0.3, 1e-14);
        stepped = true;
        break;
      }
      mu *= 10.0;
    }
    if (!stepped) break;
  }
  return {bval <= target, {bt, bphi}};
}

}  // namespace

void FieldOfValuesQuery::validate() const {
  if (theta_grid < 8) throw SchemaError("theta_grid must be >= 8");
  if (!(tol > 0.0)) throw SchemaError("tol must be positive");
  if (refine_iters < 0) throw SchemaError("refine_iters must be >= 0");
}

double lambda_H(const Mat& x) {
  if (x.rows() != x.cols()) throw ShapeMismatch("lambda_H needs a square matrix");
  Eigen::SelfAdjointEigenSolver<Mat> es(herm_part(x), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

double lambda_min_H(const Mat& x) {
  if (x.rows() != x.cols()) throw ShapeMismatch("lambda_min_H needs a square matrix");
  Eigen::SelfAdjointEigenSolver<Mat> es(herm_part(x), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double numerical_radius(const Mat& a, const FieldOfValuesQuery& q) {
  q.validate();
  if (a.rows() != a.cols()) throw ShapeMismatch("numerical_radius needs a square matrix");
  if (a.rows() == 0) return 0.0;
  double best_theta = 0.0, best = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < q.theta_grid; ++k) {
    double theta = 2.0 * pi * k / q.theta_grid;
    double v = lam_max_theta(a, theta);
    if (v > best) {
      best = v;
      best_theta = theta;
    }
  }
  double h = 2.0 * pi / q.theta_grid;
  auto [th, w] = golden_max([&](double t) { return lam_max_theta(a, t); },
                            best_theta - h, best_theta + h, q.refine_iters);
  (void)th;
  w = std::max(w, best);
  Eigen::JacobiSVD<Mat> svd(a);
  double nrm2 = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  // Sandwich check with slack for the angular discretization.
  double slack = q.tol + nrm2 * h;
  if (w < 0.5 * nrm2 - slack || w > nrm2 + slack)
    throw NumericFailure("numerical radius violated ||A||/2 <= w(A) <= ||A||");
  return w;
}

ZeroRangeResult zero_in_numerical_range(const Mat& a,
                                        const FieldOfValuesQuery& q) {
  q.validate();
  if (a.rows() != a.cols())
    throw ShapeMismatch("zero_in_numerical_range needs a square matrix");
  ZeroRangeResult out;
  const int n = static_cast<int>(a.rows());
  if (n == 0) throw ShapeMismatch("empty matrix has no numerical range");
  const double scale = a.norm();
  if (scale == 0.0) {
    out.status = ZeroInRange::Yes;
    out.x = Vec::Zero(n);
    out.x(0) = 1.0;
    return out;
  }
  const double thr_yes = q.tol * std::max(1.0, scale);

  auto [theta_star, m_star] = best_support(a, q.theta_grid, q.refine_iters);
  out.margin = m_star;
  if (m_star > q.tol) {
    out.status = ZeroInRange::No;
    out.theta = theta_star;
    return out;
  }

  // Candidate boundary points v_k = u_k* A u_k from the minimizing
  // eigenvectors across the angle grid.
  std::vector<Vec> us;
  std::vector<cplx> vs;
  us.reserve(static_cast<std::size_t>(q.theta_grid));
  vs.reserve(static_cast<std::size_t>(q.theta_grid));
  for (int k = 0; k < q.theta_grid; ++k) {
    double theta = 2.0 * pi * k / q.theta_grid;
    Eigen::SelfAdjointEigenSolver<Mat> es(herm_part(std::polar(1.0, theta) * a));
    Vec u = es.eigenvectors().col(0);
    cplx v = u.dot(a * u);
    if (std::abs(v) <= thr_yes) {
      out.status = ZeroInRange::Yes;
      out.x = u;
      return out;
    }
    us.push_back(std::move(u));
    vs.push_back(v);
  }

  // Pairs whose segment passes near 0 span a 2D compression in which the
  // convexity of the range guarantees a zero; keep the best few.
  struct PairCand {
    double dist;
    int i, j;
  };
  std::vector<PairCand> cands;
  const int np = static_cast<int>(vs.size());
  for (int i = 0; i < np; ++i)
    for (int j = i + 1; j < np; ++j)
      cands.push_back({segment_distance_to_zero(vs[static_cast<std::size_t>(i)],
                                                vs[static_cast<std::size_t>(j)]),
                       i, j});
  std::size_t keep = std::min<std::size_t>(24, cands.size());
  std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(keep),
                    cands.end(),
                    [](const PairCand& a_, const PairCand& b_) { return a_.dist < b_.dist; });
  for (std::size_t c = 0; c < keep; ++c) {
    if (cands[c].dist > 0.25 * scale) break;
    const Vec& u1 = us[static_cast<std::size_t>(cands[c].i)];
    const Vec& u2raw = us[static_cast<std::size_t>(cands[c].j)];
    Vec w = u2raw - u1 * u1.dot(u2raw);
    double wn = w.norm();
    if (wn < 1e-8) continue;
    Vec q2 = w / wn;
    Eigen::Matrix2cd b;
    b(0, 0) = u1.dot(a * u1);
    b(0, 1) = u1.dot(a * q2);
    b(1, 0) = q2.dot(a * u1);
    b(1, 1) = q2.dot(a * q2);
    auto [ok, tp] = compression_zero(b, thr_yes);
    if (ok) {
      Vec x = std::cos(tp.first) * u1 +
              std::polar(1.0, tp.second) * std::sin(tp.first) * q2;
      x /= x.norm();
      if (std::abs(x.dot(a * x)) <= thr_yes) {
        out.status = ZeroInRange::Yes;
        out.x = x;
        return out;
      }
    }
  }

  // Last resort: multistart descent on the sphere.
  RngEngine rng(7);
  for (int s = 0; s < 32; ++s) {
    auto [x, f] = sphere_minimize(a, random_unit_vector(rng, n), 600);
    if (f <= thr_yes) {
      out.status = ZeroInRange::Yes;
      out.x = x;
      return out;
    }
  }
  out.status = ZeroInRange::Unknown;
  return out;
}

WpMembership wp_contains(const MatrixPolynomial& p, cplx lambda,
                         const FieldOfValuesQuery& q) {
  WpMembership out;
  ZeroRangeResult z = zero_in_numerical_range(p.evaluate(lambda), q);
  out.margin = z.margin;
  switch (z.status) {
    case ZeroInRange::Yes:
      out.status = Membership::True;
      out.x = z.x;
      break;
    case ZeroInRange::No:
      out.status = Membership::False;
      out.theta = z.theta;
      break;
    case ZeroInRange::Unknown:
      out.status = Membership::Unknown;
      break;
  }
  return out;
}

namespace {

/// First-order uncertainty of a computed root: |p(r)| / |p'(r)|. Exact zeros
/// of exactly-representable polynomials report 0, so boundary roots of exact
/// data still classify.
double root_uncertainty(const ComplexPolynomial& p, cplx r) {
  auto [v, dv] = p.evaluate_with_derivative(r);
  double den = std::max(std::abs(dv), 1e-300);
  return std::abs(v) / den;
}

struct SideCall {
  bool certified_in = false;
  bool certified_out = false;
};

/// Membership of a point known only up to distance `uncert`, honoring the
/// open/closed flag of the region.
SideCall classify_point(const Region& d, cplx r, double uncert) {
  SideCall s;
  if (d.kind == RegionKind::Sector && std::abs(r) <= uncert) {
    // A blur around the origin straddles every argument; nothing certifies.
    return s;
  }
  RegionMargin m = d.margin(r);
  if (m.degenerate) {
    s.certified_in = d.contains_zero;
    s.certified_out = !d.contains_zero;
    return s;
  }
  if (d.closed) {
    s.certified_in = m.value - uncert >= 0.0;
    s.certified_out = m.value + uncert < 0.0;
  } else {
    s.certified_in = m.value - uncert > 0.0;
    s.certified_out = m.value + uncert <= 0.0;
  }
  return s;
}

struct PointCertifier {
  const MatrixPolynomial& p;
  const FieldOfValuesQuery& q;
  double theta_hint = 0.0;
  bool have_hint = false;
  int samples = 0;

  /// Supporting angle at P(lambda), warm-started from the previous sample;
  /// falls back to the full angle grid before giving up.
  std::pair<bool, double> certify(cplx lambda) {
    ++samples;
    Mat a = p.evaluate(lambda);
    if (have_hint) {
      auto [th, m] = golden_max(
          [&](double t) { return lam_min_theta(a, t); }, theta_hint - 0.35,
          theta_hint + 0.35, 30);
      if (m > q.tol) {
        theta_hint = th;
        return {true, m};
      }
    }
    auto [th, m] = best_support(a, std::max(64, q.theta_grid / 4), q.refine_iters);
    if (m > q.tol) {
      theta_hint = th;
      have_hint = true;
      return {true, m};
    }
    auto [th2, m2] = best_support(a, q.theta_grid, q.refine_iters);
    if (m2 > q.tol) {
      theta_hint = th2;
      have_hint = true;
      return {true, m2};
    }
    return {false, std::max(m, m2)};
  }
};

}  // namespace

NumRangeVerdict wp_disjoint_from(const MatrixPolynomial& p, const Region& d,
                                 const DisjointnessBudget& b) {
  b.query.validate();
  const FieldOfValuesQuery& q = b.query;
  NumRangeVerdict out;
  const int n = p.size();
  const int deg = p.degree();
  const double cs = p.coeff_scale();
  auto thr_at = [&](cplx l) {
    return q.tol * std::max(1.0, cs) * std::pow(1.0 + std::abs(l), std::max(deg, 0));
  };
  auto scaled_res = [&](cplx l, double res) { return res / std::max(1.0, cs) /
         std::pow(1.0 + std::abs(l), std::max(deg, 0)); };
  const cplx inner = d.interior_point();
  double best_res = std::numeric_limits<double>::infinity();

  auto accept_in = [&](cplx l) {
    // lambda chosen by us is exact, so plain membership decides.
    if (d.kind == RegionKind::Sector && l == cplx(0.0, 0.0)) return d.contains_zero;
    RegionMargin m = d.margin(l);
    return d.closed ? m.value >= 0.0 : m.value > 0.0;
  };
  auto intersects = [&](cplx l, Vec x, double res) {
    out.status = RangeStatus::Intersects;
    out.witness_lambda = l;
    out.witness_x = std::move(x);
    out.worst_margin = res;
    return out;
  };

  if (p.is_zero() || cs == 0.0) {
    Vec x = Vec::Zero(std::max(n, 1));
    x(0) = 1.0;
    return intersects(inner, std::move(x), 0.0);
  }

  // Constant polynomials: W(P) is either empty or all of C.
  if (deg == 0) {
    ZeroRangeResult z = zero_in_numerical_range(p.coeff(0), q);
    out.samples_used = 1;
    if (z.status == ZeroInRange::No) {
      out.status = RangeStatus::Disjoint;
      out.certificate = "constant: 0 separated from W(A_0)";
      out.worst_margin = z.margin;
      return out;
    }
    if (z.status == ZeroInRange::Yes)
      return intersects(inner, z.x, std::abs(z.x.dot(p.coeff(0) * z.x)));
    out.worst_margin = z.margin;
    return out;
  }

  // Scalar case: W(P) is exactly the root set of the entry.
  if (n == 1) {
    ComplexPolynomial sp = p.entry(0, 0);
    RootSet rs = roots(sp);
    bool all_out = true;
    double worst = std::numeric_limits<double>::infinity();
    for (cplx r : rs.roots) {
      double u = root_uncertainty(sp, r);
      SideCall side = classify_point(d, r, u);
      if (side.certified_in) {
        Vec x(1);
        x(0) = 1.0;
        double res = std::abs(sp.evaluate(r));
        if (res <= thr_at(r)) return intersects(r, std::move(x), res);
      }
      if (!side.certified_out) all_out = false;
      if (!d.margin(r).degenerate)
        worst = std::min(worst, -(d.margin(r).value + u));
    }
    out.samples_used += static_cast<int>(rs.roots.size());
    if (all_out) {
      out.status = RangeStatus::Disjoint;
      out.certificate = "scalar: every root avoids the region";
      out.worst_margin = worst;
      return out;
    }
  }

  // Factored structure P = p(lambda) A: W(P) is the root set of p whenever
  // 0 is separated from W(A).
  if (n >= 2) {
    Mat stack(n * n, deg + 1);
    for (int j = 0; j <= deg; ++j) {
      Mat aj = p.coeff(j);
      stack.col(j) = Eigen::Map<Vec>(aj.data(), n * n);
    }
    Eigen::JacobiSVD<Mat> svd(stack, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv.size() >= 2 && sv(1) <= 1e-12 * sv(0)) {
      Mat a = Eigen::Map<const Mat>(svd.matrixU().col(0).data(), n, n);
      std::vector<cplx> c(static_cast<std::size_t>(deg) + 1);
      for (int j = 0; j <= deg; ++j)
        c[static_cast<std::size_t>(j)] = sv(0) * std::conj(svd.matrixV()(j, 0));
      ComplexPolynomial sp(std::move(c));
      ZeroRangeResult za = zero_in_numerical_range(a, q);
      ++out.samples_used;
      if (za.status == ZeroInRange::Yes) {
        double res = std::abs(za.x.dot(p.evaluate(inner) * za.x));
        if (res <= thr_at(inner)) return intersects(inner, za.x, res);
      }
      if (za.status == ZeroInRange::No && sp.degree() >= 1) {
        RootSet rs = roots(sp);
        bool all_out = true;
        double worst = std::numeric_limits<double>::infinity();
        for (cplx r : rs.roots) {
          double u = root_uncertainty(sp, r);
          SideCall side = classify_point(d, r, u);
          if (side.certified_in) {
            Eigen::SelfAdjointEigenSolver<Mat> es(herm_part(a));
            Vec x = es.eigenvectors().col(0);
            auto [xp, res] = sphere_minimize(p.evaluate(r), x, 200);
            if (res <= thr_at(r)) return intersects(r, xp, res);
          }
          if (!side.certified_out) all_out = false;
          if (!d.margin(r).degenerate)
            worst = std::min(worst, -(d.margin(r).value + u));
        }
        if (all_out) {
          out.status = RangeStatus::Disjoint;
          out.certificate = "factored: P = p(lambda) A, 0 separated from W(A), roots of p avoid the region";
          out.worst_margin = worst;
          return out;
        }
      }
    }
  }

  // Eigenvalue seeding: eigenvalues lie in W(P), so one inside D is a witness.
  {
    Eigenvalues ev = eigenvalues(p, 1e-10);
    if (!ev.regular) {
      Mat m = p.evaluate(inner);
      Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinV);
      Vec x = svd.matrixV().col(n - 1);
      auto [xp, res] = sphere_minimize(m, x, 300);
      if (res <= thr_at(inner)) return intersects(inner, xp, res);
      best_res = std::min(best_res, scaled_res(inner, res));
    } else {
      for (cplx mu : ev.finite) {
        ++out.samples_used;
        SideCall side = classify_point(d, mu, 1e-9 * (1.0 + std::abs(mu)));
        if (!side.certified_in) continue;
        Mat m = p.evaluate(mu);
        Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinV);
        Vec x = svd.matrixV().col(n - 1);
        auto [xp, res] = sphere_minimize(m, x, 300);
        if (res <= thr_at(mu)) return intersects(mu, xp, res);
        best_res = std::min(best_res, scaled_res(mu, res));
      }
    }
  }

  // Alternating search for an intersection witness: descend in x at fixed
  // lambda, then jump lambda to a root of the scalar section x*P(lambda)x
  // projected into D.
  {
    RngEngine rng(b.seed);
    for (int restart = 0; restart < b.restarts; ++restart) {
      cplx lambda = restart == 0 ? inner : random_point(d, rng);
      Vec x = random_unit_vector(rng, n);
      for (int it = 0; it < b.iters; ++it) {
        ++out.samples_used;
        auto [xs, res] = sphere_minimize(p.evaluate(lambda), x, 12);
        x = xs;
        if (accept_in(lambda)) {
          best_res = std::min(best_res, scaled_res(lambda, res));
          if (res <= thr_at(lambda)) return intersects(lambda, x, res);
        }
        // lambda-step: roots of the scalar section.
        std::vector<cplx> sec(static_cast<std::size_t>(deg) + 1);
        for (int j = 0; j <= deg; ++j) sec[static_cast<std::size_t>(j)] = x.dot(p.coeff(j) * x);
        ComplexPolynomial spoly{std::move(sec)};
        if (spoly.degree() < 1) break;
        RootSet rs = roots(spoly);
        cplx best_root = rs.roots.front();
        double best_score = std::numeric_limits<double>::infinity();
        for (cplx r : rs.roots) {
          RegionMargin m = d.margin(r);
          double inside_deficit = m.degenerate ? (d.contains_zero ? 0.0 : 1.0)
                                               : std::max(0.0, -m.value);
          double score = inside_deficit * 1e6 + std::abs(r - lambda);
          if (score < best_score) {
            best_score = score;
            best_root = r;
          }
        }
        cplx next = project_into(d, best_root);
        if (!accept_in(next)) {
          // nudge toward a deterministic interior point of D
          cplx dir = inner - next;
          double dn = std::abs(dir);
          if (dn > 0) next += dir / dn * 1e-6 * (1.0 + std::abs(next));
        }
        if (std::abs(next - lambda) < 1e-15 * (1.0 + std::abs(lambda))) {
          lambda = next;
          auto [xf, resf] = sphere_minimize(p.evaluate(lambda), x, 60);
          if (accept_in(lambda)) {
            best_res = std::min(best_res, scaled_res(lambda, resf));
            if (resf <= thr_at(lambda)) return intersects(lambda, xf, resf);
          }
          break;
        }
        lambda = next;
      }
    }
  }

  // Grid-certified disjointness: supporting angles at boundary + interior
  // samples, with a leading-coefficient bound covering |lambda| > R0 for
  // unbounded regions.
  {
    std::vector<cplx> samples;
    std::string note;
    bool covered = true;
    double r0 = 0.0;
    if (!d.is_bounded() && !b.assume_boundary_suffices) {
      ZeroRangeResult zd = zero_in_numerical_range(p.coeff(deg), q);
      if (zd.status == ZeroInRange::No) {
        double s = 0.0;
        for (int j = 0; j < deg; ++j) s += norms(p.coeff(j)).two_norm;
        r0 = std::max(1.0, s / zd.margin) * (1.0 + 1e-9);
        note = "; |lambda| > " + std::to_string(r0) +
               " excluded by the leading coefficient";
      } else {
        covered = false;
      }
    } else if (b.assume_boundary_suffices) {
      note = "; interior skipped on the caller's monotonicity assertion";
    }

    if (covered) {
      switch (d.kind) {
        case RegionKind::Disc: {
          for (int k = 0; k < b.boundary_grid; ++k)
            samples.push_back(d.center + std::polar(d.radius, 2.0 * pi * k / b.boundary_grid));
          if (!b.assume_boundary_suffices) {
            samples.push_back(d.center);
            int rings = 4, per = std::max(4, b.interior_grid / 4);
            for (int ri = 1; ri <= rings; ++ri)
              for (int k = 0; k < per; ++k)
                samples.push_back(d.center + std::polar(d.radius * ri / (rings + 1.0),
                                                        2.0 * pi * (k + 0.37 * ri) / per));
          }
          break;
        }
        case RegionKind::HalfPlane: {
          double t_max = r0 > 0.0 ? r0 : 64.0;
          for (int k = 0; k < b.boundary_grid; ++k) {
            double t = -t_max + 2.0 * t_max * k / (b.boundary_grid - 1);
            samples.push_back(cplx(t, d.offset) * std::polar(1.0, -d.phi));
          }
          if (!b.assume_boundary_suffices) {
            int rows = 6, per = std::max(4, b.interior_grid / 6);
            for (int ri = 1; ri <= rows; ++ri) {
              double s = t_max * std::pow(2.0, ri - rows);  // geometric heights
              for (int k = 0; k < per; ++k) {
                double t = -t_max + 2.0 * t_max * k / (per - 1);
                samples.push_back(cplx(t, d.offset + s) * std::polar(1.0, -d.phi));
              }
            }
          }
          break;
        }
        case RegionKind::DiscExterior: {
          if (d.radius > 0.0)
            for (int k = 0; k < b.boundary_grid; ++k)
              samples.push_back(d.center + std::polar(d.radius, 2.0 * pi * k / b.boundary_grid));
          if (!b.assume_boundary_suffices) {
            double rin = d.radius > 0.0 ? d.radius : 1e-6;
            double rout = std::max(r0, rin * 2.0);
            int rings = 6, per = std::max(8, b.interior_grid / 6);
            for (int ri = 0; ri <= rings; ++ri) {
              double rr = rin * std::pow(rout / rin, ri / static_cast<double>(rings));
              for (int k = 0; k < per; ++k)
                samples.push_back(d.center + std::polar(rr, 2.0 * pi * (k + 0.31 * ri) / per));
            }
            if (d.radius == 0.0) samples.push_back(d.center + cplx(1e-12, 0.0));
          }
          break;
        }
        case RegionKind::Sector: {
          double rmax = r0 > 0.0 ? r0 : 64.0;
          int per_ray = std::max(8, b.boundary_grid / 2);
          for (double ang : {d.arg_lo, d.arg_hi})
            for (int k = 0; k < per_ray; ++k) {
              double rr = rmax * std::pow(1e-6, 1.0 - k / (per_ray - 1.0));
              samples.push_back(std::polar(rr, ang));
            }
          if (d.contains_zero || d.closed) samples.push_back(cplx(0.0, 0.0));
          if (!b.assume_boundary_suffices) {
            int fans = 5, per = std::max(6, b.interior_grid / 5);
            for (int fi = 1; fi <= fans; ++fi) {
              double ang = d.arg_lo + (d.arg_hi - d.arg_lo) * fi / (fans + 1.0);
              for (int k = 0; k < per; ++k) {
                double rr = rmax * std::pow(1e-6, 1.0 - k / (per - 1.0));
                samples.push_back(std::polar(rr, ang));
              }
            }
          }
          break;
        }
      }

      PointCertifier cert{p, q};
      bool all_ok = true;
      double min_margin = std::numeric_limits<double>::infinity();
      for (cplx l : samples) {
        auto [ok, m] = cert.certify(l);
        if (!ok) {
          all_ok = false;
          best_res = std::min(best_res, std::abs(m));
          break;
        }
        min_margin = std::min(min_margin, m);
      }
      out.samples_used += cert.samples;
      if (all_ok && !samples.empty()) {
        out.status = RangeStatus::Disjoint;
        out.certificate =
            "grid-certified: supporting half-planes at " +
            std::to_string(samples.size()) + " boundary/interior samples" + note;
        out.worst_margin = min_margin;
        return out;
      }
    }
  }

  out.status = RangeStatus::Unknown;
  out.worst_margin = std::isfinite(best_res) ? best_res : 0.0;
  return out;
}

}  // namespace polystab
