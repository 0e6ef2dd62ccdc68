#include "polystab/matrix_poly.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "polystab/rng.hpp"

namespace polystab {

MatrixNorms norms(const Mat& m) {
  MatrixNorms r;
  r.frobenius = m.norm();
  Eigen::JacobiSVD<Mat> svd(m);
  if (svd.singularValues().size() > 0) {
    r.two_norm = svd.singularValues()(0);
    r.sigma_min = svd.singularValues()(svd.singularValues().size() - 1);
  }
  return r;
}

MatrixPolynomial::MatrixPolynomial(std::vector<Mat> coeffs)
    : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw SchemaError("matrix polynomial needs >= 1 coefficient");
  n_ = static_cast<int>(coeffs_[0].rows());
  for (const Mat& a : coeffs_)
    if (a.rows() != n_ || a.cols() != n_)
      throw ShapeMismatch("coefficient matrices must be square of equal size");
  trim();
}

void MatrixPolynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back().norm() == 0.0) coeffs_.pop_back();
}

MatrixPolynomial MatrixPolynomial::from_entries(
    const std::vector<std::vector<ComplexPolynomial>>& entries) {
  const int n = static_cast<int>(entries.size());
  int d = 0;
  for (const auto& row : entries) {
    if (static_cast<int>(row.size()) != n)
      throw ShapeMismatch("entry grid must be square");
    for (const auto& p : row) d = std::max(d, p.degree());
  }
  std::vector<Mat> cs(static_cast<std::size_t>(d) + 1, Mat::Zero(n, n));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j <= entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)].degree(); ++j)
        cs[static_cast<std::size_t>(j)](i, k) =
            entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)].coeff(j);
  return MatrixPolynomial(std::move(cs));
}

Mat MatrixPolynomial::coeff(int j) const {
  if (j < 0 || j >= static_cast<int>(coeffs_.size())) return Mat::Zero(n_, n_);
  return coeffs_[static_cast<std::size_t>(j)];
}

ComplexPolynomial MatrixPolynomial::entry(int i, int k) const {
  std::vector<cplx> c(coeffs_.size());
  for (std::size_t j = 0; j < coeffs_.size(); ++j) c[j] = coeffs_[j](i, k);
  return ComplexPolynomial(std::move(c));
}

Mat MatrixPolynomial::evaluate(cplx lambda) const {
  Mat acc = Mat::Zero(n_, n_);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
    acc = acc * lambda + *it;
  return acc;
}

MatrixPolynomial MatrixPolynomial::derivative() const {
  if (coeffs_.size() <= 1) return MatrixPolynomial::zero(n_);
  std::vector<Mat> d(coeffs_.size() - 1);
  for (std::size_t j = 1; j < coeffs_.size(); ++j)
    d[j - 1] = static_cast<double>(j) * coeffs_[j];
  return MatrixPolynomial(std::move(d));
}

MatrixPolynomial MatrixPolynomial::reversal() const {
  if (is_zero()) return *this;
  std::vector<Mat> r(coeffs_.rbegin(), coeffs_.rend());
  return MatrixPolynomial(std::move(r));
}

MatrixPolynomial MatrixPolynomial::substitute_affine(cplx alpha, cplx beta) const {
  if (alpha == cplx(0.0, 0.0))
    throw SchemaError("substitute_affine requires alpha != 0");
  if (is_zero()) return *this;
  // Matrix Horner in (alpha*lambda + beta): acc(lambda) <- acc*(al+b) + A_j.
  std::vector<Mat> acc;  // ascending coefficients of the accumulator
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    std::vector<Mat> next(acc.size() + 1, Mat::Zero(n_, n_));
    for (std::size_t j = 0; j < acc.size(); ++j) {
      next[j] += beta * acc[j];
      next[j + 1] += alpha * acc[j];
    }
    next[0] += *it;
    acc = std::move(next);
  }
  return MatrixPolynomial(std::move(acc));
}

MatrixPolynomial MatrixPolynomial::operator+(const MatrixPolynomial& q) const {
  const int n = std::max(n_, q.n_);
  std::vector<Mat> s(std::max(coeffs_.size(), q.coeffs_.size()),
                     Mat::Zero(n, n));
  for (std::size_t j = 0; j < coeffs_.size(); ++j) s[j] += coeffs_[j];
  for (std::size_t j = 0; j < q.coeffs_.size(); ++j) s[j] += q.coeffs_[j];
  if (s.empty()) return MatrixPolynomial::zero(n);
  return MatrixPolynomial(std::move(s));
}

MatrixPolynomial MatrixPolynomial::operator*(cplx s) const {
  std::vector<Mat> c = coeffs_;
  for (auto& a : c) a *= s;
  if (c.empty()) return *this;
  return MatrixPolynomial(std::move(c));
}

double MatrixPolynomial::coeff_scale() const {
  double m = 0.0;
  for (const Mat& a : coeffs_) m = std::max(m, a.norm());
  return m;
}

ComplexPolynomial determinant(const MatrixPolynomial& p, double tau_det) {
  if (p.is_zero() || p.size() == 0) return {};
  const int n = p.size(), d = p.degree();
  if (d == 0) {
    cplx v = p.coeff(0).determinant();
    return std::abs(v) == 0.0 ? ComplexPolynomial()
                              : ComplexPolynomial::constant(v);
  }
  const int N = d * n + 1;

  // Interpolation circle radius: geometric mean of the nonzero coefficient
  // norms, clamped to [1e-2, 1e2] to keep the Vandermonde well conditioned.
  double logsum = 0.0;
  int nz = 0;
  for (int j = 0; j <= d; ++j) {
    double nrm = p.coeff(j).norm();
    if (nrm > 0) {
      logsum += std::log(nrm);
      ++nz;
    }
  }
  double rho = nz ? std::exp(logsum / nz) : 1.0;
  rho = std::clamp(rho, 1e-2, 1e2);

  std::vector<cplx> g(static_cast<std::size_t>(N));
  bool all_noise = true;
  for (int k = 0; k < N; ++k) {
    cplx w = std::polar(rho, 2.0 * pi * k / N);
    Mat M = p.evaluate(w);
    g[static_cast<std::size_t>(k)] = Eigen::PartialPivLU<Mat>(M).determinant();
    // Hadamard bound on |det| gives the scale at which LU rounding noise
    // lives; a singular polynomial must stay below it at EVERY sample.
    double had = 1.0;
    for (int i = 0; i < n; ++i) had *= M.row(i).norm();
    if (std::abs(g[static_cast<std::size_t>(k)]) > tau_det * std::max(1.0, had))
      all_noise = false;
  }
  if (all_noise) return {};  // det identically zero

  // Inverse DFT, then undo the radius scaling: c_j = ifft_j / rho^j.
  std::vector<cplx> c(static_cast<std::size_t>(N));
  for (int j = 0; j < N; ++j) {
    cplx acc(0.0, 0.0);
    for (int k = 0; k < N; ++k)
      acc += g[static_cast<std::size_t>(k)] *
             std::polar(1.0, -2.0 * pi * j * k / N);
    c[static_cast<std::size_t>(j)] = acc / (static_cast<double>(N) * std::pow(rho, j));
  }
  return ComplexPolynomial(std::move(c)).truncated(tau_det);
}

Eigenvalues eigenvalues(const MatrixPolynomial& p, double tau_det) {
  Eigenvalues ev;
  ComplexPolynomial det = determinant(p, tau_det);
  ev.regular = !det.is_zero();
  if (!ev.regular) return ev;
  if (det.degree() >= 1) ev.finite = roots(det).roots;
  const int full = p.degree() * p.size();
  ev.infinity_multiplicity = full - det.degree();
  ev.at_infinity = ev.infinity_multiplicity > 0;
  return ev;
}

EntryIndependence entries_linearly_independent(const MatrixPolynomial& p,
                                               double tau_rank) {
  EntryIndependence r;
  const int n = p.size(), d = std::max(p.degree(), 0);
  r.enough_coefficients = n * n <= d + 1;
  Mat stack(n * n, d + 1);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j <= d; ++j) stack(i * n + k, j) = p.coeff(j)(i, k);
  Eigen::JacobiSVD<Mat> svd(stack);
  const auto& s = svd.singularValues();
  double smax = s.size() ? s(0) : 0.0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > tau_rank * smax) ++r.rank;
  r.independent = (smax > 0.0) && (r.rank == n * n);
  return r;
}

std::optional<Vec> common_isotropic_vector(const std::vector<Mat>& coeffs,
                                           int starts, std::uint64_t seed) {
  if (coeffs.empty()) throw SchemaError("need at least one coefficient");
  const int n = static_cast<int>(coeffs[0].rows());
  double scale2 = 0.0;
  for (const Mat& a : coeffs) scale2 = std::max(scale2, a.squaredNorm());
  if (scale2 == 0.0) {
    Vec e = Vec::Zero(n);
    e(0) = 1.0;
    return e;  // all coefficients vanish; any direction is isotropic
  }

  auto objective = [&](const Vec& x) {
    double f = 0.0;
    for (const Mat& a : coeffs) f += std::norm(x.dot(a * x));
    return f / scale2;  // scale-invariant target
  };
  // Wirtinger gradient of sum |x*Ax|^2 w.r.t. conj(x).
  auto gradient = [&](const Vec& x) {
    Vec g = Vec::Zero(n);
    for (const Mat& a : coeffs) {
      cplx q = x.dot(a * x);
      g += std::conj(q) * (a * x) + q * (a.adjoint() * x);
    }
    return Vec(g / scale2);
  };

  RngEngine rng(seed);
  for (int s = 0; s < starts; ++s) {
    Vec x = random_unit_vector(rng, n);
    double f = objective(x);
    double step = 0.5;
    for (int it = 0; it < 300 && f > 1e-18; ++it) {
      Vec g = gradient(x);
      g -= x * x.dot(g);  // tangent projection on the sphere
      if (g.norm() < 1e-18) break;
      bool improved = false;
      for (int bt = 0; bt < 30; ++bt) {
        Vec y = x - step * g;
        double ny = y.norm();
        if (ny == 0.0) break;
        y /= ny;
        double fy = objective(y);
        if (fy < f) {
          x = y;
          f = fy;
          improved = true;
          step *= 1.5;
          break;
        }
        step *= 0.5;
      }
      if (!improved) break;
    }
    if (f <= 1e-16) return x;
  }
  return std::nullopt;
}

bool kernel_intersection_singularity(const Mat& J, const std::vector<Mat>& As,
                                     int j, double tau_rank) {
  const int n = static_cast<int>(J.rows());
  if (J.cols() != n) throw ShapeMismatch("J must be square");
  if (j < 0) throw SchemaError("power index j must be >= 0");
  if ((J + J.transpose()).norm() > 1e-12 * (1.0 + J.norm()))
    throw HypothesisViolated("J is not real skew-symmetric");
  if (J.imag().norm() > 1e-12)
    throw HypothesisViolated("J must be real");
  for (std::size_t i = 0; i < As.size(); ++i) {
    const Mat& a = As[i];
    if (a.rows() != n || a.cols() != n)
      throw ShapeMismatch("coefficient size mismatch");
    if (a.imag().norm() > 1e-12 ||
        (a - a.transpose()).norm() > 1e-12 * (1.0 + a.norm()))
      throw HypothesisViolated("A_" + std::to_string(i) +
                               " is not real symmetric");
    Eigen::SelfAdjointEigenSolver<Mat> es(a);
    if (es.eigenvalues().minCoeff() < -1e-10 * (1.0 + a.norm()))
      throw HypothesisViolated("A_" + std::to_string(i) + " is not PSD");
  }

  Mat stack(n * (static_cast<int>(As.size()) + 1), n);
  stack.topRows(n) = J;
  for (std::size_t i = 0; i < As.size(); ++i)
    stack.middleRows(n * (static_cast<int>(i) + 1), n) = As[i];
  Eigen::JacobiSVD<Mat> svd(stack);
  const auto& s = svd.singularValues();
  double smax = s.size() ? s(0) : 0.0;
  if (smax == 0.0) return true;  // everything is zero: common kernel is C^n
  return s(s.size() - 1) <= tau_rank * smax;
}

}  // namespace polystab
