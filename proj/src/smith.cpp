// Smith canonical form over Gaussian-rational polynomials, the minor-GCD
// oracle, unimodularity, and the orbit-witness construction.
#include "polystab/smith.hpp"

#include <algorithm>
#include <bit>
#include <string>
#include <utility>

#include "polystab/scalar_poly.hpp"

namespace polystab {
namespace {

using BigInt = boost::multiprecision::cpp_int;

BigInt rational_height(const Rational& r) {
  BigInt h = boost::multiprecision::abs(boost::multiprecision::numerator(r));
  BigInt d = boost::multiprecision::denominator(r);
  return h > d ? h : d;
}

BigInt height(const GaussianRational& g) {
  BigInt a = rational_height(g.re);
  BigInt b = rational_height(g.im);
  return a > b ? a : b;
}

BigInt poly_height(const ExactPolynomial& p) {
  BigInt h = 0;
  for (const auto& c : p.coeffs()) {
    BigInt hc = height(c);
    if (hc > h) h = hc;
  }
  return h;
}

bool divides(const ExactPolynomial& a, const ExactPolynomial& b) {
  if (b.is_zero()) return true;
  if (a.is_zero()) return false;
  return divrem(b, a).second.is_zero();
}

void swap_rows(ExactPolyMatrix& m, int a, int b) {
  if (a == b) return;
  for (int j = 0; j < m.cols(); ++j) std::swap(m.at(a, j), m.at(b, j));
}

void swap_cols(ExactPolyMatrix& m, int a, int b) {
  if (a == b) return;
  for (int i = 0; i < m.rows(); ++i) std::swap(m.at(i, a), m.at(i, b));
}

/// row_i -= q * row_t
void row_axpy(ExactPolyMatrix& m, int i, int t, const ExactPolynomial& q) {
  for (int j = 0; j < m.cols(); ++j) m.at(i, j) = m.at(i, j) - q * m.at(t, j);
}

/// col_j -= q * col_t
void col_axpy(ExactPolyMatrix& m, int j, int t, const ExactPolynomial& q) {
  for (int i = 0; i < m.rows(); ++i) m.at(i, j) = m.at(i, j) - q * m.at(i, t);
}

/// row_t += row_i
void row_add(ExactPolyMatrix& m, int t, int i) {
  for (int j = 0; j < m.cols(); ++j) m.at(t, j) = m.at(t, j) + m.at(i, j);
}

void scale_row(ExactPolyMatrix& m, int i, const GaussianRational& c) {
  for (int j = 0; j < m.cols(); ++j) m.at(i, j) = c * m.at(i, j);
}

}  // namespace

SmithResult smith_form(const ExactPolyMatrix& P) {
  const int m = P.rows(), n = P.cols();
  if (std::max(m, n) > 6)
    throw SizeCapExceeded("smith_form capped at 6x6; got " + std::to_string(m) +
                          "x" + std::to_string(n));
  if (P.max_degree() > 8)
    throw SizeCapExceeded("smith_form entry degrees capped at 8; got " +
                          std::to_string(P.max_degree()));

  ExactPolyMatrix A = P;
  ExactPolyMatrix U = ExactPolyMatrix::identity(m);
  ExactPolyMatrix V = ExactPolyMatrix::identity(n);
  const int steps = std::min(m, n);

  for (int t = 0; t < steps; ++t) {
    for (;;) {
      // Minimal (degree, coefficient-height) nonzero entry becomes the pivot.
      int pi = -1, pj = -1;
      int best_deg = 0;
      BigInt best_h = 0;
      for (int i = t; i < m; ++i)
        for (int j = t; j < n; ++j) {
          const ExactPolynomial& e = A.at(i, j);
          if (e.is_zero()) continue;
          int deg = e.degree();
          BigInt h = poly_height(e);
          if (pi < 0 || deg < best_deg || (deg == best_deg && h < best_h)) {
            pi = i;
            pj = j;
            best_deg = deg;
            best_h = h;
          }
        }
      if (pi < 0) {
        t = steps;  // trailing block is zero: elimination is finished
        break;
      }
      swap_rows(A, t, pi);
      swap_rows(U, t, pi);
      swap_cols(A, t, pj);
      swap_cols(V, t, pj);

      // Division-with-remainder sweeps. A nonzero remainder means an entry of
      // strictly smaller degree appeared, so we re-enter the pivot search;
      // the pivot degree strictly decreases, which bounds the loop.
      bool clean = true;
      for (int i = t + 1; i < m; ++i) {
        if (A.at(i, t).is_zero()) continue;
        auto [q, r] = divrem(A.at(i, t), A.at(t, t));
        row_axpy(A, i, t, q);
        row_axpy(U, i, t, q);
        if (!r.is_zero()) clean = false;
      }
      for (int j = t + 1; j < n; ++j) {
        if (A.at(t, j).is_zero()) continue;
        auto [q, r] = divrem(A.at(t, j), A.at(t, t));
        col_axpy(A, j, t, q);
        col_axpy(V, j, t, q);
        if (!r.is_zero()) clean = false;
      }
      if (!clean) continue;

      // The pivot must divide the trailing block; if not, pull the offending
      // row up so the next division sweep shrinks the pivot.
      bool fixed = false;
      for (int i = t + 1; i < m && !fixed; ++i)
        for (int j = t + 1; j < n && !fixed; ++j)
          if (!divides(A.at(t, t), A.at(i, j))) {
            row_add(A, t, i);
            row_add(U, t, i);
            fixed = true;
          }
      if (fixed) continue;
      break;
    }
    if (t >= steps) break;
  }

  // Diagonal now satisfies d_1 | d_2 | ... (increasing). Normalize monic.
  int rank = 0;
  for (int t = 0; t < steps; ++t) {
    if (A.at(t, t).is_zero()) break;
    ++rank;
    GaussianRational inv = GaussianRational(1, 0) / A.at(t, t).leading();
    scale_row(A, t, inv);
    scale_row(U, t, inv);
  }

  // Reorder to the decreasing-divisibility convention s_{j+1} | s_j by
  // reversing the first `rank` diagonal positions on both sides.
  for (int i = 0, j = rank - 1; i < j; ++i, --j) {
    swap_rows(A, i, j);
    swap_rows(U, i, j);
    swap_cols(A, i, j);
    swap_cols(V, i, j);
  }

  SmithResult res;
  res.rank = rank;
  res.invariant_factors.reserve(static_cast<std::size_t>(rank));
  for (int t = 0; t < rank; ++t) res.invariant_factors.push_back(A.at(t, t));
  res.S = std::move(A);
  res.U = std::move(U);
  res.V = std::move(V);
  return res;
}

std::vector<ExactPolynomial> invariant_factors_via_minors(
    const ExactPolyMatrix& P) {
  const int m = P.rows(), n = P.cols();
  if (std::max(m, n) > 4)
    throw SizeCapExceeded("invariant_factors_via_minors capped at 4x4; got " +
                          std::to_string(m) + "x" + std::to_string(n));
  if (P.max_degree() > 6)
    throw SizeCapExceeded(
        "invariant_factors_via_minors entry degrees capped at 6; got " +
        std::to_string(P.max_degree()));

  const int kmax = std::min(m, n);
  // p[j] = monic GCD of all j x j minors (zero when every minor vanishes).
  std::vector<ExactPolynomial> p(static_cast<std::size_t>(kmax) + 1);
  p[0] = ExactPolynomial::constant(GaussianRational(1, 0));
  for (int k = 1; k <= kmax; ++k) {
    ExactPolynomial g;  // gcd accumulator, gcd(0, x) = monic x
    for (unsigned rmask = 0; rmask < (1u << m); ++rmask) {
      if (std::popcount(rmask) != k) continue;
      for (unsigned cmask = 0; cmask < (1u << n); ++cmask) {
        if (std::popcount(cmask) != k) continue;
        ExactPolyMatrix sub(k, k);
        int si = 0;
        for (int i = 0; i < m; ++i) {
          if (!((rmask >> i) & 1u)) continue;
          int sj = 0;
          for (int j = 0; j < n; ++j) {
            if (!((cmask >> j) & 1u)) continue;
            sub.at(si, sj) = P.at(i, j);
            ++sj;
          }
          ++si;
        }
        ExactPolynomial minor = sub.determinant();
        if (!minor.is_zero()) g = poly_gcd(g, minor);
      }
    }
    p[static_cast<std::size_t>(k)] = g;
  }

  int r = 0;
  for (int k = 1; k <= kmax; ++k)
    if (!p[static_cast<std::size_t>(k)].is_zero()) r = k;

  std::vector<ExactPolynomial> s;
  s.reserve(static_cast<std::size_t>(r));
  for (int j = 1; j <= r; ++j) {
    const ExactPolynomial& num = p[static_cast<std::size_t>(r - j + 1)];
    const ExactPolynomial& den = p[static_cast<std::size_t>(r - j)];
    auto [q, rem] = divrem(num, den);
    if (!rem.is_zero())
      throw NumericFailure(
          "minor GCD chain failed to divide; exact arithmetic invariant broken");
    s.push_back(q.monic());
  }
  return s;
}

bool is_unimodular(const ExactPolyMatrix& P) {
  if (P.rows() != P.cols())
    throw NotSquare("unimodularity is defined for square matrices only");
  ExactPolynomial det = P.determinant();
  return !det.is_zero() && det.degree() == 0;
}

std::vector<ExactPolynomial> factors_increasing(
    const std::vector<ExactPolynomial>& decreasing) {
  return {decreasing.rbegin(), decreasing.rend()};
}

OrbitWitness orbit_witness(const SmithResult& sr, int d, const Region& D) {
  if (D.kind != RegionKind::Disc || !D.closed || D.center != cplx(0.0, 0.0) ||
      D.radius != 1.0)
    throw PreconditionViolated(
        "orbit witness is constructed for the closed unit disc; pull the "
        "problem back by an affine change of variables first");
  const int n = sr.S.rows();
  if (sr.S.cols() != n)
    throw PreconditionViolated("orbit witness needs a square Smith form");
  if (n < 2 || sr.rank != n)
    throw PreconditionViolated(
        "orbit witness needs full rank >= 2: a matrix polynomial with "
        "identically singular determinant is not stable on any region");
  if (static_cast<int>(sr.invariant_factors.size()) != n)
    throw PreconditionViolated(
        "invariant factor list disagrees with the declared rank");

  for (int j = 0; j < n; ++j) {
    const ExactPolynomial& s = sr.invariant_factors[static_cast<std::size_t>(j)];
    if (s.is_zero())
      throw PreconditionViolated("invariant factor s_" + std::to_string(j + 1) +
                                 " is zero");
    StabilityCheck chk = stability_check(s.to_numeric(), D, 1e-9);
    if (!chk.stable || chk.boundary_sensitive)
      throw PreconditionViolated(
          "invariant factor s_" + std::to_string(j + 1) +
          " has a zero in (or within tolerance of) the closed unit disc");
  }

  auto [quot, rem] = divrem(sr.invariant_factors[0], sr.invariant_factors[1]);
  if (!rem.is_zero())
    throw PreconditionViolated("s_2 does not divide s_1 exactly");
  const int expected = quot.degree() + 2;
  if (d != expected)
    throw PreconditionViolated("degree parameter must be deg(s_1/s_2) + 2 = " +
                               std::to_string(expected) + "; got " +
                               std::to_string(d));

  OrbitWitness w;
  w.d = d;
  w.E = ExactPolyMatrix::identity(n);
  w.F = ExactPolyMatrix::identity(n);
  const GaussianRational one(1, 0);
  w.F.at(0, 1) = ExactPolynomial::monomial(one, 1);
  w.F.at(1, 0) = ExactPolynomial::monomial(one, d - 1);
  w.F.at(1, 1) =
      ExactPolynomial::monomial(one, d) + ExactPolynomial::constant(one);
  w.Q = sr.S * w.F;  // E = I
  w.x = Vec::Zero(n);
  w.x(1) = cplx(1.0, 0.0);
  return w;
}

}  // namespace polystab
