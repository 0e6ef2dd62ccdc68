// Exact scalar and polynomial arithmetic over Gaussian rationals: the
// coefficient domain for the Smith canonical form, where tolerance-based
// GCDs would be meaningless.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "polystab/common.hpp"
#include "polystab/matrix_poly.hpp"
#include "polystab/scalar_poly.hpp"

namespace polystab {

using Rational = boost::multiprecision::cpp_rational;

/// Render a rational as "p" or "p/q" (canonical reduced form).
std::string to_string(const Rational& r);

/// Parse "p", "-p", or "p/q". Throws SchemaError on malformed input or a
/// zero denominator.
Rational parse_rational(const std::string& s);

/// A Gaussian rational a + bi with exact rational real and imaginary parts.
/// All field operations are exact.
struct GaussianRational {
  Rational re{0};
  Rational im{0};

  GaussianRational() = default;
  GaussianRational(Rational r) : re(std::move(r)) {}  // NOLINT
  GaussianRational(Rational r, Rational i)
      : re(std::move(r)), im(std::move(i)) {}
  GaussianRational(long r, long i) : re(r), im(i) {}
  GaussianRational(int r) : re(r) {}  // NOLINT

  bool is_zero() const { return re == 0 && im == 0; }
  GaussianRational conj() const { return {re, -im}; }
  /// |z|^2 as an exact nonnegative rational.
  Rational norm2() const { return re * re + im * im; }
  cplx to_cplx() const {
    return {static_cast<double>(re), static_cast<double>(im)};
  }

  friend GaussianRational operator+(const GaussianRational& a,
                                    const GaussianRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a,
                                    const GaussianRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a) {
    return {-a.re, -a.im};
  }
  friend GaussianRational operator*(const GaussianRational& a,
                                    const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  /// Exact division; throws HypothesisViolated on division by zero.
  friend GaussianRational operator/(const GaussianRational& a,
                                    const GaussianRational& b);
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) {
    return !(a == b);
  }
};

/// Dense univariate polynomial with Gaussian-rational coefficients in
/// ascending order; exact zeros are trimmed, so degree and monic-ness are
/// exact notions. The zero polynomial has degree -1.
class ExactPolynomial {
 public:
  ExactPolynomial() = default;
  explicit ExactPolynomial(std::vector<GaussianRational> ascending);

  static ExactPolynomial constant(GaussianRational c);
  static ExactPolynomial monomial(GaussianRational c, int k);

  bool is_zero() const { return coeffs_.empty(); }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<GaussianRational>& coeffs() const { return coeffs_; }
  /// Coefficient of lambda^j; exact zero beyond the degree.
  GaussianRational coeff(int j) const;
  GaussianRational leading() const;
  bool is_monic() const;

  GaussianRational evaluate(const GaussianRational& x) const;

  /// The monic normalization p / leading(p); the zero polynomial maps to
  /// itself.
  ExactPolynomial monic() const;

  /// Numeric cast for consumption by the floating-point modules.
  ComplexPolynomial to_numeric() const;

  friend ExactPolynomial operator+(const ExactPolynomial& a,
                                   const ExactPolynomial& b);
  friend ExactPolynomial operator-(const ExactPolynomial& a,
                                   const ExactPolynomial& b);
  friend ExactPolynomial operator*(const ExactPolynomial& a,
                                   const ExactPolynomial& b);
  friend ExactPolynomial operator*(const GaussianRational& c,
                                   const ExactPolynomial& p);
  friend bool operator==(const ExactPolynomial& a, const ExactPolynomial& b) {
    return a.coeffs_ == b.coeffs_;
  }
  friend bool operator!=(const ExactPolynomial& a, const ExactPolynomial& b) {
    return !(a == b);
  }

 private:
  std::vector<GaussianRational> coeffs_;
};

/// Exact Euclidean division a = q * b + r with deg r < deg b. Throws
/// HypothesisViolated when b is the zero polynomial.
std::pair<ExactPolynomial, ExactPolynomial> divrem(const ExactPolynomial& a,
                                                   const ExactPolynomial& b);

/// Monic greatest common divisor by the Euclidean algorithm; gcd(0, 0) = 0.
ExactPolynomial poly_gcd(ExactPolynomial a, ExactPolynomial b);

/// An m x n matrix of exact polynomials (rectangular allowed).
class ExactPolyMatrix {
 public:
  ExactPolyMatrix() = default;
  ExactPolyMatrix(int rows, int cols);
  explicit ExactPolyMatrix(std::vector<std::vector<ExactPolynomial>> entries);

  static ExactPolyMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  ExactPolynomial& at(int i, int j);
  const ExactPolynomial& at(int i, int j) const;

  /// Largest entry degree (-1 for the zero matrix).
  int max_degree() const;

  ExactPolyMatrix transpose() const;

  /// Exact determinant by expansion over column subsets (square only;
  /// throws NotSquare otherwise). Practical for the capped sizes.
  ExactPolynomial determinant() const;

  /// Numeric cast to a dense matrix polynomial.
  MatrixPolynomial to_numeric() const;

  friend ExactPolyMatrix operator*(const ExactPolyMatrix& a,
                                   const ExactPolyMatrix& b);
  friend bool operator==(const ExactPolyMatrix& a, const ExactPolyMatrix& b);
  friend bool operator!=(const ExactPolyMatrix& a, const ExactPolyMatrix& b) {
    return !(a == b);
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<ExactPolynomial> data_;  // row-major
};

/// Thrown by square-only operations on rectangular matrices.
struct NotSquare : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Rational reconstruction of a double that was meant exactly: accepts only
/// values within 1e-12 (relative) of a rational whose denominator divides a
/// power of ten times a power of two (decimal or dyadic literals).
std::optional<Rational> exactify(double x);

/// Componentwise exactification of a complex number.
std::optional<GaussianRational> exactify(cplx z);

}  // namespace polystab
