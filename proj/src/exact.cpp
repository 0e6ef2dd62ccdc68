// Exact Gaussian-rational scalars, polynomials and polynomial matrices.
#include "polystab/exact.hpp"

#include <bit>
#include <cctype>
#include <sstream>

namespace polystab {

using BigInt = boost::multiprecision::cpp_int;

std::string to_string(const Rational& r) {
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);
  std::string s = num.str();
  if (den != 1) s += "/" + den.str();
  return s;
}

Rational parse_rational(const std::string& s) {
  // Accepted shapes: [sign]digits or [sign]digits/[sign]digits.
  auto parse_int = [](const std::string& t) -> BigInt {
    std::size_t i = 0;
    bool neg = false;
    if (i < t.size() && (t[i] == '+' || t[i] == '-')) {
      neg = t[i] == '-';
      ++i;
    }
    if (i == t.size()) throw SchemaError("malformed rational: '" + t + "'");
    BigInt v = 0;
    for (; i < t.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(t[i])))
        throw SchemaError("malformed rational: '" + t + "'");
      v = v * 10 + (t[i] - '0');
    }
    return neg ? -v : v;
  };
  std::string body;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) body += c;
  if (body.empty()) throw SchemaError("malformed rational: empty string");
  auto slash = body.find('/');
  if (slash == std::string::npos) return Rational(parse_int(body));
  if (body.find('/', slash + 1) != std::string::npos)
    throw SchemaError("malformed rational: '" + s + "'");
  BigInt num = parse_int(body.substr(0, slash));
  BigInt den = parse_int(body.substr(slash + 1));
  if (den == 0) throw SchemaError("rational with zero denominator: '" + s + "'");
  return Rational(num) / Rational(den);
}

GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
  if (b.is_zero())
    throw HypothesisViolated("division by the zero Gaussian rational");
  Rational n2 = b.norm2();
  GaussianRational p = a * b.conj();
  return {p.re / n2, p.im / n2};
}

// ---------------------------------------------------------------------------
// ExactPolynomial

ExactPolynomial::ExactPolynomial(std::vector<GaussianRational> ascending)
    : coeffs_(std::move(ascending)) {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

ExactPolynomial ExactPolynomial::constant(GaussianRational c) {
  return ExactPolynomial({std::move(c)});
}

ExactPolynomial ExactPolynomial::monomial(GaussianRational c, int k) {
  if (k < 0) throw ShapeMismatch("monomial exponent must be nonnegative");
  std::vector<GaussianRational> v(static_cast<std::size_t>(k) + 1);
  v.back() = std::move(c);
  return ExactPolynomial(std::move(v));
}

GaussianRational ExactPolynomial::coeff(int j) const {
  if (j < 0) throw ShapeMismatch("coefficient index must be nonnegative");
  if (j >= static_cast<int>(coeffs_.size())) return {};
  return coeffs_[static_cast<std::size_t>(j)];
}

GaussianRational ExactPolynomial::leading() const {
  return coeffs_.empty() ? GaussianRational() : coeffs_.back();
}

bool ExactPolynomial::is_monic() const {
  return !coeffs_.empty() && coeffs_.back() == GaussianRational(1, 0);
}

GaussianRational ExactPolynomial::evaluate(const GaussianRational& x) const {
  GaussianRational v;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) v = v * x + *it;
  return v;
}

ExactPolynomial ExactPolynomial::monic() const {
  if (is_zero()) return {};
  GaussianRational inv = GaussianRational(1, 0) / leading();
  return inv * *this;
}

ComplexPolynomial ExactPolynomial::to_numeric() const {
  std::vector<cplx> c;
  c.reserve(coeffs_.size());
  for (const auto& g : coeffs_) c.push_back(g.to_cplx());
  return ComplexPolynomial(std::move(c));
}

ExactPolynomial operator+(const ExactPolynomial& a, const ExactPolynomial& b) {
  std::vector<GaussianRational> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (j < a.coeffs_.size()) c[j] = c[j] + a.coeffs_[j];
    if (j < b.coeffs_.size()) c[j] = c[j] + b.coeffs_[j];
  }
  return ExactPolynomial(std::move(c));
}

ExactPolynomial operator-(const ExactPolynomial& a, const ExactPolynomial& b) {
  std::vector<GaussianRational> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (j < a.coeffs_.size()) c[j] = c[j] + a.coeffs_[j];
    if (j < b.coeffs_.size()) c[j] = c[j] - b.coeffs_[j];
  }
  return ExactPolynomial(std::move(c));
}

ExactPolynomial operator*(const ExactPolynomial& a, const ExactPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<GaussianRational> c(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
      c[i + j] = c[i + j] + a.coeffs_[i] * b.coeffs_[j];
  return ExactPolynomial(std::move(c));
}

ExactPolynomial operator*(const GaussianRational& c, const ExactPolynomial& p) {
  std::vector<GaussianRational> v = p.coeffs_;
  for (auto& g : v) g = c * g;
  return ExactPolynomial(std::move(v));
}

std::pair<ExactPolynomial, ExactPolynomial> divrem(const ExactPolynomial& a,
                                                   const ExactPolynomial& b) {
  if (b.is_zero())
    throw HypothesisViolated("polynomial division by the zero polynomial");
  ExactPolynomial q;
  ExactPolynomial r = a;
  while (!r.is_zero() && r.degree() >= b.degree()) {
    GaussianRational t = r.leading() / b.leading();
    int k = r.degree() - b.degree();
    ExactPolynomial step = ExactPolynomial::monomial(t, k);
    q = q + step;
    r = r - step * b;
  }
  return {q, r};
}

ExactPolynomial poly_gcd(ExactPolynomial a, ExactPolynomial b) {
  while (!b.is_zero()) {
    ExactPolynomial r = divrem(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

// ---------------------------------------------------------------------------
// ExactPolyMatrix

ExactPolyMatrix::ExactPolyMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0)
    throw ShapeMismatch("matrix dimensions must be nonnegative");
  data_.resize(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
}

ExactPolyMatrix::ExactPolyMatrix(std::vector<std::vector<ExactPolynomial>> entries) {
  rows_ = static_cast<int>(entries.size());
  cols_ = rows_ == 0 ? 0 : static_cast<int>(entries.front().size());
  for (const auto& row : entries)
    if (static_cast<int>(row.size()) != cols_)
      throw ShapeMismatch("ragged entry rows in polynomial matrix");
  data_.reserve(static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_));
  for (auto& row : entries)
    for (auto& e : row) data_.push_back(std::move(e));
}

ExactPolyMatrix ExactPolyMatrix::identity(int n) {
  ExactPolyMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    m.at(i, i) = ExactPolynomial::constant(GaussianRational(1, 0));
  return m;
}

ExactPolynomial& ExactPolyMatrix::at(int i, int j) {
  if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
    throw ShapeMismatch("matrix entry index out of range");
  return data_[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) +
               static_cast<std::size_t>(j)];
}

const ExactPolynomial& ExactPolyMatrix::at(int i, int j) const {
  if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
    throw ShapeMismatch("matrix entry index out of range");
  return data_[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) +
               static_cast<std::size_t>(j)];
}

int ExactPolyMatrix::max_degree() const {
  int d = -1;
  for (const auto& e : data_) d = std::max(d, e.degree());
  return d;
}

ExactPolyMatrix ExactPolyMatrix::transpose() const {
  ExactPolyMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
  return t;
}

ExactPolynomial ExactPolyMatrix::determinant() const {
  if (rows_ != cols_) throw NotSquare("determinant requires a square matrix");
  int n = rows_;
  if (n == 0) return ExactPolynomial::constant(GaussianRational(1, 0));
  if (n > 12)
    throw SizeCapExceeded("exact determinant capped at 12x12; got " +
                          std::to_string(n));
  // dp[mask] = determinant of the submatrix on rows 0..popcount(mask)-1 and
  // the column set encoded by mask, built by expansion along the last row.
  std::vector<ExactPolynomial> dp(std::size_t(1) << n);
  dp[0] = ExactPolynomial::constant(GaussianRational(1, 0));
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    int k = std::popcount(mask);
    ExactPolynomial acc;
    int pos = 0;
    for (int j = 0; j < n; ++j) {
      if (!((mask >> j) & 1u)) continue;
      const ExactPolynomial& e = at(k - 1, j);
      if (!e.is_zero()) {
        ExactPolynomial term = e * dp[mask ^ (1u << j)];
        acc = ((k - 1 + pos) % 2 == 0) ? acc + term : acc - term;
      }
      ++pos;
    }
    dp[mask] = std::move(acc);
  }
  return dp[(std::size_t(1) << n) - 1];
}

MatrixPolynomial ExactPolyMatrix::to_numeric() const {
  if (rows_ != cols_)
    throw NotSquare("numeric cast requires a square polynomial matrix");
  std::vector<std::vector<ComplexPolynomial>> entries(
      static_cast<std::size_t>(rows_));
  for (int i = 0; i < rows_; ++i) {
    entries[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(cols_));
    for (int j = 0; j < cols_; ++j)
      entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          at(i, j).to_numeric();
  }
  return MatrixPolynomial::from_entries(entries);
}

ExactPolyMatrix operator*(const ExactPolyMatrix& a, const ExactPolyMatrix& b) {
  if (a.cols_ != b.rows_)
    throw ShapeMismatch("inner dimensions disagree in matrix product");
  ExactPolyMatrix c(a.rows_, b.cols_);
  for (int i = 0; i < a.rows_; ++i)
    for (int k = 0; k < a.cols_; ++k) {
      const ExactPolynomial& aik = a.at(i, k);
      if (aik.is_zero()) continue;
      for (int j = 0; j < b.cols_; ++j) {
        const ExactPolynomial& bkj = b.at(k, j);
        if (bkj.is_zero()) continue;
        c.at(i, j) = c.at(i, j) + aik * bkj;
      }
    }
  return c;
}

bool operator==(const ExactPolyMatrix& a, const ExactPolyMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

// ---------------------------------------------------------------------------
// Rational reconstruction

std::optional<Rational> exactify(double x) {
  if (!std::isfinite(x)) return std::nullopt;
  if (x == 0.0) return Rational(0);
  // Every finite double is an exact dyadic rational; walk the continued
  // fraction of that value and take the first convergent within 1e-12
  // relative error. Accept it only when the denominator divides a power of
  // ten times a power of two, i.e. the value reads as a decimal or dyadic
  // literal. Anything else (1/3, pi, ...) is not exactly representable.
  Rational target(x);
  Rational scale = boost::multiprecision::abs(target);
  if (scale < 1) scale = 1;
  Rational tol = scale / Rational(BigInt(1000000000000LL));
  BigInt n = boost::multiprecision::numerator(target);
  BigInt d = boost::multiprecision::denominator(target);
  bool neg = n < 0;
  if (neg) n = -n;
  BigInt h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  for (int iter = 0; iter < 128 && d != 0; ++iter) {
    BigInt a = n / d;
    BigInt h2 = a * h1 + h0;
    BigInt k2 = a * k1 + k0;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    BigInt r = n % d;
    n = d;
    d = r;
    Rational conv = Rational(h1) / Rational(k1);
    Rational err = boost::multiprecision::abs(conv - boost::multiprecision::abs(target));
    if (err <= tol) {
      BigInt q = k1;
      while (q % 2 == 0) q /= 2;
      while (q % 5 == 0) q /= 5;
      if (q != 1) return std::nullopt;
      return neg ? -conv : conv;
    }
  }
  return std::nullopt;
}

std::optional<GaussianRational> exactify(cplx z) {
  auto re = exactify(z.real());
  auto im = exactify(z.imag());
  if (!re || !im) return std::nullopt;
  return GaussianRational(*re, *im);
}

}  // namespace polystab
