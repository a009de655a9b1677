#pragma once

// Exact rational polynomials: a dense univariate type and a sparse
// multivariate type. All arithmetic is exact; conversion to floating point
// happens only in the evaluation helpers.

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace lgf {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Rational as "p/q" (or "p" when q == 1).
std::string to_string(const Rational& r);
Rational rational_from_string(const std::string& s);
double to_double(const Rational& r);
long double to_long_double(const Rational& r);

/// Dense univariate polynomial with rational coefficients, c[i] * x^i.
class RationalPoly {
 public:
  RationalPoly() = default;
  explicit RationalPoly(std::vector<Rational> coeffs);
  static RationalPoly constant(const Rational& c);
  static RationalPoly monomial(const Rational& c, std::size_t degree);

  /// Degree of the zero polynomial is reported as -1.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  Rational coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : Rational(0); }

  Rational operator()(const Rational& x) const;
  double eval(double x) const;

  /// Even in x: every odd coefficient vanishes.
  bool is_even() const;

  RationalPoly& operator+=(const RationalPoly& o);
  RationalPoly& operator-=(const RationalPoly& o);
  RationalPoly& operator*=(const Rational& s);
  friend RationalPoly operator+(RationalPoly a, const RationalPoly& b) { return a += b; }
  friend RationalPoly operator-(RationalPoly a, const RationalPoly& b) { return a -= b; }
  friend RationalPoly operator*(RationalPoly a, const Rational& s) { return a *= s; }
  friend RationalPoly operator*(const RationalPoly& a, const RationalPoly& b);
  friend bool operator==(const RationalPoly& a, const RationalPoly& b) { return a.coeffs_ == b.coeffs_; }

  /// p(x + shift), exact.
  RationalPoly shifted(const Rational& shift) const;
  RationalPoly derivative() const;

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

/// Chebyshev polynomial of the first kind T_n as a RationalPoly.
RationalPoly chebyshev_t(unsigned n);

/// Sparse multivariate polynomial in N variables with rational coefficients.
template <std::size_t N>
class MultiPoly {
 public:
  using Exponent = std::array<int, N>;
  using Terms = std::map<Exponent, Rational>;

  MultiPoly() = default;
  static MultiPoly constant(const Rational& c) {
    MultiPoly p;
    p.add_term(Exponent{}, c);
    return p;
  }
  /// x_var^degree * c
  static MultiPoly variable_power(std::size_t var, int degree, const Rational& c = 1) {
    Exponent e{};
    e[var] = degree;
    MultiPoly p;
    p.add_term(e, c);
    return p;
  }
  /// Embeds a univariate polynomial in variable `var`.
  static MultiPoly from_univariate(const RationalPoly& u, std::size_t var) {
    MultiPoly p;
    for (std::size_t i = 0; i < u.coeffs().size(); ++i) {
      Exponent e{};
      e[var] = static_cast<int>(i);
      p.add_term(e, u.coeffs()[i]);
    }
    return p;
  }

  void add_term(const Exponent& e, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  int total_degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) {
      int s = 0;
      for (int k : e) s += k;
      d = std::max(d, s);
    }
    return d;
  }

  template <typename Scalar>
  Scalar eval(const std::array<Scalar, N>& x) const {
    Scalar acc = 0;
    for (const auto& [e, c] : terms_) {
      Scalar term = static_cast<Scalar>(to_long_double(c));
      for (std::size_t i = 0; i < N; ++i)
        for (int k = 0; k < e[i]; ++k) term *= x[i];
      acc += term;
    }
    return acc;
  }

  Rational eval_exact(const std::array<Rational, N>& x) const {
    Rational acc = 0;
    for (const auto& [e, c] : terms_) {
      Rational term = c;
      for (std::size_t i = 0; i < N; ++i)
        for (int k = 0; k < e[i]; ++k) term *= x[i];
      acc += term;
    }
    return acc;
  }

  /// Same polynomial with variables i and j exchanged.
  MultiPoly swapped(std::size_t i, std::size_t j) const {
    MultiPoly p;
    for (const auto& [e, c] : terms_) {
      Exponent f = e;
      std::swap(f[i], f[j]);
      p.add_term(f, c);
    }
    return p;
  }

  MultiPoly& operator+=(const MultiPoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  MultiPoly& operator-=(const MultiPoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  MultiPoly& operator*=(const Rational& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(MultiPoly a, const Rational& s) { return a *= s; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    MultiPoly p;
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exponent e;
        for (std::size_t i = 0; i < N; ++i) e[i] = ea[i] + eb[i];
        p.add_term(e, ca * cb);
      }
    return p;
  }
  friend bool operator==(const MultiPoly& a, const MultiPoly& b) { return a.terms_ == b.terms_; }

 private:
  Terms terms_;
};

}  // namespace lgf
