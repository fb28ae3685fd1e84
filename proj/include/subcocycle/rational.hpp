#pragma once

#include <gmpxx.h>

#include <complex>
#include <string>
#include <string_view>

namespace subcocycle {

using Integer = mpz_class;
using Rational = mpq_class;

Integer pow(const Integer& base, unsigned long exponent);
Rational pow(const Rational& base, unsigned long exponent);

// Accepts "p/q", a signed integer, or a finite decimal such as "-1.25" or
// "3e-2". Throws InputError on anything else or on a zero denominator.
Rational parse_rational(std::string_view text);

// Always "p/q", even for integers.
std::string fraction_string(const Rational& value);

// Natural logarithm that stays finite for numbers far outside the double range.
double log_abs(const Integer& value);
double log_abs(const Rational& value);

double to_double(const Rational& value);

// Best rational approximation with denominator at most max_den
// (continued-fraction convergents and semiconvergents).
Rational rationalize(double value, long max_den);

// Exact element of Q(i), the coefficient field of exact-mode polynomials.
struct GaussianRational {
  Rational re;
  Rational im;

  GaussianRational() = default;
  GaussianRational(Rational r) : re(std::move(r)), im(0) {}  // NOLINT(google-explicit-constructor)
  GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
  GaussianRational(long r) : re(r), im(0) {}  // NOLINT(google-explicit-constructor)

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  GaussianRational conj() const { return {re, -im}; }
  Rational norm() const { return re * re + im * im; }
  std::complex<double> to_complex() const { return {to_double(re), to_double(im)}; }

  GaussianRational& operator+=(const GaussianRational& o);
  GaussianRational& operator-=(const GaussianRational& o);
  GaussianRational& operator*=(const GaussianRational& o);
  GaussianRational& operator/=(const GaussianRational& o);

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  GaussianRational operator-() const { return {-re, -im}; }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
};

std::string to_string(const GaussianRational& value);

}  // namespace subcocycle
