#include "subcocycle/rational.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "subcocycle/errors.hpp"

namespace subcocycle {

Integer pow(const Integer& base, unsigned long exponent) {
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
  return out;
}

Rational pow(const Rational& base, unsigned long exponent) {
  Rational out(pow(Integer(base.get_num()), exponent), pow(Integer(base.get_den()), exponent));
  out.canonicalize();
  return out;
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

Integer parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw InputError("malformed rational: '" + std::string(whole) + "'");
  Integer out(std::string(s), 10);
  return negative ? Integer(-out) : out;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (text.empty()) throw InputError("malformed rational: empty");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(text.substr(0, slash), text);
    Integer den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
    Rational out(num, den);
    out.canonicalize();
    return out;
  }

  // Decimal with optional fraction and exponent, parsed exactly.
  std::string_view mantissa = text;
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = text.substr(0, e);
    std::string_view exp_text = text.substr(e + 1);
    Integer exp_value = parse_integer(exp_text, text);
    if (!exp_value.fits_slong_p() || abs(exp_value) > 4096) {
      throw InputError("exponent out of range in '" + std::string(text) + "'");
    }
    exponent = exp_value.get_si();
  }
  bool negative = false;
  if (!mantissa.empty() && (mantissa.front() == '-' || mantissa.front() == '+')) {
    negative = mantissa.front() == '-';
    mantissa.remove_prefix(1);
  }
  std::string digits;
  long frac_digits = 0;
  if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
    std::string_view ip = mantissa.substr(0, dot);
    std::string_view fp = mantissa.substr(dot + 1);
    if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp))) {
      throw InputError("malformed rational: '" + std::string(text) + "'");
    }
    digits = std::string(ip) + std::string(fp);
    frac_digits = static_cast<long>(fp.size());
  } else {
    if (!all_digits(mantissa)) throw InputError("malformed rational: '" + std::string(text) + "'");
    digits = std::string(mantissa);
  }
  Rational out(Integer(digits, 10));
  long scale = exponent - frac_digits;
  if (scale > 0) out *= Rational(pow(Integer(10), static_cast<unsigned long>(scale)));
  if (scale < 0) out /= Rational(pow(Integer(10), static_cast<unsigned long>(-scale)));
  out.canonicalize();
  return negative ? Rational(-out) : out;
}

std::string fraction_string(const Rational& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

double log_abs(const Integer& value) {
  if (value == 0) return -std::numeric_limits<double>::infinity();
  long exp2 = 0;
  double mant = mpz_get_d_2exp(&exp2, value.get_mpz_t());
  return std::log(std::fabs(mant)) + static_cast<double>(exp2) * std::log(2.0);
}

double log_abs(const Rational& value) {
  return log_abs(Integer(value.get_num())) - log_abs(Integer(value.get_den()));
}

double to_double(const Rational& value) {
  if (sgn(value) == 0) return 0.0;
  // A quotient in [2^62, 2^64) with a sticky low bit converts to the correctly
  // rounded double; ldexp then restores the scale.
  Integer num = abs(value.get_num());
  Integer den = value.get_den();
  long shift = 63 - (static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2)) -
                     static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2)));
  if (shift > 0) {
    mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), static_cast<mp_bitcnt_t>(shift));
  } else {
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<mp_bitcnt_t>(-shift));
  }
  Integer quotient, remainder;
  mpz_tdiv_qr(quotient.get_mpz_t(), remainder.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  if (sgn(remainder) != 0) mpz_setbit(quotient.get_mpz_t(), 0);
  static_assert(sizeof(unsigned long) == 8, "64-bit unsigned long expected");
  double mag = std::ldexp(static_cast<double>(mpz_get_ui(quotient.get_mpz_t())), static_cast<int>(-shift));
  return sgn(value) < 0 ? -mag : mag;
}

Rational rationalize(double value, long max_den) {
  if (!std::isfinite(value)) throw InputError("cannot rationalize a non-finite value");
  // Continued fraction expansion on the exact binary value of `value`.
  Rational x(value);
  Integer p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  Rational rest = x;
  for (int step = 0; step < 64; ++step) {
    Integer a;
    mpz_fdiv_q(a.get_mpz_t(), rest.get_num_mpz_t(), rest.get_den_mpz_t());
    Integer p2 = a * p1 + p0;
    Integer q2 = a * q1 + q0;
    if (q2 > max_den) {
      // Largest admissible semiconvergent, kept only if it beats p1/q1.
      Integer k = (Integer(max_den) - q0) / q1;
      Rational semi(k * p1 + p0, k * q1 + q0);
      semi.canonicalize();
      Rational conv(p1, q1);
      conv.canonicalize();
      return abs(semi - x) < abs(conv - x) ? semi : conv;
    }
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    Rational frac = rest - Rational(a);
    if (sgn(frac) == 0) break;
    rest = 1 / frac;
  }
  Rational out(p1, q1);
  out.canonicalize();
  return out;
}

GaussianRational& GaussianRational::operator+=(const GaussianRational& o) {
  re += o.re;
  im += o.im;
  return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
  Rational r = re * o.re - im * o.im;
  Rational i = re * o.im + im * o.re;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  Rational n = o.norm();
  if (sgn(n) == 0) throw DegenerateInputError("division by zero in Q(i)");
  Rational r = (re * o.re + im * o.im) / n;
  Rational i = (im * o.re - re * o.im) / n;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

std::string to_string(const GaussianRational& value) {
  if (sgn(value.im) == 0) return value.re.get_str();
  if (sgn(value.re) == 0) return value.im.get_str() + "i";
  std::string im = value.im.get_str();
  return value.re.get_str() + (sgn(value.im) > 0 ? "+" : "") + im + "i";
}

}  // namespace subcocycle
