#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "subcocycle/rational.hpp"

namespace subcocycle::poly {

using Complex = std::complex<double>;

enum class Mode { exact, approx };

std::string to_string(Mode mode);

// A coefficient: either an exact element of Q(i) or a binary64 complex number.
class Scalar {
 public:
  Scalar() : value_(GaussianRational()) {}
  Scalar(GaussianRational value) : value_(std::move(value)) {}  // NOLINT(google-explicit-constructor)
  Scalar(Complex value) : value_(value) {}                       // NOLINT(google-explicit-constructor)

  static Scalar zero(Mode mode);
  static Scalar one(Mode mode);
  static Scalar from_int(long value, Mode mode);

  Mode mode() const { return value_.index() == 0 ? Mode::exact : Mode::approx; }
  bool is_exact() const { return mode() == Mode::exact; }
  bool is_zero() const;

  // Throws ModeMismatchError when the scalar is approximate.
  const GaussianRational& exact() const;
  Complex to_complex() const;
  Scalar to_approx() const { return Scalar(to_complex()); }

  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  Scalar operator-() const;

  // Exact equality in exact mode, bitwise equality in approx mode.
  friend bool operator==(const Scalar& a, const Scalar& b);

 private:
  std::variant<GaussianRational, Complex> value_;
};

std::string to_string(const Scalar& value);

// Dense univariate polynomial, coefficients stored by descending power.
// The zero polynomial is the single coefficient [0] with degree 0.
class Poly {
 public:
  explicit Poly(Mode mode = Mode::exact) : mode_(mode), coeffs_{Scalar::zero(mode)} {}

  // Strips leading zeros. All coefficients must share one mode.
  static Poly from_descending(std::vector<Scalar> coeffs);
  static Poly from_descending(std::span<const long> coeffs, Mode mode = Mode::exact);
  static Poly constant(Scalar value);
  // z^power scaled by coefficient.
  static Poly monomial(Scalar coefficient, int power);

  Mode mode() const { return mode_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.size() == 1 && coeffs_.front().is_zero(); }
  const std::vector<Scalar>& coeffs() const { return coeffs_; }
  const Scalar& leading() const { return coeffs_.front(); }
  // Coefficient of z^power (zero outside the stored range).
  Scalar coeff(int power) const;

  Scalar evaluate(const Scalar& at) const;
  Complex evaluate(Complex at) const;
  // Σ|c_k||z|^k, the rounding-error scale used for backward-error tests.
  double magnitude_at(double abs_z) const;
  double max_abs_coeff() const;

  Poly to_approx() const;
  // Divides by the leading coefficient.
  Poly monic() const;

  friend bool operator==(const Poly& a, const Poly& b) { return a.mode_ == b.mode_ && a.coeffs_ == b.coeffs_; }

 private:
  Mode mode_;
  std::vector<Scalar> coeffs_;
};

std::string to_string(const Poly& p);

Poly add(const Poly& a, const Poly& b);
Poly subtract(const Poly& a, const Poly& b);
Poly multiply(const Poly& a, const Poly& b);
Poly scale(const Poly& a, const Scalar& factor);
// a(b(z)).
Poly compose(const Poly& a, const Poly& b);
Poly derivative(const Poly& a);

enum class PolyOp { add, multiply, compose, derivative };

// Tagged dispatcher over the four basic operations. Binary operations require b.
Poly poly_arith(PolyOp op, const Poly& a, const std::optional<Poly>& b = std::nullopt);

// Exact-mode Euclidean division; throws ModeMismatchError in approx mode.
std::pair<Poly, Poly> divmod(const Poly& dividend, const Poly& divisor);
// Monic greatest common divisor over Q(i). gcd(0, 0) throws.
Poly gcd(const Poly& a, const Poly& b);

struct SquareFreeFactor {
  Poly factor;
  int multiplicity;
};

// Yun's algorithm: p = lc · Π factor_i^multiplicity_i with square-free, pairwise
// coprime, monic factors of positive degree. Exact mode only.
std::vector<SquareFreeFactor> square_free_decomposition(const Poly& p);

// Sylvester determinant of the two binary forms of degree `degree` whose
// dehomogenizations are p and q (missing top coefficients read as zero).
// Zero exactly when the forms share a projective zero.
Scalar resultant(const Poly& p, const Poly& q, int degree);
// Uses degree = max(deg p, deg q).
Scalar resultant(const Poly& p, const Poly& q);

// Determinant of a square matrix (row-major) of a single mode.
Scalar determinant(std::vector<std::vector<Scalar>> matrix);

struct RootCluster {
  Scalar center;
  int multiplicity = 1;
  double radius = 0.0;
};

struct RootOptions {
  double tol = 1e-9;
  int max_iter = 200;
};

// Aberth–Ehrlich simultaneous iteration. Approx mode clusters roots at
// pairwise distance < tol·max(1, |root|); exact mode takes multiplicities
// from the square-free decomposition and returns exact centers for roots in
// Q(i). Multiplicities always sum to deg p. Clusters are sorted by
// (real, imag) of their centers.
std::vector<RootCluster> find_roots(const Poly& p, const RootOptions& options = {});

// Raw Aberth iterates for an approximate polynomial of degree ≥ 1, no clustering.
std::vector<Complex> aberth_roots(const Poly& p, const RootOptions& options = {});

}  // namespace subcocycle::poly
