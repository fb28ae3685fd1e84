#include "subcocycle/poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "subcocycle/errors.hpp"

namespace subcocycle::poly {

std::string to_string(Mode mode) { return mode == Mode::exact ? "exact" : "approx"; }

// ---------------------------------------------------------------------------
// Scalar

Scalar Scalar::zero(Mode mode) { return mode == Mode::exact ? Scalar(GaussianRational()) : Scalar(Complex()); }
Scalar Scalar::one(Mode mode) { return from_int(1, mode); }
Scalar Scalar::from_int(long value, Mode mode) {
  return mode == Mode::exact ? Scalar(GaussianRational(value)) : Scalar(Complex(static_cast<double>(value), 0.0));
}

bool Scalar::is_zero() const {
  if (const auto* e = std::get_if<GaussianRational>(&value_)) return e->is_zero();
  return std::get<Complex>(value_) == Complex();
}

const GaussianRational& Scalar::exact() const {
  if (const auto* e = std::get_if<GaussianRational>(&value_)) return *e;
  throw ModeMismatchError();
}

Complex Scalar::to_complex() const {
  if (const auto* e = std::get_if<GaussianRational>(&value_)) return e->to_complex();
  return std::get<Complex>(value_);
}

namespace {

template <typename ExactOp, typename ApproxOp>
void combine(std::variant<GaussianRational, Complex>& lhs, const std::variant<GaussianRational, Complex>& rhs,
             ExactOp exact_op, ApproxOp approx_op) {
  if (lhs.index() != rhs.index()) throw ModeMismatchError();
  if (lhs.index() == 0) {
    exact_op(std::get<0>(lhs), std::get<0>(rhs));
  } else {
    approx_op(std::get<1>(lhs), std::get<1>(rhs));
  }
}

}  // namespace

Scalar& Scalar::operator+=(const Scalar& o) {
  combine(value_, o.value_, [](auto& a, const auto& b) { a += b; }, [](auto& a, const auto& b) { a += b; });
  return *this;
}
Scalar& Scalar::operator-=(const Scalar& o) {
  combine(value_, o.value_, [](auto& a, const auto& b) { a -= b; }, [](auto& a, const auto& b) { a -= b; });
  return *this;
}
Scalar& Scalar::operator*=(const Scalar& o) {
  combine(value_, o.value_, [](auto& a, const auto& b) { a *= b; }, [](auto& a, const auto& b) { a *= b; });
  return *this;
}
Scalar& Scalar::operator/=(const Scalar& o) {
  if (o.is_zero()) throw DegenerateInputError("division by zero scalar");
  combine(value_, o.value_, [](auto& a, const auto& b) { a /= b; }, [](auto& a, const auto& b) { a /= b; });
  return *this;
}
Scalar Scalar::operator-() const {
  if (const auto* e = std::get_if<GaussianRational>(&value_)) return Scalar(-*e);
  return Scalar(-std::get<Complex>(value_));
}

bool operator==(const Scalar& a, const Scalar& b) { return a.value_ == b.value_; }

std::string to_string(const Scalar& value) {
  if (value.is_exact()) return to_string(value.exact());
  std::ostringstream os;
  os.precision(17);
  Complex c = value.to_complex();
  os << c.real();
  if (c.imag() != 0.0) os << (c.imag() >= 0 ? "+" : "") << c.imag() << "i";
  return os.str();
}

// ---------------------------------------------------------------------------
// Poly

Poly Poly::from_descending(std::vector<Scalar> coeffs) {
  if (coeffs.empty()) return Poly(Mode::exact);
  Mode mode = coeffs.front().mode();
  for (const auto& c : coeffs) {
    if (c.mode() != mode) throw ModeMismatchError();
  }
  auto first = std::find_if(coeffs.begin(), coeffs.end(), [](const Scalar& c) { return !c.is_zero(); });
  Poly out(mode);
  if (first == coeffs.end()) return out;
  out.coeffs_.assign(std::make_move_iterator(first), std::make_move_iterator(coeffs.end()));
  return out;
}

Poly Poly::from_descending(std::span<const long> coeffs, Mode mode) {
  std::vector<Scalar> out;
  out.reserve(coeffs.size());
  for (long c : coeffs) out.push_back(Scalar::from_int(c, mode));
  if (out.empty()) return Poly(mode);
  return from_descending(std::move(out));
}

Poly Poly::constant(Scalar value) { return from_descending(std::vector<Scalar>{std::move(value)}); }

Poly Poly::monomial(Scalar coefficient, int power) {
  Mode mode = coefficient.mode();
  std::vector<Scalar> c(static_cast<size_t>(power) + 1, Scalar::zero(mode));
  c.front() = std::move(coefficient);
  return from_descending(std::move(c));
}

Scalar Poly::coeff(int power) const {
  if (power < 0 || power > degree()) return Scalar::zero(mode_);
  return coeffs_[static_cast<size_t>(degree() - power)];
}

Scalar Poly::evaluate(const Scalar& at) const {
  Scalar acc = Scalar::zero(mode_);
  for (const auto& c : coeffs_) {
    acc *= at;
    acc += c;
  }
  return acc;
}

Complex Poly::evaluate(Complex at) const {
  Complex acc{};
  for (const auto& c : coeffs_) acc = acc * at + c.to_complex();
  return acc;
}

double Poly::magnitude_at(double abs_z) const {
  double acc = 0.0;
  for (const auto& c : coeffs_) acc = acc * abs_z + std::abs(c.to_complex());
  return acc;
}

double Poly::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c.to_complex()));
  return m;
}

Poly Poly::to_approx() const {
  std::vector<Scalar> c;
  c.reserve(coeffs_.size());
  for (const auto& s : coeffs_) c.push_back(s.to_approx());
  return from_descending(std::move(c));
}

Poly Poly::monic() const {
  if (is_zero()) throw DegenerateInputError("zero polynomial has no monic form");
  Scalar lead = leading();
  std::vector<Scalar> c = coeffs_;
  for (auto& s : c) s /= lead;
  return from_descending(std::move(c));
}

std::string to_string(const Poly& p) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < p.coeffs().size(); ++i) {
    if (i) os << ", ";
    os << to_string(p.coeffs()[i]);
  }
  os << "]";
  return os.str();
}

// ---------------------------------------------------------------------------
// Arithmetic

namespace {

void require_same_mode(const Poly& a, const Poly& b) {
  if (a.mode() != b.mode()) throw ModeMismatchError();
}

// Ascending-power working copy.
std::vector<Scalar> ascending(const Poly& p) { return {p.coeffs().rbegin(), p.coeffs().rend()}; }

Poly from_ascending(std::vector<Scalar> c) {
  std::reverse(c.begin(), c.end());
  return Poly::from_descending(std::move(c));
}

}  // namespace

Poly add(const Poly& a, const Poly& b) {
  require_same_mode(a, b);
  auto x = ascending(a);
  auto y = ascending(b);
  if (x.size() < y.size()) x.swap(y);
  for (size_t i = 0; i < y.size(); ++i) x[i] += y[i];
  return from_ascending(std::move(x));
}

Poly subtract(const Poly& a, const Poly& b) { return add(a, scale(b, Scalar::from_int(-1, b.mode()))); }

Poly multiply(const Poly& a, const Poly& b) {
  require_same_mode(a, b);
  if (a.is_zero() || b.is_zero()) return Poly(a.mode());
  auto x = ascending(a);
  auto y = ascending(b);
  std::vector<Scalar> out(x.size() + y.size() - 1, Scalar::zero(a.mode()));
  for (size_t i = 0; i < x.size(); ++i) {
    for (size_t j = 0; j < y.size(); ++j) out[i + j] += x[i] * y[j];
  }
  return from_ascending(std::move(out));
}

Poly scale(const Poly& a, const Scalar& factor) {
  if (a.mode() != factor.mode()) throw ModeMismatchError();
  std::vector<Scalar> c = a.coeffs();
  for (auto& s : c) s *= factor;
  return Poly::from_descending(std::move(c));
}

Poly compose(const Poly& a, const Poly& b) {
  require_same_mode(a, b);
  // Horner in the polynomial ring.
  Poly acc(a.mode());
  for (const auto& c : a.coeffs()) acc = add(multiply(acc, b), Poly::constant(c));
  return acc;
}

Poly derivative(const Poly& a) {
  if (a.degree() == 0) return Poly(a.mode());
  std::vector<Scalar> out;
  out.reserve(static_cast<size_t>(a.degree()));
  for (int k = a.degree(); k >= 1; --k) out.push_back(a.coeff(k) * Scalar::from_int(k, a.mode()));
  return Poly::from_descending(std::move(out));
}

Poly poly_arith(PolyOp op, const Poly& a, const std::optional<Poly>& b) {
  if (op == PolyOp::derivative) return derivative(a);
  if (!b) throw InputError("binary polynomial operation requires a second operand");
  switch (op) {
    case PolyOp::add: return add(a, *b);
    case PolyOp::multiply: return multiply(a, *b);
    case PolyOp::compose: return compose(a, *b);
    case PolyOp::derivative: break;
  }
  return derivative(a);
}

std::pair<Poly, Poly> divmod(const Poly& dividend, const Poly& divisor) {
  require_same_mode(dividend, divisor);
  if (dividend.mode() != Mode::exact) throw ModeMismatchError();
  if (divisor.is_zero()) throw DegenerateInputError("polynomial division by zero");
  auto rem = ascending(dividend);
  const int dd = divisor.degree();
  const int nd = dividend.degree();
  if (nd < dd || dividend.is_zero()) return {Poly(Mode::exact), dividend};
  std::vector<Scalar> quot(static_cast<size_t>(nd - dd) + 1, Scalar::zero(Mode::exact));
  const Scalar lead = divisor.leading();
  for (int k = nd - dd; k >= 0; --k) {
    Scalar q = rem[static_cast<size_t>(k + dd)] / lead;
    if (q.is_zero()) continue;
    for (int j = 0; j <= dd; ++j) rem[static_cast<size_t>(k + j)] -= q * divisor.coeff(j);
    quot[static_cast<size_t>(k)] = std::move(q);
  }
  rem.resize(static_cast<size_t>(std::max(dd, 1)));
  return {from_ascending(std::move(quot)), from_ascending(std::move(rem))};
}

Poly gcd(const Poly& a, const Poly& b) {
  require_same_mode(a, b);
  if (a.mode() != Mode::exact) throw ModeMismatchError();
  if (a.is_zero() && b.is_zero()) throw DegenerateInputError("gcd of two zero polynomials");
  Poly x = a, y = b;
  while (!y.is_zero()) {
    Poly r = divmod(x, y).second;
    x = std::move(y);
    // Keeping the remainder monic bounds coefficient growth.
    y = r.is_zero() ? std::move(r) : r.monic();
  }
  return x.monic();
}

std::vector<SquareFreeFactor> square_free_decomposition(const Poly& p) {
  if (p.mode() != Mode::exact) throw ModeMismatchError();
  if (p.is_zero()) throw DegenerateInputError("square-free decomposition of the zero polynomial");
  std::vector<SquareFreeFactor> out;
  if (p.degree() == 0) return out;
  const Poly dp = derivative(p);
  Poly a = gcd(p, dp);
  Poly b = divmod(p, a).first;
  Poly c = divmod(dp, a).first;
  Poly d = subtract(c, derivative(b));
  for (int i = 1; b.degree() > 0; ++i) {
    Poly ai = d.is_zero() ? b.monic() : gcd(b, d);
    if (ai.degree() > 0) out.push_back({ai, i});
    Poly nb = divmod(b, ai).first;
    Poly nc = divmod(d, ai).first;
    b = std::move(nb);
    d = subtract(nc, derivative(b));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Resultants

Scalar determinant(std::vector<std::vector<Scalar>> m) {
  const size_t n = m.size();
  if (n == 0) return Scalar::one(Mode::exact);
  const Mode mode = m[0][0].mode();
  Scalar det = Scalar::one(mode);
  for (size_t col = 0; col < n; ++col) {
    size_t pivot = n;
    if (mode == Mode::exact) {
      for (size_t r = col; r < n; ++r) {
        if (!m[r][col].is_zero()) { pivot = r; break; }
      }
    } else {
      double best = 0.0;
      for (size_t r = col; r < n; ++r) {
        double mag = std::abs(m[r][col].to_complex());
        if (mag > best) { best = mag; pivot = r; }
      }
    }
    if (pivot == n) return Scalar::zero(mode);
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (size_t r = col + 1; r < n; ++r) {
      if (m[r][col].is_zero()) continue;
      Scalar factor = m[r][col] / m[col][col];
      for (size_t k = col; k < n; ++k) m[r][k] -= factor * m[col][k];
    }
  }
  return det;
}

Scalar resultant(const Poly& p, const Poly& q, int degree) {
  require_same_mode(p, q);
  if (p.is_zero() && q.is_zero()) throw DegenerateInputError("resultant of two zero polynomials");
  if (degree < std::max(p.degree(), q.degree())) {
    throw InputError("declared degree is below the polynomial degree");
  }
  const Mode mode = p.mode();
  if (degree == 0) return Scalar::one(mode);
  const auto n = static_cast<size_t>(2 * degree);
  std::vector<std::vector<Scalar>> syl(n, std::vector<Scalar>(n, Scalar::zero(mode)));
  for (int row = 0; row < degree; ++row) {
    for (int i = 0; i <= degree; ++i) {
      syl[static_cast<size_t>(row)][static_cast<size_t>(row + i)] = p.coeff(degree - i);
      syl[static_cast<size_t>(row + degree)][static_cast<size_t>(row + i)] = q.coeff(degree - i);
    }
  }
  return determinant(std::move(syl));
}

Scalar resultant(const Poly& p, const Poly& q) { return resultant(p, q, std::max(p.degree(), q.degree())); }

// ---------------------------------------------------------------------------
// Root finding

std::vector<Complex> aberth_roots(const Poly& input, const RootOptions& options) {
  if (input.degree() < 1) throw InputError("root finding requires degree >= 1");
  if (!(options.tol > 0)) throw InputError("root tolerance must be positive");
  const Poly p = input.mode() == Mode::exact ? input.to_approx() : input;
  const int n = p.degree();
  const Complex lead = p.leading().to_complex();
  if (n == 1) return {-p.coeff(0).to_complex() / lead};

  // Fujiwara bound: every root has modulus at most 2·max |c_k / c_n|^(1/(n-k)).
  // Far tighter than the Cauchy bound when coefficients are large.
  double radius = 0.0;
  for (int k = 0; k < n; ++k) {
    double ratio = std::abs(p.coeff(k).to_complex() / lead);
    if (k == 0) ratio /= 2.0;
    if (ratio > 0) radius = std::max(radius, 2.0 * std::pow(ratio, 1.0 / (n - k)));
  }
  if (!(radius > 0)) radius = 1.0;

  std::vector<Complex> dcoeffs;
  for (int k = n; k >= 1; --k) dcoeffs.push_back(p.coeff(k).to_complex() * static_cast<double>(k));
  auto eval_dp = [&](Complex z) {
    Complex acc{};
    for (const auto& c : dcoeffs) acc = acc * z + c;
    return acc;
  };

  std::vector<Complex> z(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    // Offset angle avoids starting on a symmetry axis of real polynomials.
    double theta = 2.0 * std::numbers::pi * k / n + 0.4;
    z[static_cast<size_t>(k)] = std::polar(radius, theta);
  }

  // Newton steps that are kept only while they shrink |p(z)|.
  auto polish = [&](std::vector<Complex>& roots) {
    for (auto& r : roots) {
      double best = std::abs(p.evaluate(r));
      for (int k = 0; k < 3 && best > 0; ++k) {
        Complex d = eval_dp(r);
        if (d == Complex()) break;
        Complex next = r - p.evaluate(r) / d;
        double res = std::abs(p.evaluate(next));
        if (!(res < best)) break;
        r = next;
        best = res;
      }
    }
    return roots;
  };

  const double eps = std::numeric_limits<double>::epsilon();
  std::vector<bool> done(static_cast<size_t>(n), false);
  std::vector<double> residuals(static_cast<size_t>(n), 0.0);
  for (int iter = 0; iter < options.max_iter; ++iter) {
    bool all_done = true;
    for (size_t i = 0; i < z.size(); ++i) {
      // Converged iterates are frozen; the others still see them as poles.
      if (done[i]) continue;
      Complex pv = p.evaluate(z[i]);
      double scale = p.magnitude_at(std::abs(z[i]));
      residuals[i] = scale > 0 ? std::abs(pv) / scale : std::abs(pv);
      if (residuals[i] <= 16.0 * n * eps) {
        done[i] = true;
        continue;
      }
      done[i] = false;
      all_done = false;
      Complex ratio = pv / eval_dp(z[i]);
      Complex sum{};
      for (size_t j = 0; j < z.size(); ++j) {
        if (j != i) sum += 1.0 / (z[i] - z[j]);
      }
      Complex step = ratio / (1.0 - ratio * sum);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) step = ratio;
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) step = Complex(1e-3 * radius, 1e-3 * radius);
      z[i] -= step;
      // Multiple roots converge linearly and never reach the relative residual
      // floor near 0, so a step below rounding of the root bound also counts.
      if (std::abs(step) <= eps * std::max(std::abs(z[i]), radius)) done[i] = true;
    }
    if (all_done) return polish(z);
  }
  bool all_done = std::all_of(done.begin(), done.end(), [](bool b) { return b; });
  if (all_done) return polish(z);
  throw RootFindingError("Aberth iteration did not converge within " + std::to_string(options.max_iter) +
                             " iterations",
                         residuals);
}

namespace {

bool center_less(const RootCluster& a, const RootCluster& b) {
  Complex x = a.center.to_complex(), y = b.center.to_complex();
  if (x.real() != y.real()) return x.real() < y.real();
  return x.imag() < y.imag();
}

std::vector<RootCluster> cluster_roots(const std::vector<Complex>& roots, double tol) {
  std::vector<Complex> sorted = roots;
  std::sort(sorted.begin(), sorted.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  struct Group {
    Complex sum;
    std::vector<Complex> members;
  };
  std::vector<Group> groups;
  for (Complex r : sorted) {
    bool placed = false;
    for (auto& g : groups) {
      Complex center = g.sum / static_cast<double>(g.members.size());
      double scale = std::max(1.0, std::abs(r));
      bool near = std::any_of(g.members.begin(), g.members.end(),
                              [&](Complex m) { return std::abs(m - r) < tol * scale; });
      if (near || std::abs(center - r) < tol * scale) {
        g.sum += r;
        g.members.push_back(r);
        placed = true;
        break;
      }
    }
    if (!placed) groups.push_back({r, {r}});
  }
  std::vector<RootCluster> out;
  for (const auto& g : groups) {
    Complex center = g.sum / static_cast<double>(g.members.size());
    double radius = 0.0;
    for (Complex m : g.members) radius = std::max(radius, std::abs(m - center));
    out.push_back({Scalar(center), static_cast<int>(g.members.size()), radius});
  }
  return out;
}

// Exact Q(i) value of a numerically found root, when one exists with a small
// denominator and the factor vanishes there exactly.
std::optional<GaussianRational> snap_exact(const Poly& factor, Complex root) {
  constexpr long kMaxDen = 1'000'000;
  if (std::abs(root) > 1e12) return std::nullopt;
  GaussianRational candidate(rationalize(root.real(), kMaxDen), rationalize(root.imag(), kMaxDen));
  if (factor.evaluate(Scalar(candidate)).is_zero()) return candidate;
  return std::nullopt;
}

}  // namespace

std::vector<RootCluster> find_roots(const Poly& p, const RootOptions& options) {
  if (p.degree() < 1) throw InputError("root finding requires degree >= 1");
  if (!(options.tol > 0)) throw InputError("root tolerance must be positive");
  std::vector<RootCluster> out;
  if (p.mode() == Mode::approx) {
    out = cluster_roots(aberth_roots(p, options), options.tol);
  } else {
    for (const auto& [factor, multiplicity] : square_free_decomposition(p)) {
      if (factor.degree() == 1) {
        // Monic linear factor z + c has the exact root -c.
        out.push_back({Scalar(-factor.coeff(0).exact()), multiplicity, 0.0});
        continue;
      }
      for (Complex r : aberth_roots(factor, options)) {
        if (auto exact = snap_exact(factor, r)) {
          out.push_back({Scalar(*exact), multiplicity, 0.0});
        } else {
          out.push_back({Scalar(r), multiplicity, 0.0});
        }
      }
    }
  }
  std::sort(out.begin(), out.end(), center_less);
  return out;
}

}  // namespace subcocycle::poly
