#include "subcocycle/growth_rate.hpp"

#include <cmath>
#include <cstdio>

#include "subcocycle/errors.hpp"

namespace subcocycle {

AlgebraicGrowthRate::AlgebraicGrowthRate(Rational product, int length)
    : product_(std::move(product)), length_(length) {
  if (sgn(product_) <= 0) throw InputError("growth rate product must be positive");
  if (length_ < 1) throw InputError("growth rate length must be >= 1");
  approx_ = std::exp(log_abs(product_) / length_);
}

double AlgebraicGrowthRate::log() const { return log_abs(product_) / length_; }

bool AlgebraicGrowthRate::at_least(const Rational& delta) const {
  if (sgn(delta) <= 0) return true;
  return product_ >= pow(delta, static_cast<unsigned long>(length_));
}

std::strong_ordering operator<=>(const AlgebraicGrowthRate& a, const AlgebraicGrowthRate& b) {
  if (a.length_ == b.length_) return cmp(a.product_, b.product_) <=> 0;
  // Cheap rejection before exponentiating.
  double diff = a.log() - b.log();
  if (std::fabs(diff) > 1e-9 * (1.0 + std::fabs(a.log()) + std::fabs(b.log()))) {
    return diff < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  Rational lhs = pow(a.product_, static_cast<unsigned long>(b.length_));
  Rational rhs = pow(b.product_, static_cast<unsigned long>(a.length_));
  return cmp(lhs, rhs) <=> 0;
}

std::string AlgebraicGrowthRate::exact_string() const {
  return "(" + fraction_string(product_) + ")^(1/" + std::to_string(length_) + ")";
}

std::string AlgebraicGrowthRate::display_string() const {
  return exact_string() + " ≈ " + decimal_string(approx_);
}

std::string decimal_string(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

}  // namespace subcocycle
