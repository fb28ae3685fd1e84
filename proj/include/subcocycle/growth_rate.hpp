#pragma once

#include <compare>
#include <string>

#include "subcocycle/rational.hpp"

namespace subcocycle {

// The positive real product^(1/length), kept exactly. Two rates compare by
// integer exponentiation: (p1, L1) vs (p2, L2) is p1^L2 vs p2^L1. The stored
// (product, length) pair is not normalized, so (16, 2) and (4, 1) are equal
// values with different representations.
class AlgebraicGrowthRate {
 public:
  AlgebraicGrowthRate(Rational product, int length);
  static AlgebraicGrowthRate of(const Rational& value) { return {value, 1}; }

  const Rational& product() const { return product_; }
  int length() const { return length_; }
  double approx() const { return approx_; }
  double log() const;

  // product ≥ delta^length.
  bool at_least(const Rational& delta) const;
  bool below(const Rational& delta) const { return !at_least(delta); }

  // "(p/q)^(1/L)".
  std::string exact_string() const;
  // Exact form followed by "≈" and a 10-digit decimal.
  std::string display_string() const;

  friend std::strong_ordering operator<=>(const AlgebraicGrowthRate& a, const AlgebraicGrowthRate& b);
  friend bool operator==(const AlgebraicGrowthRate& a, const AlgebraicGrowthRate& b) {
    return (a <=> b) == std::strong_ordering::equal;
  }
  // Same product and length, not just the same value.
  bool same_representation(const AlgebraicGrowthRate& o) const {
    return length_ == o.length_ && product_ == o.product_;
  }

 private:
  Rational product_;
  int length_;
  double approx_;
};

std::string decimal_string(double value, int digits = 10);

}  // namespace subcocycle
