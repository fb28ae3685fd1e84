#pragma once

// Line-oriented text formats for covering models and rational maps.
//
// Model files:
//   nodes N
//   edge FROM TO WEIGHT          weight "p/q", an integer, or a decimal
//   cocycle multiplicative       default
//   cocycle explicit NAME        one of builtin_rule_names()
//   surjectivity relaxed         allow nodes without preimages
//
// Map files:
//   degree D
//   mode exact|approx            default exact
//   P c_D ... c_0                descending powers of z
//   Q c_D ... c_0
//
// Coefficients are rationals, decimals, or complex numbers "a+bi", "-3/2i",
// "i". Everything after "#" is a comment. Errors name the offending line.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "subcocycle/cocycle.hpp"
#include "subcocycle/errors.hpp"
#include "subcocycle/model.hpp"
#include "subcocycle/riemann.hpp"

namespace subcocycle::io {

class ParseError : public InputError {
 public:
  ParseError(int line, const std::string& message)
      : InputError(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct ModelDocument {
  CoveringModel model;
  CocycleSpec spec;
  // "multiplicative", or the built-in rule name for explicit cocycles.
  std::string cocycle;
};

ModelDocument parse_model(std::string_view text);
std::string emit_model(const ModelDocument& doc);

// Explicit sequence rules selectable from model files:
//   unit                 κ_n = 1
//   doubling             κ_n = 2^n
//   euler                κ_n = q^n with q = 2721/1001
//   oscillating          the two-point rule with the block schedule 2, 4, ..., 1024
//   oscillating-flat     the same rule with λ ≡ 0
//   oscillating-linear   the same rule with λ(n) = n
std::vector<std::string> builtin_rule_names();
CocycleSpec builtin_rule(const std::string& name);

struct MapDocument {
  riemann::RationalMap map;
  int declared_degree = 0;
};

MapDocument parse_map(std::string_view text);
std::string emit_map(const MapDocument& doc);

// One coefficient or point coordinate in the given mode.
poly::Scalar parse_scalar(std::string_view text, poly::Mode mode);
// A point on the sphere: a scalar, or "inf" / "infinity" / "∞".
riemann::ProjectivePoint parse_point(std::string_view text, poly::Mode mode);

std::string read_file(const std::filesystem::path& path);

}  // namespace subcocycle::io
