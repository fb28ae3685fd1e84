#include "subcocycle/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "subcocycle/finite.hpp"

namespace subcocycle::io {

using poly::Mode;
using poly::Poly;
using poly::Scalar;
using riemann::ProjectivePoint;

namespace {

struct Line {
  int number = 0;
  std::vector<std::string> tokens;
};

// Non-empty lines with comments removed, split on whitespace.
std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> out;
  int number = 0;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(start, end - start);
    ++number;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    std::istringstream in{std::string(raw)};
    Line line{number, {}};
    for (std::string tok; in >> tok;) line.tokens.push_back(tok);
    if (!line.tokens.empty()) out.push_back(std::move(line));
    if (end == text.size()) break;
    start = end + 1;
  }
  return out;
}

long parse_count(const Line& line, const std::string& token, const char* what) {
  long value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(line.number, std::string("malformed ") + what + " '" + token + "'");
  }
  return value;
}

void expect_arity(const Line& line, size_t count, const char* usage) {
  if (line.tokens.size() != count) throw ParseError(line.number, std::string("expected '") + usage + "'");
}

double parse_double(std::string_view text) {
  if (text.find('/') != std::string_view::npos) return to_double(parse_rational(text));
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw InputError("malformed number '" + std::string(text) + "'");
  }
  return value;
}

CocycleSpec oscillating_rule() {
  std::vector<int> schedule;
  for (int s = 2; s <= 1024; s *= 2) schedule.push_back(s);
  return finite::example_oscillating(std::move(schedule)).spec;
}

}  // namespace

// ---------------------------------------------------------------------------
// Built-in rules

std::vector<std::string> builtin_rule_names() {
  return {"unit", "doubling", "euler", "oscillating", "oscillating-flat", "oscillating-linear"};
}

CocycleSpec builtin_rule(const std::string& name) {
  if (name == "unit") return CocycleSpec::explicit_rule(name, [](NodeId, int) { return Rational(1); }, 1);
  if (name == "doubling") {
    return CocycleSpec::explicit_rule(name, [](NodeId, int n) { return pow(Rational(2), static_cast<unsigned long>(n)); },
                                      2);
  }
  if (name == "euler") {
    const Rational q = finite::euler_approximant();
    return CocycleSpec::explicit_rule(name, [q](NodeId, int n) { return pow(q, static_cast<unsigned long>(n)); }, q);
  }
  if (name == "oscillating") return oscillating_rule();
  if (name == "oscillating-flat") return finite::example_two_point(finite::LambdaProfile::zero).spec;
  if (name == "oscillating-linear") return finite::example_two_point(finite::LambdaProfile::linear).spec;
  std::string known;
  for (const auto& n : builtin_rule_names()) known += (known.empty() ? "" : ", ") + n;
  throw InputError("unknown cocycle rule '" + name + "' (known: " + known + ")");
}

// ---------------------------------------------------------------------------
// Models

ModelDocument parse_model(std::string_view text) {
  std::optional<long> nodes;
  int nodes_line = 0;
  std::vector<Edge> edges;
  std::optional<std::string> cocycle;
  Surjectivity surjectivity = Surjectivity::required;

  for (const auto& line : tokenize(text)) {
    const std::string& head = line.tokens[0];
    if (head == "nodes") {
      expect_arity(line, 2, "nodes N");
      if (nodes) throw ParseError(line.number, "duplicate 'nodes' line");
      nodes = parse_count(line, line.tokens[1], "node count");
      if (*nodes < 1 || *nodes > 1'000'000) throw ParseError(line.number, "node count must be in 1..1000000");
      nodes_line = line.number;
    } else if (head == "edge") {
      expect_arity(line, 4, "edge FROM TO WEIGHT");
      if (!nodes) throw ParseError(line.number, "'edge' before 'nodes'");
      long from = parse_count(line, line.tokens[1], "node id");
      long to = parse_count(line, line.tokens[2], "node id");
      for (long id : {from, to}) {
        if (id < 0 || id >= *nodes) {
          throw ParseError(line.number, "node " + std::to_string(id) + " out of range 0.." + std::to_string(*nodes - 1));
        }
      }
      Rational weight;
      try {
        weight = parse_rational(line.tokens[3]);
      } catch (const InputError& e) {
        throw ParseError(line.number, e.what());
      }
      if (sgn(weight) <= 0) throw ParseError(line.number, "edge weight must be positive");
      edges.push_back({static_cast<NodeId>(from), static_cast<NodeId>(to), weight});
    } else if (head == "cocycle") {
      if (cocycle) throw ParseError(line.number, "duplicate 'cocycle' line");
      if (line.tokens.size() == 2 && line.tokens[1] == "multiplicative") {
        cocycle = "multiplicative";
      } else if (line.tokens.size() == 3 && line.tokens[1] == "explicit") {
        cocycle = line.tokens[2];
        try {
          builtin_rule(*cocycle);
        } catch (const InputError& e) {
          throw ParseError(line.number, e.what());
        }
      } else {
        throw ParseError(line.number, "expected 'cocycle multiplicative' or 'cocycle explicit NAME'");
      }
    } else if (head == "surjectivity") {
      expect_arity(line, 2, "surjectivity required|relaxed");
      if (line.tokens[1] == "relaxed") {
        surjectivity = Surjectivity::relaxed;
      } else if (line.tokens[1] != "required") {
        throw ParseError(line.number, "expected 'surjectivity required|relaxed'");
      }
    } else {
      throw ParseError(line.number, "unknown directive '" + head + "'");
    }
  }
  if (!nodes) throw ParseError(0, "missing 'nodes' line");

  std::optional<CoveringModel> model;
  try {
    model = CoveringModel::create(static_cast<int>(*nodes), std::move(edges), surjectivity);
  } catch (const InputError& e) {
    throw ParseError(nodes_line, e.what());
  }
  std::string kind = cocycle.value_or("multiplicative");
  CocycleSpec spec = kind == "multiplicative" ? CocycleSpec::multiplicative(*model) : builtin_rule(kind);
  return {std::move(*model), std::move(spec), std::move(kind)};
}

std::string emit_model(const ModelDocument& doc) {
  std::ostringstream out;
  out << "nodes " << doc.model.node_count() << "\n";
  if (doc.model.surjectivity() == Surjectivity::relaxed) out << "surjectivity relaxed\n";
  if (doc.cocycle == "multiplicative") {
    out << "cocycle multiplicative\n";
  } else {
    out << "cocycle explicit " << doc.cocycle << "\n";
  }
  for (const auto& e : doc.model.edges()) out << "edge " << e.from << " " << e.to << " " << e.weight.get_str() << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Scalars and points

Scalar parse_scalar(std::string_view text, Mode mode) {
  if (text.empty()) throw InputError("empty number");
  std::string_view re_text = text, im_text;
  bool has_im = text.back() == 'i';
  if (has_im) {
    std::string_view body = text.substr(0, text.size() - 1);
    // The split is the last sign that is neither leading nor part of an exponent.
    size_t split = std::string_view::npos;
    for (size_t k = body.size(); k-- > 1;) {
      if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
        split = k;
        break;
      }
    }
    if (split == std::string_view::npos) {
      re_text = "0";
      im_text = body;
    } else {
      re_text = body.substr(0, split);
      im_text = body.substr(split);
    }
    if (im_text.empty() || im_text == "+") im_text = "1";
    if (im_text == "-") im_text = "-1";
  }
  auto strip_plus = [](std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    return s;
  };
  re_text = strip_plus(re_text);
  im_text = strip_plus(im_text);
  if (mode == Mode::exact) {
    GaussianRational z(parse_rational(re_text), has_im ? parse_rational(im_text) : Rational(0));
    return Scalar(z);
  }
  return Scalar(poly::Complex(parse_double(re_text), has_im ? parse_double(im_text) : 0.0));
}

ProjectivePoint parse_point(std::string_view text, Mode mode) {
  if (text == "inf" || text == "infinity" || text == "∞") return ProjectivePoint::infinity(mode);
  return ProjectivePoint::finite(parse_scalar(text, mode));
}

// ---------------------------------------------------------------------------
// Maps

MapDocument parse_map(std::string_view text) {
  std::optional<long> degree;
  Mode mode = Mode::exact;
  bool mode_seen = false;
  std::optional<Line> p_line, q_line;

  for (const auto& line : tokenize(text)) {
    const std::string& head = line.tokens[0];
    if (head == "degree") {
      expect_arity(line, 2, "degree D");
      if (degree) throw ParseError(line.number, "duplicate 'degree' line");
      degree = parse_count(line, line.tokens[1], "degree");
      if (*degree < 2 || *degree > 4096) throw ParseError(line.number, "degree must be in 2..4096");
    } else if (head == "mode") {
      expect_arity(line, 2, "mode exact|approx");
      if (mode_seen) throw ParseError(line.number, "duplicate 'mode' line");
      mode_seen = true;
      if (line.tokens[1] == "exact") {
        mode = Mode::exact;
      } else if (line.tokens[1] == "approx") {
        mode = Mode::approx;
      } else {
        throw ParseError(line.number, "expected 'mode exact|approx'");
      }
    } else if (head == "P" || head == "Q") {
      auto& slot = head == "P" ? p_line : q_line;
      if (slot) throw ParseError(line.number, "duplicate '" + head + "' line");
      slot = line;
    } else {
      throw ParseError(line.number, "unknown directive '" + head + "'");
    }
  }
  if (!degree) throw ParseError(0, "missing 'degree' line");
  if (!p_line) throw ParseError(0, "missing 'P' line");
  if (!q_line) throw ParseError(0, "missing 'Q' line");

  auto read_poly = [&](const Line& line) {
    if (static_cast<long>(line.tokens.size()) != *degree + 2) {
      throw ParseError(line.number, line.tokens[0] + " needs " + std::to_string(*degree + 1) +
                                        " coefficients c_D ... c_0, got " +
                                        std::to_string(line.tokens.size() - 1));
    }
    std::vector<Scalar> coeffs;
    for (size_t k = 1; k < line.tokens.size(); ++k) {
      try {
        coeffs.push_back(parse_scalar(line.tokens[k], mode));
      } catch (const InputError& e) {
        throw ParseError(line.number, e.what());
      }
    }
    return Poly::from_descending(std::move(coeffs));
  };
  Poly p = read_poly(*p_line);
  Poly q = read_poly(*q_line);
  try {
    return {riemann::make_map(std::move(p), std::move(q), static_cast<int>(*degree)), static_cast<int>(*degree)};
  } catch (const InputError& e) {
    throw ParseError(0, std::string("invalid map: ") + e.what());
  }
}

std::string emit_map(const MapDocument& doc) {
  std::ostringstream out;
  const int d = doc.declared_degree;
  out << "degree " << d << "\n";
  out << "mode " << poly::to_string(doc.map.mode()) << "\n";
  out << "P";
  for (int k = d; k >= 0; --k) out << " " << poly::to_string(doc.map.p_coeff(k));
  out << "\nQ";
  for (int k = d; k >= 0; --k) out << " " << poly::to_string(doc.map.q_coeff(k));
  out << "\n";
  return out.str();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace subcocycle::io
