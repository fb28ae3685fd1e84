#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "subcocycle/model.hpp"
#include "subcocycle/rational.hpp"

namespace subcocycle {

// Orbit segment x0 -> x1 -> ... -> xn through declared model edges.
struct ForwardPath {
  std::vector<NodeId> nodes;
  std::vector<EdgeId> edges;

  int length() const { return static_cast<int>(edges.size()); }
  // Resolves edge ids from consecutive nodes; throws PathError on a missing edge.
  static ForwardPath from_nodes(const CoveringModel& model, std::vector<NodeId> nodes);
  static ForwardPath empty_at(NodeId node) { return {{node}, {}}; }
  // Sub-path covering edges [first, first + count).
  ForwardPath slice(int first, int count) const;
};

void validate_path(const CoveringModel& model, const ForwardPath& path);

class CocycleSpec;

// κ_n is the product of edge weights along the path.
struct MultiplicativeRule {
  std::vector<Rational> weights;  // indexed by EdgeId
};

// κ_n(x0) given by a rule of (start node, n). The rule must return 1 at n = 0.
struct ExplicitRule {
  std::string name;
  std::function<Rational(NodeId, int)> value;
};

// Product construction over X × {0, 1}: value 2^n c^-n κ_n(x) on the marked
// fiber, 1 elsewhere. Node (x, y) has id y·|X| + x; edge (e, y) has id y·|E| + e.
struct RescaledRule {
  std::shared_ptr<const CocycleSpec> inner;
  std::shared_ptr<const CoveringModel> base_model;
  Rational c;
  int marked = 0;
  int base_node_count = 0;
  int base_edge_count = 0;
};

class CocycleSpec {
 public:
  using Variant = std::variant<MultiplicativeRule, ExplicitRule, RescaledRule>;

  // Weights taken from the model edges.
  static CocycleSpec multiplicative(const CoveringModel& model);
  static CocycleSpec multiplicative(std::vector<Rational> weights);
  // Explicit rules must declare bound_M; unbounded rules are refused.
  static CocycleSpec explicit_rule(std::string name, std::function<Rational(NodeId, int)> value,
                                   Rational bound_m);

  const Variant& variant() const { return variant_; }
  const Rational& bound_m() const { return bound_m_; }
  bool is_multiplicative() const;
  bool is_explicit() const { return std::holds_alternative<ExplicitRule>(variant_); }
  std::string kind() const;

  // Edge weights when the spec is multiplicative on `model` (including a
  // rescaled multiplicative spec on its product model), else nullopt.
  std::optional<std::vector<Rational>> flat_weights(const CoveringModel& model) const;

 private:
  friend CocycleSpec rescale_embed(const CocycleSpec&, const CoveringModel&, const Rational&, int, int);
  CocycleSpec(Variant v, Rational bound) : variant_(std::move(v)), bound_m_(std::move(bound)) {}

  Variant variant_;
  Rational bound_m_;
};

// κ_n along a concrete path. Throws PathError when the path is not in the model.
Rational cocycle_value(const CocycleSpec& spec, const CoveringModel& model, const ForwardPath& path);

struct SubmultiplicativityViolation {
  enum class Kind { split, bound };
  Kind kind = Kind::split;
  ForwardPath witness;
  int n = 0;
  int m = 0;
  Rational lhs;  // κ_{n+m}(x), or the single-step value for bound violations
  Rational rhs;  // κ_n(x)·κ_m(x_n), or bound_M
};

struct SubmultiplicativityReport {
  int depth = 0;
  long paths_checked = 0;
  long splits_checked = 0;
  std::vector<SubmultiplicativityViolation> violations;
  bool ok() const { return violations.empty(); }
};

// Checks κ_{n+m} ≤ κ_n · κ_m(after n steps) on every forward path of length
// n + m ≤ depth, and κ_1 ≤ bound_M. Violations are reported, not thrown.
SubmultiplicativityReport check_submultiplicative(const CocycleSpec& spec, const CoveringModel& model, int depth);

// Product space X × {0, 1} on which rescale_embed's output lives.
CoveringModel product_model(const CoveringModel& model);

// Rescales a spec satisfying κ_n ≥ c^n (checked on all paths up to
// check_depth) into the product construction marked at fiber `marked`.
// Throws InputError with a witness path when the lower bound fails.
CocycleSpec rescale_embed(const CocycleSpec& spec, const CoveringModel& model, const Rational& c, int marked,
                          int check_depth = 8);

// Calls visit(path) for every forward path of length exactly `length` from `start`,
// in lexicographic order of edge targets.
void for_each_forward_path(const CoveringModel& model, NodeId start, int length,
                           const std::function<void(const ForwardPath&)>& visit);

}  // namespace subcocycle
