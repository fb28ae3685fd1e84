#include "subcocycle/cocycle.hpp"

#include <algorithm>
#include <string>

#include "subcocycle/errors.hpp"

namespace subcocycle {

ForwardPath ForwardPath::from_nodes(const CoveringModel& model, std::vector<NodeId> nodes) {
  if (nodes.empty()) throw PathError("path needs at least one node");
  ForwardPath path;
  for (size_t i = 0; i + 1 < nodes.size(); ++i) {
    auto e = model.find_edge(nodes[i], nodes[i + 1]);
    if (!e) {
      throw PathError("no edge " + std::to_string(nodes[i]) + " -> " + std::to_string(nodes[i + 1]));
    }
    path.edges.push_back(*e);
  }
  model.check_node(nodes.back());
  path.nodes = std::move(nodes);
  return path;
}

ForwardPath ForwardPath::slice(int first, int count) const {
  ForwardPath out;
  out.nodes.assign(nodes.begin() + first, nodes.begin() + first + count + 1);
  out.edges.assign(edges.begin() + first, edges.begin() + first + count);
  return out;
}

void validate_path(const CoveringModel& model, const ForwardPath& path) {
  if (path.nodes.empty() || path.nodes.size() != path.edges.size() + 1) {
    throw PathError("path must list one more node than edges");
  }
  for (NodeId v : path.nodes) {
    if (v < 0 || v >= model.node_count()) throw PathError("path node " + std::to_string(v) + " is not in the model");
  }
  for (size_t i = 0; i < path.edges.size(); ++i) {
    EdgeId e = path.edges[i];
    if (e < 0 || e >= model.edge_count()) throw PathError("path edge " + std::to_string(e) + " is not in the model");
    const Edge& edge = model.edge(e);
    if (edge.from != path.nodes[i] || edge.to != path.nodes[i + 1]) {
      throw PathError("edge " + std::to_string(e) + " does not join " + std::to_string(path.nodes[i]) + " -> " +
                      std::to_string(path.nodes[i + 1]));
    }
  }
}

CocycleSpec CocycleSpec::multiplicative(const CoveringModel& model) {
  std::vector<Rational> w;
  w.reserve(model.edges().size());
  for (const auto& e : model.edges()) w.push_back(e.weight);
  return multiplicative(std::move(w));
}

CocycleSpec CocycleSpec::multiplicative(std::vector<Rational> weights) {
  Rational bound = weights.empty() ? Rational(1) : weights.front();
  for (const auto& w : weights) {
    if (sgn(w) <= 0) throw InputError("multiplicative weights must be positive, got " + w.get_str());
    bound = std::max(bound, w);
  }
  return CocycleSpec(MultiplicativeRule{std::move(weights)}, bound);
}

CocycleSpec CocycleSpec::explicit_rule(std::string name, std::function<Rational(NodeId, int)> value,
                                       Rational bound_m) {
  if (!value) throw InputError("explicit cocycle '" + name + "' has no rule");
  if (sgn(bound_m) <= 0) throw InputError("explicit cocycle '" + name + "' needs a positive bound_M");
  return CocycleSpec(ExplicitRule{std::move(name), std::move(value)}, std::move(bound_m));
}

bool CocycleSpec::is_multiplicative() const {
  if (std::holds_alternative<MultiplicativeRule>(variant_)) return true;
  if (const auto* r = std::get_if<RescaledRule>(&variant_)) return r->inner->is_multiplicative();
  return false;
}

std::string CocycleSpec::kind() const {
  if (std::holds_alternative<MultiplicativeRule>(variant_)) return "multiplicative";
  if (const auto* e = std::get_if<ExplicitRule>(&variant_)) return "explicit " + e->name;
  return "rescaled";
}

std::optional<std::vector<Rational>> CocycleSpec::flat_weights(const CoveringModel& model) const {
  if (const auto* m = std::get_if<MultiplicativeRule>(&variant_)) {
    if (static_cast<int>(m->weights.size()) != model.edge_count()) {
      throw InputError("cocycle has " + std::to_string(m->weights.size()) + " weights but the model has " +
                       std::to_string(model.edge_count()) + " edges");
    }
    return m->weights;
  }
  if (const auto* r = std::get_if<RescaledRule>(&variant_)) {
    auto inner = r->inner->flat_weights(*r->base_model);
    if (!inner) return std::nullopt;
    if (model.edge_count() != 2 * r->base_edge_count || model.node_count() != 2 * r->base_node_count) {
      throw InputError("rescaled cocycle applied to a model that is not its product space");
    }
    std::vector<Rational> out(static_cast<size_t>(model.edge_count()), Rational(1));
    for (int e = 0; e < r->base_edge_count; ++e) {
      Rational scaled = 2 * (*inner)[static_cast<size_t>(e)] / r->c;
      scaled.canonicalize();
      out[static_cast<size_t>(r->marked * r->base_edge_count + e)] = scaled;
    }
    return out;
  }
  return std::nullopt;
}

Rational cocycle_value(const CocycleSpec& spec, const CoveringModel& model, const ForwardPath& path) {
  validate_path(model, path);
  const int n = path.length();
  if (n == 0) return 1;
  if (const auto* m = std::get_if<MultiplicativeRule>(&spec.variant())) {
    if (static_cast<int>(m->weights.size()) != model.edge_count()) {
      throw InputError("cocycle weight count does not match the model edge count");
    }
    Rational product = 1;
    for (EdgeId e : path.edges) product *= m->weights[static_cast<size_t>(e)];
    return product;
  }
  if (const auto* e = std::get_if<ExplicitRule>(&spec.variant())) {
    return e->value(path.nodes.front(), n);
  }
  const auto& r = std::get<RescaledRule>(spec.variant());
  if (model.node_count() != 2 * r.base_node_count || model.edge_count() != 2 * r.base_edge_count) {
    throw PathError("rescaled cocycle evaluated outside its product space");
  }
  const int fiber = path.nodes.front() / r.base_node_count;
  if (fiber != r.marked) return 1;
  ForwardPath base;
  for (NodeId v : path.nodes) base.nodes.push_back(v % r.base_node_count);
  for (EdgeId e : path.edges) base.edges.push_back(e % r.base_edge_count);
  Rational factor = pow(Rational(2) / r.c, static_cast<unsigned long>(n));
  return factor * cocycle_value(*r.inner, *r.base_model, base);
}

void for_each_forward_path(const CoveringModel& model, NodeId start, int length,
                           const std::function<void(const ForwardPath&)>& visit) {
  model.check_node(start);
  ForwardPath path = ForwardPath::empty_at(start);
  std::function<void()> extend = [&]() {
    if (path.length() == length) {
      visit(path);
      return;
    }
    for (EdgeId e : model.out_edges(path.nodes.back())) {
      path.edges.push_back(e);
      path.nodes.push_back(model.edge(e).to);
      extend();
      path.edges.pop_back();
      path.nodes.pop_back();
    }
  };
  extend();
}

SubmultiplicativityReport check_submultiplicative(const CocycleSpec& spec, const CoveringModel& model, int depth) {
  if (depth < 2) throw InputError("check depth must be >= 2");
  SubmultiplicativityReport report;
  report.depth = depth;
  for (NodeId x = 0; x < model.node_count(); ++x) {
    for_each_forward_path(model, x, 1, [&](const ForwardPath& step) {
      Rational v = cocycle_value(spec, model, step);
      if (v > spec.bound_m()) {
        report.violations.push_back({SubmultiplicativityViolation::Kind::bound, step, 1, 0, v, spec.bound_m()});
      }
    });
    for (int total = 1; total <= depth; ++total) {
      for_each_forward_path(model, x, total, [&](const ForwardPath& path) {
        ++report.paths_checked;
        const Rational whole = cocycle_value(spec, model, path);
        for (int n = 0; n <= total; ++n) {
          ++report.splits_checked;
          Rational rhs = cocycle_value(spec, model, path.slice(0, n)) *
                         cocycle_value(spec, model, path.slice(n, total - n));
          if (whole > rhs) {
            report.violations.push_back(
                {SubmultiplicativityViolation::Kind::split, path, n, total - n, whole, rhs});
          }
        }
      });
    }
  }
  return report;
}

CoveringModel product_model(const CoveringModel& model) {
  std::vector<Edge> edges;
  const int n = model.node_count();
  for (int fiber = 0; fiber < 2; ++fiber) {
    for (const auto& e : model.edges()) edges.push_back({e.from + fiber * n, e.to + fiber * n, e.weight});
  }
  return CoveringModel::create(2 * n, std::move(edges), model.surjectivity());
}

CocycleSpec rescale_embed(const CocycleSpec& spec, const CoveringModel& model, const Rational& c, int marked,
                          int check_depth) {
  if (sgn(c) <= 0) throw InputError("rescaling constant c must be positive");
  if (marked != 0 && marked != 1) throw InputError("marked fiber must be 0 or 1");
  for (NodeId x = 0; x < model.node_count(); ++x) {
    for (int n = 1; n <= check_depth; ++n) {
      Rational floor = pow(c, static_cast<unsigned long>(n));
      for_each_forward_path(model, x, n, [&](const ForwardPath& path) {
        Rational v = cocycle_value(spec, model, path);
        if (v < floor) {
          std::string nodes;
          for (NodeId u : path.nodes) nodes += (nodes.empty() ? "" : " -> ") + std::to_string(u);
          throw InputError("rescale precondition kappa_n >= c^n fails on path " + nodes + ": " + v.get_str() +
                           " < " + floor.get_str());
        }
      });
    }
  }
  RescaledRule rule{std::make_shared<const CocycleSpec>(spec), std::make_shared<const CoveringModel>(model), c,
                    marked, model.node_count(), model.edge_count()};
  Rational bound = 2 * spec.bound_m() / c;
  bound.canonicalize();
  return CocycleSpec(std::move(rule), std::max(Rational(1), bound));
}

}  // namespace subcocycle
