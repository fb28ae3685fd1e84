#include "subcocycle/finite.hpp"

#include <algorithm>
#include <string>

namespace subcocycle::finite {

WholeSpaceError::WholeSpaceError(const Rational& delta, AlgebraicGrowthRate delta_star)
    : InputError("delta " + delta.get_str() + " <= delta* = " + delta_star.display_string() +
                 "; the level set would be the whole space"),
      delta_star_(std::move(delta_star)) {}

namespace {

std::vector<Rational> require_weights(const CoveringModel& model, const CocycleSpec& spec) {
  auto w = spec.flat_weights(model);
  if (!w) {
    throw UnsupportedError("operation requires a multiplicative cocycle; got " + spec.kind() +
                           " (its limit need not exist)");
  }
  return std::move(*w);
}

bool better(const CycleCertificate& a, const CycleCertificate& b) {
  auto order = a.mean <=> b.mean;
  if (order != 0) return order > 0;
  return kernels::cycle_less(a.cycle, b.cycle);
}

void keep_better(std::optional<CycleCertificate>& slot, const std::optional<CycleCertificate>& cand) {
  if (cand && (!slot || better(*cand, *slot))) slot = cand;
}

// Nodes at backward distance exactly n from x.
std::vector<NodeId> backward_fiber(const CoveringModel& model, NodeId x, int n) {
  std::vector<NodeId> set{x};
  for (int k = 0; k < n; ++k) set = model.preimage(set);
  return set;
}

}  // namespace

std::vector<Rational> kappa_backward_all(const CoveringModel& model, const CocycleSpec& spec, int n,
                                         Execution execution) {
  if (n < 0) throw InputError("n must be >= 0");
  if (n == 0) return std::vector<Rational>(static_cast<size_t>(model.node_count()), Rational(1));
  if (auto w = spec.flat_weights(model)) return kernels::backward_values(model, *w, n, execution);

  std::vector<Rational> out(static_cast<size_t>(model.node_count()), Rational(0));
  if (const auto* rule = std::get_if<ExplicitRule>(&spec.variant())) {
    for (NodeId x = 0; x < model.node_count(); ++x) {
      for (NodeId y : backward_fiber(model, x, n)) {
        Rational v = rule->value(y, n);
        if (v > out[static_cast<size_t>(x)]) out[static_cast<size_t>(x)] = v;
      }
    }
    return out;
  }
  const auto& r = std::get<RescaledRule>(spec.variant());
  std::vector<Rational> inner = kappa_backward_all(*r.base_model, *r.inner, n, execution);
  const Rational factor = pow(Rational(2) / r.c, static_cast<unsigned long>(n));
  for (NodeId x = 0; x < model.node_count(); ++x) {
    const Rational& base = inner[static_cast<size_t>(x % r.base_node_count)];
    if (sgn(base) == 0) continue;
    out[static_cast<size_t>(x)] = x / r.base_node_count == r.marked ? Rational(factor * base) : Rational(1);
  }
  return out;
}

Rational kappa_backward(const CoveringModel& model, const CocycleSpec& spec, NodeId x, int n, Execution execution) {
  model.check_node(x);
  Rational v = kappa_backward_all(model, spec, n, execution)[static_cast<size_t>(x)];
  if (sgn(v) == 0) {
    throw UnsupportedError("node " + std::to_string(x) + " has no backward path of length " + std::to_string(n));
  }
  return v;
}

CycleAnalysis CycleAnalysis::build(const CoveringModel& model, const CocycleSpec& spec, Execution execution) {
  CycleAnalysis a;
  a.weights_ = require_weights(model, spec);
  a.components_ = kernels::strongly_connected_components(model);
  a.critical_ = kernels::max_cycle_means(model, a.weights_, a.components_, execution);

  const size_t count = a.components_.members.size();
  std::vector<std::optional<CycleCertificate>> own(count), up(count), down(count);
  for (size_t c = 0; c < count; ++c) {
    if (a.critical_[c]) own[c] = CycleCertificate{a.critical_[c]->nodes, a.critical_[c]->mean};
  }
  // Condensation edges, grouped by source component.
  std::vector<std::vector<int>> succ(count);
  for (const auto& e : model.edges()) {
    int cu = a.components_.component_of[static_cast<size_t>(e.from)];
    int cv = a.components_.component_of[static_cast<size_t>(e.to)];
    if (cu != cv) succ[static_cast<size_t>(cu)].push_back(cv);
  }
  for (size_t c = 0; c < count; ++c) keep_better(up[c], own[c]);
  for (size_t c = 0; c < count; ++c) {
    for (int d : succ[c]) keep_better(up[static_cast<size_t>(d)], up[c]);
  }
  for (size_t c = count; c-- > 0;) {
    keep_better(down[c], own[c]);
    for (int d : succ[c]) keep_better(down[c], down[static_cast<size_t>(d)]);
  }

  a.upstream_.resize(static_cast<size_t>(model.node_count()));
  a.downstream_.resize(static_cast<size_t>(model.node_count()));
  for (NodeId v = 0; v < model.node_count(); ++v) {
    auto c = static_cast<size_t>(a.components_.component_of[static_cast<size_t>(v)]);
    a.upstream_[static_cast<size_t>(v)] = up[c];
    a.downstream_[static_cast<size_t>(v)] = down[c];
  }
  for (const auto& u : a.upstream_) {
    if (!u) continue;
    if (!a.delta_star_ || u->mean < a.delta_star_->mean ||
        (u->mean == a.delta_star_->mean && kernels::cycle_less(u->cycle, a.delta_star_->cycle))) {
      a.delta_star_ = u;
    }
  }
  return a;
}

AlgebraicGrowthRate kappa_minus(const CoveringModel& model, const CocycleSpec& spec, NodeId x) {
  model.check_node(x);
  CycleAnalysis analysis = CycleAnalysis::build(model, spec);
  const auto& up = analysis.upstream(x);
  if (!up) throw UnsupportedError("node " + std::to_string(x) + " has no cycle upstream; kappa_minus is undefined");
  return up->mean;
}

LevelSetCertificate level_set(const CoveringModel& model, const CocycleSpec& spec, const Rational& delta) {
  return level_set(CycleAnalysis::build(model, spec), model, delta);
}

LevelSetCertificate level_set(const CycleAnalysis& analysis, const CoveringModel& model, const Rational& delta) {
  if (sgn(delta) <= 0) throw InputError("delta must be positive");
  if (!analysis.delta_star()) throw UnsupportedError("no node has a cycle upstream");
  const AlgebraicGrowthRate& delta_star = analysis.delta_star()->mean;
  if (delta_star.at_least(delta)) throw WholeSpaceError(delta, delta_star);

  LevelSetCertificate cert{delta, {}, {}, {}, delta_star};
  std::vector<bool> member(static_cast<size_t>(model.node_count()), false);
  for (NodeId x = 0; x < model.node_count(); ++x) {
    const auto& up = analysis.upstream(x);
    if (up && up->mean.at_least(delta)) {
      member[static_cast<size_t>(x)] = true;
      cert.members.push_back(x);
    }
  }
  for (NodeId x : cert.members) {
    std::optional<EdgeId> in, out;
    for (EdgeId e : model.in_edges(x)) {
      if (member[static_cast<size_t>(model.edge(e).from)]) { in = e; break; }
    }
    for (EdgeId e : model.out_edges(x)) {
      if (member[static_cast<size_t>(model.edge(e).to)]) { out = e; break; }
    }
    if (!in || !out) throw NumericError("level set member " + std::to_string(x) + " lacks an invariance witness");
    cert.invariance.push_back({x, *in, *out});

    const CycleCertificate& source = *analysis.upstream(x);
    auto path = model.shortest_path(source.cycle, x);
    if (!path) throw NumericError("no orbit path into level set member " + std::to_string(x));
    cert.orbit.push_back({x, source, std::move(*path)});
  }
  return cert;
}

ForwardGrowth forward_max_growth(const CoveringModel& model, const CocycleSpec& spec, NodeId x) {
  model.check_node(x);
  CycleAnalysis analysis = CycleAnalysis::build(model, spec);
  const auto& down = analysis.downstream(x);
  if (!down) throw NumericError("no cycle reachable from node " + std::to_string(x));
  std::optional<std::vector<NodeId>> best;
  for (NodeId target : down->cycle) {
    auto path = model.shortest_path(std::vector<NodeId>{x}, target);
    if (path && (!best || path->size() < best->size())) best = std::move(path);
  }
  return {down->mean, *down, std::move(*best)};
}

OrbitShape orbit_shape(const CoveringModel& model, NodeId x) {
  model.check_node(x);
  if (!model.is_deterministic()) throw UnsupportedError("operation requires a deterministic model (out-degree 1)");
  std::vector<int> first_seen(static_cast<size_t>(model.node_count()), -1);
  std::vector<NodeId> orbit;
  NodeId v = x;
  while (first_seen[static_cast<size_t>(v)] == -1) {
    first_seen[static_cast<size_t>(v)] = static_cast<int>(orbit.size());
    orbit.push_back(v);
    v = model.successor(v);
  }
  OrbitShape shape;
  shape.preperiod = first_seen[static_cast<size_t>(v)];
  shape.cycle.assign(orbit.begin() + shape.preperiod, orbit.end());
  return shape;
}

AlgebraicGrowthRate kappa_plus(const CoveringModel& model, const CocycleSpec& spec, NodeId x) {
  OrbitShape shape = orbit_shape(model, x);
  std::vector<Rational> w = require_weights(model, spec);
  return kernels::cycle_mean(model, w, shape.cycle);
}

TailLimit tail_limit(const CoveringModel& model, const CocycleSpec& spec, NodeId x) {
  OrbitShape shape = orbit_shape(model, x);
  std::vector<Rational> w = require_weights(model, spec);
  TailLimit out{kernels::cycle_mean(model, w, shape.cycle), shape.preperiod,
                static_cast<int>(shape.cycle.size()), {}};
  NodeId v = x;
  for (int l = 0; l <= shape.preperiod + out.cycle_length; ++l) {
    AlgebraicGrowthRate k = kernels::cycle_mean(model, w, orbit_shape(model, v).cycle);
    if (k != out.kappa) throw NumericError("tail limit depends on the offset at l = " + std::to_string(l));
    out.per_offset.push_back(k);
    v = model.successor(v);
  }
  return out;
}

std::vector<NodeId> heavy_backward_set(const CoveringModel& model, const CocycleSpec& spec, const Rational& delta,
                                       int n, Execution execution) {
  std::vector<Rational> values = kappa_backward_all(model, spec, n, execution);
  const Rational threshold = pow(delta, static_cast<unsigned long>(n));
  std::vector<NodeId> out;
  for (NodeId x = 0; x < model.node_count(); ++x) {
    if (sgn(values[static_cast<size_t>(x)]) > 0 && values[static_cast<size_t>(x)] >= threshold) out.push_back(x);
  }
  return out;
}

SigmaTrace sigma_construct(const CoveringModel& model, const CocycleSpec& spec, const Rational& delta,
                           const SigmaOptions& options) {
  CycleAnalysis analysis = CycleAnalysis::build(model, spec, options.execution);
  LevelSetCertificate level = level_set(analysis, model, delta);

  SigmaTrace trace;
  trace.delta = delta;
  trace.sigma = level.members;
  trace.bound_m = spec.bound_m();
  trace.delta_star = level.delta_star;

  std::vector<bool> in_sigma(static_cast<size_t>(model.node_count()), false);
  for (NodeId v : trace.sigma) in_sigma[static_cast<size_t>(v)] = true;
  const int outside = model.node_count() - static_cast<int>(trace.sigma.size());
  for (size_t c = 0; c < analysis.component_cycles().size(); ++c) {
    const auto& cc = analysis.component_cycles()[c];
    if (!cc || in_sigma[static_cast<size_t>(cc->nodes.front())]) continue;
    if (!trace.delta0 || cc->mean > *trace.delta0) trace.delta0 = cc->mean;
  }

  // Outside Σ every backward path stays outside Σ. A walk there splits into
  // simple cycles (mean ≤ δ0) and a simple path of < k' edges, so its weight
  // is at most max(1, M/δ0)^(k'-1) · δ0^n. Raising to the L-th power keeps
  // everything rational: max(1, M^L/P)^(k'-1) · P^n < δ^(nL).
  trace.big_n = 1;
  if (outside > 0) {
    if (!trace.delta0) throw NumericError("complement of sigma has no cycle");
    const Rational& p = trace.delta0->product();
    const auto l = static_cast<unsigned long>(trace.delta0->length());
    Rational c = pow(trace.bound_m, l) / p;
    if (c < 1) c = 1;
    const Rational constant = pow(c, static_cast<unsigned long>(outside - 1));
    const Rational delta_l = pow(delta, l);
    auto holds = [&](int n) {
      return constant * pow(p, static_cast<unsigned long>(n)) < pow(delta_l, static_cast<unsigned long>(n));
    };
    int hi = 1;
    while (!holds(hi)) {
      if (hi >= options.max_n) {
        throw NumericError("sigma containment bound exceeds max_n = " + std::to_string(options.max_n));
      }
      hi = std::min(2 * hi, options.max_n);
    }
    int lo = hi / 2;  // holds(lo) is false or lo == 0
    while (hi - lo > 1) {
      int mid = (lo + hi) / 2;
      (holds(mid) ? hi : lo) = mid;
    }
    trace.big_n = hi;
  }

  // Exact DP up to N: n1 is the first length after the last violation.
  std::vector<Rational> weights = analysis.weights();
  std::vector<Rational> values(static_cast<size_t>(model.node_count()), Rational(1));
  Rational threshold = 1;
  int last_violation = 0;
  std::vector<std::vector<NodeId>> escapes(static_cast<size_t>(trace.big_n) + 1);
  for (int n = 1; n <= trace.big_n; ++n) {
    values = kernels::backward_step(model, weights, values, options.execution);
    threshold *= delta;
    for (NodeId x = 0; x < model.node_count(); ++x) {
      if (!in_sigma[static_cast<size_t>(x)] && sgn(values[static_cast<size_t>(x)]) > 0 &&
          values[static_cast<size_t>(x)] >= threshold) {
        escapes[static_cast<size_t>(n)].push_back(x);
      }
    }
    if (!escapes[static_cast<size_t>(n)].empty()) last_violation = n;
  }
  if (last_violation == trace.big_n && trace.big_n > 0 && !escapes[static_cast<size_t>(trace.big_n)].empty() &&
      outside > 0) {
    throw NumericError("heavy backward set still leaves sigma at the certified bound");
  }
  trace.n1 = last_violation + 1;
  if (trace.n1 > trace.big_n) trace.big_n = trace.n1;
  trace.residual = trace.n1 < static_cast<int>(escapes.size()) ? escapes[static_cast<size_t>(trace.n1)]
                                                               : std::vector<NodeId>{};
  return trace;
}

PeriodicGrowth periodic_component_growth(const CoveringModel& model, const CocycleSpec& spec,
                                         const std::vector<NodeId>& cycle) {
  if (cycle.empty()) throw InputError("cycle must be non-empty");
  std::vector<NodeId> sorted = cycle;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InputError("cycle repeats a node");
  }
  for (NodeId v : cycle) model.check_node(v);
  std::vector<Rational> w = require_weights(model, spec);
  PeriodicGrowth out{kernels::cycle_mean(model, w, cycle)};

  out.constant_along_images = true;
  std::vector<NodeId> rotated = cycle;
  for (size_t r = 1; r < cycle.size(); ++r) {
    std::rotate(rotated.begin(), rotated.begin() + 1, rotated.end());
    if (kernels::cycle_mean(model, w, rotated) != out.rate) out.constant_along_images = false;
  }
  CycleAnalysis analysis = CycleAnalysis::build(model, spec);
  out.kappa_minus_dominates = std::all_of(cycle.begin(), cycle.end(), [&](NodeId y) {
    const auto& up = analysis.upstream(y);
    return up && up->mean >= out.rate;
  });
  return out;
}

Rational euler_approximant() { return Rational(2721, 1001); }

namespace {

OscillatingExample two_point(std::string name, std::function<long(int)> lambda) {
  CoveringModel model = CoveringModel::create(2, {{0, 0, 1}, {1, 0, 1}}, Surjectivity::relaxed);
  const Rational q = euler_approximant();
  auto rule = [q, lambda](NodeId x, int n) -> Rational {
    if (x == 0) return pow(q, static_cast<unsigned long>(n));
    if (x == 1) return pow(q, static_cast<unsigned long>(lambda(n)));
    return 1;
  };
  return {std::move(model), CocycleSpec::explicit_rule(std::move(name), rule, q), std::move(lambda)};
}

}  // namespace

OscillatingExample example_oscillating(std::vector<int> schedule) {
  if (schedule.size() < 4) throw InputError("block schedule needs at least 4 entries");
  if (schedule.front() <= 0) throw InputError("block schedule entries must be positive");
  for (size_t i = 1; i < schedule.size(); ++i) {
    if (schedule[i] <= schedule[i - 1]) throw InputError("block schedule must be strictly increasing");
  }
  // λ(n+1) = λ(n) + 1 inside odd blocks [s_{i-1}, s_i) (s_0 = 0), constant
  // inside even blocks and after the last boundary.
  std::vector<long> table(static_cast<size_t>(schedule.back()) + 1, 0);
  size_t block = 0;
  for (int n = 0; n < schedule.back(); ++n) {
    while (block < schedule.size() && n >= schedule[block]) ++block;
    table[static_cast<size_t>(n) + 1] = table[static_cast<size_t>(n)] + (block % 2 == 0 ? 1 : 0);
  }
  auto lambda = [table = std::move(table)](int n) -> long {
    if (n < 0) return 0;
    return table[std::min(static_cast<size_t>(n), table.size() - 1)];
  };
  return two_point("oscillating", std::move(lambda));
}

OscillatingExample example_two_point(LambdaProfile profile) {
  if (profile == LambdaProfile::zero) return two_point("oscillating-flat", [](int) -> long { return 0; });
  return two_point("oscillating-linear", [](int n) -> long { return n; });
}

AlgebraicGrowthRate explicit_rate(const CocycleSpec& spec, NodeId x, int n) {
  const auto* rule = std::get_if<ExplicitRule>(&spec.variant());
  if (!rule) throw UnsupportedError("explicit_rate requires an explicit cocycle");
  if (n < 1) throw InputError("n must be >= 1");
  return {rule->value(x, n), n};
}

}  // namespace subcocycle::finite
