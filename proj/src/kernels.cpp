#include "subcocycle/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>

#include "subcocycle/errors.hpp"

namespace subcocycle::kernels {

namespace {

void check_weights(const CoveringModel& model, std::span<const Rational> weights) {
  if (static_cast<int>(weights.size()) != model.edge_count()) {
    throw InputError("weight vector does not match the model edge count");
  }
}

}  // namespace

std::vector<Rational> backward_step(const CoveringModel& model, std::span<const Rational> weights,
                                    std::span<const Rational> prev, Execution execution) {
  check_weights(model, weights);
  std::vector<Rational> next(static_cast<size_t>(model.node_count()));
  for_range(model.node_count(), execution, [&](int v) {
    bool first = true;
    Rational best, cand;
    for (EdgeId e : model.in_edges(v)) {
      const Edge& edge = model.edge(e);
      cand = prev[static_cast<size_t>(edge.from)] * weights[static_cast<size_t>(e)];
      if (first || cand > best) {
        best = cand;
        first = false;
      }
    }
    // Nodes without preimages (relaxed models) carry 0: no backward path.
    next[static_cast<size_t>(v)] = first ? Rational(0) : best;
  });
  return next;
}

std::vector<Rational> forward_step(const CoveringModel& model, std::span<const Rational> weights,
                                   std::span<const Rational> prev, Execution execution) {
  check_weights(model, weights);
  std::vector<Rational> next(static_cast<size_t>(model.node_count()));
  for_range(model.node_count(), execution, [&](int u) {
    bool first = true;
    Rational best, cand;
    for (EdgeId e : model.out_edges(u)) {
      cand = weights[static_cast<size_t>(e)] * prev[static_cast<size_t>(model.edge(e).to)];
      if (first || cand > best) {
        best = cand;
        first = false;
      }
    }
    next[static_cast<size_t>(u)] = best;
  });
  return next;
}

std::vector<Rational> backward_values(const CoveringModel& model, std::span<const Rational> weights, int n,
                                      Execution execution) {
  if (n < 0) throw InputError("path length must be >= 0");
  std::vector<Rational> values(static_cast<size_t>(model.node_count()), Rational(1));
  for (int k = 0; k < n; ++k) values = backward_step(model, weights, values, execution);
  return values;
}

Components strongly_connected_components(const CoveringModel& model) {
  const int n = model.node_count();
  std::vector<int> index(static_cast<size_t>(n), -1), low(static_cast<size_t>(n), 0);
  std::vector<bool> on_stack(static_cast<size_t>(n), false);
  std::vector<NodeId> stack;
  std::vector<std::vector<NodeId>> emitted;
  int counter = 0;

  struct Frame {
    NodeId node;
    size_t next_edge;
  };
  for (NodeId root = 0; root < n; ++root) {
    if (index[static_cast<size_t>(root)] != -1) continue;
    std::vector<Frame> call{{root, 0}};
    index[static_cast<size_t>(root)] = low[static_cast<size_t>(root)] = counter++;
    stack.push_back(root);
    on_stack[static_cast<size_t>(root)] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      auto out = model.out_edges(f.node);
      if (f.next_edge < out.size()) {
        NodeId w = model.edge(out[f.next_edge++]).to;
        if (index[static_cast<size_t>(w)] == -1) {
          index[static_cast<size_t>(w)] = low[static_cast<size_t>(w)] = counter++;
          stack.push_back(w);
          on_stack[static_cast<size_t>(w)] = true;
          call.push_back({w, 0});
        } else if (on_stack[static_cast<size_t>(w)]) {
          low[static_cast<size_t>(f.node)] = std::min(low[static_cast<size_t>(f.node)], index[static_cast<size_t>(w)]);
        }
        continue;
      }
      NodeId v = f.node;
      call.pop_back();
      if (!call.empty()) {
        NodeId parent = call.back().node;
        low[static_cast<size_t>(parent)] = std::min(low[static_cast<size_t>(parent)], low[static_cast<size_t>(v)]);
      }
      if (low[static_cast<size_t>(v)] == index[static_cast<size_t>(v)]) {
        std::vector<NodeId> comp;
        NodeId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[static_cast<size_t>(w)] = false;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        emitted.push_back(std::move(comp));
      }
    }
  }

  // Tarjan emits sinks first; reverse for topological order.
  Components out;
  out.component_of.assign(static_cast<size_t>(n), -1);
  out.members.assign(emitted.rbegin(), emitted.rend());
  for (size_t c = 0; c < out.members.size(); ++c) {
    for (NodeId v : out.members[c]) out.component_of[static_cast<size_t>(v)] = static_cast<int>(c);
  }
  out.cyclic.assign(out.members.size(), false);
  for (const auto& e : model.edges()) {
    int c = out.component_of[static_cast<size_t>(e.from)];
    if (c == out.component_of[static_cast<size_t>(e.to)]) out.cyclic[static_cast<size_t>(c)] = true;
  }
  return out;
}

AlgebraicGrowthRate cycle_mean(const CoveringModel& model, std::span<const Rational> weights,
                               std::span<const NodeId> cycle) {
  if (cycle.empty()) throw InputError("empty cycle");
  Rational product = 1;
  for (size_t i = 0; i < cycle.size(); ++i) {
    auto e = model.find_edge(cycle[i], cycle[(i + 1) % cycle.size()]);
    if (!e) {
      throw InputError("not a cycle: no edge " + std::to_string(cycle[i]) + " -> " +
                       std::to_string(cycle[(i + 1) % cycle.size()]));
    }
    product *= weights[static_cast<size_t>(*e)];
  }
  return {product, static_cast<int>(cycle.size())};
}

bool cycle_less(std::span<const NodeId> a, std::span<const NodeId> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

namespace {

// Local view of one component.
struct ComponentGraph {
  std::vector<NodeId> nodes;                       // sorted global ids
  std::vector<std::vector<std::pair<int, EdgeId>>> out;  // local target, edge id; sorted by target
  std::vector<std::vector<std::pair<int, EdgeId>>> in;

  int local(NodeId v) const {
    return static_cast<int>(std::lower_bound(nodes.begin(), nodes.end(), v) - nodes.begin());
  }
};

ComponentGraph component_graph(const CoveringModel& model, const Components& comps, int c) {
  ComponentGraph g;
  g.nodes = comps.members[static_cast<size_t>(c)];
  g.out.resize(g.nodes.size());
  g.in.resize(g.nodes.size());
  for (size_t i = 0; i < g.nodes.size(); ++i) {
    for (EdgeId e : model.out_edges(g.nodes[i])) {
      NodeId to = model.edge(e).to;
      if (comps.component_of[static_cast<size_t>(to)] != c) continue;
      int j = g.local(to);
      g.out[i].emplace_back(j, e);
      g.in[static_cast<size_t>(j)].emplace_back(static_cast<int>(i), e);
    }
  }
  return g;
}

AlgebraicGrowthRate karp_value(const ComponentGraph& g, std::span<const Rational> weights) {
  const size_t s = g.nodes.size();
  std::vector<std::vector<std::optional<Rational>>> d(s + 1, std::vector<std::optional<Rational>>(s));
  d[0][0] = Rational(1);
  for (size_t k = 1; k <= s; ++k) {
    for (size_t v = 0; v < s; ++v) {
      std::optional<Rational> best;
      for (auto [u, e] : g.in[v]) {
        const auto& prev = d[k - 1][static_cast<size_t>(u)];
        if (!prev) continue;
        Rational cand = *prev * weights[static_cast<size_t>(e)];
        if (!best || cand > *best) best = std::move(cand);
      }
      d[k][v] = std::move(best);
    }
  }
  std::optional<AlgebraicGrowthRate> lambda;
  for (size_t v = 0; v < s; ++v) {
    if (!d[s][v]) continue;
    std::optional<AlgebraicGrowthRate> worst;
    for (size_t k = 0; k < s; ++k) {
      if (!d[k][v]) continue;
      Rational ratio = *d[s][v] / *d[k][v];
      AlgebraicGrowthRate cand(ratio, static_cast<int>(s - k));
      if (!worst || cand < *worst) worst = cand;
    }
    if (worst && (!lambda || *worst > *lambda)) lambda = worst;
  }
  if (!lambda) throw NumericError("Karp recurrence found no closed walk in a cyclic component");
  return *lambda;
}

// Depth-first search in lexicographic order for the smallest cycle whose exact
// mean equals `target`, using only edges accepted by `usable`.
std::optional<std::vector<NodeId>> smallest_cycle_with_mean(const ComponentGraph& g,
                                                            std::span<const Rational> weights,
                                                            const AlgebraicGrowthRate& target,
                                                            const std::function<bool(int, EdgeId)>& usable) {
  const int s = static_cast<int>(g.nodes.size());
  std::vector<int> path;
  std::vector<EdgeId> path_edges;
  std::vector<bool> on_path(static_cast<size_t>(s), false);
  std::optional<std::vector<NodeId>> found;

  std::function<bool(int, int)> dfs = [&](int start, int u) -> bool {
    for (auto [v, e] : g.out[static_cast<size_t>(u)]) {
      if (!usable(u, e)) continue;
      if (v == start) {
        Rational product = weights[static_cast<size_t>(e)];
        for (EdgeId pe : path_edges) product *= weights[static_cast<size_t>(pe)];
        if (AlgebraicGrowthRate(product, static_cast<int>(path.size())) == target) {
          std::vector<NodeId> cycle;
          for (int p : path) cycle.push_back(g.nodes[static_cast<size_t>(p)]);
          found = std::move(cycle);
          return true;
        }
        continue;
      }
      if (v < start || on_path[static_cast<size_t>(v)]) continue;
      on_path[static_cast<size_t>(v)] = true;
      path.push_back(v);
      path_edges.push_back(e);
      if (dfs(start, v)) return true;
      path.pop_back();
      path_edges.pop_back();
      on_path[static_cast<size_t>(v)] = false;
    }
    return false;
  };

  for (int start = 0; start < s; ++start) {
    path.assign(1, start);
    path_edges.clear();
    std::fill(on_path.begin(), on_path.end(), false);
    on_path[static_cast<size_t>(start)] = true;
    if (dfs(start, start)) return found;
  }
  return std::nullopt;
}

CriticalCycle critical_cycle(const CoveringModel& model, std::span<const Rational> weights, const Components& comps,
                             int c) {
  ComponentGraph g = component_graph(model, comps, c);
  AlgebraicGrowthRate lambda = karp_value(g, weights);

  // Longest-path potentials on log-weights shifted by log λ; an edge lies on a
  // maximum-mean cycle only if it is tight for these potentials.
  const size_t s = g.nodes.size();
  const double log_lambda = lambda.log();
  std::vector<double> phi(s, 0.0);
  double scale = 1.0;
  for (size_t u = 0; u < s; ++u) {
    for (auto [v, e] : g.out[u]) scale = std::max(scale, std::fabs(log_abs(weights[static_cast<size_t>(e)]) - log_lambda));
  }
  for (size_t iter = 0; iter < s + 1; ++iter) {
    for (size_t u = 0; u < s; ++u) {
      for (auto [v, e] : g.out[u]) {
        double cand = phi[u] + log_abs(weights[static_cast<size_t>(e)]) - log_lambda;
        if (cand > phi[static_cast<size_t>(v)]) phi[static_cast<size_t>(v)] = cand;
      }
    }
  }
  const double tol = 1e-9 * scale * static_cast<double>(s + 1);
  auto tight = [&](int u, EdgeId e) {
    int v = g.local(model.edge(e).to);
    double slack = phi[static_cast<size_t>(u)] + log_abs(weights[static_cast<size_t>(e)]) - log_lambda -
                   phi[static_cast<size_t>(v)];
    return slack >= -tol;
  };
  auto cycle = smallest_cycle_with_mean(g, weights, lambda, tight);
  if (!cycle) cycle = smallest_cycle_with_mean(g, weights, lambda, [](int, EdgeId) { return true; });
  if (!cycle) throw NumericError("no simple cycle attains the maximum cycle mean");
  AlgebraicGrowthRate mean = cycle_mean(model, weights, *cycle);
  return {std::move(*cycle), mean};
}

}  // namespace

std::vector<std::optional<CriticalCycle>> max_cycle_means(const CoveringModel& model,
                                                          std::span<const Rational> weights,
                                                          const Components& components, Execution execution) {
  check_weights(model, weights);
  const int count = static_cast<int>(components.members.size());
  std::vector<std::optional<CriticalCycle>> out(static_cast<size_t>(count));
  for_range(count, execution, [&](int c) {
    if (components.cyclic[static_cast<size_t>(c)]) {
      out[static_cast<size_t>(c)] = critical_cycle(model, weights, components, c);
    }
  });
  return out;
}

}  // namespace subcocycle::kernels
