#pragma once

// Random model generators and brute-force oracles shared by the test
// binaries. The oracles deliberately avoid the library's algorithms: they
// enumerate paths and simple cycles directly and compare rates by raising
// both sides to integer powers.

#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <vector>

#include "subcocycle/model.hpp"
#include "subcocycle/rational.hpp"

namespace testing_support {

using subcocycle::CoveringModel;
using subcocycle::Edge;
using subcocycle::NodeId;
using subcocycle::Rational;
using subcocycle::Surjectivity;

// Surjective covering model with at most max_nodes nodes and max_edges edges,
// integer weights in 1..max_weight.
inline CoveringModel random_covering(std::mt19937_64& rng, int max_nodes = 8, int max_edges = 16,
                                     int max_weight = 5) {
  std::uniform_int_distribution<int> nodes_dist(1, max_nodes);
  const int n = nodes_dist(rng);
  std::uniform_int_distribution<int> node(0, n - 1);
  std::uniform_int_distribution<int> weight(1, max_weight);
  std::set<std::pair<int, int>> edges;
  for (int v = 0; v < n; ++v) edges.emplace(v, node(rng));
  for (int v = 0; v < n; ++v) {
    bool has_in = std::any_of(edges.begin(), edges.end(), [&](const auto& e) { return e.second == v; });
    if (!has_in) edges.emplace(node(rng), v);
  }
  std::uniform_int_distribution<int> extra_dist(0, std::max(0, max_edges - static_cast<int>(edges.size())));
  int extra = extra_dist(rng);
  for (int attempt = 0; attempt < 4 * extra && static_cast<int>(edges.size()) < max_edges; ++attempt) {
    edges.emplace(node(rng), node(rng));
    if (static_cast<int>(edges.size()) >= max_edges) break;
  }
  std::vector<Edge> list;
  for (const auto& [from, to] : edges) list.push_back({from, to, Rational(weight(rng))});
  std::shuffle(list.begin(), list.end(), rng);
  return CoveringModel::create(n, std::move(list));
}

// Functional graph: every node has exactly one successor. Usually not surjective.
inline CoveringModel random_deterministic(std::mt19937_64& rng, int max_nodes = 8, int max_weight = 5) {
  std::uniform_int_distribution<int> nodes_dist(1, max_nodes);
  const int n = nodes_dist(rng);
  std::uniform_int_distribution<int> node(0, n - 1);
  std::uniform_int_distribution<int> weight(1, max_weight);
  std::vector<Edge> list;
  for (int v = 0; v < n; ++v) list.push_back({v, node(rng), Rational(weight(rng))});
  return CoveringModel::create(n, std::move(list), Surjectivity::relaxed);
}

// rate (p1, l1) compared with (p2, l2): sign of p1^l2 - p2^l1.
inline int compare_rates(const Rational& p1, int l1, const Rational& p2, int l2) {
  Rational a = 1, b = 1;
  for (int i = 0; i < l2; ++i) a *= p1;
  for (int i = 0; i < l1; ++i) b *= p2;
  return a < b ? -1 : (a > b ? 1 : 0);
}

// Maximum weight over all backward walks of length n ending at x (0 when none).
inline Rational brute_backward(const CoveringModel& m, NodeId x, int n) {
  if (n == 0) return 1;
  Rational best = 0;
  for (const auto& e : m.edges()) {
    if (e.to != x) continue;
    Rational sub = brute_backward(m, e.from, n - 1);
    if (sgn(sub) > 0 && sub * e.weight > best) best = sub * e.weight;
  }
  return best;
}

struct SimpleCycle {
  std::vector<NodeId> nodes;  // starts at its smallest node
  Rational product;
};

// Every simple cycle, each listed once, starting at its smallest node.
inline std::vector<SimpleCycle> all_simple_cycles(const CoveringModel& m) {
  std::vector<SimpleCycle> out;
  const int n = m.node_count();
  for (NodeId s = 0; s < n; ++s) {
    std::vector<NodeId> stack{s};
    std::vector<bool> used(static_cast<size_t>(n), false);
    used[static_cast<size_t>(s)] = true;
    std::function<void(Rational)> dfs = [&](Rational product) {
      NodeId v = stack.back();
      for (const auto& e : m.edges()) {
        if (e.from != v) continue;
        if (e.to == s) {
          out.push_back({stack, product * e.weight});
        } else if (e.to > s && !used[static_cast<size_t>(e.to)]) {
          used[static_cast<size_t>(e.to)] = true;
          stack.push_back(e.to);
          dfs(product * e.weight);
          stack.pop_back();
          used[static_cast<size_t>(e.to)] = false;
        }
      }
    };
    dfs(Rational(1));
  }
  return out;
}

inline std::vector<std::vector<bool>> reach_matrix(const CoveringModel& m) {
  const auto n = static_cast<size_t>(m.node_count());
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (size_t i = 0; i < n; ++i) r[i][i] = true;
  for (const auto& e : m.edges()) r[static_cast<size_t>(e.from)][static_cast<size_t>(e.to)] = true;
  for (size_t k = 0; k < n; ++k)
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j)
        if (r[i][k] && r[k][j]) r[i][j] = true;
  return r;
}

struct OracleRate {
  bool defined = false;
  Rational product = 0;
  int length = 1;
};

// Heaviest simple cycle mean among cycles that reach x (upstream) or that x
// reaches (downstream).
inline OracleRate oracle_cycle_rate(const CoveringModel& m, NodeId x, bool upstream) {
  auto reach = reach_matrix(m);
  OracleRate best;
  for (const auto& c : all_simple_cycles(m)) {
    NodeId v = c.nodes.front();
    bool related = upstream ? reach[static_cast<size_t>(v)][static_cast<size_t>(x)]
                            : reach[static_cast<size_t>(x)][static_cast<size_t>(v)];
    if (!related) continue;
    int len = static_cast<int>(c.nodes.size());
    if (!best.defined || compare_rates(c.product, len, best.product, best.length) > 0) {
      best = {true, c.product, len};
    }
  }
  return best;
}

}  // namespace testing_support
