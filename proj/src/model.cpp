#include "subcocycle/model.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <string>
#include <utility>

#include "subcocycle/errors.hpp"

namespace subcocycle {

CoveringModel CoveringModel::create(int node_count, std::vector<Edge> edges, Surjectivity surjectivity) {
  if (node_count < 1) throw InputError("model needs at least one node");
  CoveringModel m;
  m.node_count_ = node_count;
  m.surjectivity_ = surjectivity;
  m.out_.resize(static_cast<size_t>(node_count));
  m.in_.resize(static_cast<size_t>(node_count));
  std::set<std::pair<NodeId, NodeId>> seen;
  for (size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    if (e.from < 0 || e.from >= node_count || e.to < 0 || e.to >= node_count) {
      throw InputError("edge " + std::to_string(i) + " (" + std::to_string(e.from) + " -> " +
                       std::to_string(e.to) + ") references a node outside 0.." + std::to_string(node_count - 1));
    }
    if (sgn(e.weight) <= 0) {
      throw InputError("edge " + std::to_string(e.from) + " -> " + std::to_string(e.to) +
                       " has non-positive weight " + e.weight.get_str());
    }
    if (!seen.emplace(e.from, e.to).second) {
      throw InputError("duplicate edge " + std::to_string(e.from) + " -> " + std::to_string(e.to));
    }
    m.out_[static_cast<size_t>(e.from)].push_back(static_cast<EdgeId>(i));
    m.in_[static_cast<size_t>(e.to)].push_back(static_cast<EdgeId>(i));
  }
  m.edges_ = std::move(edges);
  for (auto& list : m.out_) {
    std::sort(list.begin(), list.end(), [&](EdgeId a, EdgeId b) { return m.edges_[a].to < m.edges_[b].to; });
  }
  for (auto& list : m.in_) {
    std::sort(list.begin(), list.end(), [&](EdgeId a, EdgeId b) { return m.edges_[a].from < m.edges_[b].from; });
  }
  m.surjective_ = true;
  m.deterministic_ = true;
  for (NodeId v = 0; v < node_count; ++v) {
    if (m.out_[static_cast<size_t>(v)].empty()) {
      throw InputError("node " + std::to_string(v) + " has out-degree 0");
    }
    if (m.in_[static_cast<size_t>(v)].empty()) {
      m.surjective_ = false;
      if (surjectivity == Surjectivity::required) {
        throw InputError("node " + std::to_string(v) + " has in-degree 0");
      }
    }
    if (m.out_[static_cast<size_t>(v)].size() != 1) m.deterministic_ = false;
  }
  return m;
}

void CoveringModel::check_node(NodeId node) const {
  if (node < 0 || node >= node_count_) {
    throw InputError("node " + std::to_string(node) + " is outside 0.." + std::to_string(node_count_ - 1));
  }
}

std::optional<EdgeId> CoveringModel::find_edge(NodeId from, NodeId to) const {
  check_node(from);
  for (EdgeId e : out_edges(from)) {
    if (edges_[static_cast<size_t>(e)].to == to) return e;
  }
  return std::nullopt;
}

NodeId CoveringModel::successor(NodeId node) const {
  check_node(node);
  if (!deterministic_) throw UnsupportedError("successor requires a deterministic model");
  return edges_[static_cast<size_t>(out_edges(node).front())].to;
}

std::vector<NodeId> CoveringModel::image(std::span<const NodeId> nodes) const {
  std::vector<bool> mark(static_cast<size_t>(node_count_), false);
  for (NodeId v : nodes) {
    check_node(v);
    for (EdgeId e : out_edges(v)) mark[static_cast<size_t>(edges_[static_cast<size_t>(e)].to)] = true;
  }
  std::vector<NodeId> out;
  for (NodeId v = 0; v < node_count_; ++v) {
    if (mark[static_cast<size_t>(v)]) out.push_back(v);
  }
  return out;
}

std::vector<NodeId> CoveringModel::preimage(std::span<const NodeId> nodes) const {
  std::vector<bool> mark(static_cast<size_t>(node_count_), false);
  for (NodeId v : nodes) {
    check_node(v);
    for (EdgeId e : in_edges(v)) mark[static_cast<size_t>(edges_[static_cast<size_t>(e)].from)] = true;
  }
  std::vector<NodeId> out;
  for (NodeId v = 0; v < node_count_; ++v) {
    if (mark[static_cast<size_t>(v)]) out.push_back(v);
  }
  return out;
}

std::vector<bool> CoveringModel::reachable_from(NodeId node) const {
  check_node(node);
  std::vector<bool> seen(static_cast<size_t>(node_count_), false);
  std::vector<NodeId> stack{node};
  seen[static_cast<size_t>(node)] = true;
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    for (EdgeId e : out_edges(u)) {
      NodeId v = edges_[static_cast<size_t>(e)].to;
      if (!seen[static_cast<size_t>(v)]) {
        seen[static_cast<size_t>(v)] = true;
        stack.push_back(v);
      }
    }
  }
  return seen;
}

std::vector<bool> CoveringModel::reaching(NodeId node) const {
  check_node(node);
  std::vector<bool> seen(static_cast<size_t>(node_count_), false);
  std::vector<NodeId> stack{node};
  seen[static_cast<size_t>(node)] = true;
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    for (EdgeId e : in_edges(v)) {
      NodeId u = edges_[static_cast<size_t>(e)].from;
      if (!seen[static_cast<size_t>(u)]) {
        seen[static_cast<size_t>(u)] = true;
        stack.push_back(u);
      }
    }
  }
  return seen;
}

std::optional<std::vector<NodeId>> CoveringModel::shortest_path(std::span<const NodeId> sources,
                                                                NodeId target) const {
  check_node(target);
  std::vector<NodeId> parent(static_cast<size_t>(node_count_), -2);
  std::deque<NodeId> queue;
  std::vector<NodeId> starts(sources.begin(), sources.end());
  std::sort(starts.begin(), starts.end());
  for (NodeId s : starts) {
    check_node(s);
    if (parent[static_cast<size_t>(s)] == -2) {
      parent[static_cast<size_t>(s)] = -1;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    NodeId u = queue.front();
    queue.pop_front();
    if (u == target) {
      std::vector<NodeId> path;
      for (NodeId v = u; v != -1; v = parent[static_cast<size_t>(v)]) path.push_back(v);
      std::reverse(path.begin(), path.end());
      return path;
    }
    for (EdgeId e : out_edges(u)) {
      NodeId v = edges_[static_cast<size_t>(e)].to;
      if (parent[static_cast<size_t>(v)] == -2) {
        parent[static_cast<size_t>(v)] = u;
        queue.push_back(v);
      }
    }
  }
  return std::nullopt;
}

Rational CoveringModel::max_weight() const {
  Rational m = edges_.empty() ? Rational(1) : edges_.front().weight;
  for (const auto& e : edges_) m = std::max(m, e.weight);
  return m;
}

}  // namespace subcocycle
