#pragma once

#include <optional>
#include <span>
#include <vector>

#include "subcocycle/rational.hpp"

namespace subcocycle {

using NodeId = int;
using EdgeId = int;

struct Edge {
  NodeId from = 0;
  NodeId to = 0;
  Rational weight = 1;
};

// Whether every node must have a preimage. Forward-only analyses (orbits of
// functional graphs, the oscillating two-point example) use relaxed models.
enum class Surjectivity { required, relaxed };

// Finite directed graph standing in for an open self-map with multivalued
// forward images: out-degree ≥ 1 everywhere, and in-degree ≥ 1 unless the
// model was built relaxed. Immutable after construction.
class CoveringModel {
 public:
  // Validates and indexes. Throws InputError naming the offending node or edge.
  static CoveringModel create(int node_count, std::vector<Edge> edges,
                              Surjectivity surjectivity = Surjectivity::required);

  int node_count() const { return node_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId id) const { return edges_.at(static_cast<size_t>(id)); }
  // Edge ids sorted by head (out) or tail (in) node id.
  std::span<const EdgeId> out_edges(NodeId node) const { return out_[static_cast<size_t>(node)]; }
  std::span<const EdgeId> in_edges(NodeId node) const { return in_[static_cast<size_t>(node)]; }

  std::optional<EdgeId> find_edge(NodeId from, NodeId to) const;
  bool is_surjective() const { return surjective_; }
  bool is_deterministic() const { return deterministic_; }
  Surjectivity surjectivity() const { return surjectivity_; }
  // Unique successor; requires a deterministic model.
  NodeId successor(NodeId node) const;

  // Forward image and full preimage of a node set (sorted, duplicate-free).
  std::vector<NodeId> image(std::span<const NodeId> nodes) const;
  std::vector<NodeId> preimage(std::span<const NodeId> nodes) const;

  // Nodes reachable from / reaching `node` (including itself).
  std::vector<bool> reachable_from(NodeId node) const;
  std::vector<bool> reaching(NodeId node) const;

  // Shortest forward path (as node sequence) from any node in `sources` to
  // `target`, or nullopt.
  std::optional<std::vector<NodeId>> shortest_path(std::span<const NodeId> sources, NodeId target) const;

  Rational max_weight() const;

  void check_node(NodeId node) const;

 private:
  CoveringModel() = default;

  int node_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> out_;
  std::vector<std::vector<EdgeId>> in_;
  bool surjective_ = false;
  bool deterministic_ = false;
  Surjectivity surjectivity_ = Surjectivity::required;
};

}  // namespace subcocycle
