#pragma once

// Data-parallel kernels behind the finite engine. Every kernel has a serial
// reference path selected by Execution::serial; the OpenMP path must produce
// bit-identical results (exact arithmetic, fixed reduction order).

#include <optional>
#include <span>
#include <vector>

#include "subcocycle/growth_rate.hpp"
#include "subcocycle/model.hpp"
#include "subcocycle/parallel.hpp"
#include "subcocycle/rational.hpp"

namespace subcocycle::kernels {

using subcocycle::Execution;

// next[v] = max over edges u -> v of prev[u] · w(u -> v).
std::vector<Rational> backward_step(const CoveringModel& model, std::span<const Rational> weights,
                                    std::span<const Rational> prev, Execution execution);

// next[u] = max over edges u -> v of w(u -> v) · prev[v].
std::vector<Rational> forward_step(const CoveringModel& model, std::span<const Rational> weights,
                                   std::span<const Rational> prev, Execution execution);

// Maximum weight of a backward path of length n ending at each node.
std::vector<Rational> backward_values(const CoveringModel& model, std::span<const Rational> weights, int n,
                                      Execution execution);

// Strongly connected components numbered in topological order of the
// condensation (every edge goes from a component to itself or a later one).
struct Components {
  std::vector<int> component_of;            // per node
  std::vector<std::vector<NodeId>> members;  // sorted node ids
  std::vector<bool> cyclic;                 // has at least one edge inside
};

Components strongly_connected_components(const CoveringModel& model);

// Maximum geometric cycle mean of one component together with the
// lexicographically smallest simple cycle attaining it (rotated to start at
// its smallest node).
struct CriticalCycle {
  std::vector<NodeId> nodes;
  AlgebraicGrowthRate mean;
};

// Karp's characterization in multiplicative form, evaluated exactly:
//   λ = max_v min_k (D_s(v) / D_k(v))^(1/(s-k)),
// D_k(v) the heaviest walk of length k from a fixed source. One entry per
// component; nullopt for acyclic components.
std::vector<std::optional<CriticalCycle>> max_cycle_means(const CoveringModel& model,
                                                          std::span<const Rational> weights,
                                                          const Components& components, Execution execution);

// Exact geometric mean of a closed node sequence (first node not repeated).
AlgebraicGrowthRate cycle_mean(const CoveringModel& model, std::span<const Rational> weights,
                               std::span<const NodeId> cycle);

// Lexicographic order on canonical cycles.
bool cycle_less(std::span<const NodeId> a, std::span<const NodeId> b);

}  // namespace subcocycle::kernels
