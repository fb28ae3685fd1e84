#pragma once

// Exact engine for backward cocycles on finite covering models.
//
// On a finite model every subset is closed, so the limit κ₋(x) of κ₋ₙ(x)^(1/n)
// is computed structurally: it is the largest geometric cycle mean over the
// cycles from which x can be reached. Level sets {κ₋ ≥ δ} are then the
// forward orbit closures of those cycles, and every claim is returned with a
// witness that tests can re-check independently of the engine.

#include <functional>
#include <optional>
#include <vector>

#include "subcocycle/cocycle.hpp"
#include "subcocycle/errors.hpp"
#include "subcocycle/growth_rate.hpp"
#include "subcocycle/kernels.hpp"
#include "subcocycle/model.hpp"

namespace subcocycle::finite {

using kernels::Execution;

// Raised when a threshold δ ≤ δ* = min κ₋ would make the level set the whole space.
class WholeSpaceError : public InputError {
 public:
  WholeSpaceError(const Rational& delta, AlgebraicGrowthRate delta_star);
  const AlgebraicGrowthRate& delta_star() const { return delta_star_; }

 private:
  AlgebraicGrowthRate delta_star_;
};

// κ₋ₙ(x) = max over backward paths of length n ending at x of κ_n. n = 0 gives 1.
Rational kappa_backward(const CoveringModel& model, const CocycleSpec& spec, NodeId x, int n,
                        Execution execution = Execution::parallel);
std::vector<Rational> kappa_backward_all(const CoveringModel& model, const CocycleSpec& spec, int n,
                                         Execution execution = Execution::parallel);

struct CycleCertificate {
  std::vector<NodeId> cycle;  // starts at its smallest node
  AlgebraicGrowthRate mean;
};

// Cycle structure of a multiplicative spec: per-component critical cycles
// and, per node, the heaviest cycle upstream (κ₋) and downstream
// (forward growth). Ties are broken by the lexicographically smallest cycle.
class CycleAnalysis {
 public:
  static CycleAnalysis build(const CoveringModel& model, const CocycleSpec& spec,
                             Execution execution = Execution::parallel);

  const kernels::Components& components() const { return components_; }
  const std::vector<std::optional<kernels::CriticalCycle>>& component_cycles() const { return critical_; }
  const std::vector<Rational>& weights() const { return weights_; }

  // nullopt when no cycle reaches x (only possible on relaxed models).
  const std::optional<CycleCertificate>& upstream(NodeId x) const { return upstream_.at(static_cast<size_t>(x)); }
  const std::optional<CycleCertificate>& downstream(NodeId x) const {
    return downstream_.at(static_cast<size_t>(x));
  }

  // min over nodes with a defined κ₋.
  const std::optional<CycleCertificate>& delta_star() const { return delta_star_; }

 private:
  kernels::Components components_;
  std::vector<std::optional<kernels::CriticalCycle>> critical_;
  std::vector<Rational> weights_;
  std::vector<std::optional<CycleCertificate>> upstream_;
  std::vector<std::optional<CycleCertificate>> downstream_;
  std::optional<CycleCertificate> delta_star_;
};

// lim κ₋ₙ(x)^(1/n). Multiplicative specs only; throws UnsupportedError
// otherwise, and when x has no cycle upstream.
AlgebraicGrowthRate kappa_minus(const CoveringModel& model, const CocycleSpec& spec, NodeId x);

struct InvarianceWitness {
  NodeId node;
  EdgeId in_edge;   // from a member
  EdgeId out_edge;  // to a member
};

struct OrbitWitness {
  NodeId node;
  CycleCertificate source;    // cycle with mean ≥ delta
  std::vector<NodeId> path;   // from a node of `source` to `node`, length ≤ node_count
};

struct LevelSetCertificate {
  Rational delta;
  std::vector<NodeId> members;
  std::vector<InvarianceWitness> invariance;
  std::vector<OrbitWitness> orbit;
  AlgebraicGrowthRate delta_star{1, 1};
};

// {x : κ₋(x) ≥ delta}, decided exactly. Throws WholeSpaceError when delta ≤ δ*.
LevelSetCertificate level_set(const CoveringModel& model, const CocycleSpec& spec, const Rational& delta);
LevelSetCertificate level_set(const CycleAnalysis& analysis, const CoveringModel& model, const Rational& delta);

struct ForwardGrowth {
  AlgebraicGrowthRate rate;
  CycleCertificate cycle;
  std::vector<NodeId> witness_path;  // from x to a node of `cycle`
};

// limsup of the path-maximum forward cocycle K_n(x)^(1/n): the heaviest cycle
// reachable from x, with a path into {κ₋ ≥ rate}.
ForwardGrowth forward_max_growth(const CoveringModel& model, const CocycleSpec& spec, NodeId x);

struct OrbitShape {
  int preperiod = 0;
  std::vector<NodeId> cycle;  // in orbit order, starting at the entry point
};

// Orbit of x under a deterministic model.
OrbitShape orbit_shape(const CoveringModel& model, NodeId x);

// lim κ_n(x)^(1/n) on a deterministic model: the mean of the terminal cycle,
// represented by (cycle product, cycle length).
AlgebraicGrowthRate kappa_plus(const CoveringModel& model, const CocycleSpec& spec, NodeId x);

struct TailLimit {
  AlgebraicGrowthRate kappa;
  int l_min = 0;
  int cycle_length = 0;
  std::vector<AlgebraicGrowthRate> per_offset;  // κ from f^l(x), l = 0 … l_min + cycle_length
};

// κ(x) = lim κ_n(f^l(x))^(1/n), verified to agree for every offset
// l ≤ preperiod + cycle length.
TailLimit tail_limit(const CoveringModel& model, const CocycleSpec& spec, NodeId x);

struct SigmaOptions {
  Execution execution = Execution::parallel;
  // Refuse to certify when the containment bound exceeds this length.
  int max_n = 20000;
};

struct SigmaTrace {
  Rational delta;
  std::vector<NodeId> sigma;
  int n1 = 0;
  std::optional<AlgebraicGrowthRate> delta0;  // heaviest cycle mean outside sigma (< delta)
  std::vector<NodeId> residual;               // {κ₋ₙ₁ ≥ δ^n1} \ sigma
  // Constants of the construction: n0 = m = 1 on finite models, M = bound_M,
  // and N the first length from which heavy backward paths provably stay in sigma.
  Rational bound_m;
  int big_n = 0;
  int m = 1;
  int n0 = 1;
  AlgebraicGrowthRate delta_star{1, 1};
};

// Σ for thresholds above δ*: the forward orbit closure of cycles with mean ≥ delta,
// plus the first n1 after which {κ₋ₙ ≥ δⁿ} stays inside Σ (certified by exact DP).
SigmaTrace sigma_construct(const CoveringModel& model, const CocycleSpec& spec, const Rational& delta,
                           const SigmaOptions& options = {});

// {x : κ₋ₙ(x) ≥ δⁿ}.
std::vector<NodeId> heavy_backward_set(const CoveringModel& model, const CocycleSpec& spec, const Rational& delta,
                                       int n, Execution execution = Execution::parallel);

struct PeriodicGrowth {
  AlgebraicGrowthRate rate;
  bool constant_along_images = false;  // every rotation of the cycle has the same mean
  bool kappa_minus_dominates = false;  // κ₋(y) ≥ rate for y on the cycle
};

PeriodicGrowth periodic_component_growth(const CoveringModel& model, const CocycleSpec& spec,
                                         const std::vector<NodeId>& cycle);

// Two-point model a = 0 (self-loop), b = 1 (b -> a) with κ_n(a) = qⁿ and
// κ_n(b) = q^λ(n), q a rational approximant of e. λ grows with slope 1 on odd
// blocks of the schedule and is flat on even blocks.
struct OscillatingExample {
  CoveringModel model;
  CocycleSpec spec;
  std::function<long(int)> lambda;
};

// 2721/1001, a continued-fraction convergent of e.
Rational euler_approximant();

OscillatingExample example_oscillating(std::vector<int> schedule);

enum class LambdaProfile { zero, linear };
OscillatingExample example_two_point(LambdaProfile profile);

// κ_n(x)^(1/n) of an explicit spec as an exact rate.
AlgebraicGrowthRate explicit_rate(const CocycleSpec& spec, NodeId x, int n);

}  // namespace subcocycle::finite
