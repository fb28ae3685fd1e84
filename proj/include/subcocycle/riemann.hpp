#pragma once

// Rational self-maps of the projective line and the multiplicity cocycle
// κ_n(x) = local degree of fⁿ at x. A map of degree d is a pair of binary
// forms (P, Q) without common zero; it is stored through its affine chart
// z = [z : 1], so P and Q are univariate with max degree exactly d unless a
// larger degree is declared.

#include <optional>
#include <string>
#include <vector>

#include "subcocycle/errors.hpp"
#include "subcocycle/parallel.hpp"
#include "subcocycle/poly.hpp"

namespace subcocycle::riemann {

using poly::Complex;
using poly::Mode;
using poly::Poly;
using poly::Scalar;

inline constexpr double kDefaultTolerance = 1e-8;

// A point [z : 1] or the point at infinity [1 : 0].
class ProjectivePoint {
 public:
  static ProjectivePoint finite(Scalar z) { return ProjectivePoint(std::move(z), false); }
  static ProjectivePoint infinity(Mode mode = Mode::exact) { return ProjectivePoint(Scalar::one(mode), true); }

  bool is_infinity() const { return infinite_; }
  // Affine coordinate; throws InputError at infinity.
  const Scalar& z() const;
  Mode mode() const { return z_.mode(); }
  bool is_exact() const { return mode() == Mode::exact; }
  ProjectivePoint to_approx() const { return infinite_ ? infinity(Mode::approx) : finite(z_.to_approx()); }

  std::string to_string() const;

 private:
  ProjectivePoint(Scalar z, bool infinite) : z_(std::move(z)), infinite_(infinite) {}
  Scalar z_;
  bool infinite_;
};

// |z - w| / (sqrt(1 + |z|²) sqrt(1 + |w|²)), with the limit at infinity.
double chordal_distance(const ProjectivePoint& a, const ProjectivePoint& b);

// Exact equality when both points are exact, chordal distance < tol otherwise.
bool same_point(const ProjectivePoint& a, const ProjectivePoint& b, double tol = kDefaultTolerance);

// Canonical order: finite points by (real, imag), infinity last.
bool point_less(const ProjectivePoint& a, const ProjectivePoint& b);

// Local degree could not be decided: the point sits in the band between the
// clustering radius and a hundred times that radius around Wronskian roots.
class AmbiguousMultiplicityError : public NumericError {
 public:
  AmbiguousMultiplicityError(const std::string& what, int low, int high)
      : NumericError(what), low_(low), high_(high) {}
  int low() const { return low_; }
  int high() const { return high_; }

 private:
  int low_;
  int high_;
};

class RationalMap {
 public:
  const Poly& p() const { return p_; }
  const Poly& q() const { return q_; }
  int degree() const { return degree_; }
  Mode mode() const { return p_.mode(); }
  RationalMap to_approx() const;
  // "(P) / (Q)" in the affine chart.
  std::string to_string() const;

  // Coefficient of z^k w^(d-k) in the homogeneous forms.
  Scalar p_coeff(int k) const { return p_.coeff(k); }
  Scalar q_coeff(int k) const { return q_.coeff(k); }

 private:
  friend RationalMap make_map(Poly p, Poly q, std::optional<int> degree);
  RationalMap(Poly p, Poly q, int degree) : p_(std::move(p)), q_(std::move(q)), degree_(degree) {}

  Poly p_;
  Poly q_;
  int degree_;
};

// Validates d ≥ 2 (declared degree, else max(deg P, deg Q)) and a nonzero
// resultant. Throws DegenerateInputError on a common zero.
RationalMap make_map(Poly p, Poly q, std::optional<int> degree = std::nullopt);

// outer ∘ inner as a pair of forms of degree d_outer · d_inner.
RationalMap compose_maps(const RationalMap& outer, const RationalMap& inner);
// fⁿ, n ≥ 1.
RationalMap iterate_map(const RationalMap& f, int n);
// ι ∘ f ∘ ι with ι(z) = 1/z.
RationalMap conjugate_by_inversion(const RationalMap& f);

ProjectivePoint apply(const RationalMap& f, const ProjectivePoint& x);
ProjectivePoint iterate(const RationalMap& f, const ProjectivePoint& x, int n);

struct MultiplicityOptions {
  double tol = kDefaultTolerance;
};

// 1 + order of vanishing of the Wronskian P'Q - PQ' at x, in the chart u = 1/z at infinity.
int local_multiplicity(const RationalMap& f, const ProjectivePoint& x, const MultiplicityOptions& options = {});

// κ_n(x) = product of local multiplicities along x, f(x), …, f^(n-1)(x).
Integer iterate_multiplicity(const RationalMap& f, const ProjectivePoint& x, int n,
                             const MultiplicityOptions& options = {});

struct FiberPoint {
  ProjectivePoint point;
  int multiplicity = 1;
};

struct PreimageFiber {
  ProjectivePoint base;
  std::vector<FiberPoint> points;  // canonical order; multiplicities sum to d
};

struct PreimageOptions {
  double tol = kDefaultTolerance;
  int max_iter = 200;
  // Tree levels expand their parents serially or with OpenMP; both give the same result.
  Execution execution = Execution::parallel;
};

PreimageFiber preimages(const RationalMap& f, const ProjectivePoint& x, const PreimageOptions& options = {});

struct CriticalPoint {
  ProjectivePoint point;
  int multiplicity = 2;  // local degree
};

// Zeros of the homogeneous Wronskian (degree 2d - 2), each with local degree
// 1 + its order. Exact maps factor the Wronskian square-free first.
std::vector<CriticalPoint> critical_points(const RationalMap& f, const MultiplicityOptions& options = {});
// Σ (local degree - 1) over critical points; equals 2d - 2.
int riemann_hurwitz_sum(const std::vector<CriticalPoint>& critical);

struct BackwardSearchOptions {
  long budget = 100000;  // fiber expansions
  PreimageOptions preimage;
};

struct BackwardSearchResult {
  Integer value;                         // best κ_n(y) found over y ∈ f⁻ⁿ(x)
  std::vector<ProjectivePoint> witness;  // y, f(y), …, x
  bool partial = false;                  // budget ran out: value is a lower bound
  long expanded = 0;
};

// Best-first branch and bound over the backward tree, pruning branches whose
// product times d^(remaining depth) cannot beat the best leaf.
BackwardSearchResult kappa_backward_analytic(const RationalMap& f, const ProjectivePoint& x, int n,
                                             const BackwardSearchOptions& options = {});

struct ExceptionalPoint {
  ProjectivePoint point;
  int period = 1;       // 1 or 2
  PreimageFiber fiber;  // a single point of multiplicity d inside the set
};

struct ExceptionalSetReport {
  std::vector<ExceptionalPoint> points;              // at most two
  std::vector<CriticalPoint> totally_ramified;       // local degree d
  std::vector<std::vector<Integer>> growth_checks;   // κ₋ₙ(a) for n = 1..4, per point
};

// The maximal finite totally invariant set. Candidates are periodic points of
// period ≤ 2 among the images of totally ramified points; candidates whose
// fiber leaves the set are removed until the set is stable.
ExceptionalSetReport exceptional_set(const RationalMap& f, const MultiplicityOptions& options = {});

class NotBackwardInvariantError : public InputError {
 public:
  NotBackwardInvariantError(const std::string& what, std::vector<ProjectivePoint> witnesses)
      : InputError(what), witnesses_(std::move(witnesses)) {}
  const std::vector<ProjectivePoint>& witnesses() const { return witnesses_; }

 private:
  std::vector<ProjectivePoint> witnesses_;
};

// Distinct points of f^(-m)(E) in canonical order.
std::vector<ProjectivePoint> backward_image(const RationalMap& f, const std::vector<ProjectivePoint>& e, int m,
                                            const PreimageOptions& options = {});

// Iterates E -> f^(-m)(E) to its limit. Requires f^(-m)(E) ⊆ E; otherwise
// throws NotBackwardInvariantError listing every escaping point.
std::vector<ProjectivePoint> totally_invariant_core(const RationalMap& f, const std::vector<ProjectivePoint>& e,
                                                    int m, const PreimageOptions& options = {});

struct EquidistributionOptions {
  int depth = 10;
  int cells = 32;
  double tol = kDefaultTolerance;
  double circle_band = 0.01;  // chordal distance to the unit circle
  Execution execution = Execution::parallel;
};

struct SeedReport {
  ProjectivePoint seed;
  Integer total_multiplicity;                  // dⁿ
  long distinct_points = 0;
  double unit_circle_mass = 0.0;               // within circle_band of |z| = 1
  std::optional<ProjectivePoint> dirac;        // set when all mass sits at one point
  std::vector<double> histogram;               // cells × cells, row-major in (height, angle)
  std::vector<double> depth_tv;                // TV(level k-1, level k), k = 1..depth
};

struct EquidistributionReport {
  int depth = 0;
  int cells = 0;
  std::vector<SeedReport> seeds;
  std::vector<std::vector<double>> pairwise_tv;  // between seeds at full depth
};

// Throws InputError when depth · log2(d) > 24.
EquidistributionReport equidistribution_report(const RationalMap& f, const std::vector<ProjectivePoint>& seeds,
                                               const EquidistributionOptions& options = {});

// Depth-n backward tree: every point of f⁻ⁿ(x) with its multiplicity, as the
// multiset d⁻ⁿ(fⁿ)*δ_x before normalization.
std::vector<FiberPoint> backward_tree_level(const RationalMap& f, const ProjectivePoint& x, int n,
                                            const PreimageOptions& options = {});

// Cell index of a point in the cells × cells partition of the sphere by
// height (Z + 1)/2 and angle (φ + π)/2π; equal-area in height.
int sphere_cell(const ProjectivePoint& x, int cells);

}  // namespace subcocycle::riemann
