#include "subcocycle/riemann.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <string>

#include "subcocycle/parallel.hpp"

namespace subcocycle::riemann {

namespace {

Mode joint_mode(const RationalMap& f, const ProjectivePoint& x) {
  return f.mode() == Mode::exact && x.is_exact() ? Mode::exact : Mode::approx;
}

RationalMap map_in(const RationalMap& f, Mode mode) { return mode == Mode::exact ? f : f.to_approx(); }
ProjectivePoint point_in(const ProjectivePoint& x, Mode mode) { return mode == Mode::exact ? x : x.to_approx(); }

// u^d · p(1/u): the same binary form read in the chart around infinity.
Poly chart_at_infinity(const Poly& p, int d) {
  std::vector<Scalar> desc;
  desc.reserve(static_cast<size_t>(d) + 1);
  for (int k = 0; k <= d; ++k) desc.push_back(p.coeff(k));
  return Poly::from_descending(std::move(desc));
}

Poly wronskian(const Poly& p, const Poly& q) {
  return poly::subtract(poly::multiply(poly::derivative(p), q), poly::multiply(p, poly::derivative(q)));
}

// Drops leading coefficients that are negligible against the largest one.
// Exact polynomials are returned unchanged.
Poly trim_leading(const Poly& p, double rel) {
  if (p.mode() == Mode::exact) return p;
  const double scale = p.max_abs_coeff();
  const auto& c = p.coeffs();
  size_t first = 0;
  while (first + 1 < c.size() && std::abs(c[first].to_complex()) <= rel * scale) ++first;
  return Poly::from_descending(std::vector<Scalar>(c.begin() + static_cast<long>(first), c.end()));
}

int exact_order(Poly w, const GaussianRational& a) {
  const Poly linear = Poly::from_descending(std::vector<Scalar>{Scalar(GaussianRational(1)), Scalar(-a)});
  int order = 0;
  while (!w.is_zero() && w.evaluate(Scalar(a)).is_zero()) {
    w = poly::divmod(w, linear).first;
    ++order;
  }
  return order;
}

struct RootTally {
  int inside = 0;
  int band = 0;
};

void tally(RootTally& t, Complex root, Complex a, double radius, int weight) {
  double dist = std::abs(root - a);
  if (dist < radius) {
    t.inside += weight;
  } else if (dist < 100.0 * radius) {
    t.band += weight;
  }
}

// Roots of a square-free exact factor as complex numbers.
std::vector<Complex> factor_roots(const Poly& factor, int max_iter) {
  if (factor.degree() == 1) return {(-factor.coeff(0) / factor.coeff(1)).to_complex()};
  return poly::aberth_roots(factor, {1e-12, max_iter});
}

void sort_fiber(std::vector<FiberPoint>& points) {
  std::sort(points.begin(), points.end(),
            [](const FiberPoint& a, const FiberPoint& b) { return point_less(a.point, b.point); });
}

void add_distinct(std::vector<ProjectivePoint>& set, const ProjectivePoint& p, double tol) {
  for (const auto& q : set) {
    if (same_point(q, p, tol)) return;
  }
  set.push_back(p);
}

bool contains(const std::vector<ProjectivePoint>& set, const ProjectivePoint& p, double tol) {
  return std::any_of(set.begin(), set.end(), [&](const ProjectivePoint& q) { return same_point(q, p, tol); });
}

std::string list_points(const std::vector<ProjectivePoint>& points) {
  std::string out;
  for (const auto& p : points) out += (out.empty() ? "" : ", ") + p.to_string();
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Points

const Scalar& ProjectivePoint::z() const {
  if (infinite_) throw InputError("the point at infinity has no affine coordinate");
  return z_;
}

std::string ProjectivePoint::to_string() const { return infinite_ ? "inf" : poly::to_string(z_); }

double chordal_distance(const ProjectivePoint& a, const ProjectivePoint& b) {
  if (a.is_infinity() && b.is_infinity()) return 0.0;
  if (a.is_infinity() || b.is_infinity()) {
    Complex z = (a.is_infinity() ? b : a).z().to_complex();
    return 1.0 / std::sqrt(1.0 + std::norm(z));
  }
  Complex z = a.z().to_complex();
  Complex w = b.z().to_complex();
  return std::abs(z - w) / (std::sqrt(1.0 + std::norm(z)) * std::sqrt(1.0 + std::norm(w)));
}

bool same_point(const ProjectivePoint& a, const ProjectivePoint& b, double tol) {
  if (a.is_exact() && b.is_exact()) {
    if (a.is_infinity() || b.is_infinity()) return a.is_infinity() == b.is_infinity();
    return a.z() == b.z();
  }
  return chordal_distance(a, b) < tol;
}

bool point_less(const ProjectivePoint& a, const ProjectivePoint& b) {
  if (a.is_infinity() || b.is_infinity()) return !a.is_infinity() && b.is_infinity();
  Complex x = a.z().to_complex();
  Complex y = b.z().to_complex();
  if (x.real() != y.real()) return x.real() < y.real();
  if (x.imag() != y.imag()) return x.imag() < y.imag();
  if (a.is_exact() && b.is_exact()) {
    const auto& p = a.z().exact();
    const auto& q = b.z().exact();
    if (p.re != q.re) return p.re < q.re;
    return p.im < q.im;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Maps

RationalMap RationalMap::to_approx() const { return RationalMap(p_.to_approx(), q_.to_approx(), degree_); }

std::string RationalMap::to_string() const { return "(" + poly::to_string(p_) + ") / (" + poly::to_string(q_) + ")"; }

RationalMap make_map(Poly p, Poly q, std::optional<int> degree) {
  if (p.mode() != q.mode()) throw ModeMismatchError();
  const int top = std::max(p.degree(), q.degree());
  const int d = degree.value_or(top);
  if (d < top) throw InputError("declared degree " + std::to_string(d) + " is below the polynomial degree " +
                                std::to_string(top));
  if (d < 2) throw InputError("map degree must be >= 2, got " + std::to_string(d));
  Scalar res = poly::resultant(p, q, d);
  bool degenerate = res.is_zero();
  if (!degenerate && p.mode() == Mode::approx) {
    double scale = std::max(p.max_abs_coeff(), q.max_abs_coeff());
    degenerate = std::abs(res.to_complex()) <= 1e-12 * std::pow(scale, 2 * d);
  }
  if (degenerate) throw DegenerateInputError("P and Q share a projective zero (resultant is 0)");
  return RationalMap(std::move(p), std::move(q), d);
}

RationalMap compose_maps(const RationalMap& outer, const RationalMap& inner) {
  const Mode mode = outer.mode() == Mode::exact && inner.mode() == Mode::exact ? Mode::exact : Mode::approx;
  const RationalMap g = map_in(outer, mode);
  const RationalMap f = map_in(inner, mode);
  const int dg = g.degree();
  // Powers P^k and Q^k of the inner forms.
  std::vector<Poly> pp{Poly::constant(Scalar::one(mode))}, qp{Poly::constant(Scalar::one(mode))};
  for (int k = 1; k <= dg; ++k) {
    pp.push_back(poly::multiply(pp.back(), f.p()));
    qp.push_back(poly::multiply(qp.back(), f.q()));
  }
  Poly p(mode), q(mode);
  for (int k = 0; k <= dg; ++k) {
    Poly term = poly::multiply(pp[static_cast<size_t>(k)], qp[static_cast<size_t>(dg - k)]);
    p = poly::add(p, poly::scale(term, g.p_coeff(k)));
    q = poly::add(q, poly::scale(term, g.q_coeff(k)));
  }
  return make_map(std::move(p), std::move(q), dg * f.degree());
}

RationalMap iterate_map(const RationalMap& f, int n) {
  if (n < 1) throw InputError("iterate count must be >= 1");
  RationalMap out = f;
  for (int i = 1; i < n; ++i) out = compose_maps(f, out);
  return out;
}

RationalMap conjugate_by_inversion(const RationalMap& f) {
  return make_map(chart_at_infinity(f.q(), f.degree()), chart_at_infinity(f.p(), f.degree()), f.degree());
}

ProjectivePoint apply(const RationalMap& map, const ProjectivePoint& point) {
  const Mode mode = joint_mode(map, point);
  const RationalMap f = map_in(map, mode);
  const ProjectivePoint x = point_in(point, mode);
  Scalar p, q;
  if (x.is_infinity()) {
    p = f.p_coeff(f.degree());
    q = f.q_coeff(f.degree());
  } else {
    p = f.p().evaluate(x.z());
    q = f.q().evaluate(x.z());
  }
  if (q.is_zero()) return ProjectivePoint::infinity(mode);
  return ProjectivePoint::finite(p / q);
}

ProjectivePoint iterate(const RationalMap& f, const ProjectivePoint& x, int n) {
  if (n < 0) throw InputError("iterate count must be >= 0");
  ProjectivePoint y = x;
  for (int i = 0; i < n; ++i) y = apply(f, y);
  return y;
}

// ---------------------------------------------------------------------------
// Multiplicities

int local_multiplicity(const RationalMap& f, const ProjectivePoint& x, const MultiplicityOptions& options) {
  Poly p = f.p(), q = f.q();
  Scalar a;
  if (x.is_infinity()) {
    p = chart_at_infinity(p, f.degree());
    q = chart_at_infinity(q, f.degree());
    a = Scalar::zero(joint_mode(f, x));
  } else if (!x.is_exact() && std::abs(x.z().to_complex()) > 1.0) {
    // Large approximate points are matched in the chart at infinity, where a
    // numerically escaping orbit still lands next to a critical point at ∞.
    p = chart_at_infinity(p, f.degree());
    q = chart_at_infinity(q, f.degree());
    a = Scalar::one(Mode::approx) / x.z();
  } else {
    a = x.z();
  }
  Poly w = wronskian(p, q);
  if (w.is_zero()) throw NumericError("Wronskian vanishes identically");
  if (f.mode() == Mode::exact && a.is_exact()) return 1 + exact_order(w, a.exact());

  const Complex ac = a.to_complex();
  const double radius = std::sqrt(options.tol) * std::max(1.0, std::abs(ac));
  RootTally t;
  if (f.mode() == Mode::exact) {
    for (const auto& [factor, k] : poly::square_free_decomposition(w)) {
      for (Complex r : factor_roots(factor, 200)) tally(t, r, ac, radius, k);
    }
  } else {
    w = trim_leading(w, 1e-14);
    if (w.degree() >= 1) {
      for (Complex r : poly::aberth_roots(w)) tally(t, r, ac, radius, 1);
    }
  }
  if (t.band > 0) {
    throw AmbiguousMultiplicityError("multiplicity at " + x.to_string() + " is ambiguous: " +
                                         std::to_string(1 + t.inside) + " or " +
                                         std::to_string(1 + t.inside + t.band),
                                     1 + t.inside, 1 + t.inside + t.band);
  }
  return 1 + t.inside;
}

Integer iterate_multiplicity(const RationalMap& f, const ProjectivePoint& x, int n,
                             const MultiplicityOptions& options) {
  if (n < 0) throw InputError("n must be >= 0");
  Integer out = 1;
  ProjectivePoint y = x;
  for (int i = 0; i < n; ++i) {
    out *= local_multiplicity(f, y, options);
    y = apply(f, y);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fibers

PreimageFiber preimages(const RationalMap& map, const ProjectivePoint& target, const PreimageOptions& options) {
  const Mode mode = joint_mode(map, target);
  const RationalMap f = map_in(map, mode);
  const ProjectivePoint x = point_in(target, mode);
  const int d = f.degree();

  Poly r(mode);
  if (x.is_infinity()) {
    r = f.q();
  } else if (mode == Mode::approx && std::abs(x.z().to_complex()) > 1.0) {
    r = poly::subtract(poly::scale(f.p(), Scalar::one(mode) / x.z()), f.q());
  } else {
    r = poly::subtract(f.p(), poly::scale(f.q(), x.z()));
  }
  r = trim_leading(r, options.tol);

  PreimageFiber fiber{target, {}};
  if (r.is_zero()) throw NumericError("fiber equation vanishes identically");
  if (r.degree() >= 1) {
    for (const auto& c : poly::find_roots(r, {options.tol, options.max_iter})) {
      fiber.points.push_back({ProjectivePoint::finite(c.center), c.multiplicity});
    }
  }
  if (r.degree() < d) fiber.points.push_back({ProjectivePoint::infinity(mode), d - r.degree()});
  sort_fiber(fiber.points);
  return fiber;
}

std::vector<CriticalPoint> critical_points(const RationalMap& f, const MultiplicityOptions& options) {
  std::vector<CriticalPoint> out;
  Poly w = wronskian(f.p(), f.q());
  if (f.mode() == Mode::exact) {
    for (const auto& [factor, k] : poly::square_free_decomposition(w)) {
      for (const auto& c : poly::find_roots(factor)) out.push_back({ProjectivePoint::finite(c.center), 1 + k});
    }
  } else {
    w = trim_leading(w, 1e-14);
    if (w.degree() >= 1) {
      for (const auto& c : poly::find_roots(w, {std::sqrt(options.tol), 200})) {
        out.push_back({ProjectivePoint::finite(c.center), 1 + c.multiplicity});
      }
    }
  }
  int at_infinity = local_multiplicity(f, ProjectivePoint::infinity(f.mode()), options);
  if (at_infinity > 1) out.push_back({ProjectivePoint::infinity(f.mode()), at_infinity});
  std::sort(out.begin(), out.end(),
            [](const CriticalPoint& a, const CriticalPoint& b) { return point_less(a.point, b.point); });
  return out;
}

int riemann_hurwitz_sum(const std::vector<CriticalPoint>& critical) {
  int sum = 0;
  for (const auto& c : critical) sum += c.multiplicity - 1;
  return sum;
}

// ---------------------------------------------------------------------------
// Backward search

BackwardSearchResult kappa_backward_analytic(const RationalMap& f, const ProjectivePoint& x, int n,
                                             const BackwardSearchOptions& options) {
  if (n < 0) throw InputError("n must be >= 0");
  if (options.budget < 1) throw InputError("search budget must be >= 1");
  struct Node {
    ProjectivePoint point;
    int depth;
    Integer product;
    int parent;
  };
  struct Entry {
    Integer bound;
    int depth;
    int id;
  };
  auto worse = [](const Entry& a, const Entry& b) {
    if (a.bound != b.bound) return a.bound < b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.id > b.id;
  };
  const Integer d = f.degree();
  std::vector<Node> nodes{{x, 0, 1, -1}};
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> queue(worse);
  queue.push({pow(d, static_cast<unsigned long>(n)), 0, 0});

  BackwardSearchResult result;
  result.value = 0;
  int best_leaf = -1;
  auto witness_from = [&](int leaf) {
    std::vector<ProjectivePoint> path;
    for (int v = leaf; v != -1; v = nodes[static_cast<size_t>(v)].parent) path.push_back(nodes[static_cast<size_t>(v)].point);
    return path;
  };

  while (!queue.empty()) {
    Entry top = queue.top();
    if (best_leaf != -1 && top.bound <= result.value) break;
    queue.pop();
    const Node node = nodes[static_cast<size_t>(top.id)];
    if (node.depth == n) {
      // Bounds are exact at leaves and the queue is ordered, so this leaf is optimal.
      result.value = node.product;
      best_leaf = top.id;
      break;
    }
    if (result.expanded >= options.budget) {
      // Complete the most promising open branch greedily; the value is only a lower bound.
      result.partial = true;
      int current = top.id;
      while (nodes[static_cast<size_t>(current)].depth < n) {
        const Node parent = nodes[static_cast<size_t>(current)];
        PreimageFiber fiber = preimages(f, parent.point, options.preimage);
        auto best = std::max_element(fiber.points.begin(), fiber.points.end(),
                                     [](const FiberPoint& a, const FiberPoint& b) { return a.multiplicity < b.multiplicity; });
        nodes.push_back({best->point, parent.depth + 1, parent.product * best->multiplicity, current});
        current = static_cast<int>(nodes.size()) - 1;
      }
      if (nodes[static_cast<size_t>(current)].product > result.value) {
        result.value = nodes[static_cast<size_t>(current)].product;
        best_leaf = current;
      }
      break;
    }
    ++result.expanded;
    PreimageFiber fiber = preimages(f, node.point, options.preimage);
    const Integer remaining = pow(d, static_cast<unsigned long>(n - node.depth - 1));
    for (const auto& child : fiber.points) {
      nodes.push_back({child.point, node.depth + 1, node.product * child.multiplicity, top.id});
      int id = static_cast<int>(nodes.size()) - 1;
      queue.push({nodes.back().product * remaining, node.depth + 1, id});
    }
  }
  result.witness = witness_from(best_leaf);
  return result;
}

// ---------------------------------------------------------------------------
// Exceptional sets

ExceptionalSetReport exceptional_set(const RationalMap& f, const MultiplicityOptions& options) {
  const int d = f.degree();
  const double tol = options.tol;
  ExceptionalSetReport report;
  for (auto& c : critical_points(f, options)) {
    if (c.multiplicity == d) report.totally_ramified.push_back(std::move(c));
  }
  // A point with a single preimage of full multiplicity is the image of a
  // totally ramified point, and its preimage must stay in the set.
  struct Candidate {
    ProjectivePoint point;
    ProjectivePoint preimage;
  };
  std::vector<Candidate> set;
  for (const auto& c : report.totally_ramified) {
    ProjectivePoint a = apply(f, c.point);
    bool dup = std::any_of(set.begin(), set.end(), [&](const Candidate& s) { return same_point(s.point, a, tol); });
    if (!dup) set.push_back({a, c.point});
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (size_t i = 0; i < set.size(); ++i) {
      bool inside = std::any_of(set.begin(), set.end(),
                                [&](const Candidate& s) { return same_point(s.point, set[i].preimage, tol); });
      if (!inside) {
        set.erase(set.begin() + static_cast<long>(i));
        changed = true;
        break;
      }
    }
  }

  for (const auto& cand : set) {
    ExceptionalPoint e{cand.point, same_point(apply(f, cand.point), cand.point, tol) ? 1 : 2,
                       preimages(f, cand.point, {tol, 200})};
    if (e.fiber.points.size() != 1 || e.fiber.points.front().multiplicity != d ||
        !same_point(e.fiber.points.front().point, cand.preimage, tol)) {
      throw AmbiguousMultiplicityError("fiber of candidate " + cand.point.to_string() +
                                           " cannot be certified at this tolerance; exact mode required",
                                       1, d);
    }
    std::vector<Integer> growth;
    for (int n = 1; n <= 4; ++n) {
      Integer value = kappa_backward_analytic(f, cand.point, n).value;
      if (value != pow(Integer(d), static_cast<unsigned long>(n))) {
        throw NumericError("exceptional point " + cand.point.to_string() + " fails the growth check at n = " +
                           std::to_string(n));
      }
      growth.push_back(value);
    }
    report.points.push_back(std::move(e));
    report.growth_checks.push_back(std::move(growth));
  }
  // Canonical order, keeping growth checks aligned.
  std::vector<size_t> order(report.points.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return point_less(report.points[a].point, report.points[b].point); });
  ExceptionalSetReport sorted;
  sorted.totally_ramified = std::move(report.totally_ramified);
  for (size_t i : order) {
    sorted.points.push_back(report.points[i]);
    sorted.growth_checks.push_back(report.growth_checks[i]);
  }
  return sorted;
}

std::vector<ProjectivePoint> backward_image(const RationalMap& f, const std::vector<ProjectivePoint>& e, int m,
                                            const PreimageOptions& options) {
  if (m < 1) throw InputError("m must be >= 1");
  std::vector<ProjectivePoint> current = e;
  for (int step = 0; step < m; ++step) {
    std::vector<ProjectivePoint> next;
    for (const auto& a : current) {
      for (const auto& p : preimages(f, a, options).points) add_distinct(next, p.point, options.tol);
    }
    current = std::move(next);
  }
  std::sort(current.begin(), current.end(), point_less);
  return current;
}

std::vector<ProjectivePoint> totally_invariant_core(const RationalMap& f, const std::vector<ProjectivePoint>& e,
                                                    int m, const PreimageOptions& options) {
  std::vector<ProjectivePoint> current;
  for (const auto& p : e) add_distinct(current, p, options.tol);
  std::sort(current.begin(), current.end(), point_less);

  std::vector<ProjectivePoint> escaping;
  for (const auto& p : backward_image(f, current, m, options)) {
    if (!contains(current, p, options.tol)) escaping.push_back(p);
  }
  if (!escaping.empty()) {
    throw NotBackwardInvariantError("f^-" + std::to_string(m) + "(E) is not contained in E; escaping points: " +
                                        list_points(escaping),
                                    escaping);
  }
  // f^-m(E_k) ⊆ E_k for every k, so the sizes decrease until they stop.
  while (true) {
    auto next = backward_image(f, current, m, options);
    if (next.size() == current.size()) return next;
    current = std::move(next);
  }
}

// ---------------------------------------------------------------------------
// Equidistribution

int sphere_cell(const ProjectivePoint& x, int cells) {
  double height = 1.0, angle = 0.0;
  if (!x.is_infinity()) {
    Complex z = x.z().to_complex();
    double r2 = std::norm(z);
    height = (r2 - 1.0) / (r2 + 1.0);
    angle = std::arg(z);
  }
  int i = std::min(static_cast<int>((height + 1.0) / 2.0 * cells), cells - 1);
  int j = std::min(static_cast<int>((angle + std::numbers::pi) / (2.0 * std::numbers::pi) * cells), cells - 1);
  return std::max(i, 0) * cells + std::max(j, 0);
}

namespace {

// One backward step over a whole level, across parents; children
// are concatenated in parent order so the result does not depend on the schedule.
std::vector<FiberPoint> expand_level(const RationalMap& f, const std::vector<FiberPoint>& level,
                                     const PreimageOptions& options) {
  std::vector<std::vector<FiberPoint>> children(level.size());
  for_range(static_cast<int>(level.size()), options.execution, [&](int i) {
    const FiberPoint& parent = level[static_cast<size_t>(i)];
    for (const auto& c : preimages(f, parent.point, options).points) {
      children[static_cast<size_t>(i)].push_back({c.point, parent.multiplicity * c.multiplicity});
    }
  });
  std::vector<FiberPoint> next;
  for (auto& group : children) next.insert(next.end(), group.begin(), group.end());
  return next;
}

}  // namespace

std::vector<FiberPoint> backward_tree_level(const RationalMap& f, const ProjectivePoint& x, int n,
                                            const PreimageOptions& options) {
  if (n < 0) throw InputError("depth must be >= 0");
  std::vector<FiberPoint> level{{x, 1}};
  for (int k = 0; k < n; ++k) level = expand_level(f, level, options);
  return level;
}

namespace {

double distance_to_unit_circle(const ProjectivePoint& x) {
  if (x.is_infinity()) return 1.0 / std::sqrt(2.0);
  double r = std::abs(x.z().to_complex());
  return std::abs(r - 1.0) / (std::sqrt(1.0 + r * r) * std::sqrt(2.0));
}

std::vector<double> histogram(const std::vector<FiberPoint>& points, int cells, double total) {
  std::vector<double> h(static_cast<size_t>(cells) * static_cast<size_t>(cells), 0.0);
  for (const auto& p : points) h[static_cast<size_t>(sphere_cell(p.point, cells))] += p.multiplicity / total;
  return h;
}

double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
  return 0.5 * sum;
}

}  // namespace

EquidistributionReport equidistribution_report(const RationalMap& f, const std::vector<ProjectivePoint>& seeds,
                                               const EquidistributionOptions& options) {
  if (options.depth < 0) throw InputError("depth must be >= 0");
  if (options.cells < 1) throw InputError("cells must be >= 1");
  if (pow(Integer(f.degree()), static_cast<unsigned long>(options.depth)) > Integer(1) << 24) {
    throw InputError("depth * log2(d) exceeds 24: fiber would hold more than 2^24 points");
  }
  const PreimageOptions pre{options.tol, 200, options.execution};
  EquidistributionReport report;
  report.depth = options.depth;
  report.cells = options.cells;
  for (const auto& seed : seeds) {
    SeedReport s{seed, 0, 0, 0.0, std::nullopt, {}, {}};
    std::vector<FiberPoint> level{{seed, 1}};
    double total = 1.0;
    std::vector<double> previous = histogram(level, options.cells, total);
    for (int k = 1; k <= options.depth; ++k) {
      level = expand_level(f, level, pre);
      total *= f.degree();
      auto h = histogram(level, options.cells, total);
      s.depth_tv.push_back(total_variation(previous, h));
      previous = std::move(h);
    }
    Integer mass = 0;
    for (const auto& p : level) {
      mass += p.multiplicity;
      if (distance_to_unit_circle(p.point) <= options.circle_band) s.unit_circle_mass += p.multiplicity / total;
    }
    s.total_multiplicity = mass;
    s.distinct_points = static_cast<long>(level.size());
    bool single = std::all_of(level.begin(), level.end(),
                              [&](const FiberPoint& p) { return same_point(p.point, level.front().point, options.tol); });
    if (single) s.dirac = level.front().point;
    s.histogram = std::move(previous);
    report.seeds.push_back(std::move(s));
  }
  const size_t count = report.seeds.size();
  report.pairwise_tv.assign(count, std::vector<double>(count, 0.0));
  for (size_t i = 0; i < count; ++i) {
    for (size_t j = i + 1; j < count; ++j) {
      double tv = total_variation(report.seeds[i].histogram, report.seeds[j].histogram);
      report.pairwise_tv[i][j] = report.pairwise_tv[j][i] = tv;
    }
  }
  return report;
}

}  // namespace subcocycle::riemann
