// Acceptance run: one PASS/FAIL line per criterion. Each check recomputes its
// expected values with the brute-force oracles in support.hpp or with direct
// arithmetic, so the engine is never compared against itself.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "subcocycle/finite.hpp"
#include "subcocycle/riemann.hpp"
#include "support.hpp"

using namespace subcocycle;
using namespace subcocycle::finite;
using namespace subcocycle::riemann;
using testing_support::all_simple_cycles;
using testing_support::compare_rates;
using testing_support::oracle_cycle_rate;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
  long checks = 0;

  void require(bool ok, const std::string& what) {
    ++checks;
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int report(int id, const std::string& title, const std::function<Outcome()>& body, double limit_seconds = 0) {
  auto start = Clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail = std::string("exception: ") + e.what();
  }
  double elapsed = seconds_since(start);
  if (limit_seconds > 0 && elapsed >= limit_seconds && out.pass) {
    out.pass = false;
    out.detail = "runtime " + std::to_string(elapsed) + " s over the " + std::to_string(limit_seconds) + " s limit";
  }
  std::printf("%s criterion %d: %s (%ld checks, %.2f s)%s%s\n", out.pass ? "PASS" : "FAIL", id, title.c_str(),
              out.checks, elapsed, out.pass ? "" : " :: ", out.detail.c_str());
  std::fflush(stdout);
  return out.pass ? 0 : 1;
}

Rational power(const Rational& base, long exponent) {
  Rational out = 1;
  for (long i = 0; i < exponent; ++i) out *= base;
  return out;
}

// Distinct simple-cycle means, ascending, from the brute-force enumeration.
std::vector<testing_support::OracleRate> distinct_cycle_means(const CoveringModel& m) {
  std::vector<testing_support::OracleRate> means;
  for (const auto& c : all_simple_cycles(m)) {
    testing_support::OracleRate r{true, c.product, static_cast<int>(c.nodes.size())};
    bool seen = std::any_of(means.begin(), means.end(), [&](const auto& o) {
      return compare_rates(o.product, o.length, r.product, r.length) == 0;
    });
    if (!seen) means.push_back(r);
  }
  std::sort(means.begin(), means.end(), [](const auto& a, const auto& b) {
    return compare_rates(a.product, a.length, b.product, b.length) < 0;
  });
  return means;
}

// A rational strictly between the rates lo < hi: bisect on doubles, confirm exactly.
std::optional<Rational> rational_between(const testing_support::OracleRate& lo,
                                         const testing_support::OracleRate& hi) {
  double a = std::pow(lo.product.get_d(), 1.0 / lo.length);
  double b = std::pow(hi.product.get_d(), 1.0 / hi.length);
  for (double t : {0.5, 0.25, 0.75, 0.1, 0.9}) {
    Rational delta(a + t * (b - a));
    if (compare_rates(lo.product, lo.length, delta, 1) < 0 && compare_rates(delta, 1, hi.product, hi.length) < 0) {
      return delta;
    }
  }
  return std::nullopt;
}

std::vector<NodeId> image_of(const CoveringModel& m, const std::vector<NodeId>& set) {
  std::vector<NodeId> out;
  for (const auto& e : m.edges()) {
    if (std::binary_search(set.begin(), set.end(), e.from)) out.push_back(e.to);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool has_edge(const CoveringModel& m, NodeId from, NodeId to) {
  return std::any_of(m.edges().begin(), m.edges().end(), [&](const Edge& e) { return e.from == from && e.to == to; });
}

Poly P(std::initializer_list<long> c) {
  std::vector<long> v(c);
  return Poly::from_descending(std::span<const long>(v), Mode::exact);
}

ProjectivePoint pt(long re, long im = 0) { return ProjectivePoint::finite(Scalar(GaussianRational(re, im))); }

// Natural log of a positive rational, exact in range.
double log_of(const Rational& value) {
  long num_exp = 0, den_exp = 0;
  double num = mpz_get_d_2exp(&num_exp, value.get_num_mpz_t());
  double den = mpz_get_d_2exp(&den_exp, value.get_den_mpz_t());
  return std::log(num / den) + static_cast<double>(num_exp - den_exp) * std::log(2.0);
}

std::string name_of(const ProjectivePoint& p) { return p.to_string(); }

// ---- criteria ----------------------------------------------------------------------

Outcome oracle_equivalence() {
  Outcome out;
  std::mt19937_64 rng(2024);
  const int n = 256;
  for (int trial = 0; trial < 200; ++trial) {
    auto m = testing_support::random_covering(rng);
    auto spec = CocycleSpec::multiplicative(m);
    const long k = m.node_count();
    Rational slack = power(spec.bound_m(), k);
    auto dp = kappa_backward_all(m, spec, n);
    for (NodeId x = 0; x < m.node_count(); ++x) {
      auto rate = kappa_minus(m, spec, x);
      auto oracle = oracle_cycle_rate(m, x, true);
      out.require(oracle.defined && compare_rates(rate.product(), rate.length(), oracle.product, oracle.length) == 0,
                  "kappa_minus differs from the heaviest upstream cycle at trial " + std::to_string(trial));
      // κ₋ⁿ / Mᵏ ≤ κ₋ₙ ≤ κ₋ⁿ · Mᵏ, raised to the rate's length L.
      const Rational& value = dp[static_cast<size_t>(x)];
      Rational target = power(rate.product(), n);
      long len = rate.length();
      out.require(power(value * slack, len) >= target && power(value / slack, len) <= target,
                  "DP value outside the bracket at trial " + std::to_string(trial));
    }
  }
  return out;
}

Outcome level_set_certificates() {
  Outcome out;
  std::mt19937_64 rng(2024);
  long deltas = 0;
  for (int trial = 0; trial < 200; ++trial) {
    auto m = testing_support::random_covering(rng);
    auto spec = CocycleSpec::multiplicative(m);
    std::optional<testing_support::OracleRate> star;
    for (NodeId x = 0; x < m.node_count(); ++x) {
      auto r = oracle_cycle_rate(m, x, true);
      if (!star || compare_rates(r.product, r.length, star->product, star->length) < 0) star = r;
    }
    auto means = distinct_cycle_means(m);
    for (size_t i = 0; i + 1 < means.size(); ++i) {
      if (compare_rates(means[i].product, means[i].length, star->product, star->length) < 0) continue;
      auto delta = rational_between(means[i], means[i + 1]);
      out.require(delta.has_value(), "no rational found between consecutive means");
      if (!delta) continue;
      ++deltas;
      auto cert = level_set(m, spec, *delta);
      std::vector<NodeId> expected;
      for (NodeId x = 0; x < m.node_count(); ++x) {
        auto r = oracle_cycle_rate(m, x, true);
        if (compare_rates(r.product, r.length, *delta, 1) >= 0) expected.push_back(x);
      }
      out.require(cert.members == expected, "level set differs from the oracle at trial " + std::to_string(trial));
      out.require(image_of(m, cert.members) == cert.members, "image(S) != S at trial " + std::to_string(trial));
      for (NodeId x : cert.members) {
        auto w = std::find_if(cert.orbit.begin(), cert.orbit.end(), [&](const OrbitWitness& o) { return o.node == x; });
        out.require(w != cert.orbit.end(), "member without orbit witness");
        if (w == cert.orbit.end()) continue;
        const auto& path = w->path;
        bool chained = !path.empty() && path.back() == x && static_cast<int>(path.size()) - 1 <= m.node_count();
        for (size_t j = 0; chained && j + 1 < path.size(); ++j) chained = has_edge(m, path[j], path[j + 1]);
        bool on_source = !path.empty() && std::find(w->source.cycle.begin(), w->source.cycle.end(), path.front()) !=
                                              w->source.cycle.end();
        out.require(chained && on_source, "orbit witness is not a path from its source cycle");
        if (!path.empty()) {
          out.require(forward_max_growth(m, spec, path.front()).rate.at_least(*delta),
                      "witness source has forward growth below delta");
        }
      }
    }
  }
  out.require(deltas > 0, "no thresholds sampled");
  return out;
}

Outcome deterministic_invariance() {
  Outcome out;
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    auto m = testing_support::random_deterministic(rng);
    auto spec = CocycleSpec::multiplicative(m);
    for (NodeId x = 0; x < m.node_count(); ++x) {
      out.require(kappa_plus(m, spec, m.successor(x)) == kappa_plus(m, spec, x),
                  "kappa_plus not invariant at trial " + std::to_string(trial));
    }
    // Thresholds: every cycle value that is rational, and points between distinct means.
    auto means = distinct_cycle_means(m);
    std::vector<Rational> thresholds;
    for (const auto& r : means) {
      if (r.length == 1) thresholds.push_back(r.product);
    }
    for (size_t i = 0; i + 1 < means.size(); ++i) {
      if (auto d = rational_between(means[i], means[i + 1])) thresholds.push_back(*d);
    }
    for (const auto& delta : thresholds) {
      LevelSetCertificate cert;
      try {
        cert = level_set(m, spec, delta);
      } catch (const WholeSpaceError&) {
        continue;  // delta ≤ δ*: the statement only concerns thresholds above δ*
      }
      for (NodeId x = 0; x < m.node_count(); ++x) {
        if (!kappa_plus(m, spec, x).at_least(delta)) continue;
        NodeId y = x;
        bool reached = false;
        for (int step = 0; step <= m.node_count() && !reached; ++step) {
          reached = std::binary_search(cert.members.begin(), cert.members.end(), y);
          y = m.successor(y);
        }
        out.require(reached, "heavy node does not reach the level set at trial " + std::to_string(trial));
      }
    }
  }
  return out;
}

Outcome tail_offsets() {
  Outcome out;
  std::mt19937_64 rng(78);
  for (int trial = 0; trial < 100; ++trial) {
    auto m = testing_support::random_deterministic(rng);
    auto spec = CocycleSpec::multiplicative(m);
    for (NodeId x = 0; x < m.node_count(); ++x) {
      auto tail = tail_limit(m, spec, x);
      // Independent orbit walk: preperiod and cycle length from the first repeat.
      std::vector<int> seen_at(static_cast<size_t>(m.node_count()), -1);
      std::vector<NodeId> orbit;
      for (NodeId y = x; seen_at[static_cast<size_t>(y)] < 0; y = m.successor(y)) {
        seen_at[static_cast<size_t>(y)] = static_cast<int>(orbit.size());
        orbit.push_back(y);
      }
      int preperiod = seen_at[static_cast<size_t>(m.successor(orbit.back()))];
      int cycle_len = static_cast<int>(orbit.size()) - preperiod;
      out.require(tail.l_min == preperiod && tail.cycle_length == cycle_len, "orbit shape mismatch");
      out.require(static_cast<int>(tail.per_offset.size()) == preperiod + cycle_len + 1, "offset count mismatch");
      // The cycle mean from the oracle: product of the cycle weights over its length.
      Rational product = 1;
      NodeId y = orbit[static_cast<size_t>(preperiod)];
      for (int j = 0; j < cycle_len; ++j) {
        for (const auto& e : m.edges())
          if (e.from == y) product *= e.weight;
        y = m.successor(y);
      }
      AlgebraicGrowthRate expected(product, cycle_len);
      for (const auto& k : tail.per_offset) {
        out.require(k == expected && k == tail.kappa, "per-offset limit differs at trial " + std::to_string(trial));
      }
    }
  }
  return out;
}

Outcome oscillation() {
  Outcome out;
  std::vector<int> schedule;
  for (int s = 2; s <= 1024; s *= 2) schedule.push_back(s);
  auto ex = example_oscillating(schedule);
  const int n0 = 16;
  double hi = 0, lo = 1e300;
  const auto& rule = std::get<ExplicitRule>(ex.spec.variant());
  for (int n = 1; n <= 1024; ++n) {
    // κₙ(b)^(1/n) from the exact rule value; the log avoids overflowing a double.
    double r = std::exp(log_of(rule.value(1, n)) / n);
    hi = std::max(hi, r);
    if (n >= n0) lo = std::min(lo, r);
  }
  out.require(hi - lo > 0 && hi / lo > std::exp(0.25), "oscillation ratio " + std::to_string(hi / lo));

  auto flat = example_two_point(LambdaProfile::zero);
  NodeId b = 1, fb = flat.model.successor(b);
  auto limit_b = explicit_rate(flat.spec, b, 1024);
  for (int n : {1, 2, 16, 256, 1024}) out.require(explicit_rate(flat.spec, b, n) == limit_b, "flat variant drifts");
  auto limit_fb = explicit_rate(flat.spec, fb, 1024);
  for (int n : {1, 2, 16, 256, 1024}) out.require(explicit_rate(flat.spec, fb, n) == limit_fb, "image rate drifts");
  out.require(limit_b != limit_fb, "limit is invariant under f");
  return out;
}

struct NamedMap {
  std::string name;
  RationalMap map;
  std::vector<ProjectivePoint> exceptional;
};

std::vector<NamedMap> exceptional_corpus() {
  auto inf = ProjectivePoint::infinity();
  return {{"z^2", make_map(P({1, 0, 0}), P({1})), {pt(0), inf}},
          {"z^3", make_map(P({1, 0, 0, 0}), P({1})), {pt(0), inf}},
          {"z^2-2", make_map(P({1, 0, -2}), P({1})), {inf}},
          {"1/z^2", make_map(P({1}), P({1, 0, 0})), {pt(0), inf}},
          {"(z^2+1)/(z^2-1)", make_map(P({1, 0, 1}), P({1, 0, -1})), {}}};
}

bool same_set(std::vector<ProjectivePoint> a, std::vector<ProjectivePoint> b) {
  if (a.size() != b.size()) return false;
  std::sort(a.begin(), a.end(), point_less);
  std::sort(b.begin(), b.end(), point_less);
  for (size_t i = 0; i < a.size(); ++i)
    if (!same_point(a[i], b[i])) return false;
  return true;
}

Outcome exceptional_sets() {
  Outcome out;
  for (const auto& [name, f, expected] : exceptional_corpus()) {
    auto rep = exceptional_set(f);
    std::vector<ProjectivePoint> got;
    for (const auto& e : rep.points) got.push_back(e.point);
    out.require(same_set(got, expected), name + ": wrong exceptional set");
    for (const auto& e : rep.points) {
      out.require(e.point.is_exact(), name + ": exceptional point not exact");
      // Re-verify the certificate: one preimage b ∈ E with f(b) = a exactly and
      // local degree d, so by degree counting f⁻¹(a) = {b}.
      out.require(e.fiber.points.size() == 1, name + ": fiber certificate has several points");
      if (e.fiber.points.size() != 1) continue;
      const auto& b = e.fiber.points.front().point;
      out.require(same_point(apply(f, b), e.point), name + ": f(b) != a");
      out.require(local_multiplicity(f, b) == f.degree(), name + ": preimage not totally ramified");
      bool inside = std::any_of(got.begin(), got.end(), [&](const auto& p) { return same_point(p, b); });
      out.require(inside, name + ": preimage " + name_of(b) + " leaves E");
    }
  }
  return out;
}

Outcome degree_accounting() {
  Outcome out;
  PreimageOptions opts;
  opts.tol = 1e-8;
  auto corpus = exceptional_corpus();
  auto seed = ProjectivePoint::finite(Scalar(GaussianRational(Rational(1, 3), Rational(1, 7))));
  for (const auto& [name, f, exceptional] : corpus) {
    auto rh = riemann_hurwitz_sum(critical_points(f));
    out.require(rh == 2 * f.degree() - 2, name + ": Riemann-Hurwitz sum " + std::to_string(rh));
    if (f.degree() != 2) continue;
    for (int n = 0; n <= 10; ++n) {
      auto leaves = backward_tree_level(f, seed, n, opts);
      long mass = 0;
      for (const auto& leaf : leaves) mass += leaf.multiplicity;
      out.require(mass == (1L << n), name + ": tree mass at depth " + std::to_string(n));
      // Clustering at 1e-8 keeps every leaf apart for this seed, which is not a
      // postcritical value of any map in the corpus.
      out.require(static_cast<long>(leaves.size()) == (1L << n), name + ": distinct leaves at depth " + std::to_string(n));
    }
    // A critical value: mass still 2ⁿ while leaves merge.
    auto crit = critical_points(f);
    auto v = apply(f, crit.front().point);
    for (int n = 1; n <= 10; ++n) {
      long mass = 0;
      for (const auto& leaf : backward_tree_level(f, v, n, opts)) mass += leaf.multiplicity;
      out.require(mass == (1L << n), name + ": tree mass over a critical value at depth " + std::to_string(n));
    }
  }
  return out;
}

Outcome exceptional_growth() {
  Outcome out;
  for (const auto& [name, f, expected] : exceptional_corpus()) {
    auto rep = exceptional_set(f);
    for (const auto& e : rep.points) {
      Integer dn = 1;
      for (int n = 1; n <= 6; ++n) {
        dn *= f.degree();
        auto r = kappa_backward_analytic(f, e.point, n);
        out.require(!r.partial && r.value == dn,
                    name + ": kappa_backward at " + name_of(e.point) + " n=" + std::to_string(n) + " is " +
                        r.value.get_str());
      }
    }
  }
  return out;
}

Outcome equidistribution() {
  Outcome out;
  auto f = make_map(P({1, 0, 0}), P({1}));
  EquidistributionOptions opts;
  opts.depth = 14;
  opts.circle_band = 0.01;
  auto rep = equidistribution_report(f, {pt(3), pt(0)}, opts);
  const auto& seed3 = rep.seeds.at(0);
  out.require(seed3.total_multiplicity == Integer(1) << 14, "seed 3 mass is not 2^14");
  out.require(seed3.unit_circle_mass >= 0.99, "seed 3 circle mass " + std::to_string(seed3.unit_circle_mass));
  // Recount the band mass from the leaves themselves.
  double band = 0, total = 0;
  auto unit = [](const ProjectivePoint& p) {
    if (p.is_infinity()) return ProjectivePoint::infinity(Mode::approx);
    auto z = p.z().to_complex();
    return std::abs(z) == 0 ? ProjectivePoint::finite(Scalar(Complex(1, 0)))
                            : ProjectivePoint::finite(Scalar(z / std::abs(z)));
  };
  for (const auto& leaf : backward_tree_level(f, pt(3), 14)) {
    total += leaf.multiplicity;
    if (chordal_distance(leaf.point, unit(leaf.point)) <= 0.01) band += leaf.multiplicity;
  }
  out.require(total > 0 && band / total >= 0.99, "recounted circle mass " + std::to_string(band / total));
  const auto& seed0 = rep.seeds.at(1);
  out.require(seed0.dirac.has_value() && same_point(*seed0.dirac, pt(0)), "seed 0 is not a Dirac mass at 0");
  return out;
}

}  // namespace

int main() {
  int failures = 0;
  failures += report(1, "kappa_minus matches the max-cycle-mean oracle and the n = 256 DP bracket", oracle_equivalence,
                     30.0);
  failures += report(2, "level sets are invariant with orbit witnesses", level_set_certificates);
  failures += report(3, "kappa_plus is invariant and heavy orbits reach the level set", deterministic_invariance);
  failures += report(4, "tail limit is independent of the starting offset", tail_offsets);
  failures += report(5, "oscillating cocycle does not converge; flat limit is not invariant", oscillation);
  failures += report(6, "exceptional sets with re-verified fiber certificates", exceptional_sets, 5.0);
  failures += report(7, "backward trees carry mass 2^n; Riemann-Hurwitz sum is 2d - 2", degree_accounting);
  failures += report(8, "exceptional points have backward growth d^n", exceptional_growth);
  failures += report(9, "z^2 preimages of 3 concentrate on the unit circle; seed 0 is a Dirac mass", equidistribution,
                     10.0);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
