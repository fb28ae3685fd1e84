#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "subcocycle/finite.hpp"
#include "subcocycle/io.hpp"
#include "subcocycle/report.hpp"
#include "support.hpp"

using namespace subcocycle;
using namespace subcocycle::io;
using poly::Complex;
using poly::Mode;
using poly::Scalar;

namespace {

const std::filesystem::path kData = SUBCOCYCLE_DATA_DIR;

std::vector<std::filesystem::path> corpus(const std::string& sub) {
  std::vector<std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(kData / sub)) out.push_back(entry.path());
  std::sort(out.begin(), out.end());
  return out;
}

void expect_same_model(const ModelDocument& a, const ModelDocument& b) {
  ASSERT_EQ(a.model.node_count(), b.model.node_count());
  ASSERT_EQ(a.model.edge_count(), b.model.edge_count());
  for (EdgeId e = 0; e < a.model.edge_count(); ++e) {
    EXPECT_EQ(a.model.edge(e).from, b.model.edge(e).from);
    EXPECT_EQ(a.model.edge(e).to, b.model.edge(e).to);
    EXPECT_EQ(a.model.edge(e).weight, b.model.edge(e).weight);
  }
  EXPECT_EQ(a.model.surjectivity(), b.model.surjectivity());
  EXPECT_EQ(a.cocycle, b.cocycle);
  EXPECT_EQ(a.spec.kind(), b.spec.kind());
  EXPECT_EQ(a.spec.bound_m(), b.spec.bound_m());
}

void expect_same_map(const MapDocument& a, const MapDocument& b) {
  ASSERT_EQ(a.declared_degree, b.declared_degree);
  ASSERT_EQ(a.map.mode(), b.map.mode());
  for (int k = 0; k <= a.declared_degree; ++k) {
    EXPECT_TRUE(a.map.p_coeff(k) == b.map.p_coeff(k)) << k;
    EXPECT_TRUE(a.map.q_coeff(k) == b.map.q_coeff(k)) << k;
  }
}

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

// ---- models ---------------------------------------------------------------------

TEST(ModelFile, ParsesG1) {
  auto doc = parse_model(read_file(kData / "models" / "g1.txt"));
  EXPECT_EQ(doc.model.node_count(), 3);
  EXPECT_EQ(doc.model.edge_count(), 4);
  EXPECT_EQ(doc.cocycle, "multiplicative");
  EXPECT_EQ(doc.spec.bound_m(), 3);
  EXPECT_EQ(finite::kappa_minus(doc.model, doc.spec, 0), AlgebraicGrowthRate(2, 1));
}

TEST(ModelFile, SingleLoopAndDefaults) {
  auto doc = parse_model("nodes 1\nedge 0 0 1\n");
  EXPECT_EQ(doc.model.node_count(), 1);
  EXPECT_TRUE(doc.spec.is_multiplicative());
  auto weights = parse_model("nodes 1  # one node\n\n  edge 0 0 3/6 # halved\n");
  EXPECT_EQ(weights.model.edge(0).weight, Rational(1, 2));
  auto decimal = parse_model("nodes 1\nedge 0 0 2.5\n");
  EXPECT_EQ(decimal.model.edge(0).weight, Rational(5, 2));
}

TEST(ModelFile, RejectsWithLineNumbers) {
  EXPECT_EQ(error_of([] { parse_model("nodes 2\nedge 0 1 2\n"); }), "line 1: node 0 has in-degree 0");
  EXPECT_EQ(error_of([] { parse_model("nodes 2\nedge 0 1 2\nedge 1 0 x\n"); }).rfind("line 3: ", 0), 0u);
  EXPECT_EQ(error_of([] { parse_model("nodes 2\nedge 0 2 1\n"); }), "line 2: node 2 out of range 0..1");
  EXPECT_EQ(error_of([] { parse_model("edge 0 0 1\n"); }), "line 1: 'edge' before 'nodes'");
  EXPECT_EQ(error_of([] { parse_model("nodes 1\nedge 0 0 0\n"); }), "line 2: edge weight must be positive");
  EXPECT_EQ(error_of([] { parse_model("nodes 1\nedge 0 0 -1\n"); }), "line 2: edge weight must be positive");
  EXPECT_EQ(error_of([] { parse_model("nodes 1\nloop 0\n"); }), "line 2: unknown directive 'loop'");
  EXPECT_EQ(error_of([] { parse_model("nodes 1\nnodes 1\n"); }), "line 2: duplicate 'nodes' line");
  EXPECT_EQ(error_of([] { parse_model("# empty\n"); }), "missing 'nodes' line");
  EXPECT_EQ(error_of([] { parse_model("nodes 1\nedge 0 0\n"); }), "line 2: expected 'edge FROM TO WEIGHT'");
  EXPECT_EQ(error_of([] { parse_model("nodes 1\ncocycle explicit nope\nedge 0 0 1\n"); }).rfind("line 2: unknown", 0),
            0u);
  EXPECT_THROW(parse_model("nodes 1\nedge 0 0 1/0\n"), ParseError);
}

TEST(ModelFile, RelaxedSurjectivityAndExplicitRules) {
  auto doc = parse_model(read_file(kData / "models" / "oscillating.txt"));
  EXPECT_EQ(doc.model.surjectivity(), Surjectivity::relaxed);
  EXPECT_TRUE(doc.spec.is_explicit());
  EXPECT_EQ(doc.spec.bound_m(), finite::euler_approximant());
  for (const auto& name : builtin_rule_names()) {
    auto spec = builtin_rule(name);
    const auto& rule = std::get<ExplicitRule>(spec.variant());
    EXPECT_EQ(rule.value(0, 0), 1) << name;
    EXPECT_LE(rule.value(0, 1), spec.bound_m()) << name;
  }
  const auto& doubling = std::get<ExplicitRule>(builtin_rule("doubling").variant());
  EXPECT_EQ(doubling.value(1, 10), 1024);
}

TEST(ModelFile, RoundTripsCorpus) {
  for (const auto& path : corpus("models")) {
    auto first = parse_model(read_file(path));
    auto second = parse_model(emit_model(first));
    expect_same_model(first, second);
    EXPECT_EQ(emit_model(first), emit_model(second)) << path;
  }
}

TEST(ModelFile, RoundTripsRandomModels) {
  std::mt19937_64 rng(401);
  std::uniform_int_distribution<int> den(1, 7);
  for (int trial = 0; trial < 200; ++trial) {
    auto base = testing_support::random_covering(rng);
    std::vector<Edge> edges = base.edges();
    for (auto& e : edges) e.weight /= den(rng);
    auto model = CoveringModel::create(base.node_count(), edges);
    ModelDocument doc{model, CocycleSpec::multiplicative(model), "multiplicative"};
    auto parsed = parse_model(emit_model(doc));
    expect_same_model(doc, parsed);
  }
}

// ---- scalars and points ----------------------------------------------------------

TEST(Scalars, ExactForms) {
  EXPECT_TRUE(parse_scalar("3", Mode::exact) == Scalar(GaussianRational(3)));
  EXPECT_TRUE(parse_scalar("-1/2", Mode::exact) == Scalar(GaussianRational(Rational(-1, 2))));
  EXPECT_TRUE(parse_scalar("0.25", Mode::exact) == Scalar(GaussianRational(Rational(1, 4))));
  EXPECT_TRUE(parse_scalar("i", Mode::exact) == Scalar(GaussianRational(0, 1)));
  EXPECT_TRUE(parse_scalar("-i", Mode::exact) == Scalar(GaussianRational(0, -1)));
  EXPECT_TRUE(parse_scalar("2-i", Mode::exact) == Scalar(GaussianRational(2, -1)));
  EXPECT_TRUE(parse_scalar("1/2+3/4i", Mode::exact) == Scalar(GaussianRational(Rational(1, 2), Rational(3, 4))));
  EXPECT_TRUE(parse_scalar("-3/2i", Mode::exact) == Scalar(GaussianRational(0, Rational(-3, 2))));
  EXPECT_TRUE(parse_scalar("1e-2+2e1i", Mode::exact) == Scalar(GaussianRational(Rational(1, 100), 20)));
  EXPECT_THROW(parse_scalar("", Mode::exact), InputError);
  EXPECT_THROW(parse_scalar("1+", Mode::exact), InputError);
  EXPECT_THROW(parse_scalar("abc", Mode::exact), InputError);
}

TEST(Scalars, ApproxFormsRoundTripThroughText) {
  EXPECT_TRUE(parse_scalar("0.5-1.5i", Mode::approx) == Scalar(Complex(0.5, -1.5)));
  EXPECT_TRUE(parse_scalar("1/4", Mode::approx) == Scalar(Complex(0.25, 0)));
  EXPECT_THROW(parse_scalar("nan", Mode::approx), InputError);
  EXPECT_THROW(parse_scalar("1e400", Mode::approx), InputError);
  std::mt19937_64 rng(402);
  std::normal_distribution<double> gauss(0.0, 1e3);
  for (int i = 0; i < 1000; ++i) {
    Scalar z(Complex(gauss(rng), gauss(rng) * 1e-30));
    EXPECT_TRUE(parse_scalar(poly::to_string(z), Mode::approx) == z) << poly::to_string(z);
  }
}

TEST(Points, InfinityAndFinite) {
  EXPECT_TRUE(parse_point("inf", Mode::exact).is_infinity());
  EXPECT_TRUE(parse_point("∞", Mode::approx).is_infinity());
  EXPECT_EQ(parse_point("infinity", Mode::approx).mode(), Mode::approx);
  EXPECT_TRUE(riemann::same_point(parse_point("1+i", Mode::exact),
                                  riemann::ProjectivePoint::finite(Scalar(GaussianRational(1, 1)))));
}

// ---- maps ---------------------------------------------------------------------------

TEST(MapFile, ParsesAndValidates) {
  auto square = parse_map(read_file(kData / "maps" / "square.txt"));
  EXPECT_EQ(square.map.degree(), 2);
  EXPECT_EQ(square.map.mode(), Mode::exact);
  auto approx = parse_map(read_file(kData / "maps" / "square_approx.txt"));
  EXPECT_EQ(approx.map.mode(), Mode::approx);
  auto cubic = parse_map("degree 3\nP 0 0 1 0\nQ 1 0 0 1\n");
  EXPECT_EQ(cubic.map.degree(), 3);
  // A declared degree above both polynomial degrees makes [1 : 0] a common zero.
  EXPECT_THROW(parse_map("degree 3\nP 0 1 0 0\nQ 0 0 0 1\n"), ParseError);

  EXPECT_EQ(error_of([] { parse_map("degree 2\nP 1 0\nQ 0 0 1\n"); }),
            "line 2: P needs 3 coefficients c_D ... c_0, got 2");
  EXPECT_EQ(error_of([] { parse_map("degree 2\nP 1 0 0\nQ 0 1 0\n"); }),
            "invalid map: P and Q share a projective zero (resultant is 0)");
  EXPECT_EQ(error_of([] { parse_map("degree 1\nP 1 0\nQ 0 1\n"); }), "line 1: degree must be in 2..4096");
  EXPECT_EQ(error_of([] { parse_map("degree 2\nmode fuzzy\n"); }), "line 2: expected 'mode exact|approx'");
  EXPECT_EQ(error_of([] { parse_map("degree 2\nP 1 0 0\n"); }), "missing 'Q' line");
  EXPECT_EQ(error_of([] { parse_map("degree 2\nP 1 0 q\nQ 0 0 1\n"); }).rfind("line 2: ", 0), 0u);
}

TEST(MapFile, RoundTripsCorpus) {
  for (const auto& path : corpus("maps")) {
    auto first = parse_map(read_file(path));
    auto second = parse_map(emit_map(first));
    expect_same_map(first, second);
    EXPECT_EQ(emit_map(first), emit_map(second)) << path;
  }
}

// ---- reports ------------------------------------------------------------------------------

TEST(Reports, DigestAndRates) {
  EXPECT_EQ(report::sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(report::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  auto rate = report::rate_json(AlgebraicGrowthRate(3, 2));
  EXPECT_EQ(rate["display"], "(3/1)^(1/2) ≈ 1.7320508076");
  EXPECT_EQ(rate["exact"], "(3/1)^(1/2)");
  EXPECT_EQ(report::nodes_json({}).dump(), "[]");
}

TEST(Reports, CsvQuoting) {
  report::Report rep{report::make_document("x", "in", "", report::Json::object()),
                     report::CsvTable{{"a", "b"}, {{"1,2", "say \"hi\""}, {"plain", ""}}}};
  EXPECT_EQ(report::emit_report(rep, report::Format::csv), "a,b\n\"1,2\",\"say \"\"hi\"\"\"\nplain,\n");
  rep.table.reset();
  EXPECT_EQ(report::emit_report(rep, report::Format::csv), "");
  auto text = report::emit_report(rep, report::Format::structured);
  EXPECT_EQ(text.back(), '\n');
  EXPECT_NE(text.find("\"sha256\": \"e3b0c442"), std::string::npos);
}
