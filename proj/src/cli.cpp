#include "subcocycle/cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>

#include "subcocycle/finite.hpp"
#include "subcocycle/io.hpp"
#include "subcocycle/kernels.hpp"
#include "subcocycle/report.hpp"
#include "subcocycle/riemann.hpp"

namespace subcocycle::cli {

namespace {

using report::Json;
using report::CsvTable;
using report::Report;
using riemann::ProjectivePoint;

constexpr size_t kMaxListedViolations = 100;

struct Output {
  std::string path;
  std::string format = "structured";
};

struct Engine {
  std::string execution = "parallel";
  Execution mode() const { return execution == "serial" ? Execution::serial : Execution::parallel; }
};

// Runs `body`, turning library errors into an error status on the report and
// the matching exit code.
int guarded(Report& rep, std::ostream& err, const std::function<int()>& body) {
  auto fail = [&](const char* kind, const std::exception& e, int code) {
    rep.document["status"] = "error";
    rep.document["error"] = {{"kind", kind}, {"message", e.what()}};
    err << "error: " << e.what() << "\n";
    return code;
  };
  try {
    return body();
  } catch (const InputError& e) {
    return fail("input", e, kInputError);
  } catch (const NumericError& e) {
    return fail("numeric", e, kNumericError);
  } catch (const std::exception& e) {
    return fail("internal", e, kNumericError);
  }
}

void warn(Report& rep, const std::string& message) { rep.document["warnings"].push_back(message); }

std::string double_string(double value) { return decimal_string(value, 10); }

// n-th root of a nonnegative exact value, for display.
double nth_root(const Rational& value, int n) {
  if (sgn(value) == 0) return 0.0;
  return std::exp(log_abs(value) / n);
}
double nth_root(const Integer& value, int n) { return nth_root(Rational(value), n); }

Json cycle_json(const std::vector<NodeId>& cycle, const AlgebraicGrowthRate& mean) {
  return {{"cycle", report::nodes_json(cycle)}, {"mean", report::rate_json(mean)}};
}

Json model_json(const io::ModelDocument& doc) {
  return {{"nodes", doc.model.node_count()},
          {"edges", doc.model.edge_count()},
          {"cocycle", doc.cocycle},
          {"bound_M", doc.spec.bound_m().get_str()},
          {"deterministic", doc.model.is_deterministic()},
          {"surjective", doc.model.is_surjective()}};
}

Json map_json(const io::MapDocument& doc) {
  return {{"degree", doc.map.degree()},
          {"mode", poly::to_string(doc.map.mode())},
          {"P", poly::to_string(doc.map.p())},
          {"Q", poly::to_string(doc.map.q())}};
}

Json fiber_json(const riemann::PreimageFiber& fiber) {
  Json points = Json::array();
  for (const auto& p : fiber.points) {
    points.push_back({{"point", report::point_string(p.point)}, {"multiplicity", p.multiplicity}});
  }
  return {{"base", report::point_string(fiber.base)}, {"points", std::move(points)}};
}

bool same_point_set(std::vector<ProjectivePoint> a, std::vector<ProjectivePoint> b, double tol) {
  if (a.size() != b.size()) return false;
  std::sort(a.begin(), a.end(), riemann::point_less);
  std::sort(b.begin(), b.end(), riemann::point_less);
  for (size_t i = 0; i < a.size(); ++i) {
    if (!riemann::same_point(a[i], b[i], tol)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// finite

int finite_analyze(const io::ModelDocument& doc, Report& rep, const std::string& delta_text, bool sigma,
                   int sigma_max_n, Execution execution) {
  const auto& model = doc.model;
  Json& result = rep.document["result"];
  result["model"] = model_json(doc);
  const Rational delta = parse_rational(delta_text);
  if (sgn(delta) <= 0) throw InputError("delta must be positive");

  auto analysis = finite::CycleAnalysis::build(model, doc.spec, execution);
  Json components = Json::array();
  for (size_t c = 0; c < analysis.components().members.size(); ++c) {
    const auto& cyc = analysis.component_cycles()[c];
    components.push_back({{"id", c},
                          {"members", report::nodes_json(analysis.components().members[c])},
                          {"critical_cycle", cyc ? cycle_json(cyc->nodes, cyc->mean) : Json(nullptr)}});
  }
  result["components"] = std::move(components);

  Json kappa = Json::array();
  CsvTable table{{"node", "product", "length", "approx"}, {}};
  for (NodeId x = 0; x < model.node_count(); ++x) {
    const auto& up = analysis.upstream(x);
    if (!up) {
      kappa.push_back({{"node", x}, {"rate", nullptr}, {"cycle", nullptr}});
      table.rows.push_back({std::to_string(x), "", "", ""});
      continue;
    }
    kappa.push_back({{"node", x}, {"rate", report::rate_json(up->mean)}, {"cycle", report::nodes_json(up->cycle)}});
    table.rows.push_back({std::to_string(x), up->mean.product().get_str(), std::to_string(up->mean.length()),
                          double_string(up->mean.approx())});
  }
  result["kappa_minus"] = std::move(kappa);
  rep.table = std::move(table);
  const auto& star = analysis.delta_star();
  result["delta_star"] = star ? cycle_json(star->cycle, star->mean) : Json(nullptr);

  result["level_set"] = nullptr;
  if (sigma) result["sigma"] = nullptr;
  try {
    auto cert = finite::level_set(analysis, model, delta);
    Json invariance = Json::array();
    for (const auto& w : cert.invariance) {
      invariance.push_back({{"node", w.node}, {"in_edge", w.in_edge}, {"out_edge", w.out_edge}});
    }
    Json orbit = Json::array();
    bool orbit_ok = true;
    for (const auto& w : cert.orbit) {
      orbit.push_back({{"node", w.node},
                       {"source", cycle_json(w.source.cycle, w.source.mean)},
                       {"path", report::nodes_json(w.path)}});
      orbit_ok = orbit_ok && static_cast<int>(w.path.size()) <= model.node_count() + 1 && w.source.mean.at_least(delta);
    }
    bool image_ok = model.image(cert.members) == cert.members;
    result["level_set"] = {{"delta", delta.get_str()},
                           {"members", report::nodes_json(cert.members)},
                           {"invariance", std::move(invariance)},
                           {"orbit", std::move(orbit)},
                           {"checks", {{"image_equals_set", image_ok}, {"orbit_witnesses_valid", orbit_ok}}}};
  } catch (const finite::WholeSpaceError& e) {
    warn(rep, e.what());
    throw;
  }

  if (sigma) {
    finite::SigmaOptions options;
    options.execution = execution;
    options.max_n = sigma_max_n;
    auto trace = finite::sigma_construct(model, doc.spec, delta, options);
    result["sigma"] = {{"delta", trace.delta.get_str()},
                       {"members", report::nodes_json(trace.sigma)},
                       {"n1", trace.n1},
                       {"delta0", trace.delta0 ? report::rate_json(*trace.delta0) : Json(nullptr)},
                       {"residual", report::nodes_json(trace.residual)},
                       {"constants",
                        {{"M", trace.bound_m.get_str()}, {"N", trace.big_n}, {"m", trace.m}, {"n0", trace.n0}}},
                       {"delta_star", report::rate_json(trace.delta_star)}};
  }
  return kOk;
}

int finite_kappa_minus(const io::ModelDocument& doc, Report& rep, NodeId x, int max_n, Execution execution) {
  const auto& model = doc.model;
  model.check_node(x);
  if (max_n < 1 || max_n > 100000) throw InputError("--max-n must be in 1..100000");
  Json& result = rep.document["result"];
  result["model"] = model_json(doc);
  result["node"] = x;

  std::vector<Rational> values;
  if (auto weights = doc.spec.flat_weights(model)) {
    std::vector<Rational> v(static_cast<size_t>(model.node_count()), Rational(1));
    for (int n = 1; n <= max_n; ++n) {
      v = kernels::backward_step(model, *weights, v, execution);
      values.push_back(v[static_cast<size_t>(x)]);
    }
  } else {
    for (int n = 1; n <= max_n; ++n) {
      values.push_back(finite::kappa_backward_all(model, doc.spec, n, execution)[static_cast<size_t>(x)]);
    }
  }

  Json series = Json::array();
  CsvTable table{{"n", "value", "root_approx"}, {}};
  for (int n = 1; n <= max_n; ++n) {
    const Rational& value = values[static_cast<size_t>(n) - 1];
    double root = nth_root(value, n);
    series.push_back({{"n", n}, {"value", value.get_str()}, {"root_approx", root}});
    table.rows.push_back({std::to_string(n), value.get_str(), double_string(root)});
  }
  result["series"] = std::move(series);
  rep.table = std::move(table);
  if (sgn(values.back()) == 0) warn(rep, "node " + std::to_string(x) + " has no backward path of length " + std::to_string(max_n));

  result["limit"] = nullptr;
  try {
    auto rate = finite::kappa_minus(model, doc.spec, x);
    // κ₋(x)^n / M^k ≤ κ₋ₙ(x) ≤ κ₋(x)^n · M^k at n = max_n, raised to the power L.
    const int k = model.node_count();
    const unsigned long length = static_cast<unsigned long>(rate.length());
    Rational value_l = pow(values.back(), length);
    Rational rate_n = pow(rate.product(), static_cast<unsigned long>(max_n));
    Rational slack = pow(doc.spec.bound_m(), static_cast<unsigned long>(k) * length);
    bool holds = value_l * slack >= rate_n && value_l <= rate_n * slack;
    result["limit"] = {{"rate", report::rate_json(rate)},
                       {"bounds", {{"n", max_n}, {"k", k}, {"M", doc.spec.bound_m().get_str()}, {"holds", holds}}}};
  } catch (const InputError& e) {
    warn(rep, std::string("limit not available: ") + e.what());
  }
  return kOk;
}

int finite_tail(const io::ModelDocument& doc, Report& rep, NodeId x) {
  const auto& model = doc.model;
  model.check_node(x);
  Json& result = rep.document["result"];
  result["model"] = model_json(doc);
  result["node"] = x;
  auto shape = finite::orbit_shape(model, x);
  result["orbit"] = {{"preperiod", shape.preperiod}, {"cycle", report::nodes_json(shape.cycle)}};

  auto tail = finite::tail_limit(model, doc.spec, x);
  Json offsets = Json::array();
  CsvTable table{{"offset", "product", "length", "approx"}, {}};
  bool offsets_agree = true;
  for (size_t l = 0; l < tail.per_offset.size(); ++l) {
    const auto& r = tail.per_offset[l];
    offsets.push_back({{"offset", l}, {"rate", report::rate_json(r)}});
    table.rows.push_back({std::to_string(l), r.product().get_str(), std::to_string(r.length()), double_string(r.approx())});
    offsets_agree = offsets_agree && r == tail.kappa;
  }
  result["tail"] = {{"kappa", report::rate_json(tail.kappa)},
                    {"l_min", tail.l_min},
                    {"cycle_length", tail.cycle_length},
                    {"per_offset", std::move(offsets)},
                    {"offsets_agree", offsets_agree}};
  rep.table = std::move(table);

  auto here = finite::kappa_plus(model, doc.spec, x);
  auto next = finite::kappa_plus(model, doc.spec, model.successor(x));
  result["kappa_plus"] = {{"rate", report::rate_json(here)},
                          {"at_image", report::rate_json(next)},
                          {"invariant", here == next}};
  return kOk;
}

int finite_check_cocycle(const io::ModelDocument& doc, Report& rep, int depth) {
  if (depth < 1 || depth > 24) throw InputError("--depth must be in 1..24");
  Json& result = rep.document["result"];
  result["model"] = model_json(doc);
  auto check = check_submultiplicative(doc.spec, doc.model, depth);
  Json violations = Json::array();
  CsvTable table{{"kind", "n", "m", "path", "lhs", "rhs"}, {}};
  for (size_t i = 0; i < check.violations.size() && i < kMaxListedViolations; ++i) {
    const auto& v = check.violations[i];
    const char* kind = v.kind == SubmultiplicativityViolation::Kind::split ? "split" : "bound";
    violations.push_back({{"kind", kind},
                          {"n", v.n},
                          {"m", v.m},
                          {"path", report::nodes_json(v.witness.nodes)},
                          {"lhs", v.lhs.get_str()},
                          {"rhs", v.rhs.get_str()}});
    std::string path;
    for (NodeId node : v.witness.nodes) path += (path.empty() ? "" : " ") + std::to_string(node);
    table.rows.push_back({kind, std::to_string(v.n), std::to_string(v.m), path, v.lhs.get_str(), v.rhs.get_str()});
  }
  result["check"] = {{"depth", check.depth},
                     {"paths_checked", check.paths_checked},
                     {"splits_checked", check.splits_checked},
                     {"holds", check.ok()},
                     {"violations_total", check.violations.size()},
                     {"violations", std::move(violations)}};
  rep.table = std::move(table);
  if (!check.ok()) {
    throw InputError("cocycle is not sub-multiplicative: " + std::to_string(check.violations.size()) +
                     " violation(s) up to depth " + std::to_string(depth));
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// rational

int rational_exceptional(const io::MapDocument& doc, Report& rep, double tol) {
  const auto& f = doc.map;
  Json& result = rep.document["result"];
  result["map"] = map_json(doc);

  riemann::MultiplicityOptions options{tol};
  auto critical = riemann::critical_points(f, options);
  Json crit = Json::array();
  for (const auto& c : critical) {
    crit.push_back({{"point", report::point_string(c.point)}, {"multiplicity", c.multiplicity}});
  }
  result["critical_points"] = std::move(crit);
  int rh = riemann::riemann_hurwitz_sum(critical);
  result["riemann_hurwitz"] = {{"sum", rh}, {"expected", 2 * f.degree() - 2}, {"holds", rh == 2 * f.degree() - 2}};

  auto ex = riemann::exceptional_set(f, options);
  Json ramified = Json::array();
  for (const auto& c : ex.totally_ramified) ramified.push_back(report::point_string(c.point));
  result["totally_ramified"] = std::move(ramified);

  Json points = Json::array();
  CsvTable table{{"point", "period", "fiber_point", "multiplicity"}, {}};
  std::vector<ProjectivePoint> set;
  for (size_t i = 0; i < ex.points.size(); ++i) {
    const auto& e = ex.points[i];
    set.push_back(e.point);
    Json growth = Json::array();
    for (const auto& g : ex.growth_checks[i]) growth.push_back(g.get_str());
    points.push_back({{"point", report::point_string(e.point)},
                      {"period", e.period},
                      {"fiber", fiber_json(e.fiber)},
                      {"kappa_backward", std::move(growth)}});
    for (const auto& p : e.fiber.points) {
      table.rows.push_back({report::point_string(e.point), std::to_string(e.period), report::point_string(p.point),
                            std::to_string(p.multiplicity)});
    }
  }
  result["exceptional"] = std::move(points);
  rep.table = std::move(table);

  riemann::PreimageOptions pre{tol, 200};
  std::vector<ProjectivePoint> image;
  for (const auto& p : set) image.push_back(riemann::apply(f, p));
  result["certificate"] = {
      {"backward_image_equals_set", set.empty() || same_point_set(riemann::backward_image(f, set, 1, pre), set, tol)},
      {"image_equals_set", same_point_set(image, set, tol)}};
  return kOk;
}

int rational_backward(const io::MapDocument& doc, Report& rep, const std::string& point_text, int depth, long budget,
                      double tol, int max_iter) {
  if (depth < 0 || depth > 4096) throw InputError("--depth must be in 0..4096");
  if (budget < 1) throw InputError("--budget must be positive");
  const auto& f = doc.map;
  auto x = io::parse_point(point_text, f.mode());
  Json& result = rep.document["result"];
  result["map"] = map_json(doc);
  result["point"] = report::point_string(x);
  result["depth"] = depth;

  riemann::BackwardSearchOptions options;
  options.budget = budget;
  options.preimage = {tol, max_iter};
  auto r = riemann::kappa_backward_analytic(f, x, depth, options);
  Json witness = Json::array();
  CsvTable table{{"step", "point"}, {}};
  for (size_t i = 0; i < r.witness.size(); ++i) {
    witness.push_back(report::point_string(r.witness[i]));
    table.rows.push_back({std::to_string(i), report::point_string(r.witness[i])});
  }
  result["value"] = r.value.get_str();
  result["root_approx"] = depth > 0 ? nth_root(r.value, depth) : 1.0;
  result["upper_bound"] = pow(Integer(f.degree()), static_cast<unsigned long>(depth)).get_str();
  result["witness"] = std::move(witness);
  result["complete"] = !r.partial;
  result["expanded"] = r.expanded;
  rep.table = std::move(table);
  if (r.partial) {
    rep.document["status"] = "partial";
    warn(rep, "search budget of " + std::to_string(budget) + " expansions exhausted; value is a lower bound");
    return kPartial;
  }
  return kOk;
}

int rational_fiber(const io::MapDocument& doc, Report& rep, const std::string& point_text, double tol, int max_iter) {
  const auto& f = doc.map;
  auto x = io::parse_point(point_text, f.mode());
  Json& result = rep.document["result"];
  result["map"] = map_json(doc);
  auto fiber = riemann::preimages(f, x, {tol, max_iter});

  Json points = Json::array();
  CsvTable table{{"point", "multiplicity", "local_multiplicity"}, {}};
  int total = 0;
  bool images_ok = true;
  for (const auto& p : fiber.points) {
    total += p.multiplicity;
    Json local = nullptr;
    try {
      local = riemann::local_multiplicity(f, p.point, {tol});
    } catch (const riemann::AmbiguousMultiplicityError& e) {
      warn(rep, e.what());
    }
    double miss = riemann::chordal_distance(riemann::apply(f, p.point), x);
    images_ok = images_ok && miss <= std::sqrt(tol);
    points.push_back({{"point", report::point_string(p.point)},
                      {"multiplicity", p.multiplicity},
                      {"local_multiplicity", local},
                      {"image_distance", miss}});
    table.rows.push_back({report::point_string(p.point), std::to_string(p.multiplicity),
                          local.is_null() ? "" : std::to_string(local.get<int>())});
  }
  result["base"] = report::point_string(x);
  result["points"] = std::move(points);
  result["checks"] = {{"total_multiplicity", total}, {"degree", f.degree()}, {"sums_to_degree", total == f.degree()},
                      {"images_match", images_ok}};
  rep.table = std::move(table);
  return kOk;
}

int rational_equidist(const io::MapDocument& doc, Report& rep, const std::vector<std::string>& seed_texts,
                      const riemann::EquidistributionOptions& options) {
  if (seed_texts.empty()) throw InputError("--seeds needs at least one point");
  const auto& f = doc.map;
  std::vector<ProjectivePoint> seeds;
  for (const auto& s : seed_texts) seeds.push_back(io::parse_point(s, f.mode()));
  Json& result = rep.document["result"];
  result["map"] = map_json(doc);
  auto r = riemann::equidistribution_report(f, seeds, options);

  Json out = Json::array();
  CsvTable table{{"seed", "height_cell", "angle_cell", "mass"}, {}};
  for (const auto& s : r.seeds) {
    Json histogram = Json::array();
    for (int h = 0; h < r.cells; ++h) {
      Json row = Json::array();
      for (int a = 0; a < r.cells; ++a) {
        double mass = s.histogram[static_cast<size_t>(h * r.cells + a)];
        row.push_back(mass);
        table.rows.push_back({report::point_string(s.seed), std::to_string(h), std::to_string(a), double_string(mass)});
      }
      histogram.push_back(std::move(row));
    }
    Json depth_tv = Json::array();
    for (double tv : s.depth_tv) depth_tv.push_back(tv);
    out.push_back({{"seed", report::point_string(s.seed)},
                   {"total_multiplicity", s.total_multiplicity.get_str()},
                   {"distinct_points", s.distinct_points},
                   {"unit_circle_mass", s.unit_circle_mass},
                   {"dirac", s.dirac ? Json(report::point_string(*s.dirac)) : Json(nullptr)},
                   {"depth_tv", std::move(depth_tv)},
                   {"histogram", std::move(histogram)}});
  }
  result["depth"] = r.depth;
  result["cells"] = r.cells;
  result["seeds"] = std::move(out);
  result["pairwise_tv"] = r.pairwise_tv;
  rep.table = std::move(table);
  return kOk;
}

// ---------------------------------------------------------------------------
// Dispatch

void add_output_options(CLI::App* cmd, Output& output) {
  cmd->add_option("--out", output.path, "Write the report to this file instead of stdout");
  cmd->add_option("--format", output.format, "Report format")
      ->check(CLI::IsMember({"structured", "csv"}))
      ->capture_default_str();
}

int write_report(const Report& rep, const Output& output, std::ostream& out, std::ostream& err) {
  auto format = output.format == "csv" ? report::Format::csv : report::Format::structured;
  std::string text = report::emit_report(rep, format);
  if (output.path.empty()) {
    out << text;
    return kOk;
  }
  std::ofstream file(output.path, std::ios::binary);
  file << text;
  if (!file) {
    err << "error: cannot write '" << output.path << "'\n";
    return kInputError;
  }
  return kOk;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sub-multiplicative cocycles on finite covering models and rational maps", "subcocycle"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP thread count (0 keeps the runtime default)")->check(CLI::NonNegativeNumber);
  app.set_version_flag("--version", report::tool_version());

  Output output;
  Engine engine;
  std::string file;
  std::function<int(std::string_view, Report&)> action;
  std::string command;
  Json config;

  // finite ------------------------------------------------------------------
  auto* finite_cmd = app.add_subcommand("finite", "Exact analysis of finite covering models");
  finite_cmd->require_subcommand(1);

  std::string delta_text;
  bool sigma = false;
  int sigma_max_n = finite::SigmaOptions{}.max_n;
  auto* analyze = finite_cmd->add_subcommand("analyze", "Backward growth table, level set and certificates");
  analyze->add_option("FILE", file, "Model file")->required();
  analyze->add_option("--delta", delta_text, "Threshold (rational)")->required();
  analyze->add_flag("--sigma", sigma, "Also run the Sigma construction");
  analyze->add_option("--sigma-max-n", sigma_max_n, "Largest certified length for Sigma")->capture_default_str();

  int node = 0;
  int max_n = 64;
  auto* kminus = finite_cmd->add_subcommand("kappa-minus", "Backward values up to a length, with the limit");
  kminus->add_option("FILE", file, "Model file")->required();
  kminus->add_option("--node", node, "Node id")->required();
  kminus->add_option("--max-n", max_n, "Largest length")->capture_default_str();

  auto* tail = finite_cmd->add_subcommand("tail", "Forward limit along a deterministic orbit");
  tail->add_option("FILE", file, "Model file")->required();
  tail->add_option("--node", node, "Node id")->required();

  int depth = 8;
  auto* check = finite_cmd->add_subcommand("check-cocycle", "Check sub-multiplicativity on all short paths");
  check->add_option("FILE", file, "Model file")->required();
  check->add_option("--depth", depth, "Longest path length checked")->capture_default_str();

  for (auto* cmd : {analyze, kminus, tail, check}) {
    add_output_options(cmd, output);
    cmd->add_option("--execution", engine.execution, "Kernel execution")
        ->check(CLI::IsMember({"serial", "parallel"}))
        ->capture_default_str();
  }

  // rational ----------------------------------------------------------------
  auto* rational_cmd = app.add_subcommand("rational", "Rational maps of the Riemann sphere");
  rational_cmd->require_subcommand(1);

  double tol = riemann::kDefaultTolerance;
  int max_iter = riemann::PreimageOptions{}.max_iter;
  std::string point_text;
  long budget = riemann::BackwardSearchOptions{}.budget;
  std::vector<std::string> seeds;
  riemann::EquidistributionOptions equi;

  auto* exceptional = rational_cmd->add_subcommand("exceptional", "Exceptional set with fiber certificates");
  exceptional->add_option("FILE", file, "Map file")->required();

  auto* backward = rational_cmd->add_subcommand("backward", "Largest local degree over the backward tree");
  backward->add_option("FILE", file, "Map file")->required();
  backward->add_option("--point", point_text, "Target point (complex or inf)")->required();
  backward->add_option("--depth", depth, "Tree depth")->required();
  backward->add_option("--budget", budget, "Fiber expansions before the search stops")->capture_default_str();

  auto* fiber = rational_cmd->add_subcommand("fiber", "Preimages of a point with multiplicities");
  fiber->add_option("FILE", file, "Map file")->required();
  fiber->add_option("--point", point_text, "Target point (complex or inf)")->required();

  auto* equidist = rational_cmd->add_subcommand("equidist", "Distribution of backward trees on the sphere");
  equidist->add_option("FILE", file, "Map file")->required();
  equidist->add_option("--seeds", seeds, "Seed points, comma separated")->required()->delimiter(',');
  equidist->add_option("--depth", equi.depth, "Tree depth")->capture_default_str();
  equidist->add_option("--cells", equi.cells, "Cells per sphere coordinate")->capture_default_str();
  equidist->add_option("--circle-band", equi.circle_band, "Chordal band around the unit circle")->capture_default_str();

  for (auto* cmd : {exceptional, backward, fiber, equidist}) {
    add_output_options(cmd, output);
    cmd->add_option("--tol", tol, "Clustering and matching tolerance")->capture_default_str();
  }
  for (auto* cmd : {backward, fiber}) {
    cmd->add_option("--max-iter", max_iter, "Root finder iteration cap")->capture_default_str();
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    // Help and version requests.
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  if (threads > 0) omp_set_num_threads(threads);

  auto load_model = [](std::string_view bytes) { return io::parse_model(bytes); };
  auto load_map = [](std::string_view bytes) { return io::parse_map(bytes); };
  const Json finite_engine = {{"execution", engine.execution}};

  if (analyze->parsed()) {
    command = "finite analyze";
    config = {{"delta", delta_text}, {"sigma", sigma}, {"sigma_max_n", sigma_max_n}, {"engine", finite_engine}};
    action = [&](std::string_view bytes, Report& rep) {
      return finite_analyze(load_model(bytes), rep, delta_text, sigma, sigma_max_n, engine.mode());
    };
  } else if (kminus->parsed()) {
    command = "finite kappa-minus";
    config = {{"node", node}, {"max_n", max_n}, {"engine", finite_engine}};
    action = [&](std::string_view bytes, Report& rep) {
      return finite_kappa_minus(load_model(bytes), rep, node, max_n, engine.mode());
    };
  } else if (tail->parsed()) {
    command = "finite tail";
    config = {{"node", node}, {"engine", finite_engine}};
    action = [&](std::string_view bytes, Report& rep) { return finite_tail(load_model(bytes), rep, node); };
  } else if (check->parsed()) {
    command = "finite check-cocycle";
    config = {{"depth", depth}, {"engine", finite_engine}};
    action = [&](std::string_view bytes, Report& rep) { return finite_check_cocycle(load_model(bytes), rep, depth); };
  } else if (exceptional->parsed()) {
    command = "rational exceptional";
    config = {{"tol", tol}};
    action = [&](std::string_view bytes, Report& rep) { return rational_exceptional(load_map(bytes), rep, tol); };
  } else if (backward->parsed()) {
    command = "rational backward";
    config = {{"point", point_text}, {"depth", depth}, {"budget", budget}, {"tol", tol}, {"max_iter", max_iter}};
    action = [&](std::string_view bytes, Report& rep) {
      return rational_backward(load_map(bytes), rep, point_text, depth, budget, tol, max_iter);
    };
  } else if (fiber->parsed()) {
    command = "rational fiber";
    config = {{"point", point_text}, {"tol", tol}, {"max_iter", max_iter}};
    action = [&](std::string_view bytes, Report& rep) {
      return rational_fiber(load_map(bytes), rep, point_text, tol, max_iter);
    };
  } else {
    command = "rational equidist";
    equi.tol = tol;
    config = {{"seeds", seeds}, {"depth", equi.depth}, {"cells", equi.cells}, {"circle_band", equi.circle_band},
              {"tol", tol}};
    action = [&](std::string_view bytes, Report& rep) { return rational_equidist(load_map(bytes), rep, seeds, equi); };
  }

  std::string bytes;
  try {
    bytes = io::read_file(file);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  Report rep{report::make_document(command, file, bytes, std::move(config)), std::nullopt};
  int code = guarded(rep, err, [&] { return action(bytes, rep); });
  int written = write_report(rep, output, out, err);
  return code != kOk ? code : written;
}

}  // namespace subcocycle::cli
