#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "subcocycle/cli.hpp"
#include "subcocycle/io.hpp"
#include "subcocycle/rational.hpp"

using namespace subcocycle;
using Json = nlohmann::ordered_json;

namespace {

const std::filesystem::path kData = SUBCOCYCLE_DATA_DIR;
const std::filesystem::path kGolden = SUBCOCYCLE_GOLDEN_DIR;

struct Run {
  int code = 0;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run_command(args, out, err);
  return {code, out.str(), err.str()};
}

std::string model(const std::string& name) { return (kData / "models" / (name + ".txt")).string(); }
std::string map(const std::string& name) { return (kData / "maps" / (name + ".txt")).string(); }

// Reports name their input path; golden files are compared with it blanked.
std::string normalized(const std::string& structured) {
  Json doc = Json::parse(structured);
  doc["input"]["path"] = "";
  return doc.dump(2);
}

void expect_golden(const std::string& name, const std::string& actual, bool structured) {
  std::string expected = io::read_file(kGolden / name);
  if (structured) {
    EXPECT_EQ(normalized(actual), normalized(expected)) << name;
  } else {
    EXPECT_EQ(actual, expected) << name;
  }
}

}  // namespace

// ---- finite -------------------------------------------------------------------------

TEST(Cli, AnalyzeG1) {
  auto r = run({"finite", "analyze", model("g1"), "--delta", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto doc = r.json();
  EXPECT_EQ(doc["status"], "ok");
  EXPECT_EQ(doc["result"]["level_set"]["members"], Json::array({0}));
  EXPECT_EQ(doc["result"]["level_set"]["checks"]["image_equals_set"], true);
  EXPECT_EQ(doc["result"]["kappa_minus"][1]["rate"]["display"], "(3/1)^(1/2) ≈ 1.7320508076");
  EXPECT_EQ(doc["input"]["sha256"].get<std::string>().size(), 64u);
  EXPECT_EQ(doc["config"]["delta"], "2");
  expect_golden("g1_analyze.json", r.out, true);
}

TEST(Cli, AnalyzeCsvHasOneRowPerNode) {
  auto r = run({"finite", "analyze", model("g1"), "--delta", "2", "--format", "csv"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "node,product,length,approx\n0,2,1,2.0000000000\n1,3,2,1.7320508076\n2,3,2,1.7320508076\n");
  expect_golden("g1_analyze.csv", r.out, false);
}

TEST(Cli, EmptyLevelSetIsListed) {
  auto r = run({"finite", "analyze", model("g1"), "--delta", "3"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\"members\": []"), std::string::npos);
  EXPECT_TRUE(r.json()["result"]["level_set"]["members"].empty());
}

TEST(Cli, WholeSpaceThresholdWarnsAndFails) {
  auto r = run({"finite", "analyze", model("g1"), "--delta", "3/2"});
  EXPECT_EQ(r.code, 1);
  auto doc = r.json();
  EXPECT_EQ(doc["status"], "error");
  EXPECT_EQ(doc["warnings"].size(), 1u);
  EXPECT_TRUE(doc["result"]["level_set"].is_null());
  EXPECT_EQ(doc["result"]["kappa_minus"].size(), 3u);
}

TEST(Cli, AnalyzeWithSigma) {
  auto r = run({"finite", "analyze", model("g1"), "--delta", "2", "--sigma"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto sigma = r.json()["result"]["sigma"];
  EXPECT_EQ(sigma["members"], Json::array({0}));
  EXPECT_LE(sigma["n1"].get<int>(), 20);
}

TEST(Cli, KappaMinusSeriesAndBounds) {
  auto r = run({"finite", "kappa-minus", model("g1"), "--node", "0", "--max-n", "6"});
  ASSERT_EQ(r.code, 0);
  auto doc = r.json();
  EXPECT_EQ(doc["result"]["series"][1]["value"], "4");
  EXPECT_EQ(doc["result"]["series"][5]["value"], "64");
  EXPECT_EQ(doc["result"]["limit"]["bounds"]["holds"], true);

  auto csv = run({"finite", "kappa-minus", model("g1"), "--node", "1", "--max-n", "2", "--format", "csv"});
  // Node 1 has the single preimage 2 (weight 3); the 2-step preimages go through 1 -> 2 -> 1.
  EXPECT_EQ(csv.out, "n,value,root_approx\n1,3,3.0000000000\n2,3,1.7320508076\n");

  auto explicit_rule = run({"finite", "kappa-minus", model("doubling"), "--node", "0", "--max-n", "3"});
  ASSERT_EQ(explicit_rule.code, 0);
  EXPECT_EQ(explicit_rule.json()["result"]["series"][2]["value"], "8");
  EXPECT_TRUE(explicit_rule.json()["result"]["limit"].is_null());
  EXPECT_EQ(explicit_rule.json()["warnings"].size(), 1u);

  EXPECT_EQ(run({"finite", "kappa-minus", model("g1"), "--node", "7"}).code, 1);
}

TEST(Cli, TailOnDeterministicOrbit) {
  auto r = run({"finite", "tail", model("tail"), "--node", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto doc = r.json();
  EXPECT_EQ(doc["result"]["orbit"]["preperiod"], 2);  // 3, 2, then the cycle 1 -> 0
  EXPECT_EQ(doc["result"]["tail"]["offsets_agree"], true);
  EXPECT_EQ(doc["result"]["kappa_plus"]["invariant"], true);
  EXPECT_EQ(run({"finite", "tail", model("g1"), "--node", "0"}).code, 1);
}

TEST(Cli, CheckCocycle) {
  auto ok = run({"finite", "check-cocycle", model("g1"), "--depth", "5"});
  ASSERT_EQ(ok.code, 0);
  EXPECT_EQ(ok.json()["result"]["check"]["holds"], true);
  auto doubling = run({"finite", "check-cocycle", model("doubling"), "--depth", "5"});
  EXPECT_EQ(doubling.code, 0);
  auto osc = run({"finite", "check-cocycle", model("oscillating"), "--depth", "10"});
  EXPECT_EQ(osc.code, 0) << osc.err;
}

// ---- rational ------------------------------------------------------------------------------

TEST(Cli, ExceptionalChebyshev) {
  auto r = run({"rational", "exceptional", map("chebyshev")});
  ASSERT_EQ(r.code, 0) << r.err;
  auto doc = r.json();
  ASSERT_EQ(doc["result"]["exceptional"].size(), 1u);
  EXPECT_EQ(doc["result"]["exceptional"][0]["point"], "inf");
  EXPECT_EQ(doc["result"]["exceptional"][0]["fiber"]["points"][0]["multiplicity"], 2);
  EXPECT_EQ(doc["result"]["certificate"]["backward_image_equals_set"], true);
  EXPECT_EQ(doc["result"]["riemann_hurwitz"]["holds"], true);
  expect_golden("chebyshev_exceptional.json", r.out, true);
}

TEST(Cli, ExceptionalCorpus) {
  std::map<std::string, std::vector<std::string>> expected{
      {"square", {"0", "inf"}}, {"cube", {"0", "inf"}},          {"chebyshev", {"inf"}},
      {"inverse_square", {"0", "inf"}}, {"generic", {}}, {"square_approx", {"0", "inf"}}};
  for (const auto& [name, points] : expected) {
    auto r = run({"rational", "exceptional", map(name)});
    ASSERT_EQ(r.code, 0) << name << r.err;
    auto doc = r.json();
    std::vector<std::string> got;
    for (const auto& e : doc["result"]["exceptional"]) got.push_back(e["point"].get<std::string>());
    EXPECT_EQ(got, points) << name;
  }
}

TEST(Cli, BackwardSearch) {
  auto r = run({"rational", "backward", map("square"), "--point", "0", "--depth", "40", "--budget", "1000"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto doc = r.json();
  EXPECT_EQ(doc["result"]["value"], pow(Integer(2), 40).get_str());
  EXPECT_EQ(doc["result"]["complete"], true);
  ASSERT_EQ(doc["result"]["witness"].size(), 41u);
  for (const auto& p : doc["result"]["witness"]) EXPECT_EQ(p, "0");

  auto partial = run({"rational", "backward", map("generic"), "--point", "3", "--depth", "12", "--budget", "5"});
  EXPECT_EQ(partial.code, 3);
  EXPECT_EQ(partial.json()["status"], "partial");
  EXPECT_EQ(partial.json()["result"]["complete"], false);
}

TEST(Cli, FiberTable) {
  auto r = run({"rational", "fiber", map("square"), "--point", "4", "--format", "csv"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "point,multiplicity,local_multiplicity\n-2,1,1\n2,1,1\n");
  auto inf = run({"rational", "fiber", map("chebyshev"), "--point", "inf"});
  ASSERT_EQ(inf.code, 0);
  EXPECT_EQ(inf.json()["result"]["points"][0]["point"], "inf");
  EXPECT_EQ(inf.json()["result"]["checks"]["sums_to_degree"], true);
  auto twist = run({"rational", "fiber", map("rotation_twist"), "--point", "1+i"});
  ASSERT_EQ(twist.code, 0);
  EXPECT_EQ(twist.json()["result"]["checks"]["images_match"], true);
}

TEST(Cli, Equidistribution) {
  auto r = run({"rational", "equidist", map("square"), "--seeds", "3,0", "--depth", "12", "--cells", "16"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto doc = r.json();
  EXPECT_GE(doc["result"]["seeds"][0]["unit_circle_mass"].get<double>(), 0.99);
  EXPECT_EQ(doc["result"]["seeds"][1]["dirac"], "0");
  EXPECT_GE(doc["result"]["pairwise_tv"][0][1].get<double>(), 0.95);
  auto csv = run({"rational", "equidist", map("square"), "--seeds", "3", "--depth", "4", "--cells", "4",
                  "--format", "csv"});
  EXPECT_EQ(std::count(csv.out.begin(), csv.out.end(), '\n'), 1 + 16);
  EXPECT_EQ(run({"rational", "equidist", map("square"), "--seeds", "3", "--depth", "30"}).code, 1);
}

// ---- exit codes, output and determinism ------------------------------------------------------

TEST(Cli, InputErrors) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"finite"}).code, 1);
  EXPECT_EQ(run({"finite", "analyze", model("g1")}).code, 1);
  EXPECT_EQ(run({"finite", "analyze", "/nonexistent/model.txt", "--delta", "2"}).code, 1);
  EXPECT_EQ(run({"finite", "analyze", model("g1"), "--delta", "2", "--format", "xml"}).code, 1);
  EXPECT_EQ(run({"finite", "analyze", model("g1"), "--delta", "-1"}).code, 1);
  EXPECT_EQ(run({"rational", "fiber", map("square"), "--point", "bogus"}).code, 1);
  EXPECT_EQ(run({"rational", "exceptional", model("g1")}).code, 1);
  auto bad = run({"finite", "analyze", model("oscillating"), "--delta", "2"});
  EXPECT_EQ(bad.code, 1);
  EXPECT_EQ(bad.json()["error"]["kind"], "input");
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({"--version"}).out, "0.1.0\n");
}

TEST(Cli, WritesToOutFile) {
  auto path = std::filesystem::temp_directory_path() / "subcocycle_cli_test_report.json";
  std::filesystem::remove(path);
  auto r = run({"finite", "analyze", model("g1"), "--delta", "2", "--out", path.string()});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  auto direct = run({"finite", "analyze", model("g1"), "--delta", "2"});
  EXPECT_EQ(io::read_file(path), direct.out);
  std::filesystem::remove(path);
}

TEST(Cli, ReportsAreByteIdenticalAcrossRunsAndThreads) {
  std::vector<std::vector<std::string>> commands{
      {"finite", "analyze", model("two_cycles"), "--delta", "2", "--sigma"},
      {"finite", "kappa-minus", model("two_cycles"), "--node", "4", "--max-n", "40"},
      {"rational", "exceptional", map("cube")},
      {"rational", "backward", map("generic"), "--point", "1/3", "--depth", "5"},
      {"rational", "equidist", map("chebyshev"), "--seeds", "3,1/3+i", "--depth", "10"},
  };
  for (const auto& cmd : commands) {
    auto a = run(cmd);
    auto b = run(cmd);
    EXPECT_EQ(a.out, b.out);
    for (const char* threads : {"1", "3"}) {
      std::vector<std::string> with_threads{"--threads", threads};
      with_threads.insert(with_threads.end(), cmd.begin(), cmd.end());
      EXPECT_EQ(run(with_threads).out, a.out) << cmd[1] << " threads " << threads;
    }
  }
}

TEST(Cli, SerialAndParallelEnginesAgree) {
  for (const char* name : {"g1", "two_cycles"}) {
    auto serial = run({"finite", "analyze", model(name), "--delta", "2", "--sigma", "--execution", "serial"});
    auto parallel = run({"finite", "analyze", model(name), "--delta", "2", "--sigma", "--execution", "parallel"});
    ASSERT_EQ(serial.code, parallel.code);
    EXPECT_EQ(serial.json()["result"], parallel.json()["result"]) << name;
  }
}
