#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "app.hpp"

using fuzzyfield::cli::Json;

namespace {

struct Run {
  int status;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Run run(std::initializer_list<std::string> args) {
  std::vector<std::string> owned{"fuzzyfield"};
  owned.insert(owned.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : owned) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int status = fuzzyfield::cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::string demo(const std::string& name) { return std::string(FUZZYFIELD_DEMOS) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST(Cli, AxiomsExitCodes) {
  EXPECT_EQ(run({"axioms", demo("crisp_mu.json")}).status, 0);
  EXPECT_EQ(run({"axioms", demo("crisp_mu.json"), "--grid"}).status, 0);
  const auto mutated = run({"--json", "axioms", demo("origin_mutation_mu.json")});
  EXPECT_EQ(mutated.status, 1);
  const auto body = mutated.json()["body"];
  EXPECT_FALSE(body["holds"]["v"].get<bool>());
  EXPECT_FALSE(body["all_hold"].get<bool>());
}

TEST(Cli, AxiomsSampleRelativeReport) {
  const auto r = run({"--json", "axioms", demo("nonunique_limit_mu.json"), "--samples", demo("nonunique_samples.json")});
  EXPECT_EQ(r.status, 1);
  const auto env = r.json();
  EXPECT_TRUE(env["body"]["sample_relative"].get<bool>());
  EXPECT_EQ(env["inputs"].size(), 2u);
}

TEST(Cli, EvalExamples) {
  const auto abs = run({"--json", "eval", "mu_abs", "--mu", demo("half_at_two_mu.json"), "--a", "2"});
  ASSERT_EQ(abs.status, 0) << abs.err;
  const auto body = abs.json()["body"];
  EXPECT_EQ(body["value"], 1.0);
  EXPECT_EQ(body["resolved_memberships"][0]["mu"], 0.5);

  const auto arg = run({"--json", "eval", "mu_arg", "--z", "-1,0"});
  ASSERT_EQ(arg.status, 0);
  EXPECT_EQ(arg.json()["body"]["value"], std::numbers::pi);

  const auto sup = run({"--json", "eval", "mu_sup", "--set", "1,3,2"});
  ASSERT_EQ(sup.status, 0);
  EXPECT_EQ(sup.json()["body"]["value"]["value"], 3.0);
}

TEST(Cli, EvalErrors) {
  const auto log0 = run({"eval", "mu_log", "--z", "0,0"});
  EXPECT_EQ(log0.status, 1);
  EXPECT_NE(log0.err.find("argument/log undefined at 0"), std::string::npos);
  EXPECT_EQ(run({"eval", "nope"}).status, 2);
  EXPECT_EQ(run({"eval", "mu_abs"}).status, 2);                       // missing operand
  EXPECT_EQ(run({"eval", "mu_exp", "--z", "1;2"}).status, 2);         // malformed complex
  EXPECT_EQ(run({"eval", "mu_abs", "--a", "2", "--mu", "/no/such"}).status, 2);
}

TEST(Cli, ParseAndValidationErrorsExitTwo) {
  const auto bad_json = temp_file("ff_bad.json", "{not json");
  const auto r = run({"axioms", bad_json});
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("parse error"), std::string::npos);
  const auto bad_weight = temp_file("ff_weight.json", R"({"default": 2.0})");
  EXPECT_EQ(run({"axioms", bad_weight}).status, 2);
  const auto over_cap = temp_file("ff_cap.json", R"({"sequence": {"form": "exp_plus", "n_max": 800}, "candidates": [1]})");
  EXPECT_EQ(run({"converge", over_cap}).status, 2);
  EXPECT_EQ(run({"--tol", "-1", "demo", "sum_failure"}).status, 2);
  EXPECT_EQ(run({}).status, 2);
}

TEST(Cli, ConvergeNonuniqueLimit) {
  const auto r = run({"--json", "converge", demo("nonunique_limit.json")});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto v = r.json()["body"]["verdicts"];
  ASSERT_EQ(v.size(), 2u);
  for (const auto& row : v[0]["eps_table"])
    if (row["eps"] == 1e-3) {
      EXPECT_EQ(row["N"], 72);
    }
  EXPECT_EQ(v[1]["status"], "supported");
  EXPECT_NEAR(v[1]["candidate"].get<double>(), 1.0 - std::sqrt(2.0), 1e-15);
}

TEST(Cli, ConvergeSumFailureFlagsTrivialCandidate) {
  const auto r = run({"--json", "converge", demo("sum_failure.json")});
  const auto v = r.json()["body"]["verdicts"];
  bool seen = false;
  for (const auto& entry : v) {
    if (entry["candidate"] == 2.0) {
      EXPECT_EQ(entry["status"], "supported-trivially");
      seen = true;
    }
  }
  EXPECT_TRUE(seen);
}

TEST(Cli, DemoNamesAndHeadlines) {
  const auto nonunique = run({"--json", "demo", "nonunique_limit"});
  EXPECT_EQ(nonunique.status, 0);
  EXPECT_EQ(nonunique.json()["body"]["headline"], "two distinct mu-limits");
  const auto unbounded = run({"--json", "demo", "unbounded_convergent"});
  EXPECT_EQ(unbounded.status, 0);
  EXPECT_EQ(unbounded.json()["body"]["bounds"]["first_exceeding_index"], 14);

  const auto product = run({"demo", "product_failure"});
  EXPECT_NE(product.out.find("mu-limits do not multiply"), std::string::npos);

  const auto unknown = run({"demo", "nope"});
  EXPECT_EQ(unknown.status, 2);
  for (const char* name : {"nonunique_limit", "unbounded_convergent", "sum_failure", "product_failure"})
    EXPECT_NE(unknown.err.find(name), std::string::npos) << name;
}

TEST(Cli, TraceCsv) {
  const auto path = (std::filesystem::temp_directory_path() / "ff_trace.csv").string();
  ASSERT_EQ(run({"demo", "sum_failure", "--trace", path, "--trace-expr", "sum", "--trace-candidate", "0"}).status, 0);
  std::ifstream in(path);
  std::string header;
  std::string first;
  std::getline(in, header);
  std::getline(in, first);
  EXPECT_EQ(header, "n,term,membership,scaled_deviation");
  long long n = 0;
  double term = 0, w = 0, dev = 0;
  ASSERT_EQ(std::sscanf(first.c_str(), "%lld,%lf,%lf,%lf", &n, &term, &w, &dev), 4);
  EXPECT_EQ(n, 1);
  EXPECT_DOUBLE_EQ(dev, 0.5);  // 1/(n+1)
}

TEST(Cli, IdentitiesExitCodes) {
  const auto literal = run({"--json", "identities", "C7", "--literal"});
  EXPECT_EQ(literal.status, 1);
  const auto tallies = literal.json()["body"]["tallies"];
  ASSERT_EQ(tallies.size(), 2u);
  EXPECT_EQ(tallies[0]["id"], "C7");
  EXPECT_EQ(tallies[0]["fail"], 0);
  EXPECT_GT(tallies[1]["fail"].get<int>(), 0);

  EXPECT_EQ(run({"identities", "ZZ"}).status, 2);
  EXPECT_EQ(run({"identities", "--random", "--mu", demo("crisp_mu.json")}).status, 2);

  const auto r3 = run({"--json", "identities", "R3", "--random", "--trials", "200"});
  EXPECT_EQ(r3.status, 0);
  EXPECT_GT(r3.json()["body"]["tallies"][0]["precondition_unmet"].get<int>(), 0);
}

TEST(Cli, GlobalFlagsMayFollowSubcommand) {
  const auto before = run({"--json", "--seed", "11", "identities", "O1", "--trials", "20"});
  const auto after = run({"identities", "O1", "--trials", "20", "--seed", "11", "--json"});
  EXPECT_EQ(before.status, 0);
  EXPECT_EQ(before.out, after.out);
  EXPECT_EQ(after.json()["seed"], 11);
}

TEST(Cli, EnvelopeIsDeterministic) {
  const auto a = run({"--json", "--seed", "3", "identities", "--random", "--trials", "50"});
  const auto b = run({"--json", "--seed", "3", "identities", "--random", "--trials", "50"});
  EXPECT_EQ(a.out, b.out);
  const auto env = a.json();
  EXPECT_EQ(env["tool"], "fuzzyfield");
  EXPECT_EQ(env["version"], fuzzyfield::cli::kVersion);
  EXPECT_EQ(env["command"], "identities");
  EXPECT_EQ(env["seed"], 3);
  EXPECT_EQ(env["exit_status"], 0);
  EXPECT_TRUE(env["body"]["random_mu"].get<bool>());

  const auto c = run({"--json", "converge", demo("table.json")});
  const auto d = run({"--json", "converge", demo("table.json")});
  EXPECT_EQ(c.out, d.out);
  const auto inputs = c.json()["inputs"];
  ASSERT_EQ(inputs.size(), 1u);
  EXPECT_EQ(inputs[0]["sha256"].get<std::string>().size(), 64u);
  EXPECT_TRUE(c.json()["seed"].is_null());
}

TEST(Cli, DefaultSeedRecorded) {
  const auto r = run({"--json", "identities", "O1", "--trials", "5"});
  EXPECT_EQ(r.json()["seed"], fuzzyfield::cli::kDefaultSeed);
}

TEST(Cli, Sha256KnownVector) {
  EXPECT_EQ(fuzzyfield::cli::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Cli, ErrorEnvelopeInJsonMode) {
  const auto r = run({"--json", "eval", "mu_log", "--z", "0"});
  EXPECT_EQ(r.status, 1);
  const auto env = r.json();
  EXPECT_EQ(env["exit_status"], 1);
  EXPECT_NE(env["body"]["error"].get<std::string>().find("undefined at 0"), std::string::npos);
}
