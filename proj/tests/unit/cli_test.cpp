#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cli.hpp"

namespace mvpdl::cli {
namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string sample(const char* name) { return std::string(MVPDL_SAMPLES_DIR) + "/" + name; }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / (std::string("mvpdl_cli_") + name)).string();
}

TEST(Cli, EvalTwoWorldSample) {
  auto r = invoke({"eval", "--model", sample("two_world.kml"), "--world", "u", "[a*]p"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "1/4\n");
  r = invoke({"eval", "--model", sample("two_world.kml"), "--world", "u", "[a*](p -> [a]p)"});
  EXPECT_EQ(r.out, "2/4\n");
}

TEST(Cli, FlClosurePrintsFourFormulas) {
  auto r = invoke({"flclosure", "[a;b]p"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "[a;b]p\n[a][b]p\np\n[b]p\n");
}

TEST(Cli, TautologyVerdicts) {
  auto yes = invoke({"taut", "(p (.) (p -> q)) -> q", "--n", "3"});
  EXPECT_EQ(yes.code, 0);
  EXPECT_EQ(yes.out, "tautology\n");
  auto no = invoke({"--n", "2", "taut", "p | ~p"});
  EXPECT_EQ(no.code, 1);
  EXPECT_NE(no.out.find("p=1/2"), std::string::npos);
  EXPECT_EQ(invoke({"taut", "p"}).code, 2);  // no resolution
}

TEST(Cli, CheckGlobalTruth) {
  EXPECT_EQ(invoke({"check", "--model", sample("two_world.kml"), "[a*]p -> p"}).code, 0);
  auto r = invoke({"check", "--model", sample("two_world.kml"), "p"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("u has value 3/4"), std::string::npos);
}

TEST(Cli, SatJsonSchema) {
  auto r = invoke({"sat", "<a>p & [a]~p", "--n", "2", "--json"});
  EXPECT_EQ(r.code, 1);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["verdict"], "unsatisfiable");
  EXPECT_EQ(j["complete"], true);
  EXPECT_TRUE(j["witness"].is_null());
  for (const char* key : {"atoms_generated", "nodes_explored", "wall_time_ms"}) {
    EXPECT_TRUE(j["statistics"].contains(key)) << key;
  }

  auto s = invoke({"sat", "<a>p", "--n", "2", "--json"});
  EXPECT_EQ(s.code, 0);
  auto k = nlohmann::json::parse(s.out);
  EXPECT_EQ(k["verdict"], "satisfiable");
  EXPECT_NE(k["witness"].get<std::string>().find("rel a:"), std::string::npos);
}

TEST(Cli, ValidRefutesNaiveInduction) {
  auto r = invoke({"--n", "4", "valid", "(p & [a*](p -> [a]p)) -> [a*]p", "--max-worlds", "2"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out.rfind("refuted", 0), 0U);
  EXPECT_EQ(invoke({"--n", "1", "valid", "(p & [a*](p -> [a]p)) -> [a*]p"}).code, 0);
}

TEST(Cli, SatBeyondBoundIsAffirmative) {
  auto r = invoke({"--n", "1", "sat", "p & [a]p & [a][a]p & <a*>~p", "--max-worlds", "3"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("beyond_bound"), std::string::npos);
}

TEST(Cli, ProveGoldenDerivation) {
  auto r = invoke({"prove", sample("loop_invariance.drv")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "checked 10 lines from 1 premise\n");

  auto emitted = invoke({"li", "p", "a", "--n", "2"});
  std::string golden = read_file(sample("loop_invariance.drv"));
  EXPECT_EQ(golden.substr(golden.find('\n') + 1), emitted.out);
}

TEST(Cli, ProveReportsFirstViolation) {
  std::string path = temp_path("bad.drv");
  {
    std::ofstream out(path);
    out << "n = 2\n1. p ; premise\n2. q ; premise\n3. r ; mp(1,2)\n";
  }
  auto r = invoke({"prove", path, "--json"});
  EXPECT_EQ(r.code, 1);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["line"], 3);
  EXPECT_EQ(j["reason"], "major premise shape");
  std::filesystem::remove(path);
}

TEST(Cli, FilterWritesQuotient) {
  std::string path = temp_path("quotient.kml");
  auto r = invoke({"filter", "--model", sample("two_world.kml"), "--out", path, "[a*]p"});
  EXPECT_EQ(r.code, 0);
  std::string text = read_file(path);
  EXPECT_NE(text.find("# class u -> c0"), std::string::npos);
  auto e = invoke({"eval", "--model", path, "--world", "c0", "[a*]p"});
  EXPECT_EQ(e.out, "1/4\n");
  std::filesystem::remove(path);
}

TEST(Cli, ErrorsExitWithTwo) {
  auto missing = invoke({"eval", "--model", "/nonexistent.kml", "--world", "u", "p"});
  EXPECT_EQ(missing.code, 2);
  EXPECT_NE(missing.err.find("cannot open"), std::string::npos);

  auto syntax = invoke({"--json", "flclosure", "p ->"});
  EXPECT_EQ(syntax.code, 2);
  auto j = nlohmann::json::parse(syntax.out);
  EXPECT_EQ(j["error"], "syntax");
  EXPECT_EQ(j["column"], 5);

  auto mismatch = invoke({"--n", "3", "eval", "--model", sample("two_world.kml"), "--world", "u", "p"});
  EXPECT_EQ(mismatch.code, 2);
  EXPECT_NE(mismatch.err.find("resolution"), std::string::npos);

  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"bogus"}).code, 2);
  EXPECT_EQ(invoke({"eval", "--model", sample("two_world.kml"), "--world", "zz", "p"}).code, 2);
}

TEST(Cli, RandomIsDeterministicPerSeed) {
  auto a = invoke({"--n", "3", "--seed", "7", "random", "--worlds", "4", "--atoms", "a,b", "--vars", "p"});
  auto b = invoke({"random", "--worlds", "4", "--atoms", "a,b", "--vars", "p", "--seed", "7", "--n", "3"});
  auto c = invoke({"--n", "3", "--seed", "8", "random", "--worlds", "4", "--atoms", "a,b", "--vars", "p"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);
}

TEST(Cli, UlamSubcommands) {
  std::string path = temp_path("game.kml");
  auto build = invoke({"ulam", "build", "--m", "2", "--n", "1", "--depth", "2", "--out", path});
  EXPECT_EQ(build.code, 0);
  EXPECT_NE(read_file(path).find("rel Q{1,2}:"), std::string::npos);
  EXPECT_EQ(invoke({"check", "--model", path, "[Q{1}]p_1 -> p_1"}).code, 0);
  std::filesystem::remove(path);

  auto holds = invoke({"ulam", "check", "--m", "3", "--n", "2", "--depth", "3", "--spec", "[~Q{1}]p_2 -> p_2"});
  EXPECT_EQ(holds.code, 0);
  auto fails = invoke({"ulam", "check", "--m", "3", "--n", "2", "--spec", "p_2 -> [Q{1}]p_2"});
  EXPECT_EQ(fails.code, 1);
  EXPECT_NE(fails.out.find("fails at"), std::string::npos);

  auto play = invoke({"ulam", "run", "--m", "3", "--n", "1", "--questions", "Q{1};Q{2}", "--answers", "-+"});
  EXPECT_EQ(play.code, 0);
  EXPECT_NE(play.out.find("final: 2"), std::string::npos);
  auto open = invoke({"ulam", "run", "--m", "3", "--n", "2", "--questions", "Q{1}", "--answers", "+"});
  EXPECT_EQ(open.code, 1);
  EXPECT_EQ(invoke({"ulam", "run", "--m", "3", "--questions", "Q{9}", "--answers", "+"}).code, 2);
}

}  // namespace
}  // namespace mvpdl::cli
