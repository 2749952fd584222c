#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "cli_app.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = ccr::cli::run(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("ccr_cli_test_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, SchrodingerFileVerifies) {
  const auto p = path("p.json");
  auto r = cli({"pair", "schrodinger", "--ring", "zmod:5", "--d", "1", "--lambda", "1", "--out", p});
  ASSERT_EQ(r.code, 0) << r.err;
  r = cli({"pair", "verify-ccr", p, "--out", path("rep.json")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("PASS verify_ccr"), std::string::npos);
  const auto rep = ccr::read_json_file(path("rep.json"));
  EXPECT_LE(rep["checks"][0]["residual"].get<double>(), 1e-15);
  EXPECT_TRUE(rep["pass"].get<bool>());

  // quarter-turn phases are exact, so the residual is exactly zero
  cli({"pair", "schrodinger", "--ring", "zmod:4", "--lambda", "1", "--out", p});
  cli({"pair", "verify-ccr", p, "--out", path("rep.json")});
  EXPECT_EQ(ccr::read_json_file(path("rep.json"))["checks"][0]["residual"].get<double>(), 0.0);
}

TEST_F(Cli, IsomFailureNamesTheKernel) {
  const auto p = path("bad.json");
  ASSERT_EQ(cli({"pair", "schrodinger", "--ring", "zmod:4", "--lambda", "2", "--out", p}).code, 0);
  const auto r = cli({"svn", "intertwine", "--pair", p});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("ker nabla_lambda = {0, 2}"), std::string::npos) << r.err;
}

TEST_F(Cli, StudyCsvHasOneRowPerGrid) {
  const auto r = cli({"approx", "study", "--theta", "golden", "--grids", "8,16"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 3);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "g,W,eps_exact,eps_bound,uncovered_cells");
  EXPECT_EQ(r.out.substr(r.out.find('\n') + 1, 2), "8,");
}

TEST_F(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(cli({}).code, 2);
  EXPECT_EQ(cli({"svn", "frobnicate"}).code, 2);
  EXPECT_EQ(cli({"pair", "schrodinger", "--ring", "zmod:4"}).code, 2);
  EXPECT_EQ(cli({"pair", "verify-ccr", path("missing.json")}).code, 2);
  EXPECT_EQ(cli({"pair", "schrodinger", "--ring", "zmod:x", "--lambda", "1"}).code, 2);
  EXPECT_EQ(cli({"pair", "schrodinger", "--ring", "zmod:4", "--lambda", "9"}).code, 2);
  EXPECT_EQ(cli({"approx", "study", "--grids", "16,8"}).code, 2);
  EXPECT_EQ(cli({"heis", "table", "--ring", "zmod:9"}).code, 2);
  for (const char* text : {"{", R"({"ring":"zmod:3"})", R"({"ring":"zmod:3","d":1,"lambda":[1],"N":3,"U":[],"V":[]})"}) {
    std::ofstream(path("m.json")) << text;
    const auto r = cli({"pair", "verify-ccr", path("m.json")});
    EXPECT_EQ(r.code, 2) << text;
    EXPECT_NE(r.err.find("error"), std::string::npos);
  }
  EXPECT_EQ(cli({"--help"}).code, 0);
  EXPECT_EQ(cli({"svn", "decompose", "--help"}).code, 0);
}

TEST_F(Cli, CheckFailuresExitOne) {
  const auto p = path("r.json");
  ASSERT_EQ(cli({"pair", "random", "--ring", "zmod:3", "--lambda", "1", "--mult", "2", "--seed", "4", "--out", p}).code, 0);
  EXPECT_EQ(cli({"svn", "commutant", "--pair", p, "--expect", "4"}).code, 0);
  EXPECT_EQ(cli({"svn", "commutant", "--pair", p, "--expect", "1"}).code, 1);
  EXPECT_EQ(cli({"svn", "decompose", "--pair", p, "--expect", "2"}).code, 0);
  EXPECT_EQ(cli({"char", "check", "--ring", "zmod:4", "--lambda", "2", "--require", "sym,iso"}).code, 1);
  EXPECT_EQ(cli({"char", "check", "--ring", "zmod:4", "--lambda", "1", "--require", "sym,iso,faith"}).code, 0);
  EXPECT_EQ(cli({"approx", "sample", "--theta", "3/8", "--grid", "16"}).code, 1);
  EXPECT_EQ(cli({"pair", "verify-ccr", p, "--tol", "1e-30"}).code, 1);
}

TEST_F(Cli, ReportsAreReproducible) {
  const auto a = path("a.json"), b = path("b.json");
  ASSERT_EQ(cli({"pair", "random", "--ring", "zmod:3", "--lambda", "1", "--mult", "2", "--seed", "5", "--out", a}).code, 0);
  ASSERT_EQ(cli({"pair", "random", "--ring", "zmod:3", "--lambda", "1", "--mult", "2", "--seed", "5", "--out", b}).code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  cli({"pair", "random", "--ring", "zmod:3", "--lambda", "1", "--mult", "2", "--seed", "6", "--out", b});
  EXPECT_NE(slurp(a), slurp(b));

  const auto r1 = path("r1.json"), r2 = path("r2.json");
  const std::vector<std::string> run{"svn", "decompose", "--pair", a, "--seed", "3", "--reproducible", "--out", r1};
  ASSERT_EQ(cli(run).code, 0);
  const auto first = slurp(r1);
  ASSERT_EQ(cli(run).code, 0);
  EXPECT_EQ(first, slurp(r1));
  EXPECT_EQ(first.find("wall_time"), std::string::npos);

  cli({"svn", "decompose", "--pair", a, "--seed", "3", "--out", r2});
  EXPECT_NE(slurp(r2).find("wall_time_s"), std::string::npos);
  const auto j1 = ccr::read_json_file(r1), j2 = ccr::read_json_file(r2);
  EXPECT_EQ(j1["config_hash"], j2["config_hash"]);
  cli({"svn", "decompose", "--pair", a, "--seed", "4", "--reproducible", "--out", r2});
  EXPECT_NE(j1["config_hash"], ccr::read_json_file(r2)["config_hash"]);
}

TEST_F(Cli, WitnessAndInspectionCommands) {
  const auto s = path("s.json");
  ASSERT_EQ(cli({"pair", "schrodinger", "--ring", "zmod:3", "--lambda", "1", "--out", s}).code, 0);
  ASSERT_EQ(cli({"svn", "intertwine", "--pair", s, "--with-matrix", "--out", path("w.json")}).code, 0);
  const auto w = ccr::read_json_file(path("w.json"));
  EXPECT_EQ(w["result"]["dim"].get<std::size_t>(), 27u);
  EXPECT_EQ(w["result"]["W"].size(), 27u);
  EXPECT_EQ(w["result"]["method"], "dense");

  const auto reg = path("reg.json");
  ASSERT_EQ(cli({"pair", "regular", "--ring", "zmod:3", "--lambda", "1", "--out", reg}).code, 0);
  const auto inflated = path("s3.json");
  std::ofstream(inflated) << ccr::pair_to_json(ccr::inflate(ccr::read_pair(s), 3)).dump();
  EXPECT_EQ(cli({"svn", "equivalent", inflated, reg}).code, 0);
  EXPECT_EQ(cli({"svn", "equivalent", s, reg}).code, 1);

  EXPECT_EQ(cli({"heis", "rep-check", "--pair", reg}).code, 0);
  EXPECT_EQ(cli({"heis", "induce", "--ring", "zmod:4", "--lambda", "1"}).code, 0);

  auto r = cli({"ring", "info", "--ring", R"({"kind":"matrix","n":2,"base":{"kind":"prime_field","p":2}})"});
  ASSERT_EQ(r.code, 0);
  const auto info = ccr::parse_json_text(r.out, "out");
  EXPECT_EQ(info["order"], 16);
  EXPECT_EQ(info["commutative"], false);

  r = cli({"heis", "table", "--ring", "zmod:2"});
  ASSERT_EQ(r.code, 0);
  const auto t = ccr::parse_json_text(r.out, "out");
  EXPECT_EQ(t["order"], 8);
  EXPECT_EQ(t["table"].size(), 8u);

  r = cli({"approx", "epsilon", "--theta", "golden", "--grid", "64", "--k", "5", "--out", path("e.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto e = ccr::read_json_file(path("e.json"));
  EXPECT_LE(e["result"]["eps_exact"].get<double>(), 0.70);
  EXPECT_EQ(cli({"approx", "epsilon", "--theta", "3/8", "--grid", "16"}).code, 1);
  EXPECT_EQ(cli({"approx", "epsilon", "--theta", "3/8", "--grid", "16", "--allow-fallback"}).code, 0);
}
