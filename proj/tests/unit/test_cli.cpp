#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "commands.hpp"

using namespace subseries;
namespace cli = subseries::cli;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(SUBSERIES_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  int status = ::pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

}  // namespace

TEST_CASE("levy command") {
  auto r = run("levy --family c0_basis --n 10 --r 1");
  CHECK(r.code == 0);
  auto j = Json::parse(r.out);
  CHECK(j["result"]["holds"] == true);
  CHECK(j["config"]["family"] == "c0_basis");
  CHECK(j["config"]["seed"]["value"] == 0x5eed);
}

TEST_CASE("counterexample table") {
  auto r = run("counterexample --n 16");
  CHECK(r.code == 0);
  auto j = Json::parse(r.out);
  const auto& rows = j["result"]["rows"];
  REQUIRE(rows.size() == 17);
  for (int N = 0; N <= 16; ++N) {
    CHECK(rows[N]["N"] == N);
    CHECK(rows[N]["pair_0"] == to_string(Rational(1, N + 1)));
    CHECK(rows[N]["norm_is_one"] == true);
  }
}

TEST_CASE("catalog lists six families") {
  auto r = run("catalog");
  CHECK(r.code == 0);
  CHECK(Json::parse(r.out)["result"]["rows"].size() == 6);
  auto csv = run("catalog --format csv");
  CHECK(csv.code == 0);
  CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 7);
}

TEST_CASE("exit codes") {
  CHECK(run("").code == cli::kUsage);
  CHECK(run("frobnicate").code == cli::kUsage);
  CHECK(run("levy --family c0_basis --bogus").code == cli::kUsage);
  CHECK(run("levy --family nope").code == cli::kFailed);
  CHECK(run("levy --family c0_basis --n 21").code == cli::kFailed);
  // extraction on a summable family fails honestly
  CHECK(run("op-demo --family l1_absolute --delta 1/2 --blocks 3 --n-max 256").code == cli::kFailed);
}

TEST_CASE("seed from flag and environment") {
  auto a = Json::parse(run("levy --family c0_basis --n 4 --seed 9").out);
  CHECK(a["config"]["seed"]["value"] == 9);
  auto b = Json::parse(run("levy --family c0_basis --n 4 --seed 0x10").out);
  CHECK(b["config"]["seed"]["value"] == 16);
  ::setenv("SUBSERIES_SEED", "31", 1);
  auto c = Json::parse(run("levy --family c0_basis --n 4").out);
  ::unsetenv("SUBSERIES_SEED");
  CHECK(c["config"]["seed"]["value"] == 31);
}

TEST_CASE("reports are reproducible") {
  for (std::string args : {"dichotomy --family l2_diagonal --samples 100 --n-max 256 --seed 4",
                           "equidist --family torus_fourier --m 6", "catalog"}) {
    auto x = run(args), y = run(args);
    CHECK(x.code == y.code);
    CHECK(strip_timestamp(Json::parse(x.out)) == strip_timestamp(Json::parse(y.out)));
  }
}

TEST_CASE("out flag writes the report to a file") {
  std::string path = "subseries_cli_out_test.json";
  auto r = run("catalog --out " + path);
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(Json::parse(ss.str())["command"] == "catalog");
  std::remove(path.c_str());
}

TEST_CASE("commands as library calls") {
  cli::RunOptions opts;
  auto j = cli::run_equidist({"c0_paired", {}}, std::nullopt, 4, opts);
  CHECK(j["result"]["rows"].size() == 15);
  CHECK(cli::exit_code(j) == cli::kOk);
  Json inconclusive = envelope("x", {}, {{"inconclusive", true}}, false);
  CHECK(cli::exit_code(inconclusive) == cli::kUndecided);
  CHECK_THROWS_AS(cli::render(j, "xml"), ContractViolation);
}
