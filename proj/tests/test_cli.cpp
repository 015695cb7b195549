#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "firegraph/game.hpp"

using firegraph::Json;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result cli(const std::string& args) {
  const std::string cmd = std::string(FIREGRAPH_CLI_PATH) + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "firegraph_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("growth table") {
  auto r = cli("growth --family orthant:d=3 --N 3 --format json");
  REQUIRE(r.code == 0);
  CHECK(Json::parse(r.out)["s"] == Json::array({1, 3, 6, 10}));
  auto text = cli("growth --family orthant:d=3 --N 3");
  CHECK(text.code == 0);
  CHECK(text.out.find("3\t20\t10\t4\t10") != std::string::npos);
}

TEST_CASE("unchecked spread escapes") {
  auto path = scratch("escape.jsonl");
  auto r = cli("simulate --family square --x0 ball:0 --budget 0 --r 1 --radius-cap 5 --out " + path.string());
  REQUIRE(r.code == 0);
  auto trace = firegraph::parse_trace(read_file(path));
  CHECK(trace.outcome == firegraph::Outcome::cap_exceeded);
  for (std::size_t n = 0; n < trace.turns.size(); ++n) {
    CHECK(trace.turns[n].burning_count == 2 * (n + 1) * (n + 1) + 2 * (n + 1) + 1);
  }
  CHECK(cli("check " + path.string()).code == 0);
}

TEST_CASE("synthesized traces replay through check") {
  auto path = scratch("synth.jsonl");
  REQUIRE(cli("synth --method second-diff --family tri --n 1 --out " + path.string()).code == 0);
  auto trace = firegraph::parse_trace(read_file(path));
  CHECK(trace.contained());
  CHECK(cli("check " + path.string()).code == 0);

  auto text = read_file(path);
  auto pos = text.find("\"burning_count\":");
  REQUIRE(pos != std::string::npos);
  text.insert(pos + 16, "1");
  std::ofstream(path) << text;
  CHECK(cli("check " + path.string()).code == 6);
}

TEST_CASE("lattice certificates") {
  auto r = cli("certify --kind lattice --d 3 --q 0");
  REQUIRE(r.code == 0);
  auto doc = Json::parse(r.out);
  CHECK(doc["verdict"] == "impossible");
  CHECK(doc["certificate"]["conclusion"] == "impossible");

  auto path = scratch("lattice.json");
  REQUIRE(cli("certify --kind lattice --d 2 --q 0 --out " + path.string()).code == 0);
  CHECK(Json::parse(read_file(path))["verdict"] == "containable");
  CHECK(cli("check " + path.string()).code == 0);
}

TEST_CASE("expansion certificates and tampering") {
  auto path = scratch("hyper.json");
  REQUIRE(cli("certify --kind expansion --family hyper37 --lambda 2 --budget 1 --out " + path.string()).code == 0);
  auto doc = Json::parse(read_file(path));
  CHECK(doc["verdict"] == "certified");
  CHECK(doc["chosen_radius"] == 1);
  CHECK(cli("check " + path.string()).code == 0);
  doc["tail_bound"] = "1/2";
  std::ofstream(path) << doc.dump(2) << "\n";
  CHECK(cli("check " + path.string()).code == 6);
}

TEST_CASE("oracle and expansion verbs") {
  auto o = cli("oracle --family lattice:d=1 --x0 \"(0)\" --f 1 --R 4");
  REQUIRE(o.code == 0);
  CHECK(o.out.find("containable") != std::string::npos);
  auto e = cli("expansion --family hyper37 --lambda 2 --levels 1..3");
  CHECK(e.code == 0);
}

TEST_CASE("transfer verb") {
  auto path = scratch("transfer.jsonl");
  auto r = cli("transfer --pair grid-strong --q 0 --source second-diff --out " + path.string());
  REQUIRE(r.code == 0);
  CHECK(firegraph::parse_trace(read_file(path)).contained());
  CHECK(cli("check " + path.string()).code == 0);
}

TEST_CASE("exit codes") {
  CHECK(cli("").code == 2);
  CHECK(cli("frobnicate").code == 2);
  CHECK(cli("growth").code == 2);
  CHECK(cli("growth --family tree:delta=1 --N 3").code == 3);
  CHECK(cli("growth --family \"power:k=2(\" --N 3").code == 3);
  CHECK(cli("simulate --family square --budget 1 --strategy /nonexistent/file").code != 0);
  CHECK(cli("check /nonexistent/file").code != 0);
  auto strat = scratch("bad_strategy.json");
  std::ofstream(strat) << R"j({"r":1,"budget":"1","schedule":[["(1,0)","(0,1)"]]})j";
  CHECK(cli("simulate --family square --budget 1 --strategy " + strat.string()).code == 4);
  std::ofstream(strat) << R"j({"r":1,"budget":"2","schedule":[["(0,0)"]]})j";
  CHECK(cli("simulate --family square --budget 2 --strategy " + strat.string()).code == 4);
}
