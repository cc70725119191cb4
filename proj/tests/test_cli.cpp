#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "onerel/json_io.hpp"

using onerel::Json;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

// ONEREL_CLI_PATH is injected by the build so the suite always tests the
// binary it was built next to.
RunResult run_cli(const std::string& args, const std::string& feed = "") {
  std::string cmd = std::string(ONEREL_CLI_PATH) + " " + args;
  if (!feed.empty()) {
    std::ofstream f("/tmp/onerel_cli_stdin.txt");
    f << feed;
    f.close();
    cmd += " < /tmp/onerel_cli_stdin.txt";
  }
  cmd += " 2> /tmp/onerel_cli_stderr.txt";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream e("/tmp/onerel_cli_stderr.txt");
  std::ostringstream ss;
  ss << e.rdbuf();
  r.err = ss.str();
  return r;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line))
    if (!line.empty()) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("worked examples from the front of the pipeline") {
  const RunResult brown = run_cli("brown --word abABabABABa");
  CHECK(brown.code == 0);
  const Json jb = Json::parse(brown.out);
  CHECK(jb["status"] == "AscendingHNN");
  CHECK(jb["exponent_sum"] == Json::array({0, -1}));

  const RunResult period = run_cli("period --group HT --mod 5");
  CHECK(period.code == 0);
  const Json jp = Json::parse(period.out);
  CHECK(jp["tail"] == 0);
  CHECK(jp["period"] == 6);
  CHECK(jp["modulus"] == "5");
}

TEST_CASE("rank inference refuses gap words") {
  const RunResult r = run_cli("brown --word zz");
  CHECK(r.code == 2);
  CHECK(r.out.empty());
  CHECK(r.err.find("never") != std::string::npos);

  // An explicit rank overrides the inference and the call goes through.
  const RunResult forced = run_cli("brown --word zz --rank 26");
  CHECK(forced.code == 0);
  CHECK(Json::parse(forced.out)["status"] == "NeverByRank");
}

TEST_CASE("exit codes separate verdicts from failures") {
  // A negative mathematical verdict is still a successful run.
  const RunResult not_asc = run_cli("brown --word AAAAABAAAb");
  CHECK(not_asc.code == 0);
  CHECK(Json::parse(not_asc.out)["status"] == "NotAscending");

  // Domain failure: goodness needs a nonzero exponent vector.
  const RunResult dom = run_cli("goodness --word abAB");
  CHECK(dom.code == 1);
  CHECK(dom.out.empty());
  CHECK_FALSE(dom.err.empty());

  // Usage failures.
  CHECK(run_cli("frobnicate").code == 2);
  CHECK(run_cli("brown --no-such-flag 1").code == 2);
  CHECK(run_cli("period --group NOPE --mod 5").code == 2);
  CHECK(run_cli("period --group HT").code == 2);
  CHECK(run_cli("").code == 2);
}

TEST_CASE("seeded runs repeat byte for byte") {
  const std::string args = "sample --rank 2 --max-len 10 --count 6 --seed 123";
  const RunResult a = run_cli(args);
  const RunResult b = run_cli(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const Json j = Json::parse(a.out);
  CHECK(j["words"].size() == 6);

  const std::string exp = "experiment --kind p_good --lengths 30,50 --trials 80 --seed 11";
  const RunResult e1 = run_cli(exp + " --workers 1");
  const RunResult e4 = run_cli(exp + " --workers 4");
  CHECK(e1.code == 0);
  CHECK(e1.out == e4.out);  // worker count stays out of the report
  CHECK(e1.err.find("elapsed_seconds=") != std::string::npos);
}

TEST_CASE("batch mode emits one JSON line per input") {
  const RunResult r = run_cli("brown", "ab\nabABabABABa\nAAAAABAAAb\n");
  CHECK(r.code == 0);
  const std::vector<std::string> lines = lines_of(r.out);
  REQUIRE(lines.size() == 3);
  CHECK(Json::parse(lines[0])["status"] == "AscendingHNN");
  CHECK(Json::parse(lines[1])["status"] == "AscendingHNN");
  CHECK(Json::parse(lines[2])["status"] == "NotAscending");

  // A bad line poisons the exit code but not its neighbours.
  const RunResult mixed = run_cli("goodness", "abc\nabAB\nacb\n");
  CHECK(mixed.code == 1);
  REQUIRE(lines_of(mixed.out).size() == 2);
  CHECK_FALSE(mixed.err.empty());

  CHECK(run_cli("brown", "\n").code == 2);  // nothing to do is a usage error
}

TEST_CASE("schemas are printable and parse") {
  for (const char* sub :
       {"sample", "brown", "goodness", "magnus", "extract", "normalform", "smallcancel",
        "embed", "largeness", "period", "hensel", "quasifixed", "certify", "verify",
        "experiment"}) {
    const RunResult r = run_cli(std::string(sub) + " --schema");
    CHECK(r.code == 0);
    CHECK_FALSE(Json::parse(r.out).empty());
  }
}

TEST_CASE("certificate pipeline end to end") {
  const RunResult cert = run_cli("certify --group HT --word abAB");
  REQUIRE(cert.code == 0);
  const Json j = Json::parse(cert.out);
  REQUIRE(j["found"] == true);
  CHECK(j["certificate"]["p"] == 5);

  std::ofstream f("/tmp/onerel_cli_cert.json");
  f << j["certificate"].dump();
  f.close();
  const RunResult ver = run_cli("verify /tmp/onerel_cli_cert.json");
  CHECK(ver.code == 0);
  CHECK(Json::parse(ver.out)["verified"] == true);

  // Same certificate over stdin.
  const RunResult ver2 = run_cli("verify", j["certificate"].dump());
  CHECK(ver2.code == 0);
  CHECK(Json::parse(ver2.out)["verified"] == true);

  Json forged = j["certificate"];
  forged["word"] = "ab";
  const RunResult bad = run_cli("verify", forged.dump());
  CHECK(bad.code == 0);
  CHECK(Json::parse(bad.out)["verified"] == false);

  CHECK(run_cli("verify", "{").code == 2);
  CHECK(run_cli("verify /no/such/file").code == 2);

  // A fruitless search reports itself as data, with exit 0.
  const RunResult none =
      run_cli("certify --phi b --phi b --word a --primes 5 --e-cap 2");
  CHECK(none.code == 0);
  CHECK(Json::parse(none.out)["found"] == false);
}

TEST_CASE("experiment CSV output") {
  const RunResult r = run_cli(
      "experiment --kind hull_growth --k 3 --lengths 20,40 --trials 30 --seed 2 --csv");
  CHECK(r.code == 0);
  const std::vector<std::string> lines = lines_of(r.out);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] ==
        "kind,k,length,trials,hits,misses,degenerate,estimate,wilson_low,wilson_high,"
        "mean,variance,seed");
  CHECK(lines[1].find("hull_growth,3,20,30,") == 0);
  CHECK(lines[2].find("hull_growth,3,40,30,") == 0);
}

TEST_CASE("named groups drive the dynamical subcommands") {
  const RunResult nf = run_cli("normalform --group BS12 --word taT");
  CHECK(nf.code == 0);
  CHECK(Json::parse(nf.out)["str"] == "aa");  // t a t^-1 = phi(a) = a^2

  const RunResult hensel = run_cli("hensel --group HT --p 5 --depth 2");
  CHECK(hensel.code == 0);
  const Json jh = Json::parse(hensel.out);
  CHECK(jh["base_period"] == 6);
  CHECK(jh["levels"][1]["period"] == 12);

  const RunResult custom = run_cli("period --phi ab --phi ba --mod 5");
  CHECK(custom.code == 0);
  CHECK(Json::parse(custom.out)["period"] == 6);

  CHECK(run_cli("normalform --word taT").code == 2);  // no presentation given
}
