#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <string>

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run(const std::string& args) {
  std::string cmd = std::string(MOST_BIN) + " " + args + " 2>&1";
  std::array<char, 4096> buf{};
  RunResult res{0, {}};
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) res.out.append(buf.data(), n);
  int status = pclose(p);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

std::string corpus(const char* name) { return std::string(CORPUS_DIR) + "/" + name; }

}  // namespace

TEST_CASE("exit code contract") {
  CHECK(run("check " + corpus("neg.most")).exit_code == 0);
  CHECK(run("verify " + corpus("doubleneg.most")).exit_code == 0);
  CHECK(run("check " + corpus("check_only/bad_constant_forward.most")).exit_code == 1);
  CHECK(run("verify " + corpus("check_only/bids_zero.most")).exit_code == 1);
  CHECK(run("traces " + corpus("neg.most") + " --proc nosuch").exit_code == 2);
  CHECK(run("check /no/such/file.most").exit_code == 2);
  CHECK(run("bogus-subcommand x").exit_code == 2);
}

TEST_CASE("parse errors exit with code 2 and a position") {
  RunResult r = run("check " + corpus("../bad_syntax.most"));
  CHECK(r.exit_code == 2);
}

TEST_CASE("trace output is the sorted canonical text form") {
  RunResult r = run("traces " + corpus("neg.most") + " --proc negPlain");
  CHECK(r.exit_code == 0);
  CHECK(r.out ==
        "I i.0 ; O o.1 ; I close i ; O close o\n"
        "I i.1 ; O o.0 ; I close i ; O close o\n" +
            r.out.substr(r.out.find("# 2 traces")));
  RunResult s = run("spec-traces " + corpus("close_relay.most") + " --proc closeRelay");
  CHECK(s.exit_code == 0);
  CHECK(s.out.rfind("I close a ; O close c", 0) == 0);
}

TEST_CASE("json output is byte-identical across runs and schema-versioned") {
  for (const char* cmd : {"check", "verify"}) {
    RunResult a = run(std::string(cmd) + " " + corpus("auction.most") + " --json");
    RunResult b = run(std::string(cmd) + " " + corpus("auction.most") + " --json");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("\"schema\": 1") != std::string::npos);
  }
  RunResult a = run("traces " + corpus("doubleneg.most") + " --proc doubleNegP --json");
  RunResult b = run("traces " + corpus("doubleneg.most") + " --proc doubleNegP --json");
  CHECK(a.out == b.out);
}

TEST_CASE("the limit flag is a distinct error, not a truncation") {
  RunResult r = run("spec-traces " + corpus("auction.most") + " --proc auctioneerPlain --limit 2");
  CHECK(r.exit_code == 1);
  CHECK(r.out.find("resource limit") != std::string::npos);
}

TEST_CASE("derivation and parallel flags") {
  RunResult r = run("check " + corpus("close_relay.most") + " --derivation");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("Red-RTu") != std::string::npos);
  RunResult par = run("check " + corpus("auction.most") + " --parallel");
  CHECK(par.exit_code == 0);
}
