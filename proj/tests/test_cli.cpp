#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <string>

#include "helpers.hpp"

using namespace tropcover;

// End-to-end runs of the installed binary. The test runner exports
// TROPCOVER_CLI with the built path; without it these tests are skipped.

namespace {

const char* cli_path() { return std::getenv("TROPCOVER_CLI"); }

struct RunResult {
  int status = -1;
  std::string out;
  std::string err;
};

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const std::string tag = std::to_string(counter++);
  const std::string out_file = "cli_stdout_" + tag + ".tmp";
  const std::string err_file = "cli_stderr_" + tag + ".tmp";
  const std::string cmd = std::string(cli_path()) + " " + args + " > " +
                          out_file + " 2> " + err_file;
  int raw = std::system(cmd.c_str());
  RunResult r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = read_text_file(out_file);
  r.err = read_text_file(err_file);
  std::remove(out_file.c_str());
  std::remove(err_file.c_str());
  return r;
}

#define NEED_CLI()                              \
  do {                                          \
    if (!cli_path()) SKIP("TROPCOVER_CLI not set"); \
  } while (0)

}  // namespace

TEST_CASE("emitted examples validate cleanly", "[cli]") {
  NEED_CLI();
  RunResult e = run_cli("example theta_sigma3 --emit cli_theta.tc");
  REQUIRE(e.status == 0);
  CHECK(e.out.find("example theta_sigma3") != std::string::npos);

  RunResult v = run_cli("validate cli_theta.tc");
  CHECK(v.status == 0);
  CHECK(v.out.find("curve theta: 2 vertices, 3 edges") != std::string::npos);
  CHECK(v.out.find("action S3 on theta: order 6") != std::string::npos);

  SECTION("without --emit the document itself is printed") {
    RunResult doc = run_cli("example theta_sigma3");
    REQUIRE(doc.status == 0);
    Document parsed = parse_document(doc.out, "stdout");
    REQUIRE(parsed.curves.size() == 1);
    CHECK(parsed.curves[0] == example_theta().curve());
  }
  std::remove("cli_theta.tc");
}

TEST_CASE("classify reports the verdict through the exit code", "[cli]") {
  NEED_CLI();
  REQUIRE(run_cli("example theta_sigma3 --emit cli_th.tc").status == 0);
  RunResult bad = run_cli("classify cli_th.tc");
  CHECK(bad.status == 1);
  CHECK(bad.out.find("preGalois: yes") != std::string::npos);
  CHECK(bad.out.find("Galois:    no") != std::string::npos);

  REQUIRE(run_cli("example cycle 12 --emit cli_c12.tc").status == 0);
  RunResult good = run_cli("classify cli_c12.tc");
  CHECK(good.status == 0);
  CHECK(good.out.find("Galois:    yes") != std::string::npos);
  std::remove("cli_th.tc");
  std::remove("cli_c12.tc");
}

TEST_CASE("correspondence output is deterministic and parseable", "[cli]") {
  NEED_CLI();
  REQUIRE(run_cli("example cycle 12 --emit cli_corr.tc").status == 0);

  RunResult one = run_cli("correspondence cli_corr.tc --jobs 2");
  REQUIRE(one.status == 0);
  CHECK(one.out.find("group order 12, 6 subgroups") != std::string::npos);
  CHECK(one.out.find("order reversal: 36/36 ordered pairs consistent") !=
        std::string::npos);
  CHECK(one.out.find("correspondence: pass") != std::string::npos);

  RunResult two = run_cli("correspondence cli_corr.tc --jobs 4");
  CHECK(two.status == 0);
  CHECK(two.out == one.out);

  SECTION("records format emits one JSON object per line") {
    RunResult rec = run_cli("correspondence cli_corr.tc --format records");
    REQUIRE(rec.status == 0);
    std::istringstream in(rec.out);
    std::string line;
    int lines = 0;
    Json last;
    while (std::getline(in, line)) {
      last = Json::parse(line);
      REQUIRE(last.is_object());
      REQUIRE(last.contains("record"));
      ++lines;
    }
    CHECK(lines == 43);  // 6 entries + 36 pairs + 1 summary
    CHECK(last["record"] == "correspondence");
    CHECK(last["status"] == "pass");
  }
  std::remove("cli_corr.tc");
}

TEST_CASE("the quotient projection of a subgroup factors the full one",
          "[cli]") {
  NEED_CLI();
  REQUIRE(run_cli("example cycle 12 z4 --emit cli_z4.tc").status == 0);
  REQUIRE(run_cli("example cycle 12 --emit cli_z12.tc").status == 0);

  RunResult ok = run_cli(
      "ump cli_z4.tc cli_z12.tc --action Z4 --psi-quotient Z12");
  CHECK(ok.status == 0);
  CHECK(ok.out.find("theta degree 3") != std::string::npos);
  CHECK(ok.out.find("degree check: 12 = 3 * 4: pass") != std::string::npos);
  CHECK(ok.out.find("ump: pass") != std::string::npos);

  SECTION("a non-invariant target fails with the right code") {
    REQUIRE(run_cli("example star6 --emit cli_s6.tc").status == 0);
    RunResult no = run_cli("ump cli_s6.tc --action G --psi-quotient Z6");
    CHECK(no.status == 1);
    CHECK(no.out.find("ContinuousOnly") != std::string::npos);
    CHECK(no.out.find("ump: fail") != std::string::npos);
    std::remove("cli_s6.tc");
  }
  std::remove("cli_z4.tc");
  std::remove("cli_z12.tc");
}

TEST_CASE("quotients can be emitted and re-validated", "[cli]") {
  NEED_CLI();
  REQUIRE(run_cli("example star5 --emit cli_s5.tc").status == 0);
  RunResult q = run_cli("quotient cli_s5.tc --action G --emit cli_s5_q.tc");
  REQUIRE(q.status == 0);
  CHECK(q.out.find("projection degree: 6") != std::string::npos);

  RunResult v = run_cli("validate cli_s5_q.tc");
  CHECK(v.status == 0);
  CHECK(v.err.empty());
  std::remove("cli_s5.tc");
  std::remove("cli_s5_q.tc");
}

TEST_CASE("export-dot draws curves and colours coverings", "[cli]") {
  NEED_CLI();
  REQUIRE(run_cli("example infstar --emit cli_inf.tc").status == 0);
  RunResult d = run_cli("export-dot cli_inf.tc --curve infstar");
  REQUIRE(d.status == 0);
  CHECK(d.out.find("graph \"infstar\"") != std::string::npos);
  CHECK(d.out.find("style=dashed") != std::string::npos);
  std::remove("cli_inf.tc");
}

TEST_CASE("broken input exits with status 2 and a located message", "[cli]") {
  NEED_CLI();
  write_text_file("cli_broken.tc", "curve c\nv p\nv q\ne e p q 0\n");
  RunResult r = run_cli("validate cli_broken.tc");
  CHECK(r.status == 2);
  CHECK(r.err.find("error:") != std::string::npos);
  CHECK(r.err.find("cli_broken.tc:4:") != std::string::npos);
  std::remove("cli_broken.tc");

  RunResult missing = run_cli("validate cli_no_such_file.tc");
  CHECK(missing.status == 2);
}

TEST_CASE("a correspondence on a non-Galois covering is refused", "[cli]") {
  NEED_CLI();
  REQUIRE(run_cli("example spider --emit cli_sp.tc").status == 0);
  RunResult r = run_cli("correspondence cli_sp.tc");
  CHECK(r.status == 1);
  CHECK(r.err.find("NotGaloisCovering") != std::string::npos);
  std::remove("cli_sp.tc");
}
