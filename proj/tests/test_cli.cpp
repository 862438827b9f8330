#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

fs::path work_dir() {
  const fs::path d = fs::temp_directory_path() / "mch_cli_test";
  fs::create_directories(d);
  return d;
}

void put(const fs::path& p, const std::string& text) {
  std::ofstream f(p);
  f << text;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args, std::string* err_text = nullptr) {
  const fs::path d = work_dir();
  const std::string cmd = std::string(MCH_CLI_PATH) + " " + args + " >" +
                          (d / "stdout.txt").string() + " 2>" +
                          (d / "stderr.txt").string();
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  if (err_text) *err_text = slurp(d / "stderr.txt");
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

const char* kPairConfig = R"({
  "schema": "mch-lab/1",
  "profile": {"kind": "solitons", "generators": [
    {"re_zeta": -0.8660254037844386, "im_zeta": 0.5, "re_ct": 1.0, "im_ct": 0.0}]},
  "ctx": {"xi": -1.0}
})";

const char* kZeroConfig = R"({
  "schema": "mch-lab/1",
  "profile": {"kind": "zero", "X": 8.0, "h": 0.05},
  "pde": {"L": 30.0, "n": 64, "dt": 0.01, "t_end": 0.1, "n_segments": 2}
})";

}  // namespace

TEST_CASE("partition output is byte-identical across runs") {
  const fs::path d = work_dir();
  put(d / "pair.json", kPairConfig);
  const std::string cfg = (d / "pair.json").string();
  REQUIRE(run_cli("partition -c " + cfg + " -o " + (d / "p1").string()) == 0);
  REQUIRE(run_cli("partition -c " + cfg + " -o " + (d / "p2").string()) == 0);
  const std::string r1 = slurp(d / "p1" / "partition_report.txt");
  const std::string r2 = slurp(d / "p2" / "partition_report.txt");
  REQUIRE(!r1.empty());
  CHECK(r1 == r2);
}

TEST_CASE("zero-field evolution is deterministic") {
  const fs::path d = work_dir();
  put(d / "zero.json", kZeroConfig);
  const std::string cfg = (d / "zero.json").string();
  REQUIRE(run_cli("evolve -c " + cfg + " -o " + (d / "e1").string()) == 0);
  REQUIRE(run_cli("evolve -c " + cfg + " -o " + (d / "e2").string()) == 0);
  for (const char* name : {"evolve_field.txt", "evolve_meta.txt"}) {
    const std::string r1 = slurp(d / "e1" / name);
    REQUIRE(!r1.empty());
    CHECK(r1 == slurp(d / "e2" / name));
  }
}

TEST_CASE("exit codes map the error taxonomy") {
  const fs::path d = work_dir();
  put(d / "zero.json", kZeroConfig);
  const std::string cfg = (d / "zero.json").string();

  SUBCASE("unknown verb is a usage error") {
    CHECK(run_cli("frobnicate -c " + cfg) == 2);
  }
  SUBCASE("missing config option") { CHECK(run_cli("partition") == 2); }
  SUBCASE("unreadable config file") {
    CHECK(run_cli("partition -c " + (d / "missing.json").string()) == 4);
  }
  SUBCASE("malformed json") {
    put(d / "bad.json", "{nope");
    CHECK(run_cli("partition -c " + (d / "bad.json").string()) == 2);
  }
  SUBCASE("unknown config key") {
    put(d / "extra.json", R"({"schema": "mch-lab/1", "nope": 1})");
    CHECK(run_cli("evolve -c " + (d / "extra.json").string()) == 2);
  }
  SUBCASE("numeric failure surfaces as exit 3") {
    // circle pole in the cuspon band: the coordinate map is non-monotone
    put(d / "cusp.json", R"({
      "schema": "mch-lab/1",
      "profile": {"kind": "solitons", "generators": [
        {"re_zeta": 0.5, "im_zeta": 0.8660254037844386, "re_ct": 1.0, "im_ct": 0.0}]},
      "engine": {"x_lo": -3.0, "x_hi": 3.0, "nx": 16, "ywin": 4.0}
    })");
    CHECK(run_cli("solitons -c " + (d / "cusp.json").string() + " -o " +
                  (d / "cusp_out").string()) == 3);
  }
  SUBCASE("profile file errors carry the line number") {
    put(d / "prof.txt", "# header\n0.1 abc\n");
    put(d / "file.json", std::string(R"({
      "schema": "mch-lab/1",
      "profile": {"kind": "file", "path": ")") +
                             (d / "prof.txt").string() + R"("}
    })");
    std::string err;
    CHECK(run_cli("scatter -c " + (d / "file.json").string() + " -o " +
                      (d / "file_out").string(),
                  &err) == 2);
    CHECK(err.find("line 2") != std::string::npos);
  }
}
