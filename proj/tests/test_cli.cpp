#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "cli_io.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  std::string cmd = std::string(ARBGAS_CLI_PATH) + " " + args + " > /dev/null 2> /dev/null";
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("numeric formatting round-trips doubles") {
  for (double v : {1.0 / 3.0, 2.5e-13, 0.1, 1234567.89, 4.0 / 7.0}) {
    std::string s = arbgas_cli::num(v);
    CHECK(std::stod(s) == v);
  }
}

TEST_CASE("atomic write") {
  std::string path = "cli_io_test.txt";
  arbgas_cli::write_atomic(path, "hello\n");
  CHECK(slurp(path) == "hello\n");
  arbgas_cli::write_atomic(path, "world\n");
  CHECK(slurp(path) == "world\n");
  std::remove(path.c_str());
}

TEST_CASE("cli determinism: same config and seed give identical bytes") {
  REQUIRE(run_cli("sample --torus 2 3 1 --beta 1.1 --h 0.2 --sweeps 3000 --seed 42 --out det_a.csv") == 0);
  REQUIRE(run_cli("sample --torus 2 3 1 --beta 1.1 --h 0.2 --sweeps 3000 --seed 42 --out det_b.csv") == 0);
  CHECK(slurp("det_a.csv") == slurp("det_b.csv"));
  REQUIRE(run_cli("sample --torus 2 3 1 --beta 1.1 --h 0.2 --sweeps 3000 --seed 43 --out det_c.csv") == 0);
  CHECK(slurp("det_a.csv") != slurp("det_c.csv"));
  for (const char* f : {"det_a.csv", "det_b.csv", "det_c.csv"}) std::remove(f);
}

TEST_CASE("cli config file: values read, flags override, unknown keys rejected") {
  {
    std::ofstream f("good.cfg");
    f << "[exact-check]\n"
      << "graph = builtin:c3\n"
      << "beta = 2.0\n"
      << "h = 0.3\n"
      << "out = cfg_out.csv\n";
  }
  REQUIRE(run_cli("exact-check --config good.cfg") == 0);
  std::string base = slurp("cfg_out.csv");
  CHECK(base.find("observable") == 0);

  // a flag overrides the file value: different beta changes the output
  REQUIRE(run_cli("exact-check --config good.cfg --beta 3.0 --out cfg_out2.csv") == 0);
  CHECK(slurp("cfg_out2.csv") != base);

  {
    std::ofstream f("bad.cfg");
    f << "[exact-check]\n"
      << "graph = builtin:c3\n"
      << "not_a_key = 1\n";
  }
  CHECK(run_cli("exact-check --config bad.cfg") == 2);
  for (const char* f : {"good.cfg", "bad.cfg", "cfg_out.csv", "cfg_out2.csv"}) std::remove(f);
}

TEST_CASE("cli error paths") {
  CHECK(run_cli("exact-check --no-such-flag") == 2);
  CHECK(run_cli("frd --d 2 --L 2 --N 1 --m2 -1") == 1);  // invalid m^2 -> runtime error record
  CHECK(run_cli("ward-check --graph builtin:c3 --beta 1 --h 0 --tol 1e-19 --out wc_tol.csv") == 1);
  std::remove("wc_tol.csv");
  std::remove("wc_tol.csv.manifest.json");
}

TEST_CASE("ward-check passes at the documented tolerance") {
  CHECK(run_cli("ward-check --graph builtin:c3 --beta 2 --h 0.3 --tol 1e-12 --out wc_ok.csv") == 0);
  std::string csv = slurp("wc_ok.csv");
  CHECK(csv.find("ward,") != std::string::npos);
  std::remove("wc_ok.csv");
  std::remove("wc_ok.csv.manifest.json");
}
