#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "cod/json_io.hpp"

using nlohmann::json;

namespace {

#ifndef CODTOOL_BIN
#define CODTOOL_BIN "./codtool"
#endif

int run(const std::string& args) {
  std::string cmd = std::string(CODTOOL_BIN) + " " + args + " 2>/dev/null >/dev/null";
  int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

json run_json(const std::string& args, int expect_exit) {
  std::string path = std::string("/tmp/codtool_test_") + std::to_string(::getpid()) + ".json";
  std::string cmd = std::string(CODTOOL_BIN) + " " + args + " --out " + path + " 2>/dev/null >/dev/null";
  int status = std::system(cmd.c_str());
  REQUIRE(WEXITSTATUS(status) == expect_exit);
  std::ifstream f(path);
  REQUIRE(f.good());
  json j;
  f >> j;
  std::remove(path.c_str());
  return j;
}

}  // namespace

TEST_CASE("construct and verify round trip") {
  json out = run_json("construct --n 3 --q 7", 0);
  CHECK(out["report"]["is_cod"] == true);
  CHECK(out["decomposition"]["components"].size() == 4);

  std::string dec_path = "/tmp/codtool_dec.json";
  {
    std::ofstream f(dec_path);
    f << out["decomposition"].dump();
  }
  CHECK(run("verify " + dec_path) == 0);

  // tamper: duplicate a basis vector from another component
  json tampered = out["decomposition"];
  tampered["components"][2]["basis"][0] = tampered["components"][1]["basis"][0];
  {
    std::ofstream f(dec_path);
    f << tampered.dump();
  }
  json rep = run_json("verify " + dec_path, 1);
  CHECK(rep["spans_directly"] == false);
  CHECK(rep["is_cod"] == false);
  std::remove(dec_path.c_str());
}

TEST_CASE("construct reports the missing root of unity") {
  CHECK(run("construct --n 5 --q 7") == 2);
  CHECK(run("construct --n 4 --q 5") == 0);
  CHECK(run("construct --n 2 --q 13") == 0);
  CHECK(run("construct --n 2 --q 7") == 2);  // q = 7 is 3 mod 4
  CHECK(run("construct --n 6 --q 7") == 2);  // 6 is not a prime power
}

TEST_CASE("survey ranges") {
  json rows = run_json("survey --n 2 --q 5..30", 0);
  std::vector<long> exists;
  for (const json& r : rows)
    if (r["exists"] == true) exists.push_back(r["q"].get<long>());
  CHECK(exists == std::vector<long>{5, 13, 17, 25, 29});

  json rows3 = run_json("survey --n 3 --q 5..30", 0);
  std::vector<long> exists3;
  for (const json& r : rows3)
    if (r["exists"] == true) exists3.push_back(r["q"].get<long>());
  CHECK(exists3 == std::vector<long>{7, 13, 19, 25});

  CHECK(run("survey --n 2 --q 31..30") == 2);  // inverted range is an error
}

TEST_CASE("survey empty range exits zero") {
  // a range with no valid prime powers of characteristic > 3 yields an empty table
  json rows = run_json("survey --n 2 --q 8..9", 0);
  CHECK(rows.is_array());
  CHECK(rows.empty());
}

TEST_CASE("classification subcommands") {
  json cls = run_json("classify-j3 --q 7 --a 1 --b 2", 0);
  CHECK(cls["class"] == "CLASS_1Z");
  json cls2 = run_json("classify-j3 --q 7 --a 6 --b 1", 0);
  CHECK(cls2["class"] == "CLASS_11");
  CHECK(run("classify-j3 --q 5 --a 1 --b 1") == 2);

  json cases = run_json("case-check --q 7", 0);
  REQUIRE(cases.size() == 48);
  for (const json& v : cases) CHECK(v["solvable"] == false);
  CHECK(run("case-check --q 5") == 2);

  CHECK(run("psi-check --q 7") == 0);
  CHECK(run("psi-check --q 5") == 2);
}

TEST_CASE("outputs are deterministic and respect COD_THREADS") {
  std::string a = "/tmp/codtool_det_a.json", b = "/tmp/codtool_det_b.json";
  std::string base = std::string(CODTOOL_BIN);
  REQUIRE(WEXITSTATUS(std::system(
              (base + " case-check --q 13 --out " + a + " 2>/dev/null >/dev/null").c_str())) == 0);
  REQUIRE(WEXITSTATUS(std::system(("COD_THREADS=1 " + base + " case-check --q 13 --out " + b +
                                   " 2>/dev/null >/dev/null")
                                      .c_str())) == 0);
  std::ifstream fa(a), fb(b);
  std::stringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  CHECK(sa.str() == sb.str());  // byte-identical regardless of parallelism
  CHECK(!sa.str().empty());
  std::remove(a.c_str());
  std::remove(b.c_str());
}
