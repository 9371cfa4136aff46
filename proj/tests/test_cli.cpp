#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "inls/cli.hpp"
#include "inls/io.hpp"

using namespace inls;
namespace fs = std::filesystem;

namespace {

std::string bin_path() {
  const char* p = std::getenv("INLS_BIN");
  REQUIRE(p != nullptr);
  return p;
}

int run_binary(const std::string& args, const std::string& extra_env = "") {
  const std::string cmd = extra_env + " " + bin_path() + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
};

}  // namespace

TEST_CASE("exponents subcommand emits the report and the b-tilde value") {
  TempDir dir("inls_cli_exp");
  CHECK(run_binary("exponents --n 1 --alpha 1 --b 0.1 --p 2.05 --outdir " + dir.str()) == 0);
  const std::string json = read_text_file((dir.path / "exponents.json").string());
  const auto pos = json.find("\"b_tilde\":");
  REQUIRE(pos != std::string::npos);
  CHECK(std::stod(json.substr(pos + 10)) == doctest::Approx(0.17712434446770470).epsilon(1e-12));
  CHECK(json.find("\"p_max\"") != std::string::npos);
  CHECK(fs::exists(dir.path / "manifest.json"));
}

TEST_CASE("hypothesis violations exit with code 2 and keep no partial outputs") {
  TempDir dir("inls_cli_bad");
  CHECK(run_binary("exponents --n 1 --alpha 5 --b 0.1 --outdir " + dir.str()) == 2);
  CHECK(run_binary("simulate --n 1 --m 64 --alpha 5 --b 0.1 --T 0.1 --outdir " + dir.str()) == 2);
  CHECK_FALSE(fs::exists(dir.path / "ledger.csv"));
}

TEST_CASE("simulate in linear test mode conserves the mass column to 1e-12") {
  TempDir dir("inls_cli_lin");
  CHECK(run_binary("simulate --n 1 --m 128 --L 10 --alpha 1 --b 0.1 --T 0.2 --dt 0.002 "
                   "--linear --outdir " + dir.str()) == 0);
  std::ifstream is(dir.path / "ledger.csv");
  std::string line;
  std::getline(is, line);  // header
  double m0 = -1;
  while (std::getline(is, line)) {
    std::stringstream ss(line);
    std::string t, mass;
    std::getline(ss, t, ',');
    std::getline(ss, mass, ',');
    const double m = std::stod(mass);
    if (m0 < 0) m0 = m;
    CHECK(std::abs(m - m0) <= 1e-12 * m0);
  }
  CHECK(m0 > 0);
}

TEST_CASE("split subcommand writes both parts and the achieved bounds") {
  TempDir dir("inls_cli_split");
  CHECK(run_binary("split --n 1 --m 256 --L 10 --alpha 1 --b 0.1 --p 2.0595 --N 4 "
                   "--init corpus:9 --outdir " + dir.str()) == 0);
  CHECK(fs::exists(dir.path / "phi.dump"));
  CHECK(fs::exists(dir.path / "psi.dump"));
  const std::string json = read_text_file((dir.path / "split.json").string());
  CHECK(json.find("achieved_psi_mod") != std::string::npos);
}

TEST_CASE("manifest replay reproduces every output bit for bit") {
  TempDir dir("inls_cli_rep");
  TempDir work("inls_cli_rep_work");
  CHECK(run_binary("norms --n 1 --m 64 --L 10 --blocks 16 --exponents \"2,2,0\" --outdir " +
                   dir.str()) == 0);
  CHECK(run_binary("replay " + (dir.path / "manifest.json").string() + " --workdir " +
                   work.str()) == 0);
}

TEST_CASE("outputs are identical across thread counts") {
  TempDir d1("inls_cli_thr1");
  TempDir d2("inls_cli_thr2");
  CHECK(run_binary("norms --n 1 --m 64 --L 10 --blocks 16 --exponents \"2,2,0;3,1.5,0\" "
                   "--outdir " + d1.str(), "INLS_LAB_THREADS=1") == 0);
  CHECK(run_binary("norms --n 1 --m 64 --L 10 --blocks 16 --exponents \"2,2,0;3,1.5,0\" "
                   "--outdir " + d2.str(), "INLS_LAB_THREADS=8") == 0);
  CHECK(file_checksum((d1.path / "norms.csv").string()) ==
        file_checksum((d2.path / "norms.csv").string()));
}

TEST_CASE("exponents with a window candidate reports the condition flags") {
  TempDir dir("inls_cli_tc");
  CHECK(run_binary("exponents --n 1 --alpha 1 --b 0.1 --p 2.05 --N 8 "
                   "--T-candidate 0.05 --outdir " + dir.str()) == 0);
  const std::string json = read_text_file((dir.path / "exponents.json").string());
  CHECK(json.find("\"c1_ok\":true") != std::string::npos);
  CHECK(json.find("\"T_window\"") != std::string::npos);
}

TEST_CASE("JSON config supplies defaults and flags take precedence") {
  TempDir dir("inls_cli_cfg");
  const std::string cfg_path = (dir.path / "run.json").string();
  write_text_file(cfg_path, "{\"n\":1,\"alpha\":0.7,\"b\":0.15,\"p\":2.03}\n");
  CHECK(run_binary("exponents --config " + cfg_path + " --outdir " + dir.str()) == 0);
  std::string json = read_text_file((dir.path / "exponents.json").string());
  auto pos = json.find("\"alpha\":");
  REQUIRE(pos != std::string::npos);
  CHECK(std::stod(json.substr(pos + 8)) == doctest::Approx(0.7));
  // flag overrides the config value
  CHECK(run_binary("exponents --config " + cfg_path + " --alpha 0.9 --outdir " + dir.str()) == 0);
  json = read_text_file((dir.path / "exponents.json").string());
  pos = json.find("\"alpha\":");
  CHECK(std::stod(json.substr(pos + 8)) == doctest::Approx(0.9));
}

TEST_CASE("in-process run dispatch matches the binary surface") {
  TempDir dir("inls_cli_proc");
  CHECK(run_cli({"exponents", "--n", "2", "--alpha", "0.8", "--b", "0.3", "--outdir",
                 dir.str()}) == 0);
  CHECK(run_cli({"exponents", "--n", "2", "--alpha", "0.8", "--b", "1.4", "--outdir",
                 dir.str()}) == 2);  // b above b-tilde(2)
  CHECK(run_cli({"corpus", "--n", "1", "--m", "64", "--L", "10", "--outdir", dir.str()}) == 0);
  CHECK(fs::exists(dir.path / "corpus_19.dump"));
}
