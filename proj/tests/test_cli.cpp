#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "coulomb/io.hpp"

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("coulomb_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string sub(const std::string& name) const { return (path / name).string(); }
};

int run_cli(const std::string& args) {
  const std::string cmd = std::string(COULOMB_LAB_BIN) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Result files (everything except the manifest) of two runs, paired by name.
bool outputs_identical(const fs::path& a, const fs::path& b) {
  std::size_t count = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    const std::string name = entry.path().filename().string();
    if (name == "manifest.json") continue;
    ++count;
    if (!fs::exists(b / name)) return false;
    if (slurp(entry.path()) != slurp(b / name)) return false;
  }
  return count > 0;
}

}  // namespace

TEST_CASE("zcheck writes the sweep and a manifest") {
  TempDir tmp;
  CHECK(run_cli("zcheck --n-max 100 --out " + tmp.sub("z")) == 0);
  bool found_csv = false;
  for (const auto& e : fs::directory_iterator(tmp.sub("z")))
    found_csv |= (e.path().extension() == ".csv");
  CHECK(found_csv);
  const auto manifest = nlohmann::json::parse(slurp(tmp.sub("z") + "/manifest.json"));
  CHECK(manifest.at("command") == "zcheck");
  CHECK(manifest.at("config").at("n_max") == 100);
  CHECK(manifest.at("config").at("seed") == 1);
  CHECK(manifest.contains("wall_time_s"));
  CHECK(manifest.contains("version"));
}

TEST_CASE("fekete reruns are byte-identical") {
  TempDir tmp;
  const std::string args = "fekete --n 15 --potential quadratic --multistarts 3 --seed 7 --out ";
  CHECK(run_cli(args + tmp.sub("a")) == 0);
  CHECK(run_cli(args + tmp.sub("b")) == 0);
  CHECK(outputs_identical(tmp.sub("a"), tmp.sub("b")));
}

TEST_CASE("config file fills unset flags and flags win") {
  TempDir tmp;
  {
    std::ofstream cfg(tmp.sub("run.json"));
    cfg << R"({"n": 7, "beta": 4.0, "sweeps": 60, "burn-in": 10})";
  }
  CHECK(run_cli("sample --config " + tmp.sub("run.json") + " --beta 2.0 --out " +
                tmp.sub("s")) == 0);
  const auto manifest = nlohmann::json::parse(slurp(tmp.sub("s") + "/manifest.json"));
  CHECK(manifest.at("config").at("n") == 7);          // from the file
  CHECK(manifest.at("config").at("beta") == 2.0);     // flag override
  CHECK(manifest.at("config").at("sweeps") == 60);
}

TEST_CASE("parse errors exit 2 and name the problem") {
  TempDir tmp;
  CHECK(run_cli("fekete --no-such-flag 3 --out " + tmp.sub("x")) == 2);
  CHECK(run_cli("wper --lattice dodecahedral --out " + tmp.sub("y")) == 2);
  CHECK(run_cli("") == 2);  // missing subcommand
}

TEST_CASE("numerical failures exit 3") {
  TempDir tmp;
  // box too small for the circular-law support
  CHECK(run_cli("equilibrium --method grid --half-width 0.7 --cell 0.05 --out " +
                tmp.sub("g")) == 3);
}

TEST_CASE("wper emits the energy with an error bar") {
  TempDir tmp;
  CHECK(run_cli("wper --lattice square --tol 1e-8 --out " + tmp.sub("w")) == 0);
  for (const auto& e : fs::directory_iterator(tmp.sub("w"))) {
    if (e.path().filename() == "manifest.json") continue;
    const auto j = nlohmann::json::parse(slurp(e.path()));
    CHECK(j.contains("W"));
    CHECK(j.contains("err"));
    CHECK(j.at("err").get<double>() > 0.0);
    CHECK(j.at("n") == 1);
  }
}

TEST_CASE("thread cap comes from the environment unless overridden") {
  TempDir tmp;
  const std::string cmd = "COULOMB_LAB_THREADS=2 " + std::string(COULOMB_LAB_BIN) +
                          " zcheck --n-max 10 --out " + tmp.sub("z") +
                          " >/dev/null 2>&1";
  REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  auto manifest = nlohmann::json::parse(slurp(tmp.sub("z") + "/manifest.json"));
  CHECK(manifest.at("config").at("threads") == 2);

  const std::string cmd2 = "COULOMB_LAB_THREADS=2 " + std::string(COULOMB_LAB_BIN) +
                           " zcheck --n-max 10 --threads 3 --out " + tmp.sub("z3") +
                           " >/dev/null 2>&1";
  REQUIRE(WEXITSTATUS(std::system(cmd2.c_str())) == 0);
  manifest = nlohmann::json::parse(slurp(tmp.sub("z3") + "/manifest.json"));
  CHECK(manifest.at("config").at("threads") == 3);
}

TEST_CASE("grid-sampled potentials load from sidecar files") {
  TempDir tmp;
  // sample V = |x|^2 on [-3,3]^2 and solve the obstacle problem on [-2,2]^2
  const int nodes = 97;
  const double h = 6.0 / (nodes - 1);
  Eigen::ArrayXXd vals(nodes, nodes);
  for (int i = 0; i < nodes; ++i)
    for (int j = 0; j < nodes; ++j) {
      const double x = -3 + i * h, y = -3 + j * h;
      vals(i, j) = x * x + y * y;
    }
  {
    std::ofstream meta(tmp.sub("pot.json"));
    meta << nlohmann::json{{"values", tmp.sub("pot.bin")},
                           {"origin", {-3.0, -3.0}},
                           {"spacing", h}}
                .dump();
  }
  // reuse the library writer for the binary part
  coulomb::io::write_grid_binary(tmp.sub("pot.bin"), vals);
  CHECK(run_cli("equilibrium --potential grid:" + tmp.sub("pot.json") +
                " --method grid --half-width 2 --cell 0.0625 --out " +
                tmp.sub("eq")) == 0);
  bool has_sidecar = false;
  for (const auto& e : fs::directory_iterator(tmp.sub("eq")))
    has_sidecar |= (e.path().extension() == ".bin");
  CHECK(has_sidecar);
}

TEST_CASE("csv output uses LF endings and a header row") {
  TempDir tmp;
  CHECK(run_cli("ginibre --n 12 --seed 3 --out " + tmp.sub("g")) == 0);
  for (const auto& e : fs::directory_iterator(tmp.sub("g"))) {
    if (e.path().extension() != ".csv") continue;
    const std::string text = slurp(e.path());
    CHECK(text.rfind("x,y\n", 0) == 0);
    CHECK(text.find('\r') == std::string::npos);
  }
}
