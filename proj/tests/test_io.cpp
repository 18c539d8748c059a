#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "coulomb/io.hpp"

using namespace coulomb;
namespace fs = std::filesystem;

namespace {
struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("coulomb_io_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};
}  // namespace

TEST_CASE("doubles round-trip through the 17-digit format") {
  for (double v : {1.0 / 3.0, M_PI, 1e-300, -7.25, 0.1, 123456789.123456789}) {
    const std::string s = io::format_double(v);
    CHECK(std::stod(s) == v);
  }
}

TEST_CASE("configuration csv round trip") {
  TempDir tmp;
  Configuration cfg(3, 2);
  cfg << 0.1, -0.2, 1.0 / 3.0, M_PI, -5e-17, 2.25;
  const std::string path = tmp.file("cfg.csv");
  io::save_configuration_csv(path, cfg);
  const Configuration back = io::load_configuration_csv(path);
  CHECK((back.array() == cfg.array()).all());

  const std::string text = io::read_text(path);
  CHECK(text.rfind("x,y\n", 0) == 0);
  CHECK(text.find("\r") == std::string::npos);
}

TEST_CASE("configuration json round trip") {
  Configuration cfg(2, 2);
  cfg << 0.5, -0.25, 1e-9, 3.5;
  const auto j = io::configuration_to_json(cfg);
  const Configuration back = io::configuration_from_json(j);
  CHECK((back.array() == cfg.array()).all());
}

TEST_CASE("grid binary sidecar round trip") {
  TempDir tmp;
  Eigen::ArrayXXd a(3, 4);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j) a(i, j) = std::sin(i + 10.0 * j);
  const std::string path = tmp.file("grid.bin");
  io::write_grid_binary(path, a);
  const Eigen::ArrayXXd back = io::read_grid_binary(path);
  REQUIRE(back.rows() == 3);
  REQUIRE(back.cols() == 4);
  CHECK((back == a).all());
  // header: two u32 dims then row-major doubles
  CHECK(fs::file_size(path) == 8 + 12 * 8);
}

TEST_CASE("equilibrium measures serialize with sorted keys") {
  TempDir tmp;
  const auto em = EquilibriumMeasure::solve_radial(Potential::quadratic());
  const std::string path = tmp.file("em.json");
  io::save_equilibrium(em, path);
  const auto j = io::read_json(path);
  CHECK(j.at("kind") == "radial");
  CHECK(j.at("R_star").get<double>() == em.support_radius());
  CHECK(j.at("c").get<double>() == em.c());
  CHECK(j.at("I0").get<double>() == em.I0());
  CHECK(j.at("L0").get<double>() == em.L0());
}

TEST_CASE("grid equilibrium emits sidecar binaries") {
  TempDir tmp;
  ObstacleGridOptions opt;
  opt.cell = 1.0 / 16;
  const auto em = EquilibriumMeasure::solve_grid(Potential::quadratic(), opt);
  const std::string path = tmp.file("em.json");
  io::save_equilibrium(em, path);
  const auto j = io::read_json(path);
  CHECK(j.at("kind") == "grid");
  const Eigen::ArrayXXd u = io::read_grid_binary(j.at("u_grid").get<std::string>());
  CHECK((u == em.grid_u()).all());
}

TEST_CASE("analysis records echo their parameters") {
  const Rect w{{-1, -1}, {2, 3}};
  const auto m = io::moment_record(w, 2.0, 0.25, 100, 0.125);
  CHECK(m.at("R") == 2.0);
  CHECK(m.at("moment") == 0.125);
  CHECK(m.at("window").at("hi").at(1) == 3.0);
  const auto f = io::field_norm_record(w, 1.5, 0.01, 0.0, 50, 7.5);
  CHECK(f.at("q") == 1.5);
  CHECK(f.at("exclusion") == 0.0);
  CHECK(f.at("norm") == 7.5);
}

TEST_CASE("config hash is stable and key-order independent") {
  const nlohmann::json a = {{"n", 100}, {"beta", 2.0}, {"seed", 7}};
  const nlohmann::json b = {{"seed", 7}, {"beta", 2.0}, {"n", 100}};
  CHECK(io::config_hash(a) == io::config_hash(b));
  const nlohmann::json c = {{"seed", 8}, {"beta", 2.0}, {"n", 100}};
  CHECK(io::config_hash(a) != io::config_hash(c));
  CHECK(io::config_hash(a).size() == 16);
}
