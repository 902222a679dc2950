#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "milne/config.hpp"
#include "milne/errors.hpp"

using namespace milne;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("milne_cfg_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name, const std::string& content) const {
    const auto p = path / name;
    std::ofstream out(p);
    out << content;
    return p.string();
  }
};

}  // namespace

TEST_CASE("harmonic config round trip") {
  TempDir tmp;
  const auto cfg = tmp.file("h.json", R"({
    "potential": {"type": "harmonic", "m": 1.0, "omega": 1.0},
    "grid": {"xmin": -12.0, "xmax": 12.0, "n": 4001},
    "hbar": 1.0
  })");
  const auto run = load_config_file(cfg);
  CHECK(run.grid.n_points == 4001);
  CHECK(run.potential.kind() == PotentialKind::harmonic);
  CHECK(run.potential(2.0) == doctest::Approx(2.0));
  CHECK(run.potential.hbar() == 1.0);
}

TEST_CASE("polynomial and table configs") {
  TempDir tmp;
  const auto quartic = tmp.file("q.json", R"({
    "potential": {"type": "polynomial", "coeffs": [0, 0, 0, 0, 1.0], "m": 2.0},
    "grid": {"xmin": -4.0, "xmax": 4.0, "n": 801}
  })");
  const auto run = load_config_file(quartic);
  CHECK(run.potential.kind() == PotentialKind::polynomial);
  CHECK(run.potential(1.5) == doctest::Approx(5.0625));
  CHECK(run.potential.mass() == 2.0);
  CHECK(run.potential.hbar() == 1.0);  // default

  std::string csv = "x,V\n";
  for (int i = 0; i <= 400; ++i) {
    const double x = -10.0 + 0.05 * i;
    csv += std::to_string(x) + "," + std::to_string(0.5 * x * x) + "\n";
  }
  tmp.file("table.csv", csv);
  const auto table = tmp.file("t.json", R"({
    "potential": {"type": "table", "file": "table.csv"},
    "grid": {"xmin": -9.0, "xmax": 9.0, "n": 1201}
  })");
  const auto trun = load_config_file(table);
  CHECK(trun.potential.kind() == PotentialKind::tabulated);
  CHECK(trun.potential(1.0) == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("config rejections") {
  TempDir tmp;
  CHECK_THROWS_AS(load_config_file(tmp.file("bad.json", "{nope")), Error);
  CHECK_THROWS_AS(load_config_file((tmp.path / "missing.json").string()),
                  Error);
  CHECK_THROWS_AS(
      load_config_file(tmp.file("nogrid.json",
                                R"({"potential":{"type":"harmonic","omega":1}})")),
      Error);
  CHECK_THROWS_AS(
      load_config_file(tmp.file(
          "badpot.json",
          R"({"potential":{"type":"coulomb"},"grid":{"xmin":-1,"xmax":1,"n":11}})")),
      Error);
  CHECK_THROWS_AS(
      load_config_file(tmp.file(
          "evengrid.json",
          R"({"potential":{"type":"harmonic","omega":1},"grid":{"xmin":-1,"xmax":1,"n":10}})")),
      Error);
  // ramps have no interior minimum
  CHECK_THROWS_AS(
      load_config_file(tmp.file(
          "ramp.json",
          R"({"potential":{"type":"polynomial","coeffs":[0,1]},"grid":{"xmin":-1,"xmax":1,"n":11}})")),
      Error);
  // header row is mandatory in the table CSV
  tmp.file("headerless.csv", "0.0,1.0\n1.0,2.0\n2.0,3.0\n3.0,4.0\n");
  CHECK_THROWS_AS(
      load_config_file(tmp.file(
          "nohdr.json",
          R"({"potential":{"type":"table","file":"headerless.csv"},"grid":{"xmin":0,"xmax":3,"n":11}})")),
      Error);
}
