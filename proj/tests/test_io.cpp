#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "conslaw/errors.hpp"
#include "conslaw/flux.hpp"
#include "conslaw/initial_conditions.hpp"
#include "conslaw/io.hpp"
#include "conslaw/solver.hpp"

using namespace conslaw;
namespace fs = std::filesystem;

TEST_CASE("binary frame round trip") {
  const Grid g = Grid::make_2d(8, -1.0, 1.0, 4, 0.0, 2.0);
  const auto f = ScalarField::sample(g, [](const Point& p) { return p[0] * 3.0 + p[1]; }, 0.75);
  std::stringstream ss;
  write_frame(ss, f);
  const auto back = read_frame(ss);
  CHECK(back.time() == 0.75);
  CHECK(back.grid().same_geometry(g));
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(back[k] == f[k]);
  std::stringstream bad("NOTAFRAME");
  CHECK_THROWS_AS(read_frame(bad), InputError);
}

TEST_CASE("trajectory and csv round trips") {
  const auto flux = make_flux("burgers");
  const Grid g = Grid::make_1d(64, -1.0, 1.0);
  const auto traj = solve(make_initial_condition({"riemann", {}, 0}, g), flux, 0.5, {0.25});
  const fs::path dir = fs::temp_directory_path() / "conslaw_test_io";
  fs::create_directories(dir);
  write_trajectory(dir / "t.bin", traj);
  const auto back = read_trajectory(dir / "t.bin", "burgers");
  REQUIRE(back.frames.size() == traj.frames.size());
  CHECK(back.frames[1].time() == 0.25);

  const auto g2 = Grid::make_2d(4, 0.0, 1.0, 8, -2.0, 2.0);
  const auto f2 = ScalarField::sample(g2, [](const Point& p) { return p[0] - p[1]; });
  write_frame_csv(dir / "f.csv", f2);
  const auto r2 = read_frame_csv(dir / "f.csv");
  CHECK(r2.grid().same_geometry(g2, 1e-9));
  for (std::size_t k = 0; k < g2.size(); ++k) CHECK(r2[k] == f2[k]);
  fs::remove_all(dir);
}

TEST_CASE("sha256") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
