#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"

#include "affinehit/figures.hpp"
#include "affinehit/wedge.hpp"

using namespace affinehit;
namespace fs = std::filesystem;

TEST_CASE("figure grids") {
  const Figure f1 = make_figure(1), f2 = make_figure(2);
  REQUIRE(f1.rows.size() == 600);
  REQUIRE(f2.rows.size() == 600);
  CHECK(f1.rows.back().u == doctest::Approx(30.0));
  CHECK(f1.rows.front().u > 0.0);
  CHECK(f2.rows.back().u < 3.0);
  CHECK(f1.boundary.a == 3.0);
  CHECK(f2.boundary.b == -1.0);
  CHECK_THROWS(make_figure(3));
}

TEST_CASE("written figures round-trip and carry the right mass") {
  const fs::path dir = fs::temp_directory_path() / "affinehit-test-figures" / "nested";
  fs::remove_all(dir.parent_path());
  const auto paths = write_figures(dir);
  REQUIRE(paths.size() == 2);
  std::ifstream in(paths[0]);
  std::string header;
  std::getline(in, header);
  CHECK(header == "u,density_delta,density_ap");

  const auto r1 = read_figure_csv(dir / "fig1.csv");
  const auto r2 = read_figure_csv(dir / "fig2.csv");
  const Figure f1 = make_figure(1);
  for (std::size_t i = 0; i < r1.size(); ++i) {
    CHECK(r1[i].u == f1.rows[i].u);
    CHECK(r1[i].density_delta == f1.rows[i].density_delta);
  }
  double worst = 0.0;
  for (const auto* rows : {&r1, &r2}) {
    for (const auto& r : *rows) worst = std::max(worst, std::abs(r.density_delta - r.density_ap));
  }
  CHECK(worst < 1e-9);
  CHECK(std::abs(trapezoid_mass(r2, 3.0) - 1.0) < 5e-4);
  CHECK(std::abs(trapezoid_mass(r1, INFINITY) - (1.0 - theta_star(6.0 / M_PI).value)) < 5e-4);
  fs::remove_all(dir.parent_path());
}

TEST_CASE("I/O errors surface") {
  const fs::path file = fs::temp_directory_path() / "affinehit-test-not-a-dir";
  std::ofstream(file) << "x";
  CHECK_THROWS(write_figures(file / "sub"));
  CHECK_THROWS(read_figure_csv(file / "missing.csv"));
  fs::remove(file);
}
