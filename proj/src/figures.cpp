#include "affinehit/figures.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "affinehit/errors.hpp"
#include "affinehit/rbm_hitting.hpp"

namespace affinehit {

namespace {
constexpr int kPoints = 600;
}

Figure make_figure(int id) {
  if (id != 1 && id != 2) throw DomainError("make_figure: id must be 1 or 2");
  Figure f;
  f.name = "fig" + std::to_string(id);
  f.boundary = id == 1 ? AffineBoundary{3.0, 1.0} : AffineBoundary{3.0, -1.0};
  f.rows.reserve(kPoints);
  for (int i = 1; i <= kPoints; ++i) {
    // fig1 includes u = 30; fig2 stays strictly inside (0, 3)
    const double u = id == 1 ? 30.0 * i / kPoints : 3.0 * i / (kPoints + 1);
    f.rows.push_back({u, rbm_density_delta(f.boundary, u).value,
                      rbm_density_ap(f.boundary, u).value});
  }
  return f;
}

std::vector<std::filesystem::path> write_figures(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> out;
  for (int id : {1, 2}) {
    const Figure f = make_figure(id);
    const std::filesystem::path p = dir / (f.name + ".csv");
    std::ofstream os(p);
    if (!os) throw std::runtime_error("cannot open " + p.string() + " for writing");
    os << "u,density_delta,density_ap\n";
    char buf[96];
    for (const FigureRow& r : f.rows) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", r.u, r.density_delta,
                    r.density_ap);
      os << buf;
    }
    if (!os) throw std::runtime_error("write failed: " + p.string());
    out.push_back(p);
  }
  return out;
}

std::vector<FigureRow> read_figure_csv(const std::filesystem::path& file) {
  std::ifstream is(file);
  if (!is) throw std::runtime_error("cannot open " + file.string());
  std::string line;
  std::getline(is, line);  // header
  std::vector<FigureRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    FigureRow r;
    char c1 = 0, c2 = 0;
    if (!(ss >> r.u >> c1 >> r.density_delta >> c2 >> r.density_ap) || c1 != ',' ||
        c2 != ',') {
      throw std::runtime_error("malformed row in " + file.string() + ": " + line);
    }
    rows.push_back(r);
  }
  return rows;
}

double trapezoid_mass(const std::vector<FigureRow>& rows, double window_end) {
  double sum = 0.0;
  double pu = 0.0;
  double pf = 0.0;
  for (const FigureRow& r : rows) {
    sum += 0.5 * (pf + r.density_delta) * (r.u - pu);
    pu = r.u;
    pf = r.density_delta;
  }
  if (std::isfinite(window_end) && window_end > pu) sum += 0.5 * pf * (window_end - pu);
  return sum;
}

}  // namespace affinehit
