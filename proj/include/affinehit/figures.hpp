#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "affinehit/types.hpp"

namespace affinehit {

struct FigureRow {
  double u = 0.0;
  double density_delta = 0.0;
  double density_ap = 0.0;
};

struct Figure {
  std::string name;  ///< file stem, e.g. "fig1"
  AffineBoundary boundary;
  std::vector<FigureRow> rows;
};

/// Hitting-time density of RBM for t -> 3 + t on (0, 30] (id 1) or
/// t -> 3 - t on (0, 3) (id 2), 600 points, both series representations.
Figure make_figure(int id);

/// Writes fig1.csv and fig2.csv into dir (created if missing) and returns
/// the paths written.
std::vector<std::filesystem::path> write_figures(const std::filesystem::path& dir);

/// Reads a CSV written by write_figures.
std::vector<FigureRow> read_figure_csv(const std::filesystem::path& file);

/// Trapezoid integral of the delta column, closing the grid at u = 0 and,
/// for a finite window, at its end, where the density vanishes.
double trapezoid_mass(const std::vector<FigureRow>& rows, double window_end);

}  // namespace affinehit
