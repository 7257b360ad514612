#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace affinehit::mc {

struct Line {
  double a = 0.0;
  double b = 0.0;
  double at(double t) const { return a + b * t; }
};

/// Step control shared by every simulation.
struct StepControl {
  double dt_min = 1e-4;
  double dt_max = 1.0;
  bool adaptive = true;
  bool crossing_correction = true;
};

/// One simulated first-passage problem.
///
/// Signed mode: a one-dimensional BM X must stay in (-lower(t), upper(t)).
/// Radial mode: R = |X| for X in R^dim must stay on its side of `upper`.
/// Between grid points, crossings are accepted with the Brownian-bridge
/// probability exp(-2 d1 d2 / h). This is exact in signed mode and a
/// local approximation in radial mode.
struct Scenario {
  bool radial = false;
  int dim = 1;
  double start = 0.0;  ///< along the first axis
  Line upper{1.0, 0.0};
  bool has_lower = false;
  Line lower{1.0, 0.0};
  bool above = false;  ///< radial: the path starts above `upper`

  /// Pinning at time pin_time, if positive.
  double pin_time = 0.0;
  double pin_value = 0.0;  ///< endpoint; radial mode: its norm
  /// Signed mode: the law of interest is |X|, so the endpoint sign is drawn.
  bool pin_either_sign = false;

  /// Crossings before this time are not monitored.
  double monitor_from = 0.0;
  /// Radial mode: take the side of the line from the position at
  /// monitor_from instead of `above`.
  bool orient_at_monitor = false;
  /// Increasing record times; the last one ends the simulation.
  std::vector<double> nodes;
};

/// Histogram of first-hit intervals: counts[i] is the number of paths first
/// hitting in (nodes[i-1], nodes[i]], counts[nodes.size()] those never hit.
struct HitCounts {
  std::vector<std::uint64_t> counts;
  std::uint64_t paths = 0;
};

HitCounts simulate_hits(const Scenario& s, const StepControl& steps,
                        std::size_t paths, std::uint64_t seed, unsigned threads);

/// Runs body(first, last) over [0, n) in fixed blocks on a worker pool.
/// The block layout depends on n only, so any per-block reduction done in
/// block order is independent of the thread count.
void parallel_blocks(std::size_t n, std::size_t block, unsigned threads,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

}  // namespace affinehit::mc
