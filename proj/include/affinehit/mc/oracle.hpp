#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "affinehit/types.hpp"
#include "affinehit/wedge.hpp"

namespace affinehit::mc {

struct McConfig {
  std::size_t paths = 200000;
  double dt = 1e-4;  ///< smallest step; the step used everywhere when !adaptive
  double dt_max = 1.0;
  std::uint64_t seed = 0x5eed2011ULL;
  double horizon = 0.0;  ///< 0 selects a per-estimator default
  bool crossing_correction = true;
  bool adaptive = true;
  unsigned threads = 0;  ///< 0: one per hardware thread
};

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t paths = 0;
  /// Fraction of paths whose outcome was decided by the horizon cutoff.
  double unresolved = 0.0;
  McConfig config;
};

enum class BridgeEventKind { StaysInWedge, StaysBelowLine, MaxBelow };

struct BridgeEvent {
  BridgeEventKind kind = BridgeEventKind::MaxBelow;
  WedgeSpec wedge;
  AffineBoundary line;
  double level = 0.0;

  static BridgeEvent stays_in_wedge(const WedgeSpec& w) {
    BridgeEvent e;
    e.kind = BridgeEventKind::StaysInWedge;
    e.wedge = w;
    return e;
  }
  static BridgeEvent stays_below_line(double a, double b) {
    BridgeEvent e;
    e.kind = BridgeEventKind::StaysBelowLine;
    e.line = {a, b};
    return e;
  }
  static BridgeEvent max_below(double y) {
    BridgeEvent e;
    e.kind = BridgeEventKind::MaxBelow;
    e.level = y;
    return e;
  }
};

/// P(H_{a,b} > u). BM is watched on the upper line only; RBM is |BM|;
/// BES(delta) is the norm of a delta-dimensional BM, integer delta <= 8.
McEstimate estimate_hit_survival(const ProcessSpec& process, const AffineBoundary& bdy,
                                 double u, const McConfig& cfg);

/// P(t1 < H_{a,b} <= t2). For a start above the line the path must come down
/// to it. Hits before monitor_from are not observed.
McEstimate estimate_hit_window(const ProcessSpec& process, const AffineBoundary& bdy,
                               double t1, double t2, const McConfig& cfg,
                               double monitor_from = 0.0);

/// P(BM from 0 stays in the wedge up to the horizon).
McEstimate estimate_wedge_survival(const WedgeSpec& w, const McConfig& cfg);

McEstimate estimate_bridge_event(const BridgeSpec& bridge, const BridgeEvent& event,
                                 const McConfig& cfg);

/// P(position at H > y) for b > 0, P(position at H < y) for b < 0. Paths not
/// hitting by the horizon count as above y and are reported in `unresolved`.
McEstimate estimate_hit_location_cdf(const ProcessSpec& process,
                                     const AffineBoundary& bdy, double y,
                                     const McConfig& cfg);

/// P(last time on t -> intercept + slope t is before t). The path is followed
/// to the horizon, by default 50 max(1, intercept / slope).
McEstimate estimate_last_hit_cdf(const ProcessSpec& process, double intercept,
                                 double slope, double t, const McConfig& cfg);

struct EquivalenceReport {
  McEstimate acceptance;
  std::size_t attempts = 0;
  std::size_t accepted = 0;
  std::array<std::string, 3> statistics{"max", "time_average", "midpoint"};
  std::array<double, 3> ks_distance{};
  std::array<double, 3> ks_pvalue{};
};

/// Compares Brownian bridges x -> y conditioned to stay positive (by
/// rejection) with BES(3) bridges x -> y on a common time grid.
EquivalenceReport conditioned_bridge_equivalence_check(double x, double y, double u,
                                                       const McConfig& cfg,
                                                       std::size_t accepted_target = 50000,
                                                       std::size_t grid = 256);

/// Asymptotic p-value of the two-sample Kolmogorov-Smirnov statistic.
double ks_two_sample_pvalue(double d, std::size_t n1, std::size_t n2);

/// Two-sample Kolmogorov-Smirnov distance. Sorts both inputs.
double ks_two_sample_distance(std::vector<double>& s1, std::vector<double>& s2);

}  // namespace affinehit::mc
