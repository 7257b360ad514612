#pragma once

#include <cmath>
#include <limits>

namespace affinehit {

/// The moving level t -> a + b t.
struct AffineBoundary {
  double a = 1.0;  ///< intercept
  double b = 0.0;  ///< slope

  double at(double t) const { return a + b * t; }

  /// End of the time window on which the boundary is positive.
  /// Infinite for b >= 0, a/|b| for b < 0.
  double window_end() const {
    return b < 0.0 ? a / -b : std::numeric_limits<double>::infinity();
  }

  bool in_window(double t) const { return t > 0.0 && t < window_end(); }
};

enum class ProcessKind { BM, RBM, BES };

/// Process law with its starting point. RBM is BES with delta = 1.
struct ProcessSpec {
  ProcessKind kind = ProcessKind::RBM;
  double delta = 1.0;  ///< dimension, used for BES only
  double start = 0.0;

  static ProcessSpec bm(double x = 0.0) { return {ProcessKind::BM, 1.0, x}; }
  static ProcessSpec rbm(double x = 0.0) { return {ProcessKind::RBM, 1.0, x}; }
  static ProcessSpec bes(double delta, double x = 0.0) {
    return {ProcessKind::BES, delta, x};
  }

  /// Effective Bessel dimension: 1 for RBM, delta for BES.
  double dimension() const { return kind == ProcessKind::RBM ? 1.0 : delta; }
};

/// A process pinned at `endpoint` after time `length`.
struct BridgeSpec {
  ProcessSpec process;
  double length = 1.0;
  double endpoint = 0.0;
};

}  // namespace affinehit
