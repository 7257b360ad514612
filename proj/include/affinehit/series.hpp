#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "affinehit/errors.hpp"

namespace affinehit {

/// Value of a truncated series with its certified truncation error.
struct SeriesResult {
  double value = 0.0;
  std::size_t terms_used = 1;
  double tail_bound = 0.0;
  /// Set when the value is a limit by continuity rather than a summed series.
  bool continuity_limit = false;
};

struct SeriesOptions {
  double tol = 1e-13;
  std::size_t max_terms = 10001;
};

namespace detail {

// Tracks one side of a series. A side is certified once the ratios of
// successive absolute terms are below one and non-increasing; the remaining
// tail is then dominated by a geometric series with the last ratio.
class TailTracker {
 public:
  // Returns true once the side needs no further terms.
  bool push(double t, double half_tol) {
    const double m = std::abs(t);
    if (m == 0.0) {
      if (++zeros_ >= 2) {
        bound_ = 0.0;
        done_ = true;
      }
      return done_;
    }
    zeros_ = 0;
    ++nonzero_;
    if (prev1_ > 0.0 && prev2_ > 0.0) {
      const double q0 = prev1_ / prev2_;
      const double q1 = m / prev1_;
      if (q0 < 1.0 && q1 < 1.0 && q1 <= q0) {
        bound_ = prev1_ * q0 * q0 / (1.0 - q0);
        if (bound_ < half_tol) done_ = true;
      } else {
        bound_ = HUGE_VAL;
      }
    } else {
      bound_ = HUGE_VAL;
    }
    prev2_ = prev1_;
    prev1_ = m;
    return done_;
  }

  bool done() const { return done_; }
  double bound() const { return bound_; }
  std::size_t nonzero() const { return nonzero_; }

 private:
  double prev1_ = 0.0;
  double prev2_ = 0.0;
  double bound_ = HUGE_VAL;
  int zeros_ = 0;
  std::size_t nonzero_ = 0;
  bool done_ = false;
};

// Neumaier compensated accumulator.
class Accumulator {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace detail

/// Sum term(k) over all integers k, outward from k = 0.
///
/// The caller guarantees that |term(k)| eventually decays monotonically in
/// |k|. Throws ConvergenceError holding the partial sum when the tolerance is
/// not met within max_terms evaluations.
template <class Term>
SeriesResult sum_bilateral(Term&& term, const SeriesOptions& opt = {}) {
  if (!(opt.tol > 0.0)) detail::fail_domain("sum_bilateral: tol must be > 0");
  detail::Accumulator acc;
  const double t0 = term(0L);
  acc.add(t0);
  std::size_t evaluated = 1;
  detail::TailTracker up;
  detail::TailTracker down;
  const double half = 0.5 * opt.tol;
  for (long k = 1; !(up.done() && down.done()); ++k) {
    if (evaluated + 2 > opt.max_terms) {
      throw ConvergenceError("sum_bilateral: tolerance not reached", acc.value(),
                             up.bound() + down.bound(), evaluated);
    }
    if (!up.done()) {
      const double t = term(k);
      acc.add(t);
      up.push(t, half);
      ++evaluated;
    }
    if (!down.done()) {
      const double t = term(-k);
      acc.add(t);
      down.push(t, half);
      ++evaluated;
    }
  }
  SeriesResult r;
  r.value = acc.value();
  r.terms_used = std::max<std::size_t>(
      1, up.nonzero() + down.nonzero() + (t0 != 0.0 ? 1 : 0));
  r.tail_bound = up.bound() + down.bound();
  return r;
}

/// Sum term(k) for k = first, first + 1, ... with the same certification.
template <class Term>
SeriesResult sum_one_sided(Term&& term, long first = 0,
                           const SeriesOptions& opt = {}) {
  if (!(opt.tol > 0.0)) detail::fail_domain("sum_one_sided: tol must be > 0");
  detail::Accumulator acc;
  detail::TailTracker side;
  std::size_t evaluated = 0;
  for (long k = first; !side.done(); ++k) {
    if (evaluated + 1 > opt.max_terms) {
      throw ConvergenceError("sum_one_sided: tolerance not reached",
                             acc.value(), side.bound(), evaluated);
    }
    const double t = term(k);
    acc.add(t);
    side.push(t, opt.tol);
    ++evaluated;
  }
  SeriesResult r;
  r.value = acc.value();
  r.terms_used = std::max<std::size_t>(1, side.nonzero());
  r.tail_bound = side.bound();
  return r;
}

/// Parity folding over the odd integers: for psi(-m) = epsilon psi(m),
/// the sum over all odd m equals (1 + epsilon) times the sum over m > 0.
template <class Psi>
SeriesResult fold_odd(Psi&& psi, int epsilon, const SeriesOptions& opt = {}) {
  if (epsilon != 1 && epsilon != -1) {
    detail::fail_domain("fold_odd: epsilon must be +1 or -1");
  }
  if (epsilon == -1) return SeriesResult{0.0, 1, 0.0, false};
  SeriesOptions half = opt;
  half.tol = 0.5 * opt.tol;
  SeriesResult r = sum_one_sided(
      [&](long k) { return psi(2 * k + 1); }, 0, half);
  r.value *= 2.0;
  r.tail_bound *= 2.0;
  return r;
}

}  // namespace affinehit
