#pragma once

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>

#include "affinehit/series.hpp"
#include "affinehit/types.hpp"

namespace affinehit::detail {

// Integral of a hitting density over (u, end of window).
//
// In s = t / (a + b t) the eigenfunction terms become plain exponentials
// e^{-j^2 s / 2a}, the window end moves to infinity for b < 0, and for b > 0
// t = infinity becomes the finite point s = 1/b. Double-exponential
// quadrature handles the result well.
template <class Density>
SeriesResult integrate_density_tail(const AffineBoundary& bdy, double u,
                                    Density&& density) {
  const double a = bdy.a;
  const double b = bdy.b;
  std::size_t evals = 0;
  auto g = [&](double s) {
    ++evals;
    const double q = 1.0 - b * s;
    if (!(q > 0.0)) return 0.0;
    const double t = a * s / q;
    if (!(t > 0.0) || !std::isfinite(t) || !bdy.in_window(t)) return 0.0;
    return density(t) * a / (q * q);
  };
  const double s0 = u / bdy.at(u);
  double err = 0.0;
  double l1 = 0.0;
  std::size_t levels = 0;
  double v = 0.0;
  if (b > 0.0) {
    thread_local boost::math::quadrature::tanh_sinh<double> finite;
    v = finite.integrate(g, s0, 1.0 / b, 1e-14, &err, &l1, &levels);
  } else {
    thread_local boost::math::quadrature::exp_sinh<double> half_line;
    v = half_line.integrate(g, s0, std::numeric_limits<double>::infinity(), 1e-14,
                            &err, &l1, &levels);
  }
  SeriesResult r;
  r.value = v;
  r.terms_used = evals;
  r.tail_bound = err;
  return r;
}

}  // namespace affinehit::detail
