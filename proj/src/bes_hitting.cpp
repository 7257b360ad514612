#include "affinehit/bes_hitting.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "affinehit/errors.hpp"
#include "affinehit/specialfn.hpp"
#include "tail_integral.hpp"

namespace affinehit {

namespace {

using std::numbers::pi;

constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kSwitchRate = std::numbers::pi;
// exp(-kUnderflow) is below the smallest subnormal double.
constexpr double kUnderflow = 745.0;

void check_boundary(const AffineBoundary& bdy, const char* fn) {
  if (!(bdy.a > 0.0) || !std::isfinite(bdy.a) || !std::isfinite(bdy.b)) {
    detail::fail_domain(std::string(fn) + ": requires finite a > 0 and finite b");
  }
}

void check_time(double u, const char* fn) {
  if (!(u > 0.0) || !std::isfinite(u)) {
    detail::fail_domain(std::string(fn) + ": time must be finite and > 0");
  }
}

SeriesResult constant(double v) { return SeriesResult{v, 1, 0.0, false}; }

SeriesOptions scaled(const SeriesOptions& opt, double scale) {
  SeriesOptions s = opt;
  if (scale > 0.0 && std::isfinite(scale)) s.tol = opt.tol / scale;
  return s;
}

// exp(-g) sinh(x) / x for x >= 0.
double damped_sinhc(double g, double x) {
  if (x == 0.0) return std::exp(-g);
  if (x < 20.0) return std::exp(-g) * std::sinh(x) / x;
  return 0.5 * (std::exp(x - g) - std::exp(-x - g)) / x;
}

}  // namespace

namespace detail {

SeriesResult excursion_max_series(double theta, const SeriesOptions& opt) {
  if (std::isnan(theta)) fail_domain("excursion_max_series: theta is NaN");
  if (theta <= 0.0) {
    SeriesResult r;
    r.continuity_limit = true;
    return r;
  }
  if (std::isinf(theta)) return constant(1.0);
  SeriesResult r;
  if (theta >= 1.0) {
    SeriesOptions half = opt;
    half.tol = 0.5 * opt.tol;
    r = sum_one_sided(
        [&](long k) {
          const double q = 2.0 * static_cast<double>(k * k) * theta;
          return (1.0 - 2.0 * q) * std::exp(-q);
        },
        1, half);
    r.value = 1.0 + 2.0 * r.value;
    r.tail_bound *= 2.0;
  } else {
    // Poisson-dual form: sqrt(2 pi) pi^2 theta^{-3/2} sum_{n>=1} n^2 e^{-pi^2 n^2 / 2 theta}
    const double pref = std::sqrt(2.0 * pi) * pi * pi / (theta * std::sqrt(theta));
    r = sum_one_sided(
        [&](long n) {
          const double nn = static_cast<double>(n);
          return nn * nn * std::exp(-pi * pi * nn * nn / (2.0 * theta));
        },
        1, scaled(opt, pref));
    r.value *= pref;
    r.tail_bound *= pref;
  }
  r.value = std::clamp(r.value, 0.0, 1.0);
  return r;
}

}  // namespace detail

SeriesResult bes3_survival_series(const AffineBoundary& bdy, double u,
                                  const SeriesOptions& opt) {
  check_boundary(bdy, "bes3_survival");
  check_time(u, "bes3_survival");
  if (!bdy.in_window(u)) return constant(0.0);
  const double a = bdy.a;
  const double b = bdy.b;
  const double c = bdy.at(u);
  const double su = std::sqrt(u);
  SeriesOptions half = opt;
  half.tol = 0.5 * opt.tol;
  SeriesResult r = sum_bilateral(
      [&](long k) {
        const double kk = static_cast<double>(k);
        const double mass = normal_mass_scaled(-2.0 * kk * kk * a * b,
                                               -2.0 * kk * a / su,
                                               (c - 2.0 * kk * a) / su);
        // e^{-2k^2ab} phi(z1) with the weight folded into the exponent
        const double e = -(c / (2.0 * u)) * (4.0 * a * kk * (kk - 1.0) + c);
        const double slope = (2.0 * kk * b * u - c) / su;
        return (1.0 - 4.0 * kk * kk * a * b) * mass + slope * kInvSqrt2Pi * std::exp(e);
      },
      half);
  r.value = std::clamp(2.0 * r.value, 0.0, 1.0);
  r.tail_bound *= 2.0;
  return r;
}

SeriesResult bes3_never_hits(double a, double b, const SeriesOptions& opt) {
  if (!(a >= 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    detail::fail_domain("bes3_never_hits: requires finite a >= 0 and finite b");
  }
  if (b <= 0.0 || a == 0.0) return constant(0.0);
  return detail::excursion_max_series(a * b, opt);
}

SeriesResult bes3_survival(const AffineBoundary& bdy, double u,
                           const SeriesOptions& opt) {
  check_boundary(bdy, "bes3_survival");
  check_time(u, "bes3_survival");
  if (!bdy.in_window(u)) return constant(0.0);
  const double rate = 2.0 * bdy.a * bdy.at(u) / u;
  if (rate >= kSwitchRate) return bes3_survival_series(bdy, u, opt);

  SeriesResult r = detail::integrate_density_tail(
      bdy, u, [&](double t) { return bessel_ap_density(3.0, 0.0, bdy, t, opt).value; });
  if (bdy.b > 0.0) {
    const SeriesResult never = bes3_never_hits(bdy.a, bdy.b, opt);
    r.value += never.value;
    r.tail_bound += never.tail_bound;
  }
  r.value = std::clamp(r.value, 0.0, 1.0);
  return r;
}

SeriesResult bes3_bridge_below_line(double y, double u, double a, int sign,
                                    const SeriesOptions& opt) {
  if (sign != 1 && sign != -1) {
    detail::fail_domain("bes3_bridge_below_line: sign must be +1 or -1");
  }
  if (!(a > 0.0) || !std::isfinite(a)) {
    detail::fail_domain("bes3_bridge_below_line: requires a > 0");
  }
  check_time(u, "bes3_bridge_below_line");
  if (!(y >= 0.0) || !std::isfinite(y)) {
    detail::fail_domain("bes3_bridge_below_line: requires finite y >= 0");
  }
  const double top = a + sign * u;
  if (!(y < top)) return constant(0.0);
  const double g = 2.0 * a * top / u;
  SeriesResult r = sum_one_sided(
      [&](long k) {
        const double kk = static_cast<double>(k);
        const double q = g * kk * kk;
        const double x = 2.0 * kk * a * y / u;
        const double cosh_part = 0.5 * (std::exp(x - q) + std::exp(-x - q));
        return 2.0 * (cosh_part - 2.0 * q * damped_sinhc(q, x));
      },
      1, opt);
  r.value = std::clamp(1.0 + r.value, 0.0, 1.0);
  return r;
}

SeriesResult bes3_bridge_below_affine(double a, double b, double u,
                                      const SeriesOptions& opt) {
  if (!(a > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    detail::fail_domain("bes3_bridge_below_affine: requires a > 0 and finite b");
  }
  check_time(u, "bes3_bridge_below_affine");
  const double end = a + b * u;
  if (!(end > 0.0)) return constant(0.0);
  return detail::excursion_max_series(a * end / u, opt);
}

double bes3_above_line_density(double x, double a, double b, double t) {
  if (!(a >= 0.0) || !(x > a) || !(b > 0.0) || !std::isfinite(x)) {
    detail::fail_domain("bes3_above_line_density: requires x > a >= 0 and b > 0");
  }
  check_time(t, "bes3_above_line_density");
  // the path comes down to a line moving up: Gaussian centre x - b t
  const double d = x - a - b * t;
  return (a + b * t) * (x - a) / (t * x * std::sqrt(2.0 * pi * t)) *
         std::exp(-d * d / (2.0 * t));
}

double bes3_origin_density(double b, double t) {
  if (!(b > 0.0) || !std::isfinite(b)) {
    detail::fail_domain("bes3_origin_density: requires b > 0");
  }
  check_time(t, "bes3_origin_density");
  return b * std::exp(-b * b * t / 2.0) / std::sqrt(2.0 * pi * t);
}

double bessel_origin_line_density(double delta, double x, double b, double t) {
  if (!(delta > 2.0) || !std::isfinite(delta)) {
    detail::fail_domain("bessel_origin_line_density: requires delta > 2");
  }
  if (!(x >= 0.0) || !std::isfinite(x)) {
    detail::fail_domain("bessel_origin_line_density: requires x >= 0");
  }
  if (!(b > 0.0) || !std::isfinite(b)) {
    detail::fail_domain("bessel_origin_line_density: requires b > 0");
  }
  check_time(t, "bessel_origin_line_density");
  const BesselOrder order = BesselOrder::from_dimension(delta);
  const double nu = order.value();
  if (x == 0.0) {
    const double lg = nu * std::log(b * b / 2.0) + (nu - 1.0) * std::log(t) -
                      b * b * t / 2.0 - std::lgamma(nu);
    return std::exp(lg);
  }
  const double lg = nu * std::log(b * t / x) - (b * b * t + x * x / t) / 2.0;
  return std::exp(lg) / (2.0 * t * bessel_k(order, x * b));
}

SeriesResult bessel_ap_density(double delta, double x, const AffineBoundary& bdy,
                               double t, const SeriesOptions& opt) {
  const BesselOrder order = BesselOrder::from_dimension(delta);
  check_boundary(bdy, "bessel_ap_density");
  check_time(t, "bessel_ap_density");
  if (!(x >= 0.0) || !(x <= bdy.a)) {
    detail::fail_domain("bessel_ap_density: requires 0 <= x <= a");
  }
  if (!bdy.in_window(t)) return constant(0.0);
  const double a = bdy.a;
  const double b = bdy.b;
  const double c = bdy.at(t);
  const double gap = std::min(a, c) - x;
  if (gap > 0.0 && gap * gap / (2.0 * t) > kUnderflow) return constant(0.0);

  const double nu = order.value();
  const double pref = std::exp(-(b / (2.0 * a)) * (a * a - x * x) - b * b * t / 2.0 +
                               (nu - 1.0) * std::log1p(b * t / a));
  if (pref == 0.0) return constant(0.0);
  const double g = t / (2.0 * a * c);
  const double scale = std::pow(a, nu - 2.0);
  const double origin = 1.0 / (std::pow(2.0 * a, nu) * gamma_fn(nu + 1.0));
  const double xpow = x > 0.0 ? std::pow(x, -nu) : 0.0;
  const double half_tol = opt.tol / pref;

  // The eigenfunction factor x^{-nu} J_nu(j x / a) oscillates, so the tail is
  // certified on a smooth envelope of it rather than on the terms themselves.
  auto eigen = [&](double j) {
    if (x == 0.0) return origin * std::pow(j, nu);
    return xpow * boost::math::cyl_bessel_j(nu, j * x / a);
  };
  auto envelope = [&](double j) {
    if (x == 0.0) return origin * std::pow(j, nu);
    if (nu >= 0.0) return xpow;
    const double z = j * x / a;
    return xpow * std::max(1.0, 2.0 * std::pow(z / 2.0, nu) / gamma_fn(nu + 1.0));
  };

  // Orders -1/2 and 1/2 have elementary zeros and Bessel values.
  const bool half = std::abs(nu) == 0.5;
  auto eigen_half = [&](double j) {
    if (x == 0.0) return origin * std::pow(j, nu);
    const double z = j * x / a;
    const double r = xpow * std::sqrt(2.0 / (pi * z));
    return nu > 0.0 ? r * std::sin(z) : r * std::cos(z);
  };

  const double jmax = std::sqrt(40.0 / g);
  std::size_t n = static_cast<std::size_t>(jmax / pi + std::abs(nu) / 2.0) + 16;
  const std::size_t limit = std::max<std::size_t>(opt.max_terms, 64);
  for (;;) {
    n = std::min(n, limit);
    std::shared_ptr<const std::vector<double>> zeros;
    if (!half) zeros = bessel_j_zero_table(order, n);
    detail::Accumulator acc;
    detail::TailTracker tracker;
    std::size_t used = 0;
    for (std::size_t k = 0; k < n && !tracker.done(); ++k) {
      double j = 0.0;
      double jn1 = 0.0;
      double e = 0.0;
      if (half) {
        j = (static_cast<double>(k) + (nu > 0.0 ? 1.0 : 0.5)) * pi;
        jn1 = (k % 2 ? -1.0 : 1.0) * std::sqrt(2.0 / (pi * j));
        e = eigen_half(j);
      } else {
        j = (*zeros)[k];
        jn1 = boost::math::cyl_bessel_j(nu + 1.0, j);
        e = eigen(j);
      }
      const double w = j * std::exp(-j * j * g) * scale / jn1;
      const double term = e * w;
      acc.add(term);
      tracker.push(envelope(j) * std::abs(w), half_tol);
      if (term != 0.0) ++used;
    }
    if (tracker.done()) {
      SeriesResult r;
      r.value = std::max(0.0, pref * acc.value());
      r.terms_used = std::max<std::size_t>(used, 1);
      r.tail_bound = pref * tracker.bound();
      return r;
    }
    if (n >= limit) {
      throw ConvergenceError("bessel_ap_density: zero budget exhausted",
                             pref * acc.value(), pref * tracker.bound(), n);
    }
    n *= 2;
  }
}

SeriesResult bes3_level_density(double a, double u, const SeriesOptions& opt) {
  if (!(a > 0.0)) detail::fail_domain("bes3_level_density: requires a > 0");
  check_time(u, "bes3_level_density");
  const double pref = a / std::sqrt(2.0 * pi * u * u * u * u * u);
  SeriesResult r = fold_odd(
      [&](long m) {
        const double q = static_cast<double>(m * m) * a * a;
        return (q - u) * std::exp(-q / (2.0 * u));
      },
      1, scaled(opt, pref));
  r.value = std::max(0.0, pref * r.value);
  r.tail_bound *= pref;
  return r;
}

SeriesResult bes3_density(const AffineBoundary& bdy, double t,
                          const SeriesOptions& opt) {
  check_boundary(bdy, "bes3_density");
  check_time(t, "bes3_density");
  if (bdy.b == 0.0 && bdy.a * bdy.a / (2.0 * t) >= 1.0) {
    return bes3_level_density(bdy.a, t, opt);
  }
  return bessel_ap_density(3.0, 0.0, bdy, t, opt);
}

double bes_level_laplace(double a, double lambda) {
  if (!(a > 0.0) || !(lambda > 0.0)) {
    detail::fail_domain("bes_level_laplace: requires a > 0 and lambda > 0");
  }
  const double z = a * std::sqrt(2.0 * lambda);
  if (z < 1e-8) return 1.0 - z * z / 6.0;
  return z / std::sinh(z);
}

}  // namespace affinehit
