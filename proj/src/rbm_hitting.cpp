#include "affinehit/rbm_hitting.hpp"


#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "affinehit/errors.hpp"
#include "affinehit/specialfn.hpp"
#include "affinehit/wedge.hpp"
#include "tail_integral.hpp"

namespace affinehit {

namespace {

using std::numbers::pi;

// The kernel series decays like e^{-rate k^2} and the eigenfunction series
// like e^{-(pi^2/rate) k^2}; they cost the same at rate = pi.
constexpr double kSwitchRate = std::numbers::pi;

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

SeriesResult zero_result() { return SeriesResult{0.0, 1, 0.0, false}; }

SeriesOptions scaled(const SeriesOptions& opt, double scale) {
  SeriesOptions s = opt;
  if (scale > 0.0 && std::isfinite(scale)) s.tol = opt.tol / scale;
  return s;
}

}  // namespace

SeriesResult rbm_survival_series(const AffineBoundary& bdy, double u,
                                 const SeriesOptions& opt) {
  check_boundary(bdy, "rbm_survival");
  check_time(u, "rbm_survival");
  if (!bdy.in_window(u)) return zero_result();
  const double a = bdy.a;
  const double b = bdy.b;
  const double c = bdy.at(u);
  const double su = std::sqrt(u);
  SeriesOptions half = opt;
  half.tol = 0.5 * opt.tol;
  // k and -k paired: 2 (-1)^k e^{-2k^2ab} [Phi((2ka+c)/sqrt u) - Phi((2ka-c)/sqrt u)]
  SeriesResult r = sum_one_sided(
      [&](long k) {
        const double kk = static_cast<double>(k);
        const double m = normal_mass_scaled(-2.0 * kk * kk * a * b,
                                            (2.0 * kk * a - c) / su,
                                            (2.0 * kk * a + c) / su);
        return (k % 2 ? -1.0 : 1.0) * m;
      },
      1, half);
  r.value = std::clamp(std::erf(c / (std::numbers::sqrt2 * su)) + 2.0 * r.value,
                       0.0, 1.0);
  r.tail_bound *= 2.0;
  r.terms_used += 1;
  return r;
}

SeriesResult rbm_survival(const AffineBoundary& bdy, double u,
                          const SeriesOptions& opt) {
  check_boundary(bdy, "rbm_survival");
  check_time(u, "rbm_survival");
  if (!bdy.in_window(u)) return zero_result();
  const double rate = 2.0 * bdy.a * bdy.at(u) / u;
  if (rate >= kSwitchRate) return rbm_survival_series(bdy, u, opt);

  SeriesResult tail = detail::integrate_density_tail(
      bdy, u, [&](double t) { return rbm_density_ap(bdy, t, opt).value; });
  if (bdy.b > 0.0) {
    const SeriesResult never = rbm_never_hits(bdy.a, bdy.b, opt);
    tail.value += never.value;
    tail.tail_bound += never.tail_bound;
  }
  tail.value = std::clamp(tail.value, 0.0, 1.0);
  return tail;
}

SeriesResult rbm_density_delta(const AffineBoundary& bdy, double u,
                               const SeriesOptions& opt) {
  check_boundary(bdy, "rbm_density");
  check_time(u, "rbm_density");
  if (!bdy.in_window(u)) return zero_result();
  const double a = bdy.a;
  const double b = bdy.b;
  const double c = bdy.at(u);
  const double pref = 1.0 / std::sqrt(2.0 * pi * u * u * u);
  SeriesResult r = sum_bilateral(
      [&](long k) {
        const double kk = static_cast<double>(k);
        const double e = -(c / (2.0 * u)) * (4.0 * a * kk * (kk - 1.0) + c);
        return (k % 2 ? -1.0 : 1.0) * (a - b * u - 2.0 * kk * a) * std::exp(e);
      },
      scaled(opt, pref));
  r.value = std::max(0.0, pref * r.value);
  r.tail_bound *= pref;
  return r;
}

SeriesResult rbm_density_ap(const AffineBoundary& bdy, double t,
                            const SeriesOptions& opt) {
  check_boundary(bdy, "rbm_density_ap");
  check_time(t, "rbm_density_ap");
  if (!bdy.in_window(t)) return zero_result();
  const double a = bdy.a;
  const double b = bdy.b;
  const double c = bdy.at(t);
  const double pref = std::exp(-b * a / 2.0 - b * b * t / 2.0) /
                      (std::sqrt(a) * c * std::sqrt(c));
  if (pref == 0.0) return zero_result();
  const double g = t / (2.0 * a * c);
  SeriesResult r = sum_one_sided(
      [&](long k) {
        const double j = (static_cast<double>(k) - 0.5) * pi;
        return (k % 2 ? 1.0 : -1.0) * j * std::exp(-j * j * g);
      },
      1, scaled(opt, pref));
  r.value = std::max(0.0, pref * r.value);
  r.tail_bound *= pref;
  return r;
}

SeriesResult rbm_density(const AffineBoundary& bdy, double u,
                         const SeriesOptions& opt) {
  check_boundary(bdy, "rbm_density");
  check_time(u, "rbm_density");
  if (!bdy.in_window(u)) return zero_result();
  // The two decay rates multiply to pi^2.
  const double rate = 2.0 * bdy.a * bdy.at(u) / u;
  return rate >= kSwitchRate ? rbm_density_delta(bdy, u, opt) : rbm_density_ap(bdy, u, opt);
}

SeriesResult rbm_hit_location_tail(const AffineBoundary& bdy, double y,
                                   const SeriesOptions& opt) {
  check_boundary(bdy, "rbm_hit_location_tail");
  if (bdy.b == 0.0) {
    detail::fail_domain("rbm_hit_location_tail: b = 0 pins the location at a");
  }
  if (std::isnan(y)) detail::fail_domain("rbm_hit_location_tail: y is NaN");
  if (bdy.b > 0.0) {
    if (y <= bdy.a) return SeriesResult{1.0, 1, 0.0, false};
    if (std::isinf(y)) return rbm_never_hits(bdy.a, bdy.b, opt);
    return rbm_survival(bdy, (y - bdy.a) / bdy.b, opt);
  }
  if (y >= bdy.a) return SeriesResult{1.0, 1, 0.0, false};
  if (y <= 0.0) return zero_result();
  return rbm_survival(bdy, (y - bdy.a) / bdy.b, opt);
}

SeriesResult rbm_hit_location_density(const AffineBoundary& bdy, double y,
                                      const SeriesOptions& opt) {
  check_boundary(bdy, "rbm_hit_location_density");
  if (bdy.b == 0.0) {
    detail::fail_domain("rbm_hit_location_density: b = 0 pins the location at a");
  }
  if (!std::isfinite(y)) return zero_result();
  const double u = (y - bdy.a) / bdy.b;
  if (!bdy.in_window(u)) return zero_result();
  const double scale = 1.0 / std::abs(bdy.b);
  SeriesResult r = rbm_density(bdy, u, scaled(opt, scale));
  r.value *= scale;
  r.tail_bound *= scale;
  return r;
}

double rbm_level_laplace(double a, double lambda) {
  if (!(a > 0.0) || !(lambda > 0.0)) {
    detail::fail_domain("rbm_level_laplace: requires a > 0 and lambda > 0");
  }
  return 1.0 / std::cosh(a * std::sqrt(2.0 * lambda));
}

SeriesResult rbm_level_density(double a, double u, const SeriesOptions& opt) {
  if (!(a > 0.0)) detail::fail_domain("rbm_level_density: requires a > 0");
  check_time(u, "rbm_level_density");
  const double pref = a / std::sqrt(2.0 * pi * u * u * u);
  SeriesResult r = fold_odd(
      [&](long m) {
        const double mm = static_cast<double>(m);
        const long k = (m - 1) / 2;
        return (k % 2 ? -1.0 : 1.0) * mm * std::exp(-mm * mm * a * a / (2.0 * u));
      },
      1, scaled(opt, pref));
  r.value = std::max(0.0, pref * r.value);
  r.tail_bound *= pref;
  return r;
}

SeriesResult rbm_level_density_inverted(double a, double u,
                                        const SeriesOptions& opt) {
  if (!(a > 0.0)) detail::fail_domain("rbm_level_density_inverted: requires a > 0");
  check_time(u, "rbm_level_density_inverted");
  const double pref = 2.0 * a / std::sqrt(2.0 * pi * u * u * u);
  SeriesResult r = sum_bilateral(
      [&](long k) {
        const double m = 4.0 * static_cast<double>(k) - 1.0;
        return -m * std::exp(-m * m * a * a / (2.0 * u));
      },
      scaled(opt, pref));
  r.value = std::max(0.0, pref * r.value);
  r.tail_bound *= pref;
  return r;
}

}  // namespace affinehit
