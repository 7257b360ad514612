#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "doctest.h"

#include "affinehit/bes_hitting.hpp"
#include "affinehit/errors.hpp"
#include "affinehit/rbm_hitting.hpp"

using namespace affinehit;
using std::numbers::pi;

namespace {

// 1 + 2 sum (1 - 4 k^2 c) e^{-2 k^2 c}, summed directly
double excursion_direct(double c) {
  double s = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double q = 2.0 * k * k * c;
    if (q > 800) break;
    s += 2.0 * (1.0 - 2.0 * q) * std::exp(-q);
  }
  return s;
}

double half_line(const std::function<double(double)>& f) {
  static boost::math::quadrature::exp_sinh<double> es;
  return es.integrate([&](double t) { return t <= 0.0 ? 0.0 : f(t); }, 1e-12);
}

double interval(const std::function<double(double)>& f, double lo, double hi) {
  static boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate(f, lo, hi, 1e-12);
}

}  // namespace

TEST_CASE("survival near zero and window") {
  CHECK(std::abs(bes3_survival({1, 1}, 1e-8).value - 1.0) < 1e-12);
  CHECK(bes3_survival({1, -0.5}, 2.0).value == 0.0);
  CHECK_THROWS_AS(bes3_survival({1, 1}, 0.0), DomainError);
}

TEST_CASE("survival representations agree") {
  for (auto [a, b] : {std::pair{1.0, 1.0}, std::pair{2.0, -0.5}, std::pair{1.5, 0.0}}) {
    for (double u : {0.1, 0.5, 1.0, 3.0}) {
      if (!AffineBoundary{a, b}.in_window(u)) continue;
      CHECK(std::abs(bes3_survival({a, b}, u).value - bes3_survival_series({a, b}, u).value) < 1e-10);
    }
  }
}

TEST_CASE("survival scaling") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> A(0.2, 3.0), B(0.1, 2.0), U(0.05, 5.0);
  for (int i = 0; i < 20; ++i) {
    const double a = A(rng), b = B(rng), u = U(rng);
    CHECK(std::abs(bes3_survival({a, b}, u).value - bes3_survival({a * b, 1.0}, b * b * u).value) <
          1e-11);
  }
}

TEST_CASE("survival from the bridge mixture") {
  for (auto [a, u] : {std::pair{1.0, 1.0}, std::pair{0.5, 2.0}, std::pair{2.0, 0.5}}) {
    const double mixed = interval(
        [&](double y) {
          const double p = 2.0 * y * y * std::exp(-y * y / (2 * u)) / std::sqrt(2 * pi * u * u * u);
          return p * bes3_bridge_below_line(y, u, a, 1).value;
        },
        0.0, a + u);
    CHECK(std::abs(mixed - bes3_survival({a, 1.0}, u).value) < 1e-8);
  }
}

TEST_CASE("bridge below a unit-slope line") {
  for (auto [a, u] : {std::pair{2.0, 1.0}, std::pair{0.3, 0.7}}) {
    const double c = a * (a + u) / u;
    CHECK(std::abs(bes3_bridge_below_line(0.0, u, a, 1).value - excursion_direct(c)) < 1e-13);
    CHECK(std::abs(bes3_bridge_below_line(1e-9, u, a, 1).value - excursion_direct(c)) < 1e-8);
    CHECK(bes3_bridge_below_line(a + u, u, a, 1).value == 0.0);
    CHECK(bes3_bridge_below_line(a + u + 1, u, a, 1).value == 0.0);
  }
  CHECK_THROWS_AS(bes3_bridge_below_line(0.5, 1.0, 2.0, 0), DomainError);
}

TEST_CASE("bridge below an affine line depends on a(a + bu)/u only") {
  const double c = 1.5 * (1.5 + 0.5) / 1.0;
  CHECK(std::abs(bes3_bridge_below_affine(1.5, 0.5, 1.0).value - excursion_direct(c)) < 1e-13);
  // a = 1, u = 2: need 1 + 2b = 6, b = 2.5
  CHECK(std::abs(bes3_bridge_below_affine(1.0, 2.5, 2.0).value - excursion_direct(c)) < 1e-13);
  CHECK(bes3_bridge_below_affine(1.0, -1.0, 1.0).value == 0.0);
}

TEST_CASE("excursion series is continuous across its two forms") {
  for (double eps : {1e-9, 1e-6}) {
    const double lo = detail::excursion_max_series(1.0 - eps, {}).value;
    const double hi = detail::excursion_max_series(1.0 + eps, {}).value;
    CHECK(std::abs(lo - hi) < 1e-12 + 10 * eps);
  }
  for (double th : {0.2, 0.5, 0.9, 1.1, 3.0}) {
    CHECK(std::abs(detail::excursion_max_series(th, {}).value - excursion_direct(th)) < 1e-12);
  }
}

TEST_CASE("line below the start") {
  // Doob transform of the Brownian first-passage density, written out directly
  auto oracle = [](double x, double a, double b, double t) {
    const double d = x - a - b * t;
    const double bm = (x - a) / std::sqrt(2 * pi * t * t * t) * std::exp(-d * d / (2 * t));
    return (a + b * t) / x * bm;
  };
  for (auto [x, a, b] : {std::tuple{2.0, 1.0, 1.0}, std::tuple{1.0, 0.0, 0.5}, std::tuple{3.0, 0.2, 2.0}}) {
    for (double t : {0.1, 0.7, 2.0, 6.0}) {
      CHECK(bes3_above_line_density(x, a, b, t) == doctest::Approx(oracle(x, a, b, t)).epsilon(1e-13));
    }
    const double mass = half_line([&](double t) { return bes3_above_line_density(x, a, b, t); });
    CHECK(std::abs(mass - 1.0) < 1e-8);
  }
  for (double t : {0.5, 1.0, 2.0}) {
    const double m112 = std::exp(-t / 2) / std::sqrt(2 * pi * t);
    CHECK(bes3_above_line_density(1e-12, 0.0, 1.0, t) == doctest::Approx(m112).epsilon(1e-9));
    CHECK(bes3_origin_density(1.0, t) == doctest::Approx(m112).epsilon(1e-15));
  }
  CHECK(std::abs(half_line([](double t) { return bes3_origin_density(1.0, t); }) - 1.0) < 1e-10);
  CHECK_THROWS_AS(bes3_above_line_density(1.0, 1.0, 1.0, 1.0), DomainError);
}

TEST_CASE("general dimension through the origin") {
  for (double t : {0.5, 1.0, 2.0}) {
    CHECK(bessel_origin_line_density(3.0, 0.0, 1.3, t) ==
          doctest::Approx(bes3_origin_density(1.3, t)).epsilon(1e-13));
    CHECK(bessel_origin_line_density(3.0, 1.0, 1.0, t) ==
          doctest::Approx(bes3_above_line_density(1.0, 0.0, 1.0, t)).epsilon(1e-12));
  }
  for (double delta : {4.0, 2.5, 7.0}) {
    const double mass = half_line([&](double t) { return bessel_origin_line_density(delta, 0.0, 1.0, t); });
    CHECK(std::abs(mass - 1.0) < 1e-8);
  }
  CHECK_THROWS_AS(bessel_origin_line_density(2.0, 0.0, 1.0, 1.0), DomainError);
}

TEST_CASE("eigenfunction density") {
  for (auto [a, b] : {std::pair{1.0, 0.0}, std::pair{3.0, -1.0}, std::pair{0.5, 1.0}}) {
    for (double t : {0.2, 1.0, 2.5}) {
      if (!AffineBoundary{a, b}.in_window(t)) continue;
      CHECK(std::abs(bessel_ap_density(1.0, 0.0, {a, b}, t).value - rbm_density({a, b}, t).value) < 1e-9);
    }
  }
  for (double u : {0.3, 1.0, 2.0}) {
    const double h = 1e-4;
    const double fd = -(bes3_survival({1, 0}, u + h).value - bes3_survival({1, 0}, u - h).value) / (2 * h);
    const double ap = bessel_ap_density(3.0, 0.0, {1, 0}, u).value;
    CHECK(std::abs(ap - fd) < 1e-6);
    CHECK(std::abs(ap - bes3_level_density(1.0, u).value) < 1e-6);
  }
  // window masses for b <= 0
  for (auto [delta, a, b] : {std::tuple{3.0, 1.0, -0.5}, std::tuple{2.0, 1.0, -1.0}, std::tuple{3.0, 1.0, 0.0}}) {
    const double end = AffineBoundary{a, b}.window_end();
    const double mass = std::isfinite(end)
        ? interval([&](double t) { return bessel_ap_density(delta, 0.0, {a, b}, t).value; }, 0.0, end)
        : half_line([&](double t) { return bessel_ap_density(delta, 0.0, {a, b}, t).value; });
    CHECK(std::abs(mass - 1.0) < 1e-8);
  }
  // b > 0: mass is the hit probability
  const double mass = half_line([](double t) { return bessel_ap_density(3.0, 0.0, {1.0, 1.0}, t).value; });
  CHECK(std::abs(mass - (1.0 - bes3_never_hits(1.0, 1.0).value)) < 1e-8);
  CHECK_THROWS_AS(bessel_ap_density(3.0, 2.0, {1, 0}, 1.0), DomainError);
}

TEST_CASE("densities are nonnegative") {
  for (int i = 1; i < 200; ++i) {
    const double t = 0.025 * i;
    CHECK(bes3_density({1, 0.5}, t).value >= 0.0);
    CHECK(bessel_ap_density(2.0, 0.5, {1, 0.3}, t).value >= 0.0);
    if (t < 2.0) CHECK(bes3_density({1, -0.5}, t).value >= 0.0);
  }
}

TEST_CASE("level Laplace transform") {
  CHECK(std::abs(bes_level_laplace(1.0, 1e-12) - 1.0) < 1e-6);
  const double s2 = std::sqrt(2.0);
  CHECK(bes_level_laplace(1.0, 1.0) == doctest::Approx(s2 / std::sinh(s2)).epsilon(1e-15));
  // e^{-0.7 u} is below 1e-60 past u = 200
  const double lt = interval(
      [](double u) { return u <= 0.0 ? 0.0 : std::exp(-0.7 * u) * bes3_level_density(1.0, u).value; },
      0.0, 200.0);
  CHECK(std::abs(lt - bes_level_laplace(1.0, 0.7)) < 1e-8);
}
