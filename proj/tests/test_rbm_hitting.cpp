#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "doctest.h"

#include "affinehit/errors.hpp"
#include "affinehit/rbm_hitting.hpp"
#include "affinehit/wedge.hpp"

using namespace affinehit;
using std::numbers::pi;

TEST_CASE("survival near zero and outside the window") {
  CHECK(std::abs(rbm_survival({1, 1}, 1e-8).value - 1.0) < 1e-12);
  CHECK(rbm_survival({3, -1}, 3.0).value == 0.0);
  CHECK(rbm_survival({3, -1}, 4.0).value == 0.0);
  CHECK_THROWS_AS(rbm_survival({1, 1}, 0.0), DomainError);
  CHECK_THROWS_AS(rbm_survival({1, 1}, -1.0), DomainError);
  CHECK_THROWS_AS(rbm_survival({0, 1}, 1.0), DomainError);
  const double s = rbm_survival({3, -1}, 2.9).value;
  CHECK(s > 0.0);
  CHECK(s < 1e-3);
}

TEST_CASE("survival representations agree") {
  for (auto [a, b] : {std::pair{1.0, 1.0}, std::pair{3.0, -1.0}, std::pair{0.5, 0.0}}) {
    for (double u : {0.05, 0.4, 1.0, 2.5}) {
      if (!AffineBoundary{a, b}.in_window(u)) continue;
      CHECK(std::abs(rbm_survival({a, b}, u).value - rbm_survival_series({a, b}, u).value) < 1e-10);
    }
  }
}

TEST_CASE("survival tends to the never-hit probability") {
  for (auto [a, b] : {std::pair{1.0, 1.0}, std::pair{0.5, 2.0}, std::pair{3.0, 0.25}}) {
    const double u = 1e3 * std::max(1.0, a / b);
    CHECK(std::abs(rbm_survival({a, b}, u).value - rbm_never_hits(a, b).value) < 1e-10);
  }
}

TEST_CASE("density of the figure-1 boundary is unimodal") {
  double prev = 0.0;
  int turns = 0;
  bool rising = true;
  for (int i = 1; i <= 600; ++i) {
    const double d = rbm_density({3, 1}, 30.0 * i / 600).value;
    CHECK(d >= 0.0);
    if (rising && d < prev) {
      rising = false;
      ++turns;
    } else if (!rising && d > prev + 1e-15) {
      ++turns;
    }
    prev = d;
  }
  CHECK(turns == 1);
}

TEST_CASE("level density representations") {
  for (double u : {0.1, 1.0, 5.0}) {
    const double d = rbm_density({1, 0}, u).value;
    CHECK(std::abs(d - rbm_level_density_inverted(1.0, u).value) < 1e-10);
    CHECK(std::abs(d - rbm_level_density(1.0, u).value) < 1e-10);
  }
}

TEST_CASE("density is minus the survival slope") {
  const double h = 1e-4;
  const double fd =
      -(rbm_survival({2, 0.5}, 1.3 + h).value - rbm_survival({2, 0.5}, 1.3 - h).value) / (2 * h);
  CHECK(std::abs(fd - rbm_density({2, 0.5}, 1.3).value) < 1e-6);
}

TEST_CASE("eigenfunction form") {
  CHECK(std::abs(rbm_density_ap({1, 0}, 1.0).value - rbm_density({1, 0}, 1.0).value) < 1e-10);
  const SeriesResult ap = rbm_density_ap({0.5, 2}, 10.0);
  CHECK(ap.terms_used <= 3);
  CHECK(std::abs(ap.value - rbm_density_delta({0.5, 2}, 10.0).value) < 1e-12);
  for (int i = 1; i < 300; ++i) {
    const double t = 3.0 * i / 300;
    CHECK(std::abs(rbm_density_ap({3, -1}, t).value - rbm_density_delta({3, -1}, t).value) < 1e-9);
  }
}

TEST_CASE("scaling law") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> A(0.2, 3.0), B(0.1, 2.0), S(0.0, 1.0);
  for (int i = 0; i < 30; ++i) {
    const double a = A(rng), m = B(rng);
    for (double b : {m, -m}) {
      const double end = b < 0 ? a / -b : 4.0 * a * a;
      const double u = end * (0.02 + 0.96 * S(rng));
      const double lhs = rbm_density({a, b}, u).value;
      const double rhs = b * b * rbm_density({a * std::abs(b), b > 0 ? 1.0 : -1.0}, b * b * u).value;
      CHECK(std::abs(lhs - rhs) <= 1e-11 * std::max(1.0, lhs));
    }
  }
}

TEST_CASE("hit location") {
  CHECK(rbm_hit_location_tail({2, 1}, 2.0).value == 1.0);
  CHECK(std::abs(rbm_hit_location_tail({2, 1}, 3.0).value - rbm_survival({2, 1}, 1.0).value) < 1e-15);
  CHECK_THROWS_AS(rbm_hit_location_tail({2, 0}, 3.0), DomainError);
  CHECK(rbm_hit_location_density({2, 1}, 1.0).value == 0.0);
  CHECK(rbm_hit_location_density({3, -1}, 4.0).value == 0.0);

  boost::math::quadrature::exp_sinh<double> es;
  const double up = es.integrate(
      [](double s) { return rbm_hit_location_density({1, 1}, 1.0 + s).value; }, 1e-12);
  CHECK(std::abs(up - (1.0 - theta_star(2.0 / pi).value)) < 1e-8);

  boost::math::quadrature::tanh_sinh<double> ts;
  const double down = ts.integrate(
      [](double y) { return rbm_hit_location_density({3, -1}, y).value; }, 0.0, 3.0, 1e-12);
  CHECK(std::abs(down - 1.0) < 1e-8);
}

TEST_CASE("level Laplace transform") {
  CHECK(std::abs(rbm_level_laplace(1.0, 1e-12) - 1.0) < 1e-6);
  CHECK(rbm_level_laplace(1.0, 1.0) == doctest::Approx(1.0 / std::cosh(std::sqrt(2.0))).epsilon(1e-15));
  boost::math::quadrature::exp_sinh<double> es;
  const double lt = es.integrate(
      [](double u) { return u <= 0.0 ? 0.0 : std::exp(-2.0 * u) * rbm_density({1, 0}, u).value; },
      1e-12);
  CHECK(std::abs(lt - rbm_level_laplace(1.0, 2.0)) < 1e-8);
  CHECK_THROWS_AS(rbm_level_laplace(1.0, 0.0), DomainError);
}

TEST_CASE("tail bounds are honest") {
  for (auto [a, b, u] : {std::tuple{3.0, 1.0, 0.5}, std::tuple{1.0, -0.5, 1.5}, std::tuple{0.5, 0.0, 4.0}}) {
    const SeriesOptions loose{1e-10, 10001}, tight{1e-11, 10001};
    for (auto f : {&rbm_survival_series, &rbm_density_delta, &rbm_density_ap}) {
      const SeriesResult r1 = f({a, b}, u, loose);
      const SeriesResult r2 = f({a, b}, u, tight);
      CHECK(std::abs(r1.value - r2.value) <= r1.tail_bound + 1e-15);
    }
  }
}

TEST_CASE("probabilities stay in [0, 1]") {
  for (double a : {0.1, 1.0, 5.0}) {
    for (double b : {-2.0, 0.0, 2.0}) {
      for (int i = 1; i < 50; ++i) {
        const double u = 0.2 * i;
        const double s = rbm_survival({a, b}, u).value;
        CHECK(s >= 0.0);
        CHECK(s <= 1.0);
      }
    }
  }
}
