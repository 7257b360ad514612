#include <cmath>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "doctest.h"

#include "affinehit/errors.hpp"
#include "affinehit/specialfn.hpp"

using namespace affinehit;
using std::numbers::pi;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {
double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }
}  // namespace

TEST_CASE("normal cdf") {
  CHECK(std_normal_cdf(0.0) == 0.5);
  for (double x : {0.3, 1.7, 5.0}) {
    CHECK(std::abs(std_normal_cdf(x) - (1.0 - std_normal_cdf(-x))) < 1e-15);
  }
  for (double x = -8.0; x <= 8.0; x += 0.37) {
    CHECK(std::abs(std_normal_cdf(x) + std_normal_cdf(-x) - 1.0) < 1e-15);
    CHECK(std_normal_sf(x) == doctest::Approx(std_normal_cdf(-x)).epsilon(1e-15));
  }
  // 64-point Gauss-Legendre on [-10, 1]
  const double q = boost::math::quadrature::gauss<double, 64>::integrate(
      [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * pi); }, -10.0, 1.0);
  CHECK(std::abs(std_normal_cdf(1.0) - q) < 1e-13);
  // deep tail keeps relative precision
  CHECK(rel(std_normal_cdf(-30.0), 4.906713927148187e-198) < 1e-12);
  CHECK_THROWS_AS(std_normal_cdf(NAN), DomainError);
}

TEST_CASE("normal pdf") {
  CHECK(std_normal_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-16));
  for (double x : {0.1, 1.0, 3.3}) CHECK(std_normal_pdf(x) == std_normal_pdf(-x));
  const double h = 1e-5;
  const double fd = (std_normal_cdf(0.7 + h) - std_normal_cdf(0.7 - h)) / (2 * h);
  CHECK(std::abs(fd - std_normal_pdf(0.7)) < 1e-8);
}

TEST_CASE("normal mass with folded weight") {
  CHECK(rel(normal_mass_scaled(0.0, -1.0, 1.0), std::erf(1.0 / std::sqrt(2.0))) < 1e-15);
  // weight e^800 would overflow on its own
  const double v = normal_mass_scaled(800.0, 40.0, 41.0);
  CHECK(std::isfinite(v));
  CHECK(v > 0.0);
  CHECK_THROWS_AS(normal_mass_scaled(0.0, 1.0, 0.0), DomainError);
}

TEST_CASE("half-integer Bessel J") {
  for (double x : {0.5, 2.0, 10.0}) {
    const double s = std::sqrt(2.0 / (pi * x));
    CHECK(rel(bessel_j(BesselOrder(0.5), x), s * std::sin(x)) < 1e-12);
    CHECK(rel(bessel_j(BesselOrder(-0.5), x), s * std::cos(x)) < 1e-12);
  }
}

TEST_CASE("J_0(1) against the power series in 50 digits") {
  Big sum = 0, term = 1;
  const Big q = Big(1) / 4;  // (x/2)^2
  for (int k = 0; k < 200; ++k) {
    sum += term;
    term *= -q / Big((k + 1) * (k + 1));
  }
  CHECK(std::abs(bessel_j(BesselOrder(0.0), 1.0) - static_cast<double>(sum)) < 1e-15);
}

TEST_CASE("Bessel zeros") {
  const auto z = bessel_j_zeros(BesselOrder(0.5), 3);
  REQUIRE(z.size() == 3);
  for (int k = 0; k < 3; ++k) CHECK(rel(z[k], (k + 1) * pi) < 1e-14);
  const auto w = bessel_j_zeros(BesselOrder(-0.5), 3);
  for (int k = 0; k < 3; ++k) CHECK(rel(w[k], (k + 0.5) * pi) < 1e-14);

  // bisection on [2, 3]
  double lo = 2.0, hi = 3.0;
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    (bessel_j(BesselOrder(0.0), lo) * bessel_j(BesselOrder(0.0), mid) <= 0 ? hi : lo) = mid;
  }
  CHECK(std::abs(bessel_j_zeros(BesselOrder(0.0), 1)[0] - 0.5 * (lo + hi)) < 1e-12);

  for (double nu : {-0.5, 0.0, 0.5, 1.0, 2.3, 7.5}) {
    const auto zs = bessel_j_zeros(BesselOrder(nu), 40);
    for (std::size_t k = 0; k < zs.size(); ++k) {
      CHECK(std::abs(bessel_j(BesselOrder(nu), zs[k])) < 1e-10);
      if (k) CHECK(zs[k] > zs[k - 1]);
    }
  }
  CHECK_THROWS_AS(bessel_j_zeros(BesselOrder(0.0), 0), DomainError);
}

TEST_CASE("zero table is shared and prefix-stable") {
  const auto big = bessel_j_zeros(BesselOrder(1.5), 30);
  const auto small = bessel_j_zeros(BesselOrder(1.5), 5);
  for (std::size_t k = 0; k < 5; ++k) CHECK(small[k] == big[k]);
  CHECK(bessel_j_zero_table(BesselOrder(1.5), 10)->size() >= 10);
}

TEST_CASE("Bessel K") {
  for (double x : {0.5, 1.0, 4.0}) {
    CHECK(rel(bessel_k(BesselOrder(0.5), x), std::sqrt(pi / (2 * x)) * std::exp(-x)) < 1e-12);
  }
  boost::math::quadrature::exp_sinh<double> es;
  const double k1 = es.integrate([](double t) {
    return t > 50.0 ? 0.0 : std::exp(-std::cosh(t)) * std::cosh(t);
  });
  CHECK(std::abs(bessel_k(BesselOrder(1.0), 1.0) - k1) < 1e-9);
}

TEST_CASE("Gamma") {
  CHECK(rel(gamma_fn(0.5), std::sqrt(pi)) < 1e-14);
  CHECK(rel(gamma_fn(5.0), 24.0) < 1e-14);
  CHECK(rel(gamma_fn(2.5), 1.5 * gamma_fn(1.5)) < 1e-14);
  for (double x = 0.05; x <= 20.0; x += 0.05) {
    CHECK(rel(gamma_fn(x + 1.0), x * gamma_fn(x)) < 1e-12);
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(bessel_j(BesselOrder(0.0), 0.0), DomainError);
  CHECK_THROWS_AS(bessel_k(BesselOrder(0.0), -1.0), DomainError);
  CHECK_THROWS_AS(gamma_fn(0.0), DomainError);
  CHECK_THROWS_AS(BesselOrder(-1.0), DomainError);
  CHECK(BesselOrder::from_dimension(3.0).value() == 0.5);
  CHECK(BesselOrder(0.5).dimension() == 3.0);
}
