#include "affinehit/specialfn.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <limits>
#include <numbers>

#include "affinehit/errors.hpp"

namespace affinehit {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kInvSqrtPi = 0.56418958354775628695;

void require_finite(double x, const char* fn) {
  if (!std::isfinite(x)) {
    detail::fail_domain(std::string(fn) + ": argument must be finite");
  }
}

}  // namespace

BesselOrder::BesselOrder(double nu) : nu_(nu) {
  if (!(nu > -1.0) || !std::isfinite(nu)) {
    detail::fail_domain("Bessel order must satisfy nu > -1");
  }
}

double std_normal_cdf(double x) {
  require_finite(x, "std_normal_cdf");
  return 0.5 * std::erfc(-x * kInvSqrt2);
}

double std_normal_sf(double x) {
  require_finite(x, "std_normal_sf");
  return 0.5 * std::erfc(x * kInvSqrt2);
}

double std_normal_pdf(double x) {
  require_finite(x, "std_normal_pdf");
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double erfcx(double x) {
  if (std::isnan(x) || x < 0.0) {
    detail::fail_domain("erfcx: argument must be >= 0");
  }
  if (x < 25.0) return std::exp(x * x) * std::erfc(x);
  if (std::isinf(x)) return 0.0;
  // Asymptotic series; at x >= 25 eight terms are far below double epsilon.
  const double inv2x2 = 1.0 / (2.0 * x * x);
  double term = 1.0;
  double sum = 1.0;
  for (int n = 1; n <= 8; ++n) {
    term *= -(2.0 * n - 1.0) * inv2x2;
    sum += term;
  }
  return kInvSqrtPi / x * sum;
}

double normal_mass_scaled(double log_weight, double lo, double hi) {
  if (std::isnan(lo) || std::isnan(hi) || std::isnan(log_weight)) {
    detail::fail_domain("normal_mass_scaled: NaN argument");
  }
  if (hi < lo) detail::fail_domain("normal_mass_scaled: requires lo <= hi");
  if (hi <= 0.0) return normal_mass_scaled(log_weight, -hi, -lo);
  if (lo >= 0.0) {
    // Q(x) = erfcx(x / sqrt 2) exp(-x^2 / 2) / 2
    auto tail = [&](double x) {
      if (std::isinf(x)) return 0.0;
      return 0.5 * erfcx(x * kInvSqrt2) * std::exp(log_weight - 0.5 * x * x);
    };
    return tail(lo) - tail(hi);
  }
  const double mass = 1.0 - 0.5 * std::erfc(hi * kInvSqrt2) -
                      0.5 * std::erfc(-lo * kInvSqrt2);
  return std::exp(log_weight) * mass;
}

double bessel_j(BesselOrder nu, double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    detail::fail_domain("bessel_j: requires finite x > 0");
  }
  return boost::math::cyl_bessel_j(nu.value(), x);
}

double bessel_k(BesselOrder nu, double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    detail::fail_domain("bessel_k: requires finite x > 0");
  }
  // K_{-nu} = K_nu
  return boost::math::cyl_bessel_k(std::abs(nu.value()), x);
}

double gamma_fn(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    detail::fail_domain("gamma_fn: requires finite x > 0");
  }
  return std::tgamma(x);
}

}  // namespace affinehit
