#include <cmath>
#include <numbers>

#include "doctest.h"

#include "affinehit/bes_hitting.hpp"
#include "affinehit/bridge_extremes.hpp"
#include "affinehit/errors.hpp"
#include "affinehit/rbm_hitting.hpp"

using namespace affinehit;

namespace {
double direct(double c, bool excursion) {
  double s = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double q = 2.0 * k * k * c;
    if (q > 800) break;
    s += 2.0 * (excursion ? 1.0 - 2.0 * q : (k % 2 ? -1.0 : 1.0)) * std::exp(-q);
  }
  return s;
}
}  // namespace

TEST_CASE("crossing level") {
  CHECK(bridge_crossing_to_max(3.0, 1.0, 1.7, 0.0) == doctest::Approx(1.7).epsilon(1e-15));
  CHECK(bridge_crossing_to_max(1.0, 1.0, 2.0, 1.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(bridge_crossing_to_max(3.0, 1.0, 2.0, 2.0), DomainError);
  CHECK_THROWS_AS(bridge_crossing_to_max(3.0, 1.0, 2.0, 3.0), DomainError);
}

TEST_CASE("bridge maxima") {
  // y^2 = 10 u leaves the k = 1 term 2 (1 - 40) e^{-20}
  CHECK(bes3_bridge_max_cdf(std::sqrt(10.0), 1.0).value ==
        doctest::Approx(1.0 - 78.0 * std::exp(-20.0)).epsilon(1e-15));
  CHECK(std::abs(bes3_bridge_max_cdf(std::sqrt(25.0), 1.0).value - 1.0) < 1e-15);
  CHECK(std::abs(bes3_bridge_max_cdf(std::sqrt(50.0), 2.0).value - 1.0) < 1e-15);
  CHECK(bes3_bridge_max_cdf(0.0, 1.0).value == 0.0);
  CHECK(rbm_bridge_max_cdf(-1.0, 1.0).value == 0.0);
  for (double y : {0.4, 1.0, 1.6}) {
    CHECK(std::abs(bes3_bridge_max_cdf(y, 1.0).value - direct(y * y, true)) < 1e-13);
    CHECK(std::abs(rbm_bridge_max_cdf(y, 1.0).value - direct(y * y, false)) < 1e-13);
  }
}

TEST_CASE("CDFs are monotone and in [0, 1]") {
  double p1 = 0, p3 = 0, pd1 = 0, pd3 = 0, pl = 0;
  for (int i = 1; i <= 100; ++i) {
    const double y = 0.03 * i;
    const double v1 = rbm_bridge_max_cdf(y, 1.0).value;
    const double v3 = bes3_bridge_max_cdf(y, 1.0).value;
    const double d1 = sup_drift_cdf(1.0, y).value;
    const double d3 = sup_drift_cdf(3.0, y).value;
    const double l = last_hit_cdf(ProcessSpec::rbm(), 1.0, 1.0, 0.1 * i).value;
    for (double v : {v1, v3, d1, d3, l}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    CHECK(v1 >= p1 - 1e-15);
    CHECK(v3 >= p3 - 1e-15);
    CHECK(d1 >= pd1 - 1e-15);
    CHECK(d3 >= pd3 - 1e-15);
    CHECK(l >= pl - 1e-15);
    p1 = v1, p3 = v3, pd1 = d1, pd3 = d3, pl = l;
  }
}

TEST_CASE("bridge below a line equals a bridge maximum") {
  for (double a : {0.5, 1.0, 2.0}) {
    for (double b : {-1.0, -0.3, 0.0, 0.4}) {
      for (double u : {0.5, 1.0, 3.0}) {
        if (!(b < a / u)) continue;
        const double lhs = bes3_bridge_below_affine(a, -b, u).value;
        const double rhs = bes3_bridge_max_cdf(bridge_crossing_to_max(3.0, u, a, b), u).value;
        CHECK(std::abs(lhs - rhs) < 1e-10);
        CHECK(std::abs(bridge_sup_affine_cdf(3.0, u, a, b).value - rhs) < 1e-15);
      }
    }
  }
}

TEST_CASE("drift shifts the maximum by a square-root transform") {
  // P(sup {w_t - b t} < y) = P(sqrt(M0^2 + b^2/4) - b/2 < y) = P(M0 < sqrt(y (y + b)))
  for (double delta : {1.0, 3.0}) {
    for (double b : {-0.5, 0.0, 1.0}) {
      for (double y = 0.6; y < 3.0; y += 0.2) {
        const double via_line = bridge_sup_affine_cdf(delta, 1.0, y, -b).value;
        const double m = std::sqrt(y * (y + b));
        const double via_max = delta == 1.0 ? rbm_bridge_max_cdf(m, 1.0).value
                                            : bes3_bridge_max_cdf(m, 1.0).value;
        CHECK(std::abs(via_line - via_max) < 1e-10);
      }
    }
  }
}

TEST_CASE("supremum of the drifted process") {
  for (double a : {0.3, 1.0, 2.0}) {
    CHECK(std::abs(sup_drift_cdf(3.0, a).value - direct(a, true)) < 1e-13);
    CHECK(std::abs(sup_drift_cdf(1.0, a).value - direct(a, false)) < 1e-13);
  }
  CHECK(std::abs(sup_drift_cdf(1.0, 1.0).value - rbm_survival({1, 1}, 1e3).value) < 1e-10);
  CHECK_THROWS_AS(sup_drift_cdf(2.0, 1.0), UnsupportedError);
  CHECK_THROWS_AS(sup_drift_cdf(3.0, 0.0), DomainError);
}

TEST_CASE("last hit") {
  const ProcessSpec rbm = ProcessSpec::rbm();
  CHECK(std::abs(last_hit_cdf(rbm, 1.0, 1.0, 2.0).value - rbm_survival({1, 1}, 0.5).value) < 1e-15);
  for (auto [c, s] : {std::pair{1.0, 1.0}, std::pair{2.0, 0.5}}) {
    const double far = last_hit_cdf(rbm, c, s, 1e6).value;
    CHECK(std::abs(far - rbm_survival({s, c}, 1e-6).value) < 1e-10);
    CHECK(std::abs(far - 1.0) < 1e-10);
  }
  CHECK(std::abs(last_hit_cdf(ProcessSpec::bes(3.0), 0.5, 1.0, 1.5).value -
                 bes3_survival({1.0, 0.5}, 1.0 / 1.5).value) < 1e-15);
  CHECK_THROWS_AS(last_hit_cdf(ProcessSpec::bes(2.0), 1.0, 1.0, 1.0), UnsupportedError);
  CHECK_THROWS_AS(last_hit_cdf(rbm, 0.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(hit_survival(ProcessSpec::rbm(0.5), {1, 1}, 1.0), UnsupportedError);
}
