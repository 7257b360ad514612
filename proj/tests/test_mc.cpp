#include <cmath>

#include "doctest.h"

#include "affinehit/bes_hitting.hpp"
#include "affinehit/errors.hpp"
#include "affinehit/mc/oracle.hpp"
#include "affinehit/mc/philox.hpp"
#include "affinehit/rbm_hitting.hpp"
#include "affinehit/wedge.hpp"

using namespace affinehit;
using namespace affinehit::mc;

namespace {
McConfig small(std::size_t paths = 20000) {
  McConfig c;
  c.paths = paths;
  c.seed = 12345;
  return c;
}

double z(const McEstimate& e, double exact) {
  const double n = static_cast<double>(e.paths);
  return (e.value - exact) / std::max(std::sqrt(exact * (1 - exact) / n), 1.0 / n);
}
}  // namespace

TEST_CASE("Philox known answers") {
  using C = Philox4x32::Counter;
  CHECK(Philox4x32::generate({0, 0, 0, 0}, {0, 0}) ==
        C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  const std::uint32_t f = 0xffffffffu;
  CHECK(Philox4x32::generate({f, f, f, f}, {f, f}) ==
        C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
}

TEST_CASE("path streams are reproducible and distinct") {
  PathStream a(7, 3), b(7, 3), c(7, 4);
  for (int i = 0; i < 10; ++i) {
    const double x = a.normal();
    CHECK(x == b.normal());
    CHECK(x != c.normal());
  }
  PathStream u(1, 0);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform();
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("identical configuration gives identical estimates") {
  McConfig c = small();
  const McEstimate e1 = estimate_hit_survival(ProcessSpec::rbm(), {1, 0}, 1.0, c);
  const McEstimate e2 = estimate_hit_survival(ProcessSpec::rbm(), {1, 0}, 1.0, c);
  CHECK(e1.value == e2.value);
  CHECK(e1.std_error == e2.std_error);
  c.threads = 1;
  const McEstimate one = estimate_hit_survival(ProcessSpec::rbm(), {1, 0}, 1.0, c);
  c.threads = 3;
  const McEstimate three = estimate_hit_survival(ProcessSpec::rbm(), {1, 0}, 1.0, c);
  CHECK(one.value == e1.value);
  CHECK(three.value == e1.value);
  c.seed = 54321;
  CHECK(estimate_hit_survival(ProcessSpec::rbm(), {1, 0}, 1.0, c).value != e1.value);
}

TEST_CASE("standard error scales like one over root n") {
  double prev = 0.0;
  for (std::size_t n : {10000u, 40000u, 160000u}) {
    const McEstimate e = estimate_hit_survival(ProcessSpec::rbm(), {1, 0}, 1.0, small(n));
    if (prev > 0.0) CHECK(prev / e.std_error == doctest::Approx(2.0).epsilon(0.1));
    prev = e.std_error;
  }
}

TEST_CASE("trivial events") {
  const McEstimate far = estimate_hit_survival(ProcessSpec::rbm(), {50, 1}, 1.0, small(2000));
  CHECK(far.value == 1.0);
  CHECK(far.std_error == 0.0);
  const McEstimate top = estimate_bridge_event({ProcessSpec::bes(3.0), 1.0, 0.0},
                                               BridgeEvent::max_below(1e6), small(2000));
  CHECK(top.value == 1.0);
  const McEstimate at = estimate_hit_location_cdf(ProcessSpec::rbm(), {2, 1}, 2.0, small(2000));
  CHECK(at.value == 1.0);
  const auto rep = conditioned_bridge_equivalence_check(1.0, 1.0, 1e-3, small(2000), 1000, 16);
  CHECK(rep.acceptance.value > 0.999);
}

TEST_CASE("estimates agree with the closed forms") {
  const McConfig c = small();
  CHECK(std::abs(z(estimate_hit_survival(ProcessSpec::rbm(), {3, -1}, 2.0, c),
                   rbm_survival({3, -1}, 2.0).value)) < 4);
  CHECK(std::abs(z(estimate_bridge_event({ProcessSpec::bm(), 1.0, 0.0},
                                         BridgeEvent::stays_in_wedge({1, 0, 1, 0}), c),
                   bridge_wedge_prob({1, 0, 1, 0}, 1.0, 0.0).value)) < 4);
  CHECK(std::abs(z(estimate_bridge_event({ProcessSpec::bes(3.0), 1.0, 0.0},
                                         BridgeEvent::stays_below_line(1.5, 0.5), c),
                   bes3_bridge_below_affine(1.5, 0.5, 1.0).value)) < 4);
  CHECK(std::abs(z(estimate_hit_location_cdf(ProcessSpec::rbm(), {2, 1}, 3.0, c),
                   rbm_hit_location_tail({2, 1}, 3.0).value)) < 4);
}

TEST_CASE("Kolmogorov-Smirnov helpers") {
  std::vector<double> s1{0.1, 0.2, 0.3}, s2{0.1, 0.2, 0.3};
  CHECK(ks_two_sample_distance(s1, s2) == 0.0);
  std::vector<double> lo{0, 1, 2}, hi{10, 11, 12};
  CHECK(ks_two_sample_distance(lo, hi) == 1.0);
  CHECK(ks_two_sample_pvalue(0.0, 100, 100) == doctest::Approx(1.0));
  CHECK(ks_two_sample_pvalue(0.5, 1000, 1000) < 1e-10);
}

TEST_CASE("invalid configurations") {
  CHECK_THROWS_AS(estimate_hit_survival(ProcessSpec::rbm(), {1, 0}, 1.0, small(10)), DomainError);
  CHECK_THROWS_AS(estimate_hit_survival(ProcessSpec::bes(2.5), {1, 0}, 1.0, small(2000)),
                  UnsupportedError);
  CHECK_THROWS_AS(estimate_bridge_event({ProcessSpec::bes(2.5), 1.0, 0.0},
                                        BridgeEvent::max_below(1.0), small(2000)),
                  UnsupportedError);
  CHECK_THROWS_AS(estimate_hit_location_cdf(ProcessSpec::rbm(), {2, 0}, 1.0, small(2000)),
                  DomainError);
}
