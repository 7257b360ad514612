#include "affinehit/bridge_extremes.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "affinehit/bes_hitting.hpp"
#include "affinehit/errors.hpp"
#include "affinehit/rbm_hitting.hpp"
#include "affinehit/wedge.hpp"

namespace affinehit {

namespace {

void check_delta(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    detail::fail_domain("dimension delta must be finite and > 0");
  }
}

bool is_rbm(const ProcessSpec& p) {
  return p.kind == ProcessKind::RBM || (p.kind == ProcessKind::BES && p.delta == 1.0);
}

bool is_bes3(const ProcessSpec& p) {
  return p.kind == ProcessKind::BES && p.delta == 3.0;
}

// Bridge-maximum CDF at level y for the two dimensions with closed forms.
SeriesResult max_cdf(double delta, double y, double u, const SeriesOptions& opt) {
  if (delta == 3.0) return bes3_bridge_max_cdf(y, u, opt);
  if (delta == 1.0) return rbm_bridge_max_cdf(y, u, opt);
  throw UnsupportedError("no closed-form bridge maximum law for delta = " +
                         std::to_string(delta));
}

}  // namespace

double bridge_crossing_to_max(double delta, double u, double a, double b) {
  check_delta(delta);
  if (!(u > 0.0) || !std::isfinite(u)) {
    detail::fail_domain("bridge_crossing_to_max: requires u > 0");
  }
  if (!(a > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    detail::fail_domain("bridge_crossing_to_max: requires a > 0 and finite b");
  }
  if (!(b < a / u)) {
    detail::fail_domain("bridge_crossing_to_max: requires b < a/u");
  }
  return std::sqrt(a * (a - b * u));
}

SeriesResult bes3_bridge_max_cdf(double y, double u, const SeriesOptions& opt) {
  if (!(u > 0.0) || !std::isfinite(u)) {
    detail::fail_domain("bes3_bridge_max_cdf: requires u > 0");
  }
  if (std::isnan(y)) detail::fail_domain("bes3_bridge_max_cdf: y is NaN");
  if (y <= 0.0) return SeriesResult{0.0, 1, 0.0, false};
  return detail::excursion_max_series(y * y / u, opt);
}

SeriesResult rbm_bridge_max_cdf(double y, double u, const SeriesOptions& opt) {
  if (!(u > 0.0) || !std::isfinite(u)) {
    detail::fail_domain("rbm_bridge_max_cdf: requires u > 0");
  }
  if (std::isnan(y)) detail::fail_domain("rbm_bridge_max_cdf: y is NaN");
  if (y <= 0.0) return SeriesResult{0.0, 1, 0.0, false};
  // 1 + 2 sum (-1)^k e^{-2 k^2 y^2 / u}
  return theta_star(2.0 * y * y / (u * std::numbers::pi), opt);
}

SeriesResult bridge_sup_affine_cdf(double delta, double u, double a, double b,
                                   const SeriesOptions& opt) {
  check_delta(delta);
  if (!(u > 0.0) || !std::isfinite(u)) {
    detail::fail_domain("bridge_sup_affine_cdf: requires u > 0");
  }
  if (!(a > 0.0)) return SeriesResult{0.0, 1, 0.0, false};
  if (!(b < a / u)) return SeriesResult{0.0, 1, 0.0, false};
  return max_cdf(delta, bridge_crossing_to_max(delta, u, a, b), u, opt);
}

SeriesResult sup_drift_cdf(double delta, double a, const SeriesOptions& opt) {
  check_delta(delta);
  if (!(a > 0.0) || !std::isfinite(a)) {
    detail::fail_domain("sup_drift_cdf: requires a > 0");
  }
  return max_cdf(delta, std::sqrt(a), 1.0, opt);
}

SeriesResult hit_survival(const ProcessSpec& process, const AffineBoundary& bdy,
                          double u, const SeriesOptions& opt) {
  if (process.start != 0.0) {
    throw UnsupportedError("closed-form survival needs the process started at 0");
  }
  if (is_rbm(process)) return rbm_survival(bdy, u, opt);
  if (is_bes3(process)) return bes3_survival(bdy, u, opt);
  throw UnsupportedError("closed-form survival available for RBM and BES(3) only");
}

SeriesResult last_hit_cdf(const ProcessSpec& process, double intercept,
                          double slope, double t, const SeriesOptions& opt) {
  if (!(intercept > 0.0) || !(slope > 0.0) || !std::isfinite(intercept) ||
      !std::isfinite(slope)) {
    detail::fail_domain("last_hit_cdf: requires intercept > 0 and slope > 0");
  }
  if (!(t > 0.0)) detail::fail_domain("last_hit_cdf: requires t > 0");
  if (std::isinf(t)) return SeriesResult{1.0, 1, 0.0, false};
  return hit_survival(process, AffineBoundary{slope, intercept}, 1.0 / t, opt);
}

}  // namespace affinehit
