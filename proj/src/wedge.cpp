#include "affinehit/wedge.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "affinehit/errors.hpp"

namespace affinehit {

namespace {

void check_wedge(const WedgeSpec& w) {
  const bool finite = std::isfinite(w.alpha) && std::isfinite(w.beta) &&
                      std::isfinite(w.a) && std::isfinite(w.b);
  if (!finite || w.alpha < 0.0 || w.beta < 0.0 || w.a < 0.0 || w.b < 0.0) {
    detail::fail_domain("wedge parameters must be finite and >= 0");
  }
}

// m^2 b a + n^2 beta alpha + m n (b alpha + a beta)
double upsilon(const WedgeSpec& w, double m, double n) {
  return m * m * w.b * w.a + n * n * w.beta * w.alpha +
         m * n * (w.b * w.alpha + w.a * w.beta);
}

}  // namespace

TermQuadruple doob_terms(const WedgeSpec& w, long k) {
  check_wedge(w);
  if (k < 1) detail::fail_domain("doob_terms: k must be >= 1");
  const double kk = static_cast<double>(k);
  TermQuadruple q;
  q.A = upsilon(w, kk, kk - 1.0);
  q.B = upsilon(w, kk - 1.0, kk);
  q.C = kk * kk * (w.b * w.a + w.beta * w.alpha) + kk * (kk - 1.0) * w.b * w.alpha +
        kk * (kk + 1.0) * w.a * w.beta;
  q.D = kk * kk * (w.b * w.a + w.beta * w.alpha) + kk * (kk + 1.0) * w.b * w.alpha +
        kk * (kk - 1.0) * w.a * w.beta;
  return q;
}

SeriesResult wedge_survival(const WedgeSpec& w, const SeriesOptions& opt) {
  check_wedge(w);
  if ((w.alpha + w.a) * (w.beta + w.b) == 0.0) {
    SeriesResult r;
    r.continuity_limit = true;
    return r;
  }
  SeriesResult s = sum_one_sided(
      [&](long k) {
        const TermQuadruple q = doob_terms(w, k);
        return std::exp(-2.0 * q.A) + std::exp(-2.0 * q.B) -
               std::exp(-2.0 * q.C) - std::exp(-2.0 * q.D);
      },
      1, opt);
  s.value = std::clamp(1.0 - s.value, 0.0, 1.0);
  return s;
}

SeriesResult theta_star(double u, const SeriesOptions& opt) {
  if (std::isnan(u)) detail::fail_domain("theta_star: u is NaN");
  if (u <= 0.0) {
    SeriesResult r;
    r.continuity_limit = true;
    return r;
  }
  if (std::isinf(u)) return SeriesResult{1.0, 1, 0.0, false};
  const double pi = std::numbers::pi;
  SeriesResult r;
  if (u >= 1.0) {
    SeriesOptions half = opt;
    half.tol = 0.5 * opt.tol;
    r = sum_one_sided(
        [&](long k) {
          const double kk = static_cast<double>(k);
          return (k % 2 ? -1.0 : 1.0) * std::exp(-pi * kk * kk * u);
        },
        1, half);
    r.value = 1.0 + 2.0 * r.value;
    r.tail_bound *= 2.0;
    r.terms_used += 1;
  } else {
    // Jacobi imaginary transformation.
    const double scale = 2.0 / std::sqrt(u);
    SeriesOptions inner = opt;
    inner.tol = opt.tol / scale;
    r = sum_one_sided(
        [&](long k) {
          const double m = 2.0 * static_cast<double>(k) + 1.0;
          return std::exp(-pi * m * m / (4.0 * u));
        },
        0, inner);
    r.value *= scale;
    r.tail_bound *= scale;
  }
  r.value = std::clamp(r.value, 0.0, 1.0);
  return r;
}

SeriesResult rbm_never_hits(double a, double b, const SeriesOptions& opt) {
  if (!(a >= 0.0) || !(b >= 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    detail::fail_domain("rbm_never_hits: requires finite a >= 0 and b >= 0");
  }
  return theta_star(2.0 * a * b / std::numbers::pi, opt);
}

SeriesResult bridge_wedge_prob(const WedgeSpec& w, double u, double y,
                               const SeriesOptions& opt) {
  check_wedge(w);
  if (!(u > 0.0) || !std::isfinite(u)) {
    detail::fail_domain("bridge_wedge_prob: requires u > 0");
  }
  if (!std::isfinite(y)) detail::fail_domain("bridge_wedge_prob: y must be finite");
  const double upper = w.a + w.b * u;
  const double lower = -(w.alpha + w.beta * u);
  if (!(y > lower && y < upper)) return SeriesResult{0.0, 1, 0.0, false};
  const WedgeSpec shifted{w.alpha, w.beta + (w.alpha + y) / u, w.a,
                          w.b + (w.a - y) / u};
  return wedge_survival(shifted, opt);
}

double bridge_positive_prob(double x, double y, double u) {
  if (!(x >= 0.0) || !(y >= 0.0) || !(u > 0.0)) {
    detail::fail_domain("bridge_positive_prob: requires x, y >= 0 and u > 0");
  }
  return -std::expm1(-2.0 * x * y / u);
}

}  // namespace affinehit
