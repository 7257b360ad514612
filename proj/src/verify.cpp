#include "affinehit/verify.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <tuple>

#include "affinehit/bes_hitting.hpp"
#include "affinehit/bridge_extremes.hpp"
#include "affinehit/errors.hpp"
#include "affinehit/figures.hpp"
#include "affinehit/rbm_hitting.hpp"
#include "affinehit/specialfn.hpp"
#include "affinehit/wedge.hpp"

namespace affinehit::verify {

namespace {

using Params = std::vector<std::pair<std::string, double>>;
using mc::McConfig;
using mc::McEstimate;

constexpr double kPi = std::numbers::pi;

Check absolute(std::string name, Params p, double expected, double got, double tol) {
  Check c;
  c.name = std::move(name);
  c.params = std::move(p);
  c.expected = expected;
  c.got = got;
  c.tolerance = tol;
  c.passed = std::isfinite(got) && std::abs(got - expected) <= tol;
  return c;
}

Check relative(std::string name, Params p, double expected, double got, double rtol) {
  return absolute(std::move(name), std::move(p), expected, got,
                  rtol * std::abs(expected));
}

// z score against the binomial standard error implied by the closed form.
Check statistical(std::string name, Params p, double expected, const McEstimate& e) {
  Check c;
  c.name = std::move(name);
  c.params = std::move(p);
  c.expected = expected;
  c.got = e.value;
  const double n = static_cast<double>(e.paths);
  const double q = std::clamp(expected, 0.0, 1.0);
  c.std_error = std::max(std::sqrt(q * (1.0 - q) / n), 1.0 / n);
  c.tolerance = 3.0 * c.std_error;
  c.z = (e.value - expected) / c.std_error;
  c.passed = std::abs(c.z) < 3.0;
  return c;
}

Check two_sample(std::string name, Params p, const McEstimate& e1, const McEstimate& e2) {
  Check c;
  c.name = std::move(name);
  c.params = std::move(p);
  c.expected = e1.value;
  c.got = e2.value;
  const double floor = 1.0 / static_cast<double>(std::min(e1.paths, e2.paths));
  c.std_error =
      std::max(std::hypot(e1.std_error, e2.std_error), floor);
  c.tolerance = 3.0 * c.std_error;
  c.z = (e2.value - e1.value) / c.std_error;
  c.passed = std::abs(c.z) < 3.0;
  return c;
}

bool all_passed(const std::vector<Check>& cs) {
  return std::all_of(cs.begin(), cs.end(), [](const Check& c) { return c.passed; });
}

void append(std::vector<Check>& to, std::vector<Check> from) {
  to.insert(to.end(), std::make_move_iterator(from.begin()),
            std::make_move_iterator(from.end()));
}

double integrate_half_line(const std::function<double(double)>& f) {
  boost::math::quadrature::exp_sinh<double> q;
  return q.integrate(f, 0.0, std::numeric_limits<double>::infinity(), 1e-12);
}

double integrate_interval(const std::function<double(double)>& f, double lo, double hi) {
  boost::math::quadrature::tanh_sinh<double> q;
  return q.integrate(f, lo, hi, 1e-12);
}

double integrate_smooth(const std::function<double(double)>& f, double lo, double hi) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 15,
                                                                       1e-12);
}

// ---------------------------------------------------------------------------
// Grids shared by the density criteria.

const double kIntercepts[] = {0.5, 1.0, 3.0};
const double kSlopes[] = {-1.0, -0.5, 0.0, 0.5, 1.0};

std::vector<double> density_grid(double a, double b) {
  const double lo = a * a / 20.0;
  const double hi = b < 0.0 ? 0.95 * a / -b : 3.0 * a * a / (1.0 + a * b);
  std::vector<double> t(50);
  for (int i = 0; i < 50; ++i) t[i] = lo + (hi - lo) * i / 49.0;
  return t;
}

std::vector<Check> poisson_identity() {
  std::vector<Check> out;
  for (double a : kIntercepts) {
    for (double b : kSlopes) {
      const AffineBoundary bdy{a, b};
      double worst = 0.0;
      double at = 0.0;
      for (double t : density_grid(a, b)) {
        const double d = std::abs(rbm_density_delta(bdy, t).value -
                                  rbm_density_ap(bdy, t).value);
        if (!(d <= worst)) {
          worst = d;
          at = t;
        }
      }
      out.push_back(absolute("delta_vs_ap_max_abs_diff", {{"a", a}, {"b", b}, {"t_worst", at}},
                             0.0, worst, 1e-9));
    }
  }
  return out;
}

// Five-point central difference of a survival function. The step is capped
// where the function is tiny compared with its slope.
double minus_derivative(const std::function<double(double)>& s, double t, double h) {
  return (8.0 * (s(t - h) - s(t + h)) - (s(t - 2 * h) - s(t + 2 * h))) / (12.0 * h);
}

std::vector<Check> density_cdf_consistency() {
  std::vector<Check> out;
  for (double a : kIntercepts) {
    for (double b : kSlopes) {
      const AffineBoundary bdy{a, b};
      const double end = bdy.window_end();
      double worst_rbm = 0.0;
      double worst_bes = 0.0;
      double at_rbm = 0.0;
      double at_bes = 0.0;
      for (double t : density_grid(a, b)) {
        const double h0 = 1e-3 * (std::isfinite(end) ? std::min(t, end - t) : t);
        auto srbm = [&](double x) { return rbm_survival(bdy, x).value; };
        const double frbm = rbm_density(bdy, t).value;
        const double hr = std::min(h0, 0.01 * srbm(t) / frbm);
        const double er = std::abs(minus_derivative(srbm, t, hr) - frbm) / frbm;
        if (!(er <= worst_rbm)) {
          worst_rbm = er;
          at_rbm = t;
        }
        auto sbes = [&](double x) { return bes3_survival(bdy, x).value; };
        const double fbes = bessel_ap_density(3.0, 0.0, bdy, t).value;
        const double hb = std::min(h0, 0.01 * sbes(t) / fbes);
        const double eb = std::abs(minus_derivative(sbes, t, hb) - fbes) / fbes;
        if (!(eb <= worst_bes)) {
          worst_bes = eb;
          at_bes = t;
        }
      }
      out.push_back(absolute("rbm_density_vs_survival_slope_max_rel",
                             {{"a", a}, {"b", b}, {"t_worst", at_rbm}}, 0.0, worst_rbm, 1e-5));
      out.push_back(absolute("bes3_density_vs_survival_slope_max_rel",
                             {{"a", a}, {"b", b}, {"t_worst", at_bes}}, 0.0, worst_bes, 1e-5));
    }
  }
  return out;
}

std::vector<Check> laplace_closure() {
  std::vector<Check> out;
  const double a = 1.0;
  for (double lambda : {0.5, 1.0, 2.0}) {
    const double rbm = integrate_half_line([&](double u) {
      return std::exp(-lambda * u) * rbm_density({a, 0.0}, u).value;
    });
    out.push_back(absolute("rbm_laplace_closure", {{"a", a}, {"lambda", lambda}},
                           rbm_level_laplace(a, lambda), rbm, 1e-8));
    const double bes = integrate_half_line([&](double u) {
      return std::exp(-lambda * u) * bes3_density({a, 0.0}, u).value;
    });
    out.push_back(absolute("bes3_laplace_closure", {{"a", a}, {"lambda", lambda}},
                           bes_level_laplace(a, lambda), bes, 1e-8));
  }
  return out;
}

std::vector<Check> mass_accounting() {
  std::vector<Check> out;
  for (double a : kIntercepts) {
    for (double b : kSlopes) {
      const AffineBoundary bdy{a, b};
      Params p{{"a", a}, {"b", b}};
      auto frbm = [&](double t) { return rbm_density(bdy, t).value; };
      auto fbes = [&](double t) { return bessel_ap_density(3.0, 0.0, bdy, t).value; };
      if (b < 0.0) {
        const double end = bdy.window_end();
        out.push_back(absolute("rbm_density_mass", p, 1.0,
                               integrate_interval(frbm, 0.0, end), 1e-8));
        out.push_back(absolute("bes3_density_mass", p, 1.0,
                               integrate_interval(fbes, 0.0, end), 1e-8));
      } else {
        out.push_back(absolute("rbm_density_mass", p, 1.0 - rbm_never_hits(a, b).value,
                               integrate_half_line(frbm), 1e-8));
        out.push_back(absolute("bes3_density_mass", p, 1.0 - bes3_never_hits(a, b).value,
                               integrate_half_line(fbes), 1e-8));
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Wedge laws.

std::vector<WedgeSpec> random_wedges() {
  std::mt19937_64 gen(20110523);
  std::uniform_real_distribution<double> d(0.05, 2.5);
  std::vector<WedgeSpec> w(20);
  for (auto& x : w) x = {d(gen), d(gen), d(gen), d(gen)};
  return w;
}

Params wedge_params(const WedgeSpec& w) {
  return {{"alpha", w.alpha}, {"beta", w.beta}, {"a", w.a}, {"b", w.b}};
}

std::vector<Check> wedge_symmetry() {
  std::vector<Check> out;
  for (const WedgeSpec& w : random_wedges()) {
    const double g = wedge_survival(w).value;
    out.push_back(absolute("wedge_swap_intercept_slope", wedge_params(w), g,
                           wedge_survival({w.beta, w.alpha, w.b, w.a}).value, 1e-12));
    out.push_back(absolute("wedge_swap_sides", wedge_params(w), g,
                           wedge_survival({w.a, w.b, w.alpha, w.beta}).value, 1e-12));
  }
  return out;
}

std::vector<Check> wedge_scaling() {
  std::vector<Check> out;
  for (const WedgeSpec& w : random_wedges()) {
    const double g = wedge_survival(w).value;
    for (double c : {0.5, 2.0, 7.0}) {
      Params p = wedge_params(w);
      p.emplace_back("c", c);
      out.push_back(absolute("wedge_scaling", p, g,
                             wedge_survival({w.alpha / c, w.beta * c, w.a / c, w.b * c}).value,
                             1e-12));
    }
  }
  return out;
}

std::vector<Check> hitting_scaling() {
  std::vector<Check> out;
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> ua(0.3, 3.0);
  std::uniform_real_distribution<double> ub(0.2, 2.0);
  std::uniform_real_distribution<double> frac(0.05, 0.9);
  for (int i = 0; i < 10; ++i) {
    const double a = ua(gen);
    const double mag = ub(gen);
    for (double b : {mag, -mag}) {
      const double end = b < 0.0 ? a / mag : 3.0 * a * a;
      const double u = frac(gen) * end;
      const double sign = b > 0.0 ? 1.0 : -1.0;
      const AffineBoundary unit{a * mag, sign};
      Params p{{"a", a}, {"b", b}, {"u", u}};
      const double f = rbm_density({a, b}, u).value;
      out.push_back(absolute("rbm_density_scaling", p, f,
                             b * b * rbm_density(unit, b * b * u).value,
                             1e-11 * std::max(1.0, f)));
      if (b > 0.0) {
        out.push_back(absolute("bes3_survival_scaling", p, bes3_survival({a, b}, u).value,
                               bes3_survival(unit, b * b * u).value, 1e-11));
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bridge reductions.

// P(BES(3) bridge 0 -> 0 of length u stays below a + s t) through the unit
// slope bridge formulas and Brownian scaling by |s|.
double bes3_bridge_below_line_scaled(double a, double s, double u) {
  if (s == 0.0) return bes3_bridge_max_cdf(a, u).value;
  const double m = std::abs(s);
  return bes3_bridge_below_line(0.0, s * s * u, a * m, s > 0.0 ? 1 : -1).value;
}

// 1 + 2 sum_{k>=1} c_k(theta) with the naive loop, long double.
long double naive_theta_sum(double theta, bool excursion) {
  long double s = 1.0L;
  for (int k = 1; k < 400; ++k) {
    const long double kk = static_cast<long double>(k) * k;
    const long double e = std::exp(-2.0L * kk * theta);
    s += 2.0L * (excursion ? (1.0L - 4.0L * kk * theta) * e : ((k % 2) ? -e : e));
  }
  return s;
}

std::vector<Check> bridge_reductions() {
  std::vector<Check> out;
  for (double a : {0.5, 1.0, 2.0}) {
    for (double b : {-1.0, -0.3, 0.0, 0.4, 1.0}) {
      for (double u : {0.5, 1.0, 2.0}) {
        if (!(b < a / u)) continue;
        Params p{{"a", a}, {"b", b}, {"u", u}};
        const double m = bridge_crossing_to_max(3.0, u, a, b);
        out.push_back(absolute("bes3_crossing_equals_max", p,
                               bes3_bridge_below_line_scaled(a, -b, u),
                               bes3_bridge_max_cdf(m, u).value, 1e-10));
        // reflecting bridge: Doob's formula with the bridge-shifted slopes
        const double s = -b + a / u;
        out.push_back(absolute("rbm_crossing_equals_max", p,
                               wedge_survival({a, s, a, s}).value,
                               rbm_bridge_max_cdf(bridge_crossing_to_max(1.0, u, a, b), u).value,
                               1e-10));
      }
    }
  }
  for (double a : {0.3, 1.0, 2.0}) {
    Params p{{"a", a}};
    out.push_back(absolute("sup_drift_bes3_series", p,
                           static_cast<double>(naive_theta_sum(a, true)),
                           sup_drift_cdf(3.0, a).value, 1e-10));
    out.push_back(absolute("sup_drift_rbm_series", p,
                           static_cast<double>(naive_theta_sum(a, false)),
                           sup_drift_cdf(1.0, a).value, 1e-10));
    const double far = 1e3 * std::max(1.0, a);
    out.push_back(absolute("sup_drift_rbm_vs_survival_limit", {{"a", a}, {"u", far}},
                           sup_drift_cdf(1.0, a).value, rbm_survival({a, 1.0}, far).value,
                           1e-10));
    out.push_back(absolute("sup_drift_bes3_vs_survival_limit", {{"a", a}, {"u", far}},
                           sup_drift_cdf(3.0, a).value, bes3_survival({a, 1.0}, far).value,
                           1e-10));
  }
  // sup_{t<=1}{bridge - b t} has the law of sqrt(M0^2 + b^2/4) - b/2.
  for (double delta : {1.0, 3.0}) {
    for (double b : {-0.5, 0.0, 1.0}) {
      for (double y : {0.4, 0.8, 1.2, 2.0}) {
        // sqrt(M0^2 + b^2/4) - b/2 < y  <=>  M0 < sqrt(y (y + b))
        if (!(y + b > 0.0)) continue;
        const double level = std::sqrt(y * (y + b));
        const double m0 = delta == 1.0 ? rbm_bridge_max_cdf(level, 1.0).value
                                       : bes3_bridge_max_cdf(level, 1.0).value;
        out.push_back(absolute("bridge_drift_max_transform",
                               {{"delta", delta}, {"b", b}, {"y", y}}, m0,
                               bridge_sup_affine_cdf(delta, 1.0, y, -b).value, 1e-10));
      }
    }
  }
  return out;
}

std::vector<Check> other_identities() {
  std::vector<Check> out;
  for (double u : {0.1, 1.0, 5.0}) {
    const double f = rbm_level_density(1.0, u).value;
    out.push_back(absolute("rbm_level_density_two_forms", {{"a", 1.0}, {"u", u}},
                           f, rbm_level_density_inverted(1.0, u).value, 1e-10));
    out.push_back(absolute("rbm_level_density_vs_affine", {{"a", 1.0}, {"u", u}},
                           f, rbm_density({1.0, 0.0}, u).value, 1e-10));
  }
  for (double u : {0.3, 1.0, 3.0}) {
    out.push_back(absolute("bes3_level_density_vs_eigen", {{"a", 1.0}, {"u", u}},
                           bes3_level_density(1.0, u).value,
                           bessel_ap_density(3.0, 0.0, {1.0, 0.0}, u).value, 1e-10));
  }
  for (double t : {0.3, 1.0, 2.5}) {
    const AffineBoundary bdy{1.5, -0.4};
    out.push_back(absolute("eigen_density_dim1_vs_rbm", {{"a", 1.5}, {"b", -0.4}, {"t", t}},
                           rbm_density(bdy, t).value,
                           bessel_ap_density(1.0, 0.0, bdy, t).value, 1e-10));
  }
  for (double t : {0.5, 1.0, 2.0}) {
    out.push_back(absolute("origin_line_dim3_at_zero", {{"b", 1.0}, {"t", t}},
                           bes3_origin_density(1.0, t),
                           bessel_origin_line_density(3.0, 0.0, 1.0, t), 1e-13));
    out.push_back(absolute("origin_line_dim3_above", {{"x", 1.0}, {"b", 1.0}, {"t", t}},
                           bes3_above_line_density(1.0, 0.0, 1.0, t),
                           bessel_origin_line_density(3.0, 1.0, 1.0, t), 1e-12));
  }
  for (auto [a, b] : {std::pair{1.0, 1.0}, std::pair{2.0, 0.5}}) {
    out.push_back(absolute("never_hits_vs_bridge_max", {{"a", a}, {"b", b}},
                           rbm_never_hits(a, b).value,
                           rbm_bridge_max_cdf(std::sqrt(a * b), 1.0).value, 1e-12));
  }
  for (double a : {0.5, 1.0, 2.0}) {
    for (double u : {0.5, 2.0}) {
      out.push_back(absolute("bes3_bridge_line_origin_limit", {{"a", a}, {"u", u}},
                             bes3_bridge_below_affine(a, 1.0, u).value,
                             bes3_bridge_below_line(0.0, u, a, 1).value, 1e-12));
    }
  }
  // survival from the bridge probability integrated against the endpoint law
  for (auto [a, b, u] : {std::tuple{1.0, 0.5, 1.0}, std::tuple{2.0, 1.0, 0.7}}) {
    // unit slope by Brownian scaling
    const double uu = b * b * u;
    const double aa = a * b;
    const double mixed = integrate_smooth(
        [&](double y) {
          const double w = 2.0 * y * y * std::exp(-y * y / (2.0 * uu)) /
                           std::sqrt(2.0 * kPi * uu * uu * uu);
          return w * bes3_bridge_below_line(y, uu, aa, 1).value;
        },
        0.0, aa + uu);
    out.push_back(absolute("bes3_survival_from_bridge_mixture",
                           {{"a", a}, {"b", b}, {"u", u}},
                           bes3_survival({a, b}, u).value, mixed, 1e-8));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Special functions.

std::vector<Check> special_floor() {
  std::vector<Check> out;
  for (double x : {0.5, 2.0, 10.0}) {
    const double c = std::sqrt(2.0 / (kPi * x));
    out.push_back(relative("bessel_j_half", {{"x", x}}, c * std::sin(x),
                           bessel_j(BesselOrder(0.5), x), 1e-12));
    out.push_back(relative("bessel_j_minus_half", {{"x", x}}, c * std::cos(x),
                           bessel_j(BesselOrder(-0.5), x), 1e-12));
  }
  for (double x : {0.5, 1.0, 4.0}) {
    out.push_back(relative("bessel_k_half", {{"x", x}},
                           std::sqrt(kPi / (2.0 * x)) * std::exp(-x),
                           bessel_k(BesselOrder(0.5), x), 1e-12));
  }
  out.push_back(relative("bessel_k_reflection", {{"nu", 0.3}, {"x", 2.0}},
                         bessel_k(BesselOrder(0.3), 2.0), bessel_k(BesselOrder(-0.3), 2.0),
                         1e-14));
  double worst = 0.0;
  for (int i = 1; i <= 200; ++i) {
    const double x = 0.1 * i;
    worst = std::max(worst, std::abs(gamma_fn(x + 1.0) / (x * gamma_fn(x)) - 1.0));
  }
  out.push_back(absolute("gamma_recurrence_max_rel", {{"x_max", 20.0}}, 0.0, worst, 1e-12));
  out.push_back(relative("gamma_half", {}, std::sqrt(kPi), gamma_fn(0.5), 1e-13));
  out.push_back(relative("gamma_five", {}, 24.0, gamma_fn(5.0), 1e-13));
  worst = 0.0;
  for (int i = 0; i <= 160; ++i) {
    const double x = -8.0 + 0.1 * i;
    worst = std::max(worst, std::abs(std_normal_cdf(x) + std_normal_cdf(-x) - 1.0));
  }
  out.push_back(absolute("normal_reflection_max_abs", {}, 0.0, worst, 1e-15));
  out.push_back(absolute("normal_cdf_zero", {}, 0.5, std_normal_cdf(0.0), 1e-16));
  for (double nu : {-0.5, 0.0, 0.5, 1.0, 2.5, 7.0}) {
    const auto z = bessel_j_zeros(BesselOrder(nu), 200);
    double res = 0.0;
    bool ordered = true;
    for (std::size_t k = 0; k < z.size(); ++k) {
      res = std::max(res, std::abs(bessel_j(BesselOrder(nu), z[k])));
      if (k > 0 && !(z[k] > z[k - 1])) ordered = false;
    }
    out.push_back(absolute("bessel_zero_residual_max", {{"nu", nu}, {"count", 200}}, 0.0,
                           ordered ? res : HUGE_VAL, 1e-10));
  }
  const auto z = bessel_j_zeros(BesselOrder(0.5), 3);
  for (int k = 0; k < 3; ++k) {
    out.push_back(relative("bessel_zero_half_order", {{"k", k + 1.0}}, (k + 1) * kPi, z[k],
                           1e-12));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Figures.

std::vector<Check> figure_checks(const std::filesystem::path& dir_in) {
  std::filesystem::path dir = dir_in;
  if (dir.empty()) dir = std::filesystem::temp_directory_path() / "affinehit-figures";
  const auto files = write_figures(dir);
  std::vector<Check> out;
  for (int id : {1, 2}) {
    const auto rows = read_figure_csv(files[id - 1]);
    const AffineBoundary bdy = id == 1 ? AffineBoundary{3.0, 1.0} : AffineBoundary{3.0, -1.0};
    Params p{{"figure", static_cast<double>(id)}};
    out.push_back(absolute("figure_rows", p, 600.0, static_cast<double>(rows.size()), 0.0));
    const double target = id == 1 ? 1.0 - theta_star(6.0 / kPi).value : 1.0;
    out.push_back(absolute("figure_trapezoid_mass", p, target,
                           trapezoid_mass(rows, bdy.window_end()), 5e-4));
    double worst = 0.0;
    bool nonneg = true;
    for (const auto& r : rows) {
      worst = std::max(worst, std::abs(r.density_delta - r.density_ap));
      if (r.density_delta < 0.0) nonneg = false;
    }
    out.push_back(absolute("figure_delta_vs_ap_max_abs", p, 0.0, worst, 1e-9));
    out.push_back(absolute("figure_nonnegative", p, 1.0, nonneg ? 1.0 : 0.0, 0.0));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Monte-Carlo checks.

McConfig seeded(const McConfig& c, std::uint64_t offset) {
  McConfig r = c;
  r.seed = c.seed + offset;
  return r;
}

double window_mass(const std::function<double(double)>& f, double t1, double t2) {
  return integrate_smooth(f, t1, t2);
}

std::vector<Check> mc_checks(const McConfig& cfg, std::vector<std::string>& notes) {
  using mc::BridgeEvent;
  std::vector<Check> out;
  const ProcessSpec rbm = ProcessSpec::rbm();
  const ProcessSpec bes3 = ProcessSpec::bes(3.0);

  for (auto [a, b, u] : {std::tuple{3.0, -1.0, 2.0}, std::tuple{3.0, -1.0, 2.9},
                         std::tuple{1.0, 0.0, 1.0}, std::tuple{1.0, 1.0, 2.0},
                         std::tuple{0.5, 0.5, 1.0}, std::tuple{50.0, 1.0, 1.0}}) {
    out.push_back(statistical("rbm_survival", {{"a", a}, {"b", b}, {"u", u}},
                              rbm_survival({a, b}, u).value,
                              mc::estimate_hit_survival(rbm, {a, b}, u, cfg)));
  }
  for (auto [a, b, u] : {std::tuple{1.0, -0.5, 1.2}, std::tuple{2.0, -0.5, 1.0},
                         std::tuple{1.5, 0.0, 0.5}, std::tuple{1.0, 1.0, 1.0},
                         std::tuple{2.0, 0.5, 3.0}}) {
    out.push_back(statistical("bes3_survival", {{"a", a}, {"b", b}, {"u", u}},
                              bes3_survival({a, b}, u).value,
                              mc::estimate_hit_survival(bes3, {a, b}, u, cfg)));
  }
  {
    const WedgeSpec w{1.0, 0.5, 2.0, 0.25};
    McConfig c = cfg;
    c.horizon = 200.0;
    out.push_back(statistical("wedge_survival", wedge_params(w), wedge_survival(w).value,
                              mc::estimate_wedge_survival(w, c)));
  }
  {
    McConfig c = cfg;
    c.horizon = 100.0;
    out.push_back(statistical("rbm_never_hits", {{"a", 1.0}, {"b", 1.0}, {"horizon", 100.0}},
                              rbm_never_hits(1.0, 1.0).value,
                              mc::estimate_hit_survival(rbm, {1.0, 1.0}, 100.0, c)));
  }
  {
    const WedgeSpec w{1.0, 0.5, 1.0, 0.5};
    out.push_back(statistical("bridge_wedge_prob", {{"alpha", 1}, {"beta", 0.5}, {"a", 1},
                                                    {"b", 0.5}, {"u", 1}, {"y", 0.3}},
                              bridge_wedge_prob(w, 1.0, 0.3).value,
                              mc::estimate_bridge_event({ProcessSpec::bm(), 1.0, 0.3},
                                                        BridgeEvent::stays_in_wedge(w), cfg)));
    const WedgeSpec v{1.0, 0.0, 1.0, 0.0};
    out.push_back(statistical("bridge_wedge_prob", {{"alpha", 1}, {"beta", 0}, {"a", 1},
                                                    {"b", 0}, {"u", 1}, {"y", 0}},
                              bridge_wedge_prob(v, 1.0, 0.0).value,
                              mc::estimate_bridge_event({ProcessSpec::bm(), 1.0, 0.0},
                                                        BridgeEvent::stays_in_wedge(v), cfg)));
    // positivity of x -> y as the bridge 0 -> y - x above -x
    const WedgeSpec pos{0.7, 0.0, 1e3, 0.0};
    out.push_back(statistical("bridge_positive_prob", {{"x", 0.7}, {"y", 1.3}, {"u", 1}},
                              bridge_positive_prob(0.7, 1.3, 1.0),
                              mc::estimate_bridge_event({ProcessSpec::bm(), 1.0, 0.6},
                                                        BridgeEvent::stays_in_wedge(pos), cfg)));
  }
  out.push_back(statistical("bes3_bridge_below_line", {{"y", 0.5}, {"u", 1}, {"a", 2}, {"sign", 1}},
                            bes3_bridge_below_line(0.5, 1.0, 2.0, 1).value,
                            mc::estimate_bridge_event({bes3, 1.0, 0.5},
                                                      BridgeEvent::stays_below_line(2.0, 1.0),
                                                      cfg)));
  out.push_back(statistical("bes3_bridge_below_line",
                            {{"y", 0.5}, {"u", 1}, {"a", 2.5}, {"sign", -1}},
                            bes3_bridge_below_line(0.5, 1.0, 2.5, -1).value,
                            mc::estimate_bridge_event({ProcessSpec::bes(3.0, 0.5), 1.0, 0.0},
                                                      BridgeEvent::stays_below_line(1.5, 1.0),
                                                      cfg)));
  out.push_back(statistical("bes3_bridge_below_affine", {{"a", 1.5}, {"b", 0.5}, {"u", 1}},
                            bes3_bridge_below_affine(1.5, 0.5, 1.0).value,
                            mc::estimate_bridge_event({bes3, 1.0, 0.0},
                                                      BridgeEvent::stays_below_line(1.5, 0.5),
                                                      cfg)));
  out.push_back(statistical("bes3_bridge_max_cdf", {{"y", 1}, {"u", 1}},
                            bes3_bridge_max_cdf(1.0, 1.0).value,
                            mc::estimate_bridge_event({bes3, 1.0, 0.0},
                                                      BridgeEvent::max_below(1.0), cfg)));
  out.push_back(statistical("rbm_bridge_max_cdf", {{"y", 0.8}, {"u", 1}},
                            rbm_bridge_max_cdf(0.8, 1.0).value,
                            mc::estimate_bridge_event({rbm, 1.0, 0.0},
                                                      BridgeEvent::max_below(0.8), cfg)));
  for (double delta : {1.0, 2.0, 3.0}) {
    const double a = 1.5, b = 0.5, u = 1.0;
    const ProcessSpec p = ProcessSpec::bes(delta);
    const McEstimate lhs = mc::estimate_bridge_event(
        {p, u, 0.0}, BridgeEvent::stays_below_line(a, -b), seeded(cfg, 101));
    const McEstimate rhs = mc::estimate_bridge_event(
        {p, u, 0.0}, BridgeEvent::max_below(bridge_crossing_to_max(delta, u, a, b)),
        seeded(cfg, 202));
    out.push_back(two_sample("bridge_crossing_to_max", {{"delta", delta}, {"a", a}, {"b", b}, {"u", u}},
                             lhs, rhs));
  }
  for (auto [a, b, y] : {std::tuple{2.0, 1.0, 3.0}, std::tuple{1.0, 0.5, 2.0}}) {
    out.push_back(statistical("rbm_hit_location_tail", {{"a", a}, {"b", b}, {"y", y}},
                              rbm_hit_location_tail({a, b}, y).value,
                              mc::estimate_hit_location_cdf(rbm, {a, b}, y, cfg)));
  }
  {
    // quartiles of the hit location for t -> 3 - t, checked jointly
    const AffineBoundary bdy{3.0, -1.0};
    double ks = 0.0;
    std::size_t n = 0;
    for (double q : {0.25, 0.5, 0.75}) {
      boost::math::tools::eps_tolerance<double> tol(40);
      std::uintmax_t it = 100;
      const auto r = boost::math::tools::bisect(
          [&](double y) { return rbm_hit_location_tail(bdy, y).value - q; }, 1e-9, 3.0 - 1e-9,
          tol, it);
      const double y = 0.5 * (r.first + r.second);
      const McEstimate e = mc::estimate_hit_location_cdf(rbm, bdy, y, cfg);
      const double exact = rbm_hit_location_tail(bdy, y).value;
      out.push_back(statistical("rbm_hit_location_cdf", {{"a", 3}, {"b", -1}, {"y", y}}, exact, e));
      ks = std::max(ks, std::abs(e.value - exact));
      n = e.paths;
    }
    const double crit = 1.628 / std::sqrt(static_cast<double>(n));
    out.push_back(absolute("rbm_hit_location_ks_distance", {{"a", 3}, {"b", -1}, {"critical_1pct", crit}},
                           0.0, ks, crit));
  }
  for (auto [p, name, c, s, t] :
       {std::tuple{rbm, "rbm", 1.0, 1.0, 2.0}, std::tuple{bes3, "bes3", 0.5, 1.0, 1.5},
        std::tuple{rbm, "rbm", 2.0, 0.5, 3.0}}) {
    out.push_back(statistical(std::string("last_hit_cdf_") + name,
                              {{"intercept", c}, {"slope", s}, {"t", t}},
                              last_hit_cdf(p, c, s, t).value,
                              mc::estimate_last_hit_cdf(p, c, s, t, cfg)));
  }
  {
    const auto acc = mc::conditioned_bridge_equivalence_check(
        1.0, 1.0, 2.0, cfg, std::max<std::size_t>(1000, cfg.paths * 5 / 8), 16);
    out.push_back(statistical("positive_bridge_acceptance", {{"x", 1}, {"y", 1}, {"u", 2}},
                              bridge_positive_prob(1.0, 1.0, 2.0), acc.acceptance));
    const auto rep = mc::conditioned_bridge_equivalence_check(1.0, 1.0, 1.0, seeded(cfg, 303));
    for (int k = 0; k < 3; ++k) {
      Check c;
      c.name = "conditioned_bridge_ks_" + rep.statistics[k];
      c.params = {{"x", 1}, {"y", 1}, {"u", 1}, {"ks_distance", rep.ks_distance[k]}};
      c.expected = 0.01;
      c.got = rep.ks_pvalue[k];
      c.tolerance = 0.0;
      c.passed = rep.ks_pvalue[k] > 0.01;
      out.push_back(c);
    }
  }
  {
    const AffineBoundary bdy{1.0, 0.3};
    const double t1 = 0.6, t2 = 1.0;
    out.push_back(statistical(
        "bessel_ap_density_window", {{"delta", 2}, {"x", 0.5}, {"a", 1}, {"b", 0.3}, {"t1", t1}, {"t2", t2}},
        window_mass([&](double t) { return bessel_ap_density(2.0, 0.5, bdy, t).value; }, t1, t2),
        mc::estimate_hit_window(ProcessSpec::bes(2.0, 0.5), bdy, t1, t2, cfg)));
  }
  {
    McConfig c = cfg;
    c.horizon = 50.0;
    out.push_back(statistical("sup_drift_cdf", {{"delta", 3}, {"a", 1}, {"horizon", 50}},
                              sup_drift_cdf(3.0, 1.0).value,
                              mc::estimate_hit_survival(bes3, {1.0, 1.0}, 50.0, c)));
    const AffineBoundary bdy{1.0, 0.5};
    const double mass = integrate_half_line(
        [&](double t) { return bessel_ap_density(3.0, 0.0, bdy, t).value; });
    out.push_back(statistical("bes3_eigen_density_defect", {{"a", 1}, {"b", 0.5}, {"horizon", 50}},
                              1.0 - mass, mc::estimate_hit_survival(bes3, bdy, 50.0, c)));
  }
  out.push_back(statistical(
      "bes3_above_line_window", {{"x", 2}, {"a", 1}, {"b", 1}, {"t1", 0.2}, {"t2", 1}},
      window_mass([](double t) { return bes3_above_line_density(2.0, 1.0, 1.0, t); }, 0.2, 1.0),
      mc::estimate_hit_window(ProcessSpec::bes(3.0, 2.0), {1.0, 1.0}, 0.2, 1.0, cfg)));
  for (double x : {1.0, 0.0}) {
    const double t1 = 0.5, t2 = 1.5;
    out.push_back(statistical(
        "origin_line_window", {{"delta", 4}, {"x", x}, {"b", 1}, {"t1", t1}, {"t2", t2}},
        window_mass([&](double t) { return bessel_origin_line_density(4.0, x, 1.0, t); }, t1, t2),
        mc::estimate_hit_window(ProcessSpec::bes(4.0, x), {0.0, 1.0}, t1, t2, cfg, 1e-4)));
  }

  const BiasStudy bias = crossing_bias_study(cfg);
  notes.push_back("bias study, P(RBM below 1 up to 1) at dt = 1e-3: exact " +
                  std::to_string(bias.exact) + ", corrected " +
                  std::to_string(bias.corrected.value) + ", naive " +
                  std::to_string(bias.naive.value) + ", improvement " +
                  std::to_string(bias.improvement));
  out.push_back(absolute("crossing_correction_bias_improvement",
                         {{"dt", 1e-3}, {"corrected", bias.corrected.value},
                          {"naive", bias.naive.value}},
                         5.0, std::min(bias.improvement, 1e6),
                         std::numeric_limits<double>::infinity()));
  out.back().passed = bias.improvement >= 5.0;
  return out;
}

template <class F>
Report timed(std::string name, F&& body) {
  Report r;
  r.name = std::move(name);
  const auto t0 = std::chrono::steady_clock::now();
  body(r);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace

bool mc_gate(const std::vector<Check>& checks) {
  std::size_t scored = 0;
  std::size_t within3 = 0;
  for (const Check& c : checks) {
    if (!c.statistical()) {
      if (!c.passed) return false;
      continue;
    }
    ++scored;
    if (!(std::abs(c.z) < 4.0)) return false;
    if (std::abs(c.z) < 3.0) ++within3;
  }
  return scored == 0 || static_cast<double>(within3) >= 0.95 * static_cast<double>(scored);
}

BiasStudy crossing_bias_study(const McConfig& cfg) {
  BiasStudy s;
  s.exact = rbm_survival({1.0, 0.0}, 1.0).value;
  McConfig c = cfg;
  c.dt = 1e-3;
  c.dt_max = 1e-3;
  c.adaptive = false;
  c.crossing_correction = true;
  s.corrected = mc::estimate_hit_survival(ProcessSpec::rbm(), {1.0, 0.0}, 1.0, c);
  c.crossing_correction = false;
  s.naive = mc::estimate_hit_survival(ProcessSpec::rbm(), {1.0, 0.0}, 1.0, c);
  const double dc = std::abs(s.corrected.value - s.exact);
  const double dn = std::abs(s.naive.value - s.exact);
  s.improvement = dc > 0.0 ? dn / dc : std::numeric_limits<double>::infinity();
  return s;
}

Suite parse_suite(const std::string& s) {
  if (s == "identities") return Suite::Identities;
  if (s == "symmetry") return Suite::Symmetry;
  if (s == "scaling") return Suite::Scaling;
  if (s == "special") return Suite::Special;
  if (s == "mc") return Suite::Mc;
  throw DomainError("unknown suite '" + s + "' (identities, symmetry, scaling, special, mc)");
}

std::string suite_name(Suite s) {
  switch (s) {
    case Suite::Identities: return "identities";
    case Suite::Symmetry: return "symmetry";
    case Suite::Scaling: return "scaling";
    case Suite::Special: return "special";
    case Suite::Mc: return "mc";
  }
  return "?";
}

Report run_suite(Suite s, const Options& opt) {
  return timed(suite_name(s), [&](Report& r) {
    switch (s) {
      case Suite::Identities:
        append(r.checks, poisson_identity());
        append(r.checks, density_cdf_consistency());
        append(r.checks, laplace_closure());
        append(r.checks, mass_accounting());
        append(r.checks, bridge_reductions());
        append(r.checks, other_identities());
        break;
      case Suite::Symmetry:
        append(r.checks, wedge_symmetry());
        break;
      case Suite::Scaling:
        append(r.checks, wedge_scaling());
        append(r.checks, hitting_scaling());
        break;
      case Suite::Special:
        append(r.checks, special_floor());
        break;
      case Suite::Mc:
        append(r.checks, mc_checks(opt.mc, r.notes));
        r.passed = mc_gate(r.checks);
        return;
    }
    r.passed = all_passed(r.checks);
  });
}

std::string criterion_title(int id) {
  switch (id) {
    case 1: return "kernel and eigenfunction densities agree";
    case 2: return "densities match survival slopes";
    case 3: return "Laplace transforms of level hitting times";
    case 4: return "mass accounting";
    case 5: return "wedge symmetry and scaling";
    case 6: return "bridge reductions and drift suprema";
    case 7: return "Monte-Carlo gate";
    case 8: return "figure reproduction";
    case 9: return "special-function floor";
  }
  throw DomainError("criterion id must be in 1..9");
}

Report run_criterion(int id, const Options& opt) {
  const std::string title = criterion_title(id);
  return timed(title, [&](Report& r) {
    switch (id) {
      case 1: r.checks = poisson_identity(); break;
      case 2: r.checks = density_cdf_consistency(); break;
      case 3: r.checks = laplace_closure(); break;
      case 4: r.checks = mass_accounting(); break;
      case 5:
        r.checks = wedge_symmetry();
        append(r.checks, wedge_scaling());
        break;
      case 6: r.checks = bridge_reductions(); break;
      case 7:
        r.checks = mc_checks(opt.mc, r.notes);
        r.passed = mc_gate(r.checks);
        return;
      case 8: r.checks = figure_checks(opt.figures_dir); break;
      case 9: r.checks = special_floor(); break;
    }
    r.passed = all_passed(r.checks);
  });
}

}  // namespace affinehit::verify
