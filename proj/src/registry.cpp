#include "affinehit/registry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "affinehit/bes_hitting.hpp"
#include "affinehit/bridge_extremes.hpp"
#include "affinehit/errors.hpp"
#include "affinehit/rbm_hitting.hpp"
#include "affinehit/specialfn.hpp"
#include "affinehit/wedge.hpp"

namespace affinehit::registry {

namespace {

using Fn = std::function<SeriesResult(const Bindings&, const SeriesOptions&)>;

SeriesResult exact(double v) { return SeriesResult{v, 1, 0.0, false}; }

double get(const Bindings& b, const char* name) { return b.find(name)->second; }

long integer(const Bindings& b, const char* name) {
  const double v = get(b, name);
  if (v != std::floor(v) || std::abs(v) > 1e9) {
    detail::fail_domain(std::string("--") + name + " must be an integer");
  }
  return static_cast<long>(v);
}

AffineBoundary line(const Bindings& p) { return {get(p, "a"), get(p, "b")}; }

WedgeSpec wedge(const Bindings& p) {
  return {get(p, "alpha"), get(p, "beta"), get(p, "a"), get(p, "b")};
}

ProcessSpec process(const Bindings& p) {
  const double d = get(p, "delta");
  return d == 1.0 ? ProcessSpec::rbm() : ProcessSpec::bes(d);
}

std::optional<double> rbm_mass(const Bindings& p) {
  const double a = get(p, "a"), b = get(p, "b");
  if (!(b > 0.0) || !(a > 0.0)) return std::nullopt;
  return 1.0 - rbm_never_hits(a, b).value;
}

std::optional<double> bes3_mass(const Bindings& p) {
  const double a = get(p, "a"), b = get(p, "b");
  if (!(b > 0.0) || !(a > 0.0)) return std::nullopt;
  return 1.0 - bes3_never_hits(a, b).value;
}

std::optional<double> process_mass(const Bindings& p) {
  const double d = get(p, "delta");
  if (d == 1.0) return rbm_mass(p);
  if (d == 3.0) return bes3_mass(p);
  return std::nullopt;
}

Formula make(std::string id, std::vector<std::string> symbols,
             std::vector<std::string> params, std::string summary, Fn fn) {
  Formula f;
  f.id = std::move(id);
  f.symbols = std::move(symbols);
  f.params = std::move(params);
  f.summary = std::move(summary);
  f.eval = std::move(fn);
  return f;
}

Formula with_mass(Formula f, std::function<std::optional<double>(const Bindings&)> m) {
  f.total_mass = std::move(m);
  return f;
}

Formula with_aliases(Formula f, std::vector<std::string> aliases) {
  f.aliases = std::move(aliases);
  return f;
}

std::vector<Formula> build() {
  using P = const Bindings&;
  using O = const SeriesOptions&;
  std::vector<Formula> v;

  // special functions
  v.push_back(make("std-normal-cdf", {"std_normal_cdf"}, {"x"}, "Phi(x)",
                   [](P p, O) { return exact(std_normal_cdf(get(p, "x"))); }));
  v.push_back(make("std-normal-sf", {"std_normal_sf"}, {"x"}, "1 - Phi(x)",
                   [](P p, O) { return exact(std_normal_sf(get(p, "x"))); }));
  v.push_back(make("std-normal-pdf", {"std_normal_pdf"}, {"x"}, "phi(x)",
                   [](P p, O) { return exact(std_normal_pdf(get(p, "x"))); }));
  v.push_back(make("erfcx", {"erfcx"}, {"x"}, "exp(x^2) erfc(x)",
                   [](P p, O) { return exact(erfcx(get(p, "x"))); }));
  v.push_back(make("normal-mass-scaled", {"normal_mass_scaled"}, {"w", "lo", "hi"},
                   "exp(w) (Phi(hi) - Phi(lo))", [](P p, O) {
                     return exact(normal_mass_scaled(get(p, "w"), get(p, "lo"), get(p, "hi")));
                   }));
  v.push_back(make("bessel-j", {"bessel_j"}, {"nu", "x"}, "J_nu(x)", [](P p, O) {
    return exact(bessel_j(BesselOrder(get(p, "nu")), get(p, "x")));
  }));
  v.push_back(make("bessel-k", {"bessel_k"}, {"nu", "x"}, "K_nu(x)", [](P p, O) {
    return exact(bessel_k(BesselOrder(get(p, "nu")), get(p, "x")));
  }));
  v.push_back(make("bessel-j-zero", {"bessel_j_zeros"}, {"nu", "n"}, "n-th positive zero of J_nu",
                   [](P p, O) {
                     const long n = integer(p, "n");
                     if (n < 1) detail::fail_domain("--n must be >= 1");
                     return exact(bessel_j_zeros(BesselOrder(get(p, "nu")),
                                                 static_cast<std::size_t>(n))
                                      .back());
                   }));
  v.push_back(make("gamma", {"gamma_fn"}, {"x"}, "Gamma(x)",
                   [](P p, O) { return exact(gamma_fn(get(p, "x"))); }));

  // wedges and bridges of Brownian motion
  v.push_back(make("wedge-survival", {"wedge_survival"}, {"alpha", "beta", "a", "b"},
                   "P(BM stays in (-(alpha + beta t), a + b t) forever)",
                   [](P p, O o) { return wedge_survival(wedge(p), o); }));
  v.push_back(make("theta-star", {"theta_star"}, {"u"}, "sum_k (-1)^k exp(-pi k^2 u)",
                   [](P p, O o) { return theta_star(get(p, "u"), o); }));
  v.push_back(make("rbm-never-hits", {"rbm_never_hits"}, {"a", "b"},
                   "P(RBM never meets a + b t)",
                   [](P p, O o) { return rbm_never_hits(get(p, "a"), get(p, "b"), o); }));
  v.push_back(make("bridge-wedge", {"bridge_wedge_prob"},
                   {"alpha", "beta", "a", "b", "u", "y"},
                   "P(Brownian bridge 0 -> y of length u stays in the wedge)",
                   [](P p, O o) {
                     return bridge_wedge_prob(wedge(p), get(p, "u"), get(p, "y"), o);
                   }));
  v.push_back(make("bridge-positive", {"bridge_positive_prob"}, {"x", "y", "u"},
                   "P(Brownian bridge x -> y of length u stays positive)", [](P p, O) {
                     return exact(bridge_positive_prob(get(p, "x"), get(p, "y"), get(p, "u")));
                   }));

  // reflecting Brownian motion
  v.push_back(with_mass(
      make("rbm-survival", {"rbm_survival"}, {"a", "b", "u"}, "P(H_{a,b} > u), RBM",
           [](P p, O o) { return rbm_survival(line(p), get(p, "u"), o); }),
      rbm_mass));
  v.push_back(with_mass(
      make("rbm-survival-series", {"rbm_survival_series"}, {"a", "b", "u"},
           "P(H_{a,b} > u), RBM, kernel series only",
           [](P p, O o) { return rbm_survival_series(line(p), get(p, "u"), o); }),
      rbm_mass));
  v.push_back(with_mass(
      make("rbm-density", {"rbm_density"}, {"a", "b", "u"}, "density of H_{a,b}, RBM",
           [](P p, O o) { return rbm_density(line(p), get(p, "u"), o); }),
      rbm_mass));
  v.push_back(with_mass(
      make("rbm-density-delta", {"rbm_density_delta"}, {"a", "b", "u"},
           "density of H_{a,b}, RBM, kernel series",
           [](P p, O o) { return rbm_density_delta(line(p), get(p, "u"), o); }),
      rbm_mass));
  v.push_back(with_mass(
      make("rbm-density-ap", {"rbm_density_ap"}, {"a", "b", "u"},
           "density of H_{a,b}, RBM, eigenfunction series",
           [](P p, O o) { return rbm_density_ap(line(p), get(p, "u"), o); }),
      rbm_mass));
  v.push_back(with_mass(
      make("rbm-hit-location-tail", {"rbm_hit_location_tail"}, {"a", "b", "y"},
           "P(position at H beyond y), RBM",
           [](P p, O o) { return rbm_hit_location_tail(line(p), get(p, "y"), o); }),
      rbm_mass));
  v.push_back(with_mass(
      make("rbm-hit-location-density", {"rbm_hit_location_density"}, {"a", "b", "y"},
           "density of the position at H, RBM",
           [](P p, O o) { return rbm_hit_location_density(line(p), get(p, "y"), o); }),
      rbm_mass));
  v.push_back(with_aliases(
      make("rbm-level-laplace", {"rbm_level_laplace"}, {"a", "lambda"},
           "E exp(-lambda H_{a,0}), RBM",
           [](P p, O) { return exact(rbm_level_laplace(get(p, "a"), get(p, "lambda"))); }),
      {"rbm-laplace"}));
  v.push_back(make("rbm-level-density", {"rbm_level_density"}, {"a", "u"},
                   "density of H_{a,0}, RBM",
                   [](P p, O o) { return rbm_level_density(get(p, "a"), get(p, "u"), o); }));
  v.push_back(make("rbm-level-density-inverted", {"rbm_level_density_inverted"}, {"a", "u"},
                   "density of H_{a,0}, RBM, inverted transform",
                   [](P p, O o) {
                     return rbm_level_density_inverted(get(p, "a"), get(p, "u"), o);
                   }));

  // Bessel processes
  v.push_back(with_mass(
      make("bes3-survival", {"bes3_survival"}, {"a", "b", "u"}, "P(H_{a,b} > u), BES(3)",
           [](P p, O o) { return bes3_survival(line(p), get(p, "u"), o); }),
      bes3_mass));
  v.push_back(with_mass(
      make("bes3-survival-series", {"bes3_survival_series"}, {"a", "b", "u"},
           "P(H_{a,b} > u), BES(3), kernel series only",
           [](P p, O o) { return bes3_survival_series(line(p), get(p, "u"), o); }),
      bes3_mass));
  v.push_back(make("bes3-never-hits", {"bes3_never_hits"}, {"a", "b"},
                   "P(BES(3) never meets a + b t)",
                   [](P p, O o) { return bes3_never_hits(get(p, "a"), get(p, "b"), o); }));
  v.push_back(make("bes3-bridge-below-line", {"bes3_bridge_below_line"},
                   {"y", "u", "a", "sign"},
                   "P(BES(3) bridge stays below a unit-slope line)", [](P p, O o) {
                     const long s = integer(p, "sign");
                     if (s != 1 && s != -1) detail::fail_domain("--sign must be +1 or -1");
                     return bes3_bridge_below_line(get(p, "y"), get(p, "u"), get(p, "a"),
                                                   static_cast<int>(s), o);
                   }));
  v.push_back(make("bes3-bridge-below-affine", {"bes3_bridge_below_affine"}, {"a", "b", "u"},
                   "P(BES(3) bridge 0 -> 0 stays below a + b t)", [](P p, O o) {
                     return bes3_bridge_below_affine(get(p, "a"), get(p, "b"), get(p, "u"), o);
                   }));
  v.push_back(make("bes3-above-line-density", {"bes3_above_line_density"},
                   {"x", "a", "b", "u"}, "density of H_{a,b}, BES(3) from x > a",
                   [](P p, O) {
                     return exact(bes3_above_line_density(get(p, "x"), get(p, "a"),
                                                          get(p, "b"), get(p, "u")));
                   }));
  v.push_back(make("bes3-origin-density", {"bes3_origin_density"}, {"b", "u"},
                   "density of H_{0,b}, BES(3) from 0",
                   [](P p, O) { return exact(bes3_origin_density(get(p, "b"), get(p, "u"))); }));
  v.push_back(make("bessel-origin-line-density", {"bessel_origin_line_density"},
                   {"delta", "x", "b", "u"}, "density of H_{0,b}, BES(delta) from x",
                   [](P p, O) {
                     return exact(bessel_origin_line_density(get(p, "delta"), get(p, "x"),
                                                             get(p, "b"), get(p, "u")));
                   }));
  v.push_back(make("bessel-ap-density", {"bessel_ap_density"}, {"delta", "x", "a", "b", "u"},
                   "density of H_{a,b}, BES(delta) from x in [0, a]", [](P p, O o) {
                     return bessel_ap_density(get(p, "delta"), get(p, "x"), line(p),
                                              get(p, "u"), o);
                   }));
  v.push_back(with_mass(
      make("bes3-density", {"bes3_density"}, {"a", "b", "u"}, "density of H_{a,b}, BES(3)",
           [](P p, O o) { return bes3_density(line(p), get(p, "u"), o); }),
      bes3_mass));
  v.push_back(make("bes3-level-density", {"bes3_level_density"}, {"a", "u"},
                   "density of H_{a,0}, BES(3)",
                   [](P p, O o) { return bes3_level_density(get(p, "a"), get(p, "u"), o); }));
  v.push_back(with_aliases(
      make("bes-level-laplace", {"bes_level_laplace"}, {"a", "lambda"},
           "E exp(-lambda H_{a,0}), BES(3)",
           [](P p, O) { return exact(bes_level_laplace(get(p, "a"), get(p, "lambda"))); }),
      {"bes-laplace"}));
  v.push_back(make("excursion-max-series", {"excursion_max_series"}, {"theta"},
                   "1 + 2 sum_k (1 - 4 k^2 theta) exp(-2 k^2 theta)", [](P p, O o) {
                     return detail::excursion_max_series(get(p, "theta"), o);
                   }));

  // bridges, suprema and last passage
  v.push_back(make("bridge-crossing-to-max", {"bridge_crossing_to_max"},
                   {"delta", "u", "a", "b"},
                   "level m with P(sup {w_t + b t} < a) = P(max < m)", [](P p, O) {
                     return exact(bridge_crossing_to_max(get(p, "delta"), get(p, "u"),
                                                         get(p, "a"), get(p, "b")));
                   }));
  v.push_back(make("bes3-bridge-max", {"bes3_bridge_max_cdf"}, {"y", "u"},
                   "P(max of BES(3) bridge 0 -> 0 < y)",
                   [](P p, O o) { return bes3_bridge_max_cdf(get(p, "y"), get(p, "u"), o); }));
  v.push_back(make("rbm-bridge-max", {"rbm_bridge_max_cdf"}, {"y", "u"},
                   "P(max of reflecting Brownian bridge 0 -> 0 < y)",
                   [](P p, O o) { return rbm_bridge_max_cdf(get(p, "y"), get(p, "u"), o); }));
  v.push_back(make("bridge-max", {"bes3_bridge_max_cdf", "rbm_bridge_max_cdf"},
                   {"delta", "y", "u"}, "P(max of BES(delta) bridge 0 -> 0 < y), delta 1 or 3",
                   [](P p, O o) {
                     const double d = get(p, "delta");
                     if (d == 1.0) return rbm_bridge_max_cdf(get(p, "y"), get(p, "u"), o);
                     if (d == 3.0) return bes3_bridge_max_cdf(get(p, "y"), get(p, "u"), o);
                     throw UnsupportedError("bridge-max: closed form only for delta 1 or 3");
                   }));
  v.push_back(make("bridge-sup-affine", {"bridge_sup_affine_cdf"}, {"delta", "u", "a", "b"},
                   "P(sup {w_t + b t} < a) for a bridge of dimension 1 or 3", [](P p, O o) {
                     return bridge_sup_affine_cdf(get(p, "delta"), get(p, "u"), get(p, "a"),
                                                  get(p, "b"), o);
                   }));
  v.push_back(make("sup-drift", {"sup_drift_cdf"}, {"delta", "a"},
                   "P(sup {R_t - t} < a), BES(delta) from 0, delta 1 or 3",
                   [](P p, O o) { return sup_drift_cdf(get(p, "delta"), get(p, "a"), o); }));
  v.push_back(with_mass(
      make("hit-survival", {"hit_survival"}, {"delta", "a", "b", "u"},
           "P(H_{a,b} > u), RBM (delta 1) or BES(3)",
           [](P p, O o) { return hit_survival(process(p), line(p), get(p, "u"), o); }),
      process_mass));
  v.push_back(make("last-hit", {"last_hit_cdf"}, {"delta", "a", "b", "t"},
                   "P(last time on t -> b + a t is <= t), RBM (delta 1) or BES(3)",
                   [](P p, O o) {
                     return last_hit_cdf(process(p), get(p, "b"), get(p, "a"), get(p, "t"), o);
                   }));
  return v;
}

}  // namespace

const std::vector<Formula>& formulas() {
  static const std::vector<Formula> all = build();
  return all;
}

const Formula* find(std::string_view id) {
  for (const Formula& f : formulas()) {
    if (f.id == id) return &f;
    if (std::find(f.aliases.begin(), f.aliases.end(), id) != f.aliases.end()) return &f;
  }
  return nullptr;
}

std::vector<std::string> parameter_names() {
  std::set<std::string> names;
  for (const Formula& f : formulas()) names.insert(f.params.begin(), f.params.end());
  return {names.begin(), names.end()};
}

SeriesResult evaluate(const Formula& f, const Bindings& bindings, const SeriesOptions& opt) {
  for (const std::string& p : f.params) {
    const auto it = bindings.find(p);
    if (it == bindings.end()) detail::fail_domain(f.id + ": missing --" + p);
    if (std::isnan(it->second)) detail::fail_domain(f.id + ": --" + p + " is NaN");
  }
  return f.eval(bindings, opt);
}

}  // namespace affinehit::registry
