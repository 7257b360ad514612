#include "affinehit/mc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "affinehit/errors.hpp"
#include "affinehit/mc/engine.hpp"
#include "affinehit/mc/philox.hpp"
#include "affinehit/wedge.hpp"

namespace affinehit::mc {

namespace {

constexpr std::size_t kMinPaths = 1000;

void check_config(const McConfig& cfg) {
  if (cfg.paths < kMinPaths) throw DomainError("McConfig: paths must be >= 1000");
  if (!(cfg.dt > 0.0) || !(cfg.dt_max >= cfg.dt)) {
    throw DomainError("McConfig: requires 0 < dt <= dt_max");
  }
  if (cfg.horizon < 0.0 || std::isnan(cfg.horizon)) {
    throw DomainError("McConfig: horizon must be >= 0");
  }
}

StepControl steps_of(const McConfig& cfg) {
  return StepControl{cfg.dt, cfg.adaptive ? cfg.dt_max : cfg.dt, cfg.adaptive,
                     cfg.crossing_correction};
}

McEstimate proportion(std::uint64_t hits, std::uint64_t n, const McConfig& cfg) {
  McEstimate e;
  const double nn = static_cast<double>(n);
  e.value = static_cast<double>(hits) / nn;
  // sample standard deviation of the indicator over sqrt(n)
  e.std_error = std::sqrt(e.value * (1.0 - e.value) / (nn - 1.0));
  e.paths = n;
  e.config = cfg;
  return e;
}

McEstimate exact(double v, const McConfig& cfg) {
  McEstimate e;
  e.value = v;
  e.paths = cfg.paths;
  e.config = cfg;
  return e;
}

int integer_dimension(double delta) {
  const double r = std::round(delta);
  if (!(delta > 0.0) || r != delta || r > 8.0) {
    throw UnsupportedError("simulation needs an integer dimension in [1, 8], got " +
                           std::to_string(delta));
  }
  return static_cast<int>(r);
}

bool signed_reflecting(const ProcessSpec& p) {
  return p.kind == ProcessKind::RBM ||
         (p.kind == ProcessKind::BES && integer_dimension(p.delta) == 1);
}

// Path model of `process` against the line a + b t.
Scenario scenario_for(const ProcessSpec& process, const AffineBoundary& bdy) {
  if (!(process.start >= 0.0) && process.kind != ProcessKind::BM) {
    throw DomainError("start point must be >= 0");
  }
  if (!std::isfinite(bdy.a) || !std::isfinite(bdy.b)) {
    throw DomainError("boundary must be finite");
  }
  Scenario s;
  s.start = process.start;
  s.upper = {bdy.a, bdy.b};
  if (process.kind == ProcessKind::BM) return s;
  if (signed_reflecting(process)) {
    s.has_lower = true;
    s.lower = s.upper;
    s.start = process.start;
    if (process.start > bdy.a) {
      throw UnsupportedError("reflecting BM started above the line is not simulated");
    }
    return s;
  }
  s.radial = true;
  s.dim = integer_dimension(process.delta);
  s.above = process.start > bdy.a;
  return s;
}

double default_horizon(const AffineBoundary& bdy, const McConfig& cfg) {
  if (cfg.horizon > 0.0) return cfg.horizon;
  return std::max(10.0, 5.0 * bdy.a / std::max(bdy.b, 0.1));
}

}  // namespace

McEstimate estimate_hit_survival(const ProcessSpec& process, const AffineBoundary& bdy,
                                 double u, const McConfig& cfg) {
  check_config(cfg);
  if (!(u > 0.0) || !std::isfinite(u)) throw DomainError("estimate_hit_survival: u > 0");
  if (cfg.horizon > 0.0 && u > cfg.horizon) {
    throw DomainError("estimate_hit_survival: u beyond the horizon");
  }
  Scenario s = scenario_for(process, bdy);
  s.nodes = {u};
  const HitCounts hc = simulate_hits(s, steps_of(cfg), cfg.paths, cfg.seed, cfg.threads);
  return proportion(hc.counts[1], hc.paths, cfg);
}

McEstimate estimate_hit_window(const ProcessSpec& process, const AffineBoundary& bdy,
                               double t1, double t2, const McConfig& cfg,
                               double monitor_from) {
  check_config(cfg);
  if (!(t1 >= 0.0) || !(t2 > t1) || !std::isfinite(t2)) {
    throw DomainError("estimate_hit_window: requires 0 <= t1 < t2");
  }
  Scenario s = scenario_for(process, bdy);
  s.monitor_from = monitor_from;
  s.orient_at_monitor = monitor_from > 0.0;
  if (t1 > 0.0) {
    s.nodes = {t1, t2};
    const HitCounts hc = simulate_hits(s, steps_of(cfg), cfg.paths, cfg.seed, cfg.threads);
    return proportion(hc.counts[1], hc.paths, cfg);
  }
  s.nodes = {t2};
  const HitCounts hc = simulate_hits(s, steps_of(cfg), cfg.paths, cfg.seed, cfg.threads);
  return proportion(hc.counts[0], hc.paths, cfg);
}

McEstimate estimate_wedge_survival(const WedgeSpec& w, const McConfig& cfg) {
  check_config(cfg);
  Scenario s;
  s.upper = {w.a, w.b};
  s.has_lower = true;
  s.lower = {w.alpha, w.beta};
  const double horizon = cfg.horizon > 0.0 ? cfg.horizon : 200.0;
  s.nodes = {horizon};
  const HitCounts hc = simulate_hits(s, steps_of(cfg), cfg.paths, cfg.seed, cfg.threads);
  return proportion(hc.counts[1], hc.paths, cfg);
}

McEstimate estimate_bridge_event(const BridgeSpec& bridge, const BridgeEvent& event,
                                 const McConfig& cfg) {
  check_config(cfg);
  const double u = bridge.length;
  if (!(u > 0.0) || !std::isfinite(u)) throw DomainError("bridge length must be > 0");
  const ProcessSpec& p = bridge.process;
  Scenario s;
  s.start = p.start;
  s.pin_time = u;
  s.pin_value = bridge.endpoint;
  s.nodes = {u};

  AffineBoundary line{};
  switch (event.kind) {
    case BridgeEventKind::StaysInWedge:
      if (p.kind != ProcessKind::BM) {
        throw UnsupportedError("wedge events are defined for Brownian bridges");
      }
      s.upper = {event.wedge.a, event.wedge.b};
      s.has_lower = true;
      s.lower = {event.wedge.alpha, event.wedge.beta};
      break;
    case BridgeEventKind::StaysBelowLine:
      line = event.line;
      break;
    case BridgeEventKind::MaxBelow:
      line = {event.level, 0.0};
      break;
  }
  if (event.kind != BridgeEventKind::StaysInWedge) {
    if (!std::isfinite(line.a) || !std::isfinite(line.b)) {
      throw DomainError("bridge event line must be finite");
    }
    s.upper = {line.a, line.b};
    if (p.kind != ProcessKind::BM) {
      if (!(p.start >= 0.0) || !(bridge.endpoint >= 0.0)) {
        throw DomainError("reflected bridges need nonnegative endpoints");
      }
      if (signed_reflecting(p)) {
        s.has_lower = true;
        s.lower = s.upper;
        s.pin_either_sign = true;
      } else {
        s.radial = true;
        s.dim = integer_dimension(p.delta);
        if (p.start > 0.0 && bridge.endpoint > 0.0 && s.dim != 3) {
          throw UnsupportedError("bridges between two nonzero points need delta = 3");
        }
      }
    }
  }
  const HitCounts hc = simulate_hits(s, steps_of(cfg), cfg.paths, cfg.seed, cfg.threads);
  return proportion(hc.counts[1], hc.paths, cfg);
}

McEstimate estimate_hit_location_cdf(const ProcessSpec& process,
                                     const AffineBoundary& bdy, double y,
                                     const McConfig& cfg) {
  check_config(cfg);
  if (bdy.b == 0.0) throw DomainError("estimate_hit_location_cdf: requires b != 0");
  if (std::isnan(y)) throw DomainError("estimate_hit_location_cdf: y is NaN");
  Scenario s = scenario_for(process, bdy);
  if (bdy.b > 0.0) {
    if (y <= bdy.a) return exact(1.0, cfg);
    const double tau = (y - bdy.a) / bdy.b;
    const double horizon = std::max(default_horizon(bdy, cfg), 2.0 * tau);
    s.nodes = {tau, horizon};
    const HitCounts hc = simulate_hits(s, steps_of(cfg), cfg.paths, cfg.seed, cfg.threads);
    McEstimate e = proportion(hc.counts[1] + hc.counts[2], hc.paths, cfg);
    e.unresolved = static_cast<double>(hc.counts[2]) / static_cast<double>(hc.paths);
    return e;
  }
  if (y >= bdy.a) return exact(1.0, cfg);
  if (y <= 0.0) return exact(0.0, cfg);
  s.nodes = {(y - bdy.a) / bdy.b};
  const HitCounts hc = simulate_hits(s, steps_of(cfg), cfg.paths, cfg.seed, cfg.threads);
  return proportion(hc.counts[1], hc.paths, cfg);
}

McEstimate estimate_last_hit_cdf(const ProcessSpec& process, double intercept,
                                 double slope, double t, const McConfig& cfg) {
  check_config(cfg);
  if (!(intercept > 0.0) || !(slope > 0.0)) {
    throw DomainError("estimate_last_hit_cdf: requires intercept > 0 and slope > 0");
  }
  const double horizon =
      cfg.horizon > 0.0 ? cfg.horizon : 50.0 * std::max(1.0, intercept / slope);
  if (!(t > 0.0) || !(t < horizon)) {
    throw DomainError("estimate_last_hit_cdf: requires 0 < t < horizon");
  }
  Scenario s = scenario_for(process, AffineBoundary{intercept, slope});
  s.monitor_from = t;
  s.nodes = {horizon};
  const HitCounts hc = simulate_hits(s, steps_of(cfg), cfg.paths, cfg.seed, cfg.threads);
  return proportion(hc.counts[1], hc.paths, cfg);
}

double ks_two_sample_distance(std::vector<double>& s1, std::vector<double>& s2) {
  if (s1.empty() || s2.empty()) throw DomainError("ks_two_sample_distance: empty sample");
  std::sort(s1.begin(), s1.end());
  std::sort(s2.begin(), s2.end());
  const double n1 = static_cast<double>(s1.size());
  const double n2 = static_cast<double>(s2.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < s1.size() && j < s2.size()) {
    const double v = std::min(s1[i], s2[j]);
    while (i < s1.size() && s1[i] <= v) ++i;
    while (j < s2.size() && s2[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n1 - static_cast<double>(j) / n2));
  }
  return d;
}

double ks_two_sample_pvalue(double d, std::size_t n1, std::size_t n2) {
  if (!(d >= 0.0) || n1 == 0 || n2 == 0) {
    throw DomainError("ks_two_sample_pvalue: requires d >= 0 and nonempty samples");
  }
  const double ne = static_cast<double>(n1) * static_cast<double>(n2) /
                    static_cast<double>(n1 + n2);
  const double se = std::sqrt(ne);
  const double lambda = (se + 0.12 + 0.11 / se) * d;
  // Kolmogorov tail 2 sum (-1)^{k-1} e^{-2 k^2 lambda^2} = 1 - Theta*(2 lambda^2 / pi)
  return std::clamp(1.0 - theta_star(2.0 * lambda * lambda / 3.14159265358979323846).value,
                    0.0, 1.0);
}

namespace {

struct Functionals {
  double max = 0.0;
  double average = 0.0;
  double midpoint = 0.0;
};

// Grid path of a Brownian bridge from x to y conditioned to stay positive, by
// rejection. Between grid points the exact bridge crossing probability of 0
// is used, so the accepted law is exact on the grid.
bool positive_bm_bridge(double x, double y, double u, std::size_t n, PathStream& rng,
                        Functionals& f) {
  const double h = u / static_cast<double>(n);
  double w = x;
  double sum = 0.5 * x;
  double mx = std::max(x, y);
  for (std::size_t i = 1; i <= n; ++i) {
    const double t = h * static_cast<double>(i - 1);
    const double rest = u - t;
    double next = y;
    if (i < n) {
      next = w + (y - w) * h / rest + std::sqrt(h * (rest - h) / rest) * rng.normal();
    }
    if (next <= 0.0) return false;
    if (rng.uniform() < std::exp(-2.0 * w * next / h)) return false;
    w = next;
    mx = std::max(mx, w);
    sum += (i < n) ? w : 0.5 * w;
    if (2 * i == n) f.midpoint = w;
  }
  f.max = mx;
  f.average = sum / static_cast<double>(n);
  return true;
}

// Grid path of |X| for a 3-dimensional Brownian bridge from x e1 to y v, with
// the direction v drawn from the von Mises-Fisher law of the endpoint.
void bes3_bridge(double x, double y, double u, std::size_t n, PathStream& rng,
                 Functionals& f) {
  double end[3] = {0.0, 0.0, 0.0};
  if (y > 0.0) {
    double v[3];
    const double kappa = x * y / u;
    const double phi = 6.283185307179586477 * rng.uniform();
    double w;
    if (kappa > 0.0) {
      const double r = rng.uniform();
      w = 1.0 + std::log(r + (1.0 - r) * std::exp(-2.0 * kappa)) / kappa;
    } else {
      w = 2.0 * rng.uniform() - 1.0;
    }
    w = std::clamp(w, -1.0, 1.0);
    const double s = std::sqrt(1.0 - w * w);
    v[0] = w;
    v[1] = s * std::cos(phi);
    v[2] = s * std::sin(phi);
    for (int k = 0; k < 3; ++k) end[k] = y * v[k];
  }
  const double h = u / static_cast<double>(n);
  double p[3] = {x, 0.0, 0.0};
  double sum = 0.5 * x;
  double mx = std::max(x, y);
  for (std::size_t i = 1; i <= n; ++i) {
    const double t = h * static_cast<double>(i - 1);
    const double rest = u - t;
    double r = y;
    if (i < n) {
      const double sd = std::sqrt(h * (rest - h) / rest);
      for (int k = 0; k < 3; ++k) p[k] += (end[k] - p[k]) * h / rest + sd * rng.normal();
      r = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
    }
    mx = std::max(mx, r);
    sum += (i < n) ? r : 0.5 * r;
    if (2 * i == n) f.midpoint = r;
  }
  f.max = mx;
  f.average = sum / static_cast<double>(n);
}

constexpr std::uint64_t kBesStream = 0x9e3779b97f4a7c15ULL;

}  // namespace

EquivalenceReport conditioned_bridge_equivalence_check(double x, double y, double u,
                                                       const McConfig& cfg,
                                                       std::size_t accepted_target,
                                                       std::size_t grid) {
  if (!(x > 0.0) || !(y > 0.0) || !(u > 0.0)) {
    throw DomainError("conditioned_bridge_equivalence_check: requires x, y, u > 0");
  }
  if (grid < 2 || grid % 2 != 0) throw DomainError("grid must be even and >= 2");
  if (accepted_target < 1) throw DomainError("accepted_target must be >= 1");

  constexpr std::size_t kBlock = 4096;
  std::vector<Functionals> accepted;
  accepted.reserve(accepted_target);
  std::size_t attempts = 0;
  std::size_t accepted_total = 0;
  while (accepted.size() < accepted_target) {
    const std::size_t blocks = std::max<std::size_t>(1, accepted_target / kBlock + 1);
    std::vector<std::vector<Functionals>> out(blocks);
    parallel_blocks(blocks * kBlock, kBlock, cfg.threads,
                    [&](std::size_t b, std::size_t first, std::size_t last) {
                      Functionals f;
                      for (std::size_t i = first; i < last; ++i) {
                        PathStream rng(cfg.seed, attempts + i);
                        if (positive_bm_bridge(x, y, u, grid, rng, f)) out[b].push_back(f);
                      }
                    });
    attempts += blocks * kBlock;
    for (auto& part : out) {
      accepted_total += part.size();
      for (const auto& f : part) {
        if (accepted.size() < accepted_target) accepted.push_back(f);
      }
    }
    if (static_cast<double>(accepted_total) < 1e-3 * static_cast<double>(attempts)) {
      throw ConvergenceError("rejection rate above 99.9%; acceptance " +
                                 std::to_string(static_cast<double>(accepted_total) /
                                                static_cast<double>(attempts)),
                             static_cast<double>(accepted_total) /
                                 static_cast<double>(attempts),
                             0.0, attempts);
    }
  }

  std::vector<Functionals> bes(accepted_target);
  parallel_blocks(accepted_target, kBlock, cfg.threads,
                  [&](std::size_t, std::size_t first, std::size_t last) {
                    for (std::size_t i = first; i < last; ++i) {
                      PathStream rng(cfg.seed ^ kBesStream, i);
                      bes3_bridge(x, y, u, grid, rng, bes[i]);
                    }
                  });

  EquivalenceReport rep;
  McConfig echo = cfg;
  echo.paths = attempts;
  rep.acceptance = proportion(accepted_total, attempts, echo);
  rep.attempts = attempts;
  rep.accepted = accepted_total;
  for (int k = 0; k < 3; ++k) {
    std::vector<double> s1(accepted_target);
    std::vector<double> s2(accepted_target);
    for (std::size_t i = 0; i < accepted_target; ++i) {
      s1[i] = k == 0 ? accepted[i].max : k == 1 ? accepted[i].average : accepted[i].midpoint;
      s2[i] = k == 0 ? bes[i].max : k == 1 ? bes[i].average : bes[i].midpoint;
    }
    rep.ks_distance[k] = ks_two_sample_distance(s1, s2);
    rep.ks_pvalue[k] = ks_two_sample_pvalue(rep.ks_distance[k], accepted_target, accepted_target);
  }
  return rep;
}

}  // namespace affinehit::mc
