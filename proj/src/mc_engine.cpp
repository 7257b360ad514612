#include "affinehit/mc/engine.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "affinehit/errors.hpp"
#include "affinehit/mc/philox.hpp"

namespace affinehit::mc {

namespace {

constexpr int kMaxDim = 8;
constexpr double kKappa = 4.0;
constexpr double kRadialScale = 0.1;
constexpr double kRadialFloor = 1e-3;
constexpr std::size_t kBlock = 2048;

using Vec = std::array<double, kMaxDim>;

double norm(const Vec& x, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s += x[i] * x[i];
  return std::sqrt(s);
}

// Unit vector at angle with cosine w from the first axis, uniform azimuth.
void direction_from_cosine(double w, PathStream& rng, Vec& v) {
  const double phi = 6.283185307179586477 * rng.uniform();
  const double s = std::sqrt(std::max(0.0, 1.0 - w * w));
  v = {};
  v[0] = w;
  v[1] = s * std::cos(phi);
  v[2] = s * std::sin(phi);
}

void uniform_direction(int dim, PathStream& rng, Vec& v) {
  double n = 0.0;
  do {
    for (int i = 0; i < dim; ++i) v[i] = rng.normal();
    n = norm(v, dim);
  } while (n == 0.0);
  for (int i = 0; i < dim; ++i) v[i] /= n;
}

// Endpoint of a dim-dimensional BM bridge from x e1 whose norm is y.
// Given the norm, the direction is von Mises-Fisher with kappa = x y / u.
void radial_endpoint(const Scenario& s, PathStream& rng, Vec& end) {
  end = {};
  if (s.pin_value == 0.0) return;
  Vec v{};
  if (s.start == 0.0) {
    uniform_direction(s.dim, rng, v);
  } else {
    const double kappa = s.start * s.pin_value / s.pin_time;
    const double u = rng.uniform();
    const double w = 1.0 + std::log(u + (1.0 - u) * std::exp(-2.0 * kappa)) / kappa;
    direction_from_cosine(std::clamp(w, -1.0, 1.0), rng, v);
  }
  for (int i = 0; i < s.dim; ++i) end[i] = s.pin_value * v[i];
}

class Walker {
 public:
  Walker(const Scenario& s, const StepControl& c) : s_(s), c_(c), above_(s.above) {
    slope_ = std::abs(s.upper.b);
    if (s.has_lower) slope_ = std::max(slope_, std::abs(s.lower.b));
  }

  // Index of the first node at or after the first monitored hit.
  std::size_t run(PathStream& rng) {
    Vec x{};
    x[0] = s_.start;
    Vec end{};
    const bool pinned = s_.pin_time > 0.0;
    if (pinned) {
      if (s_.radial) {
        radial_endpoint(s_, rng, end);
      } else {
        end[0] = s_.pin_value;
        if (s_.pin_either_sign && s_.start != 0.0) {
          const double pneg = 1.0 / (1.0 + std::exp(2.0 * s_.start * s_.pin_value / s_.pin_time));
          if (rng.uniform() < pneg) end[0] = -end[0];
        }
      }
    }

    above_ = s_.above;
    const std::size_t n = s_.nodes.size();
    std::size_t node = 0;
    double t = 0.0;
    bool monitoring = s_.monitor_from <= 0.0;
    if (monitoring && distance(x, 0.0) <= 0.0) return 0;

    while (node < n) {
      double target = s_.nodes[node];
      if (!monitoring) target = std::min(target, s_.monitor_from);
      double h = step(x, t, monitoring);
      h = std::min(h, target - t);
      if (pinned) {
        const double rest = s_.pin_time - t;
        if (rest > 2.0 * c_.dt_min) h = std::min(h, 0.5 * rest);
        h = std::min(h, rest);
      }
      const bool lands = h >= target - t;
      const double t1 = lands ? target : t + h;
      h = t1 - t;

      Vec y = x;
      if (pinned) {
        const double rest = s_.pin_time - t;
        const double frac = h / rest;
        const double sd = std::sqrt(std::max(0.0, h * (rest - h) / rest));
        for (int i = 0; i < s_.dim; ++i) y[i] = x[i] + (end[i] - x[i]) * frac + sd * rng.normal();
      } else {
        const double sd = std::sqrt(h);
        for (int i = 0; i < s_.dim; ++i) y[i] = x[i] + sd * rng.normal();
      }

      if (monitoring) {
        if (distance(y, t1) <= 0.0) return node;
        if (c_.crossing_correction) {
          const double p = crossing_probability(x, t, y, t1, h);
          if (p > 0.0 && rng.uniform() < p) return node;
        }
      }
      x = y;
      t = t1;
      if (!monitoring && t >= s_.monitor_from) {
        monitoring = true;
        if (s_.radial && s_.orient_at_monitor) above_ = value(x) > s_.upper.at(t);
        if (distance(x, t) <= 0.0) {
          while (node < n && s_.nodes[node] < t) ++node;
          return node;
        }
      }
      while (node < n && t >= s_.nodes[node]) ++node;
    }
    return n;
  }

 private:
  double value(const Vec& x) const { return s_.radial ? norm(x, s_.dim) : x[0]; }

  // Signed distance to the nearest barrier, positive on the allowed side.
  double distance(const Vec& x, double t) const {
    const double v = value(x);
    if (s_.radial) return above_ ? v - s_.upper.at(t) : s_.upper.at(t) - v;
    double d = s_.upper.at(t) - v;
    if (s_.has_lower) d = std::min(d, v + s_.lower.at(t));
    return d;
  }

  double crossing_probability(const Vec& x, double t0, const Vec& y, double t1,
                              double h) const {
    const double v0 = value(x);
    const double v1 = value(y);
    if (s_.radial) {
      const double d0 = above_ ? v0 - s_.upper.at(t0) : s_.upper.at(t0) - v0;
      const double d1 = above_ ? v1 - s_.upper.at(t1) : s_.upper.at(t1) - v1;
      return std::exp(-2.0 * d0 * d1 / h);
    }
    const double pu = std::exp(-2.0 * (s_.upper.at(t0) - v0) * (s_.upper.at(t1) - v1) / h);
    if (!s_.has_lower) return pu;
    const double pl = std::exp(-2.0 * (v0 + s_.lower.at(t0)) * (v1 + s_.lower.at(t1)) / h);
    return pu + pl - pu * pl;
  }

  // Largest step whose typical excursion kappa sqrt(h) plus boundary drift
  // |b| h stays within the current distance to the boundary.
  double step(const Vec& x, double t, bool monitoring) const {
    if (!c_.adaptive) return c_.dt_min;
    if (!monitoring) return c_.dt_max;
    const double d = std::max(distance(x, t), 0.0);
    double r = 0.0;
    if (slope_ == 0.0) {
      r = d / kKappa;
    } else {
      r = (-kKappa + std::sqrt(kKappa * kKappa + 4.0 * slope_ * d)) / (2.0 * slope_);
    }
    double h = std::clamp(r * r, c_.dt_min, c_.dt_max);
    if (s_.radial && d <= value(x)) {
      // The bridge crossing rule ignores the radial drift (dim - 1) / 2R,
      // which matters once the line is within R of the path.
      const double rr = kRadialScale * value(x);
      h = std::min(h, std::max(rr * rr, kRadialFloor * c_.dt_min));
    }
    return h;
  }

  const Scenario& s_;
  const StepControl& c_;
  bool above_ = false;
  double slope_ = 0.0;
};

}  // namespace

void parallel_blocks(std::size_t n, std::size_t block, unsigned threads,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
  const std::size_t nblocks = (n + block - 1) / block;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(nblocks, 1)));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= nblocks) return;
      body(b, b * block, std::min(n, (b + 1) * block));
    }
  };
  if (threads <= 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

HitCounts simulate_hits(const Scenario& s, const StepControl& steps,
                        std::size_t paths, std::uint64_t seed, unsigned threads) {
  if (s.dim < 1 || s.dim > kMaxDim)
    throw DomainError("simulate_hits: dimension must be in [1, 8]");
  if (s.nodes.empty()) throw DomainError("simulate_hits: no record times");
  if (!std::is_sorted(s.nodes.begin(), s.nodes.end()) || !(s.nodes.front() > 0.0)) {
    throw DomainError("simulate_hits: record times must be positive and sorted");
  }
  if (s.pin_time > 0.0 && s.nodes.back() > s.pin_time) {
    throw DomainError("simulate_hits: bridge simulated past its length");
  }
  if (!(steps.dt_min > 0.0) || !(steps.dt_max >= steps.dt_min)) {
    throw DomainError("simulate_hits: requires 0 < dt <= dt_max");
  }
  const std::size_t bins = s.nodes.size() + 1;
  const std::size_t nblocks = (paths + kBlock - 1) / kBlock;
  std::vector<std::vector<std::uint64_t>> partial(nblocks, std::vector<std::uint64_t>(bins, 0));
  parallel_blocks(paths, kBlock, threads, [&](std::size_t b, std::size_t first, std::size_t last) {
    Walker w(s, steps);
    auto& out = partial[b];
    for (std::size_t p = first; p < last; ++p) {
      PathStream rng(seed, p);
      ++out[w.run(rng)];
    }
  });
  HitCounts hc;
  hc.counts.assign(bins, 0);
  for (const auto& part : partial) {
    for (std::size_t i = 0; i < bins; ++i) hc.counts[i] += part[i];
  }
  hc.paths = paths;
  return hc;
}

}  // namespace affinehit::mc
