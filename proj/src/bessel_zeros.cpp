#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/bessel_prime.hpp>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <string>
#include <vector>

#include "affinehit/errors.hpp"
#include "affinehit/specialfn.hpp"

namespace affinehit {

namespace {

using std::numbers::pi;

double mcmahon(double nu, std::size_t k) {
  const double mu = 4.0 * nu * nu;
  const double beta = (static_cast<double>(k) + 0.5 * nu - 0.25) * pi;
  const double e = 8.0 * beta;
  return beta - (mu - 1.0) / e -
         4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * e * e * e);
}

// Newton steps on J_nu kept inside [lo, hi], bisecting whenever a step
// would leave the bracket or fails to halve it.
double polish(double nu, double lo, double hi, double seed, std::size_t k) {
  double flo = boost::math::cyl_bessel_j(nu, lo);
  double x = (seed > lo && seed < hi) ? seed : 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double fx = boost::math::cyl_bessel_j(nu, x);
    if (fx == 0.0) return x;
    if ((fx < 0.0) == (flo < 0.0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
    }
    const double dfx = boost::math::cyl_bessel_j_prime(nu, x);
    double next = x - fx / dfx;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 4e-16 * x || hi - lo <= 4e-16 * x) return next;
    x = next;
  }
  throw ConvergenceError("bessel_j_zeros: no convergence at index " +
                             std::to_string(k),
                         x, hi - lo, k);
}

// Find a sign-change bracket to the right of `from` and refine it.
double next_zero(double nu, double from, std::size_t k) {
  const double step = pi / 8.0;
  double lo = from;
  double flo = boost::math::cyl_bessel_j(nu, lo);
  for (int i = 0; i < 100000; ++i) {
    const double hi = (k == 1) ? std::min(lo * 1.25, lo + step) : lo + step;
    const double fhi = boost::math::cyl_bessel_j(nu, hi);
    if (fhi == 0.0) return hi;
    if ((fhi < 0.0) != (flo < 0.0)) return polish(nu, lo, hi, mcmahon(nu, k), k);
    lo = hi;
    flo = fhi;
  }
  throw ConvergenceError("bessel_j_zeros: no bracket at index " +
                             std::to_string(k),
                         lo, 0.0, k);
}

struct ZeroCache {
  std::shared_mutex mutex;
  std::map<double, std::shared_ptr<const std::vector<double>>> tables;
};

ZeroCache& cache() {
  static ZeroCache c;
  return c;
}

}  // namespace

std::shared_ptr<const std::vector<double>> bessel_j_zero_table(BesselOrder order,
                                                               std::size_t n) {
  const double nu = order.value();
  auto& c = cache();
  std::shared_ptr<const std::vector<double>> have;
  {
    std::shared_lock lock(c.mutex);
    auto it = c.tables.find(nu);
    if (it != c.tables.end()) {
      if (it->second->size() >= n) return it->second;
      have = it->second;
    }
  }

  // Grow geometrically so repeated small extensions stay cheap.
  std::size_t want = std::max<std::size_t>(n, 16);
  if (have) want = std::max(want, 2 * have->size());
  auto grown = std::make_shared<std::vector<double>>();
  grown->reserve(want);
  if (have) *grown = *have;
  double from = grown->empty() ? 1e-4 : grown->back() + 1e-9 * grown->back();
  for (std::size_t k = grown->size() + 1; k <= want; ++k) {
    const double z = next_zero(nu, from, k);
    grown->push_back(z);
    from = z + 1e-9 * z;
  }

  std::unique_lock lock(c.mutex);
  auto& slot = c.tables[nu];
  if (!slot || slot->size() < grown->size()) slot = grown;
  return slot;
}

std::vector<double> bessel_j_zeros(BesselOrder nu, std::size_t n) {
  if (n < 1) detail::fail_domain("bessel_j_zeros: requires n >= 1");
  auto table = bessel_j_zero_table(nu, n);
  return std::vector<double>(table->begin(), table->begin() + n);
}

}  // namespace affinehit
