#pragma once

#include <cstddef>
#include <memory>
#include <vector>

namespace affinehit {

/// Real Bessel order nu > -1, tied to the Bessel dimension by delta = 2 nu + 2.
class BesselOrder {
 public:
  explicit BesselOrder(double nu);
  static BesselOrder from_dimension(double delta) {
    return BesselOrder((delta - 2.0) / 2.0);
  }

  double value() const noexcept { return nu_; }
  double dimension() const noexcept { return 2.0 * nu_ + 2.0; }

 private:
  double nu_;
};

// Gaussian distribution.

/// Standard normal CDF, evaluated through erfc so both tails keep full
/// relative precision.
double std_normal_cdf(double x);

/// Upper tail 1 - Phi(x) without cancellation.
double std_normal_sf(double x);

double std_normal_pdf(double x);

/// Scaled complementary error function exp(x^2) erfc(x) for x >= 0.
double erfcx(double x);

/// exp(log_weight) * (Phi(hi) - Phi(lo)) for lo <= hi, with the weight folded
/// into the Gaussian exponent. Stays finite when the weight alone would
/// overflow, as long as the product is representable.
double normal_mass_scaled(double log_weight, double lo, double hi);

// Bessel and Gamma functions.

double bessel_j(BesselOrder nu, double x);

/// The first n positive zeros j_{nu,1} < ... < j_{nu,n} of J_nu.
///
/// Seeds come from McMahon's expansion; each root is then polished by a
/// Newton iteration that is kept inside a sign-change bracket. Results are
/// memoized per order and shared between threads.
std::vector<double> bessel_j_zeros(BesselOrder nu, std::size_t n);

/// Read-only view of at least n memoized zeros. The table may hold more.
std::shared_ptr<const std::vector<double>> bessel_j_zero_table(BesselOrder nu,
                                                               std::size_t n);

double bessel_k(BesselOrder nu, double x);

double gamma_fn(double x);

}  // namespace affinehit
