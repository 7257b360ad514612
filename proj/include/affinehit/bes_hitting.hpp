#pragma once

#include "affinehit/series.hpp"
#include "affinehit/types.hpp"

namespace affinehit {

/// P(H_{a,b} > u) for the three-dimensional Bessel process from 0.
SeriesResult bes3_survival(const AffineBoundary& bdy, double u,
                           const SeriesOptions& opt = {});

/// Same quantity, always from the Gaussian-kernel series.
SeriesResult bes3_survival_series(const AffineBoundary& bdy, double u,
                                  const SeriesOptions& opt = {});

/// P(BES(3) from 0 never meets a + b t); zero unless b > 0.
SeriesResult bes3_never_hits(double a, double b, const SeriesOptions& opt = {});

/// Probability that a BES(3) bridge stays below a unit-slope line.
///
/// sign = +1: bridge 0 -> y of length u below t -> a + t, y in [0, a + u).
/// sign = -1: bridge y -> 0 of length u below t -> t + a - u, y in [0, a - u).
/// Endpoints on or above the line give 0.
SeriesResult bes3_bridge_below_line(double y, double u, double a, int sign,
                                    const SeriesOptions& opt = {});

/// Probability that a BES(3) bridge 0 -> 0 of length u stays below a + b t.
/// Depends on a (a + b u) / u only.
SeriesResult bes3_bridge_below_affine(double a, double b, double u,
                                      const SeriesOptions& opt = {});

/// Density of H_{a,b} for BES(3) started at x > a (line below the start).
double bes3_above_line_density(double x, double a, double b, double t);

/// Density of H_{0,b} for BES(3) from 0: b exp(-b^2 t / 2) / sqrt(2 pi t).
double bes3_origin_density(double b, double t);

/// Density of the hitting time of t -> b t by BES(delta), delta > 2, from x.
double bessel_origin_line_density(double delta, double x, double b, double t);

/// Density of H_{a,b} for BES(delta) started at x in [0, a], from the
/// Bessel-zero eigenfunction expansion. Zeros are added until the tail is
/// below opt.tol.
SeriesResult bessel_ap_density(double delta, double x, const AffineBoundary& bdy,
                               double t, const SeriesOptions& opt = {});

/// Density of H_{a,b} for BES(3) from 0. Uses the odd-index kernel series
/// at small times when b = 0 and the eigenfunction series otherwise.
SeriesResult bes3_density(const AffineBoundary& bdy, double t,
                          const SeriesOptions& opt = {});

/// Density of H_{a,0} for BES(3) from 0 as an odd-index kernel series.
SeriesResult bes3_level_density(double a, double u, const SeriesOptions& opt = {});

/// E exp(-lambda H_{a,0}) for BES(3) = a sqrt(2 lambda) / sinh(a sqrt(2 lambda)).
double bes_level_laplace(double a, double lambda);

namespace detail {
// 1 + 2 sum_{k>=1} (1 - 4 k^2 theta) exp(-2 k^2 theta)
SeriesResult excursion_max_series(double theta, const SeriesOptions& opt);
}  // namespace detail

}  // namespace affinehit
