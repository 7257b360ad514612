#pragma once

#include "affinehit/series.hpp"
#include "affinehit/types.hpp"

namespace affinehit {

/// P(H_{a,b} > u) for reflecting BM from 0.
///
/// Uses the Gaussian-kernel series while it converges quickly, and otherwise
/// integrates the eigenfunction density over (u, end of window).
SeriesResult rbm_survival(const AffineBoundary& bdy, double u,
                          const SeriesOptions& opt = {});

/// Same quantity, always from the Gaussian-kernel series.
SeriesResult rbm_survival_series(const AffineBoundary& bdy, double u,
                                 const SeriesOptions& opt = {});

/// Density of H_{a,b}, choosing the faster of the two representations.
SeriesResult rbm_density(const AffineBoundary& bdy, double u,
                         const SeriesOptions& opt = {});

/// Density of H_{a,b} from the Gaussian-kernel (small time) series.
SeriesResult rbm_density_delta(const AffineBoundary& bdy, double u,
                               const SeriesOptions& opt = {});

/// Density of H_{a,b} from the cosine eigenfunction (large time) series.
SeriesResult rbm_density_ap(const AffineBoundary& bdy, double t,
                            const SeriesOptions& opt = {});

/// For b > 0, P(position at H > y); for b < 0, P(position at H < y).
SeriesResult rbm_hit_location_tail(const AffineBoundary& bdy, double y,
                                   const SeriesOptions& opt = {});

/// Density of the position at H; 0 outside the reachable range.
SeriesResult rbm_hit_location_density(const AffineBoundary& bdy, double y,
                                      const SeriesOptions& opt = {});

/// E exp(-lambda H_{a,0}) = 1 / cosh(a sqrt(2 lambda)).
double rbm_level_laplace(double a, double lambda);

/// Density of H_{a,0}, odd-index sum a/sqrt(2 pi u^3) sum (-1)^k (2k+1) ...
SeriesResult rbm_level_density(double a, double u, const SeriesOptions& opt = {});

/// Density of H_{a,0}, sum over 4k - 1 obtained by term-wise inversion.
SeriesResult rbm_level_density_inverted(double a, double u,
                                        const SeriesOptions& opt = {});

}  // namespace affinehit
