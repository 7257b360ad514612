#pragma once

#include "affinehit/series.hpp"
#include "affinehit/types.hpp"

namespace affinehit {

/// Level m with P(sup_{t<=u} {w_t + b t} < a) = P(sup_{t<=u} w_t < m) for a
/// Bessel bridge 0 -> 0 of length u and any dimension: m = sqrt(a (a - b u)).
double bridge_crossing_to_max(double delta, double u, double a, double b);

/// P(max of a BES(3) bridge 0 -> 0 of length u < y).
SeriesResult bes3_bridge_max_cdf(double y, double u, const SeriesOptions& opt = {});

/// P(max of a reflecting Brownian bridge 0 -> 0 of length u < y).
SeriesResult rbm_bridge_max_cdf(double y, double u, const SeriesOptions& opt = {});

/// P(sup_{t<=u} {w_t + b t} < a) for a bridge of dimension 1 or 3.
SeriesResult bridge_sup_affine_cdf(double delta, double u, double a, double b,
                                   const SeriesOptions& opt = {});

/// P(sup_{t>=0} {R_t - t} < a) for BES(delta) from 0. Closed forms exist for
/// delta in {1, 3}; other dimensions raise UnsupportedError.
SeriesResult sup_drift_cdf(double delta, double a, const SeriesOptions& opt = {});

/// First-hit survival P(H_{a,b} > u) for RBM or BES(3) started at 0.
SeriesResult hit_survival(const ProcessSpec& process, const AffineBoundary& bdy,
                          double u, const SeriesOptions& opt = {});

/// CDF at t of the last time the process meets t -> intercept + slope t.
/// Computed as the first-hit survival of the dual line slope + intercept t
/// at time 1/t.
SeriesResult last_hit_cdf(const ProcessSpec& process, double intercept,
                          double slope, double t, const SeriesOptions& opt = {});

}  // namespace affinehit
