#pragma once

#include "affinehit/series.hpp"

namespace affinehit {

/// Brownian motion from 0 is kept between -(alpha + beta t) and a + b t.
struct WedgeSpec {
  double alpha = 0.0;
  double beta = 0.0;
  double a = 0.0;
  double b = 0.0;
};

/// Exponents A_k, B_k, C_k, D_k of Doob's series at index k.
struct TermQuadruple {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  double D = 0.0;
};

TermQuadruple doob_terms(const WedgeSpec& w, long k);

/// Probability that BM from 0 never leaves the wedge. Degenerate wedges
/// ((alpha + a)(beta + b) = 0) return 0 with continuity_limit set.
SeriesResult wedge_survival(const WedgeSpec& w, const SeriesOptions& opt = {});

/// Theta*(u) = sum_k (-1)^k exp(-pi k^2 u); 0 for u <= 0.
SeriesResult theta_star(double u, const SeriesOptions& opt = {});

/// P(RBM from 0 never meets a + b t) = Theta*(2ab/pi).
SeriesResult rbm_never_hits(double a, double b, const SeriesOptions& opt = {});

/// Probability that a Brownian bridge 0 -> y of length u stays inside the
/// wedge on [0, u].
SeriesResult bridge_wedge_prob(const WedgeSpec& w, double u, double y,
                               const SeriesOptions& opt = {});

/// Probability that a Brownian bridge x -> y of length u stays positive.
double bridge_positive_prob(double x, double y, double u);

}  // namespace affinehit
