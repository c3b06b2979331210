#pragma once

#include "normal.hpp"
#include "sorted_sample.hpp"

namespace mlab {

// Exact one-dimensional Mallows (Wasserstein) distances via the comonotone
// coupling: d_r^r(F,G) = int_0^1 |F^{-1}(u) - G^{-1}(u)|^r du.

// Piecewise-constant integral over the merged quantile grid of both samples;
// handles unequal sizes exactly (integer breakpoint arithmetic).
double mallows_rpow_merged_grid(const SortedSample& a, const SortedSample& b, double r);

// Equal-size route: (1/m) sum |a_(i) - b_(i)|^r.  Kept as an independent
// code path; must agree with the merged-grid integral.
double mallows_rpow_sorted_pairs(const SortedSample& a, const SortedSample& b, double r);

// d_r between two empirical samples, r > 0.
double mallows_distance(const SortedSample& a, const SortedSample& b, double r);

// d_r between an empirical d.f. and a normal law.  r = 1 and r = 2 use the
// closed-form partial moments of Phi^{-1}; other r use adaptive
// Gauss-Legendre per quantile cell with absolute tolerance 1e-8 on d_r^r,
// tail cells split geometrically toward 0 and 1.
double mallows_to_normal(const SortedSample& a, const NormalLaw& law, double r);

// d_2 between two normal laws: sqrt((mu1-mu2)^2 + (sd1-sd2)^2).
double mallows_normal_closed_form(const NormalLaw& f, const NormalLaw& g);

// sup_x |F_m(x) - Phi(x)|, exact over order statistics.
double kolmogorov_to_normal(const SortedSample& a, const NormalLaw& law);

// Kolmogorov bound from Monge-Kantorovich duality with the normal density
// bound 1/sqrt(2 pi): d_K <= 2 sqrt(d_1 / sqrt(2 pi)).
double kolmogorov_bound_from_d1(double d1);

} // namespace mlab
