#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace mlab {

struct MeanVar {
    std::size_t n = 0;
    double mean = 0.0;
    double var = 0.0; // unbiased (n-1 denominator)
};

MeanVar mean_var(std::span<const double> xs);

// Leave-one-out jackknife standard error of a statistic computed from R
// per-replica values by `combine` (which receives the R-1 retained values'
// sum and count when the statistic is a mean; for general statistics use
// jackknife_stat below).
double jackknife_se_of_mean(std::span<const double> xs);

// Grouped (delete-d) jackknife: the replica index range [0, R) is cut into
// `groups` contiguous blocks; `stat` is evaluated on the sample with one
// block removed.  Returns {estimate_on_full, se}.
struct JackknifeResult {
    double value = 0.0;
    double se = 0.0;
    std::vector<double> leave_out; // one estimate per left-out group
};
JackknifeResult jackknife_stat(std::size_t n, std::size_t groups,
                               const std::function<double(std::size_t skip_begin,
                                                          std::size_t skip_end)>& stat);

// Ordinary least squares of y on x; returns slope, intercept and the
// noise-propagated slope SE when per-point variances are supplied.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
    std::size_t points = 0;
};
LineFit ols_fit(std::span<const double> x, std::span<const double> y,
                std::span<const double> y_var = {});

// Monotone-trend verdict used by the convergence checks: the sequence must
// not increase by more than 3 SE of the paired step difference at any step
// ("decreasing within statistical resolution"); no rate is asserted.
struct TrendCheck {
    bool pass = true;
    std::size_t strict_decreases = 0; // steps that decrease by more than 3 SE
    std::vector<double> step_diff;
    std::vector<double> step_se;
};
TrendCheck check_decreasing_trend(std::span<const double> values,
                                  std::span<const double> step_se);

// Step SEs from per-group leave-out estimates: rows correspond to schedule
// points, columns to jackknife groups (paired differences, same groups).
std::vector<double> paired_step_se(const std::vector<std::vector<double>>& leave_out_rows);

} // namespace mlab
