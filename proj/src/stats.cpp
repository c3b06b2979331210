#include "stats.hpp"

#include <cmath>
#include <stdexcept>

namespace mlab {

MeanVar mean_var(std::span<const double> xs) {
    MeanVar mv;
    mv.n = xs.size();
    if (mv.n == 0) return mv;
    double s = 0.0;
    for (double x : xs) s += x;
    mv.mean = s / static_cast<double>(mv.n);
    if (mv.n > 1) {
        double q = 0.0;
        for (double x : xs) {
            const double d = x - mv.mean;
            q += d * d;
        }
        mv.var = q / static_cast<double>(mv.n - 1);
    }
    return mv;
}

double jackknife_se_of_mean(std::span<const double> xs) {
    const auto mv = mean_var(xs);
    if (mv.n < 2) return 0.0;
    return std::sqrt(mv.var / static_cast<double>(mv.n));
}

JackknifeResult jackknife_stat(std::size_t n, std::size_t groups,
                               const std::function<double(std::size_t, std::size_t)>& stat) {
    JackknifeResult out;
    if (groups > n) groups = n;
    if (groups < 2) {
        out.value = stat(0, 0);
        return out;
    }
    out.value = stat(0, 0);
    out.leave_out.resize(groups);
    double mean = 0.0;
    for (std::size_t g = 0; g < groups; ++g) {
        const std::size_t lo = g * n / groups;
        const std::size_t hi = (g + 1) * n / groups;
        out.leave_out[g] = stat(lo, hi);
        mean += out.leave_out[g];
    }
    mean /= static_cast<double>(groups);
    double q = 0.0;
    for (double v : out.leave_out) {
        const double d = v - mean;
        q += d * d;
    }
    const double G = static_cast<double>(groups);
    out.se = std::sqrt((G - 1.0) / G * q);
    return out;
}

LineFit ols_fit(std::span<const double> x, std::span<const double> y,
                std::span<const double> y_var) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("ols_fit: need >= 2 points of equal length");
    LineFit fit;
    fit.points = x.size();
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (!y_var.empty()) {
        if (y_var.size() != x.size())
            throw std::invalid_argument("ols_fit: y_var size mismatch");
        double v = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double c = (x[i] - mx) / sxx;
            v += c * c * y_var[i];
        }
        fit.slope_se = std::sqrt(v);
    }
    return fit;
}

TrendCheck check_decreasing_trend(std::span<const double> values,
                                  std::span<const double> step_se) {
    TrendCheck tc;
    if (values.size() < 2) return tc;
    if (step_se.size() + 1 != values.size())
        throw std::invalid_argument("check_decreasing_trend: need one SE per step");
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        const double diff = values[i + 1] - values[i];
        tc.step_diff.push_back(diff);
        tc.step_se.push_back(step_se[i]);
        if (diff > 3.0 * step_se[i]) tc.pass = false;
        if (diff < -3.0 * step_se[i]) ++tc.strict_decreases;
    }
    return tc;
}

std::vector<double> paired_step_se(const std::vector<std::vector<double>>& rows) {
    std::vector<double> out;
    if (rows.size() < 2) return out;
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        const auto& a = rows[i];
        const auto& b = rows[i + 1];
        if (a.size() != b.size() || a.empty()) {
            out.push_back(0.0);
            continue;
        }
        const double G = static_cast<double>(a.size());
        double mean = 0.0;
        for (std::size_t g = 0; g < a.size(); ++g) mean += b[g] - a[g];
        mean /= G;
        double q = 0.0;
        for (std::size_t g = 0; g < a.size(); ++g) {
            const double d = (b[g] - a[g]) - mean;
            q += d * d;
        }
        out.push_back(std::sqrt((G - 1.0) / G * q));
    }
    return out;
}

} // namespace mlab
