#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mlab {

// Ascending array of finite reals; the substrate for empirical distribution
// functions, quantiles and exact one-dimensional transport.  Repeated values
// (atoms) are legal; empty samples are rejected at construction.
class SortedSample {
public:
    static SortedSample from_unsorted(std::vector<double> v);
    static SortedSample from_sorted(std::vector<double> v);

    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    double min() const { return values_.front(); }
    double max() const { return values_.back(); }

    // F(x) = #{i : x_i <= x} / m, right-continuous step function
    double cdf(double x) const;

    // generalized inverse F^{-1}(u) = inf{x : F(x) >= u} = x_(ceil(u m)),
    // left-continuous at the jump points u = i/m; u in (0,1).
    double quantile(double u) const;

private:
    explicit SortedSample(std::vector<double> v) : values_(std::move(v)) {}
    std::vector<double> values_;
};

} // namespace mlab
