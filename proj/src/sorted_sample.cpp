#include "sorted_sample.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mlab {

namespace {
void validate(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("SortedSample: empty sample");
    for (double x : v)
        if (!std::isfinite(x)) throw std::invalid_argument("SortedSample: non-finite entry");
}
} // namespace

SortedSample SortedSample::from_unsorted(std::vector<double> v) {
    validate(v);
    std::sort(v.begin(), v.end());
    return SortedSample(std::move(v));
}

SortedSample SortedSample::from_sorted(std::vector<double> v) {
    validate(v);
    if (!std::is_sorted(v.begin(), v.end()))
        throw std::invalid_argument("SortedSample: values not ascending");
    return SortedSample(std::move(v));
}

double SortedSample::cdf(double x) const {
    auto it = std::upper_bound(values_.begin(), values_.end(), x);
    return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
}

double SortedSample::quantile(double u) const {
    if (!(u > 0.0 && u < 1.0))
        throw std::domain_error("SortedSample::quantile: u must lie in (0,1)");
    const double m = static_cast<double>(values_.size());
    auto k = static_cast<std::size_t>(std::ceil(u * m));
    if (k < 1) k = 1;
    if (k > values_.size()) k = values_.size();
    return values_[k - 1];
}

} // namespace mlab
