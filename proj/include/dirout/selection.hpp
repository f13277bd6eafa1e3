#pragma once

// Order-statistic helpers built on std::nth_element: expected O(n), no full sort.
// The *_inplace variants permute the buffer they are given; callers that need to
// keep their data intact should pass a scratch copy.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "dirout/errors.hpp"
#include "dirout/normal.hpp"

namespace dirout {

inline double kth_smallest_inplace(std::span<double> v, std::size_t k) {
    if (v.empty() || k >= v.size()) throw InputError("kth_smallest: index out of range");
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
    return v[k];
}

// Sample median; for even length, the mean of the two central order statistics.
inline double median_inplace(std::span<double> v) {
    const std::size_t n = v.size();
    if (n == 0) throw InputError("median: empty sample");
    const std::size_t mid = n / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (n % 2 == 1) return upper;
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

inline double median_copy(std::span<const double> v, std::vector<double>& scratch) {
    scratch.assign(v.begin(), v.end());
    return median_inplace(scratch);
}

inline double median_copy(std::span<const double> v) {
    std::vector<double> scratch;
    return median_copy(v, scratch);
}

struct LocationMad {
    double median = 0.0;
    double mad = 0.0; // already divided by the normal consistency factor
};

// Median and consistency-scaled median absolute deviation in two selection passes.
inline LocationMad location_mad_inplace(std::span<double> v) {
    LocationMad out;
    out.median = median_inplace(v);
    for (double& x : v) x = std::abs(x - out.median);
    out.mad = median_inplace(v) / mad_normalizer();
    return out;
}

inline LocationMad location_mad_copy(std::span<const double> v, std::vector<double>& scratch) {
    scratch.assign(v.begin(), v.end());
    return location_mad_inplace(scratch);
}

inline LocationMad location_mad_copy(std::span<const double> v) {
    std::vector<double> scratch;
    return location_mad_copy(v, scratch);
}

} // namespace dirout
