#include "dirout/scales.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dirout/errors.hpp"
#include "dirout/normal.hpp"

namespace dirout {

UnivariateSample::UnivariateSample(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw InputError("sample is empty");
    for (double v : values_) {
        if (!std::isfinite(v)) throw InputError("sample contains a non-finite value");
    }
}

namespace {

// Rho-refined scale for one half sample of nonnegative deviations. `half` may
// be permuted. Returns both the initial and the refined scale.
struct HalfScale {
    double initial;
    double refined;
};

HalfScale refine_half(std::span<double> half, const RhoConfig& cfg) {
    const std::size_t h = half.size();
    const double initial = median_inplace(half) / mad_normalizer();
    if (initial <= 0.0) return {0.0, 0.0};
    double sum = 0.0;
    for (double z : half) sum += huber_rho(z / initial, cfg.c);
    const double refined = initial * std::sqrt(sum / (2.0 * cfg.alpha * static_cast<double>(h)));
    return {initial, refined};
}

} // namespace

ScalePair half_sample_scales_inplace(std::span<double> scratch, const RhoConfig& cfg) {
    const std::size_t n = scratch.size();
    if (n < 3) throw InputError("half-sample scales need at least 3 observations");

    const std::size_t h = (n + 1) / 2;
    ScalePair out;
    out.n = n;
    out.h = h;

    HalfScale above{}, below{};
    if (n % 2 == 0) {
        // Disjoint halves of size h each; scratch[h] is the smallest upper element.
        std::nth_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(h),
                         scratch.end());
        const double lower_max = *std::max_element(
            scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(h));
        out.median = 0.5 * (lower_max + scratch[h]);
        std::span<double> lower = scratch.subspan(0, h);
        std::span<double> upper = scratch.subspan(h);
        for (double& y : lower) y = out.median - y;
        for (double& y : upper) y -= out.median;
        below = refine_half(lower, cfg);
        above = refine_half(upper, cfg);
    } else {
        // The median at index h-1 belongs to both halves, so the half spans
        // overlap in one slot. Refine the lower half first, then reset the
        // shared slot to deviation zero before refining the upper half.
        std::nth_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(h - 1),
                         scratch.end());
        out.median = scratch[h - 1];
        std::span<double> lower = scratch.subspan(0, h);
        for (double& y : lower) y = out.median - y;
        below = refine_half(lower, cfg);
        scratch[h - 1] = 0.0;
        std::span<double> upper = scratch.subspan(h - 1);
        for (double& y : upper.subspan(1)) y -= out.median;
        above = refine_half(upper, cfg);
    }

    out.s0_above = above.initial;
    out.s_above = above.refined;
    out.s0_below = below.initial;
    out.s_below = below.refined;
    return out;
}

ScalePair half_sample_scales(std::span<const double> values, const RhoConfig& cfg,
                             std::vector<double>& scratch) {
    scratch.assign(values.begin(), values.end());
    return half_sample_scales_inplace(scratch, cfg);
}

ScalePair half_sample_scales(std::span<const double> values, const RhoConfig& cfg) {
    std::vector<double> scratch;
    return half_sample_scales(values, cfg, scratch);
}

ScalePair half_sample_scales(const UnivariateSample& sample, const RhoConfig& cfg) {
    return half_sample_scales(sample.values(), cfg);
}

namespace {

double one_sided_ratio(double distance, double scale, DegeneratePolicy policy) {
    if (scale > 0.0) return distance / scale;
    if (policy == DegeneratePolicy::Throw)
        throw DegenerateDataError("outlyingness undefined: zero scale on the query's side");
    return std::numeric_limits<double>::infinity();
}

} // namespace

double directional_outlyingness(double y, const ScalePair& scales, DegeneratePolicy policy) {
    if (!std::isfinite(y)) throw InputError("query point must be finite");
    if (y == scales.median) return 0.0;
    if (y > scales.median) return one_sided_ratio(y - scales.median, scales.s_above, policy);
    return one_sided_ratio(scales.median - y, scales.s_below, policy);
}

double symmetric_outlyingness(double y, const LocationMad& lm, DegeneratePolicy policy) {
    if (!std::isfinite(y)) throw InputError("query point must be finite");
    if (y == lm.median) return 0.0;
    return one_sided_ratio(std::abs(y - lm.median), lm.mad, policy);
}

double depth_from_outlyingness(double outlyingness) {
    return 1.0 / (1.0 + outlyingness);
}

} // namespace dirout
