#pragma once

// One-step half-sample scales and the univariate directional outlyingness they
// induce. The estimator splits a sample at its median, forms nonnegative
// deviations on each side, and rescales each side's initial (median-based)
// scale with a bounded-rho refinement step so that both sides estimate the
// standard deviation consistently at the normal model.

#include <cstddef>
#include <span>
#include <vector>

#include "dirout/rho.hpp"
#include "dirout/selection.hpp"

namespace dirout {

// Validated sample container: rejects empty input and non-finite values.
class UnivariateSample {
public:
    explicit UnivariateSample(std::vector<double> values);

    const std::vector<double>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }

private:
    std::vector<double> values_;
};

// Median plus the per-side scales. `s_above` is estimated from the upper half
// sample, `s_below` from the lower half; `s0_*` are the initial scales before
// the rho refinement step. For odd n both halves share the median point, so
// each half always holds h = floor((n+1)/2) observations.
struct ScalePair {
    double median = 0.0;
    double s_above = 0.0;
    double s_below = 0.0;
    double s0_above = 0.0;
    double s0_below = 0.0;
    std::size_t n = 0;
    std::size_t h = 0;
};

// Core estimator; permutes `scratch`. Requires at least 3 observations.
ScalePair half_sample_scales_inplace(std::span<double> scratch, const RhoConfig& cfg);

// Copying conveniences.
ScalePair half_sample_scales(std::span<const double> values, const RhoConfig& cfg,
                             std::vector<double>& scratch);
ScalePair half_sample_scales(std::span<const double> values, const RhoConfig& cfg);
ScalePair half_sample_scales(const UnivariateSample& sample, const RhoConfig& cfg);

// What to do when a query lies strictly beyond the median on a side whose
// scale collapsed to zero: report infinite outlyingness, or refuse.
enum class DegeneratePolicy { InfiniteSentinel, Throw };

// Signed-split outlyingness of `y` under `scales`: distance to the median in
// units of the scale for the side `y` falls on. Zero at the median exactly.
double directional_outlyingness(double y, const ScalePair& scales,
                                DegeneratePolicy policy = DegeneratePolicy::InfiniteSentinel);

// Classical symmetric outlyingness for comparison: |y - median| / MAD.
double symmetric_outlyingness(double y, const LocationMad& lm,
                              DegeneratePolicy policy = DegeneratePolicy::InfiniteSentinel);

// Monotone transform onto (0, 1]: depth 1 at the center, 0 in the limit of
// infinite outlyingness.
double depth_from_outlyingness(double outlyingness);

} // namespace dirout
