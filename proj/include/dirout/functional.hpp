#pragma once

// Outlyingness for functional data: curves sampled on a shared 1-d grid and
// images/videos sampled on a shared pixel grid, possibly with several channels
// per gridpoint. The pipeline is
//
//   pointwise map  ->  per-function level (weighted average)
//                  ->  per-function variability (deflated dispersion)
//                  ->  combined score, cutoff, flags, outlier map.

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "dirout/multivariate.hpp"

namespace dirout {

// Strictly increasing sample points; uniform spacing is only required when
// computing derivative channels.
struct Grid1D {
    std::vector<double> points;
};

// Pixel lattice with implicit unit spacing; gridpoints are row-major.
struct Grid2D {
    std::size_t rows = 0;
    std::size_t cols = 0;
};

// n functions observed at G shared gridpoints with C channels each. Values are
// stored (function, gridpoint, channel)-major: value(i, g, ch) at
// (i * G + g) * C + ch. Weights are per-gridpoint, nonnegative, and must sum
// to 1 (see normalize_weights); they default to uniform.
class FunctionalDataset {
public:
    static FunctionalDataset curves(Grid1D grid, std::size_t n, std::size_t channels,
                                    std::vector<double> values, std::vector<double> weights = {});
    static FunctionalDataset images(Grid2D grid, std::size_t n, std::size_t channels,
                                    std::vector<double> values, std::vector<double> weights = {});

    std::size_t size() const noexcept { return n_; }
    std::size_t gridpoints() const noexcept { return gridpoints_; }
    std::size_t channels() const noexcept { return channels_; }
    double value(std::size_t i, std::size_t g, std::size_t ch) const {
        return values_[(i * gridpoints_ + g) * channels_ + ch];
    }
    std::span<const double> cell(std::size_t i, std::size_t g) const {
        return std::span<const double>(values_.data() + (i * gridpoints_ + g) * channels_,
                                       channels_);
    }
    const std::vector<double>& values() const noexcept { return values_; }
    const std::vector<double>& weights() const noexcept { return weights_; }

    bool is_image() const noexcept { return std::holds_alternative<Grid2D>(domain_); }
    const Grid1D& grid1d() const { return std::get<Grid1D>(domain_); }
    const Grid2D& grid2d() const { return std::get<Grid2D>(domain_); }

    // Copy with weights zeroed outside the mask (mask size = gridpoints,
    // nonzero = keep) and renormalized over the remaining gridpoints.
    FunctionalDataset with_mask(std::span<const std::uint8_t> mask) const;
    // Copy with the given raw weights, normalized.
    FunctionalDataset with_weights(std::span<const double> raw_weights) const;

private:
    FunctionalDataset() = default;
    std::size_t n_ = 0, gridpoints_ = 0, channels_ = 0;
    std::vector<double> values_;
    std::vector<double> weights_;
    std::variant<Grid1D, Grid2D> domain_;
};

// Scales nonnegative raw weights to sum to exactly 1; rejects negative
// entries, non-finite entries, and all-zero input.
std::vector<double> normalize_weights(std::span<const double> raw);

enum class MapMethod {
    Projection,    // directional, max over random projections (1-d: exact)
    Componentwise, // directional per channel, Euclidean combination
    Symmetric      // median/MAD outlyingness (the classical comparator)
};

struct MapOptions {
    MapMethod method = MapMethod::Projection;
    std::size_t directions = 0; // 0 = default budget for the channel count
    std::uint64_t seed = 1;
    int threads = 0; // 0 = hardware concurrency; results do not depend on this
    RhoConfig rho = RhoConfig::standard();
    DegeneratePolicy policy = DegeneratePolicy::InfiniteSentinel;
};

// Per-function, per-gridpoint outlyingness, n x G row-major. Gridpoints with
// zero weight are not evaluated and hold 0.
struct OutlyingnessMap {
    std::size_t n = 0;
    std::size_t gridpoints = 0;
    std::vector<double> values;
    MapMethod method = MapMethod::Projection;
    std::uint64_t seed = 0;
    std::size_t directions = 0;

    double value(std::size_t i, std::size_t g) const { return values[i * gridpoints + g]; }
    std::span<const double> profile(std::size_t i) const {
        return std::span<const double>(values.data() + i * gridpoints, gridpoints);
    }
};

// Cross-sectional outlyingness at every positively weighted gridpoint. Each
// gridpoint uses an independent, reproducible direction substream, so the map
// is identical for any thread count. Throws DegenerateDataError naming the
// first offending gridpoint when a weighted cross-section is constant across
// functions (give such gridpoints weight 0 to skip them).
OutlyingnessMap pointwise_map(const FunctionalDataset& data, const MapOptions& opt);

// Weighted average of each function's outlyingness profile.
std::vector<double> functional_outlyingness(const OutlyingnessMap& map,
                                            std::span<const double> weights);

// Dispersion of the profile deflated by the level: stdev / (1 + level), over
// positively weighted gridpoints. The default ignores the weight values
// (beyond activity); set `weighted` for a weight-proportional dispersion.
std::vector<double> outlyingness_variability(const OutlyingnessMap& map,
                                             std::span<const double> level,
                                             std::span<const double> weights, bool weighted = false);

// Euclidean combination of level and variability in units of their medians
// (medians over finite entries). Throws DegenerateDataError on zero medians.
struct CombinedResult {
    std::vector<double> score;
    double median_level = 0.0;
    double median_variability = 0.0;
};
CombinedResult combined_outlyingness(std::span<const double> level,
                                     std::span<const double> variability);

// Log-shift cutoff rule on a nonnegative score: v flags when
// log(0.1 + v) > med + mad * z_q, where med and mad are the median and raw
// (uncalibrated) median absolute deviation of the finite log scores. Infinite
// scores always flag and are excluded from med/mad. `cutoff` is on the input
// scale; a zero mad is reported as degenerate.
struct FlagResult {
    double cutoff = 0.0;
    std::vector<std::uint8_t> flags;
};
FlagResult flag_outliers(std::span<const double> score, double quantile = 0.995);

struct FunctionalSummary {
    std::vector<double> fdo;  // per-function level
    std::vector<double> vdo;  // per-function variability
    std::vector<double> cfo;  // combined score
    std::vector<std::uint8_t> flags; // combined-score rule
    double cutoff_fdo = 0.0;
    double cutoff_cfo = 0.0;
    double median_fdo = 0.0;
    double median_vdo = 0.0;
    double quantile = 0.995;
};
FunctionalSummary summarize(const OutlyingnessMap& map, std::span<const double> weights,
                            double quantile = 0.995, bool weighted_variability = false);

// Scatter of (level, variability) per function plus the flagging frontier:
// the quarter-ellipse where the combined score equals its cutoff.
struct OutlierMapData {
    std::vector<double> level;
    std::vector<double> variability;
    std::vector<std::uint8_t> flags;
    std::vector<double> frontier_level;
    std::vector<double> frontier_variability;
};
OutlierMapData outlier_map(const FunctionalSummary& summary, std::size_t frontier_samples = 181);

// Appends each channel's derivative along the grid as extra channels
// (channels double). Requires a uniform 1-d grid; exact on quadratics.
FunctionalDataset augment_with_derivative(const FunctionalDataset& data);

// Appends each channel's two partial derivatives (d/dcol then d/drow, unit
// pixel spacing) as extra channels; channels triple. An optional mask marks
// active pixels: stencils never cross the mask boundary (one-sided or
// two-point differences are used there) and masked-out pixels get weight 0.
FunctionalDataset augment_with_gradient(const FunctionalDataset& data,
                                        std::span<const std::uint8_t> mask = {});

} // namespace dirout
