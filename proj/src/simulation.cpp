#include "dirout/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "dirout/errors.hpp"
#include "dirout/rng.hpp"
#include "dirout/scales.hpp"
#include "dirout/selection.hpp"

namespace dirout {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void validate_fraction(double frac) {
    if (!(frac >= 0.0) || !(frac < 0.5)) {
        throw ConfigError("contamination fraction must lie in [0, 0.5), got " +
                          std::to_string(frac));
    }
}

std::size_t contaminated_count(std::size_t n, double frac) {
    return static_cast<std::size_t>(std::floor(frac * static_cast<double>(n)));
}

// Percentage of label-matching points that are flagged; NaN when the label
// class is empty (e.g. a zero-fraction run has no planted outliers).
double flagged_percentage(const std::vector<std::uint8_t>& flags,
                          const std::vector<std::uint8_t>& labels, std::uint8_t which) {
    std::size_t total = 0;
    std::size_t hit = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != which) continue;
        ++total;
        if (flags[i]) ++hit;
    }
    if (total == 0) return kNan;
    return 100.0 * static_cast<double>(hit) / static_cast<double>(total);
}

struct PercentPair {
    double flagged = kNan;
    double false_positive = kNan;
};

PercentPair score_flags(const std::vector<std::uint8_t>& flags,
                        const std::vector<std::uint8_t>& labels) {
    return {flagged_percentage(flags, labels, 1), flagged_percentage(flags, labels, 0)};
}

// Mean that treats NaN as "no observation" (all replications agree on whether
// a class is empty, so this is all-or-nothing per cell).
class RunningMean {
public:
    void add(double v) {
        if (std::isnan(v)) return;
        sum_ += v;
        ++count_;
    }
    double value() const { return count_ == 0 ? kNan : sum_ / static_cast<double>(count_); }

private:
    double sum_ = 0.0;
    std::size_t count_ = 0;
};

// One replication of each study kind: generate shared data, score it with
// both methods, return (directional, symmetric) percentage pairs.
struct RepOutcome {
    PercentPair directional;
    PercentPair symmetric;
};

RepOutcome lognormal_rep(const StudyConfig& cfg, double x, std::uint64_t rep_seed) {
    const LabeledSample sample = gen_lognormal_contaminated(cfg.n, cfg.fraction, x, rep_seed);

    const ScalePair scales = half_sample_scales(sample.values, cfg.rho);
    std::vector<double> directional(sample.values.size());
    for (std::size_t i = 0; i < sample.values.size(); ++i) {
        directional[i] = directional_outlyingness(sample.values[i], scales);
    }

    const LocationMad lm = location_mad_copy(sample.values);
    std::vector<double> symmetric(sample.values.size());
    for (std::size_t i = 0; i < sample.values.size(); ++i) {
        symmetric[i] = symmetric_outlyingness(sample.values[i], lm);
    }

    return {score_flags(flag_outliers(directional, cfg.quantile).flags, sample.labels),
            score_flags(flag_outliers(symmetric, cfg.quantile).flags, sample.labels)};
}

RepOutcome skewnormal_rep(const StudyConfig& cfg, double x, std::uint64_t rep_seed) {
    const std::vector<double> shape = default_skew_shape(cfg.d);
    const PointCloud base = gen_skewnormal(cfg.n, cfg.d, shape, rep_seed);
    const LabeledCloud data =
        contaminate_multivariate(base, cfg.fraction, x, derive_seed(rep_seed, 1));

    const std::size_t budget =
        cfg.directions != 0 ? cfg.directions : default_direction_count(cfg.d);
    const DirectionSet dirs =
        generate_directions(data.cloud, budget, derive_seed(rep_seed, 2));

    const DoProjection directional(data.cloud, dirs, cfg.rho);
    const SdoProjection symmetric(data.cloud, dirs);
    return {score_flags(flag_outliers(directional.evaluate_rows(data.cloud), cfg.quantile).flags,
                        data.labels),
            score_flags(flag_outliers(symmetric.evaluate_rows(data.cloud), cfg.quantile).flags,
                        data.labels)};
}

RepOutcome functional_rep(const StudyConfig& cfg, double slope, std::uint64_t rep_seed) {
    const std::size_t gridpoints = cfg.d >= 3 ? cfg.d : 50;
    const LabeledCurves data =
        gen_functional_sine(cfg.n, gridpoints, cfg.fraction, slope, rep_seed);

    MapOptions opt;
    opt.seed = derive_seed(rep_seed, 1);
    opt.threads = cfg.threads;
    opt.rho = cfg.rho;

    // Per-curve score is the weighted-average (level) outlyingness; flags use
    // the same log-shift cutoff rule as the point studies, for both methods.
    auto level_flags = [&](MapMethod method) {
        opt.method = method;
        const OutlyingnessMap map = pointwise_map(data.data, opt);
        const std::vector<double> level = functional_outlyingness(map, data.data.weights());
        return flag_outliers(level, cfg.quantile).flags;
    };

    return {score_flags(level_flags(MapMethod::Projection), data.labels),
            score_flags(level_flags(MapMethod::Symmetric), data.labels)};
}

void validate_common(const StudyConfig& cfg) {
    if (cfg.m < 1) throw ConfigError("study needs at least one replication");
    if (cfg.n < 3) throw ConfigError("study sample size must be at least 3");
    if (cfg.locations.empty()) throw ConfigError("study location grid is empty");
    validate_fraction(cfg.fraction);
    if (!(cfg.quantile > 0.5) || !(cfg.quantile < 1.0)) {
        throw ConfigError("cutoff quantile must lie in (0.5, 1), got " +
                          std::to_string(cfg.quantile));
    }
    for (double loc : cfg.locations) {
        if (!std::isfinite(loc)) throw ConfigError("study locations must be finite");
    }
}

StudyResult timing_study(const StudyConfig& cfg) {
    std::vector<std::size_t> grid;
    grid.reserve(cfg.locations.size());
    for (double loc : cfg.locations) {
        if (!(loc >= 3.0)) {
            throw ConfigError("timing grid entries must be sample sizes of at least 3");
        }
        grid.push_back(static_cast<std::size_t>(std::llround(loc)));
    }
    return timing_benchmark(grid, cfg.m, cfg.seed);
}

} // namespace

LabeledSample gen_lognormal_contaminated(std::size_t n, double frac, double x,
                                         std::uint64_t seed) {
    if (!(frac >= 0.0) || !(frac < 1.0)) {
        throw ConfigError("contamination fraction must lie in [0, 1), got " +
                          std::to_string(frac));
    }
    if (!std::isfinite(x)) throw ConfigError("contamination location must be finite");
    const std::size_t planted = contaminated_count(n, frac);
    LabeledSample out;
    out.values.resize(n);
    out.labels.assign(n, 0);
    Rng rng(seed);
    for (std::size_t i = 0; i + planted < n; ++i) out.values[i] = rng.lognormal();
    for (std::size_t i = n - planted; i < n; ++i) {
        out.values[i] = x;
        out.labels[i] = 1;
    }
    return out;
}

PointCloud gen_skewnormal(std::size_t n, std::size_t d, std::span<const double> shape,
                          std::uint64_t seed) {
    if (d < 1) throw ConfigError("skew-normal dimension must be at least 1");
    if (shape.size() != d) {
        throw ConfigError("skew-normal shape vector length " + std::to_string(shape.size()) +
                          " does not match dimension " + std::to_string(d));
    }
    std::vector<double> data(n * d);
    Rng rng(seed);
    std::vector<double> u(d);
    for (std::size_t i = 0; i < n; ++i) {
        const double gate = rng.normal();
        double dot = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            u[j] = rng.normal();
            dot += shape[j] * u[j];
        }
        const double sign = gate < dot ? 1.0 : -1.0;
        for (std::size_t j = 0; j < d; ++j) data[i * d + j] = sign * u[j];
    }
    return PointCloud(n, d, std::move(data));
}

std::vector<double> default_skew_shape(std::size_t d) {
    std::vector<double> shape(d, 4.0);
    for (std::size_t j = 0; j < d / 2; ++j) shape[j] = 10.0;
    if (d == 1) shape[0] = 10.0;
    return shape;
}

LabeledCloud contaminate_multivariate(const PointCloud& base, double frac, double x,
                                      std::uint64_t seed) {
    if (!(frac >= 0.0) || !(frac < 1.0)) {
        throw ConfigError("contamination fraction must lie in [0, 1), got " +
                          std::to_string(frac));
    }
    if (!std::isfinite(x)) throw ConfigError("contamination location must be finite");
    const std::size_t n = base.size();
    const std::size_t d = base.dim();
    const std::size_t planted = contaminated_count(n, frac);
    std::vector<double> data = base.data();
    std::vector<std::uint8_t> labels(n, 0);
    Rng rng(seed);
    const double cluster_sd = std::sqrt(1.0 / 20.0);
    for (std::size_t i = n - planted; i < n; ++i) {
        labels[i] = 1;
        for (std::size_t j = 0; j < d; ++j) {
            data[i * d + j] = x + cluster_sd * rng.normal();
        }
    }
    return {PointCloud(n, d, std::move(data)), std::move(labels)};
}

LabeledCurves gen_functional_sine(std::size_t n, std::size_t T, double frac, double L,
                                  std::uint64_t seed) {
    if (T < 3) throw ConfigError("sine study needs at least 3 gridpoints");
    if (!(frac >= 0.0) || !(frac < 1.0)) {
        throw ConfigError("contamination fraction must lie in [0, 1), got " +
                          std::to_string(frac));
    }
    if (!std::isfinite(L)) throw ConfigError("contaminated slope must be finite");
    const std::size_t planted = contaminated_count(n, frac);
    const double step = 1.0 / static_cast<double>(T - 1);
    constexpr double noise_sd = 1.0 / 20.0;

    Grid1D grid;
    grid.points.resize(T);
    for (std::size_t g = 0; g < T; ++g) grid.points[g] = static_cast<double>(g) * step;

    std::vector<double> values(n * T);
    std::vector<std::uint8_t> labels(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        // Per-curve substream: curve i is reproducible regardless of n.
        Rng rng(derive_seed(seed, i));
        const bool planted_curve = i + planted >= n;
        labels[i] = planted_curve ? 1 : 0;
        const double slope = planted_curve ? L : rng.lognormal();
        for (std::size_t g = 0; g < T; ++g) {
            const double t = static_cast<double>(g) * step;
            values[i * T + g] =
                std::sin(2.0 * std::numbers::pi * t) + t * slope + noise_sd * rng.normal();
        }
    }
    return {FunctionalDataset::curves(std::move(grid), n, 1, std::move(values)),
            std::move(labels)};
}

StudyResult run_study(const StudyConfig& cfg) {
    validate_common(cfg);
    if (cfg.kind == StudyKind::Timing) return timing_study(cfg);

    std::vector<double> grid = cfg.locations;
    std::sort(grid.begin(), grid.end());

    StudyResult result;
    result.cells.reserve(2 * grid.size());
    for (std::size_t li = 0; li < grid.size(); ++li) {
        const std::uint64_t loc_seed = derive_seed(cfg.seed, li);
        RunningMean dir_flagged, dir_fp, sym_flagged, sym_fp;
        for (std::size_t rep = 0; rep < cfg.m; ++rep) {
            const std::uint64_t rep_seed = derive_seed(loc_seed, rep);
            RepOutcome outcome;
            switch (cfg.kind) {
            case StudyKind::Lognormal:
                outcome = lognormal_rep(cfg, grid[li], rep_seed);
                break;
            case StudyKind::SkewNormal:
                outcome = skewnormal_rep(cfg, grid[li], rep_seed);
                break;
            case StudyKind::Functional:
                outcome = functional_rep(cfg, grid[li], rep_seed);
                break;
            case StudyKind::Timing:
                break; // handled above
            }
            dir_flagged.add(outcome.directional.flagged);
            dir_fp.add(outcome.directional.false_positive);
            sym_flagged.add(outcome.symmetric.flagged);
            sym_fp.add(outcome.symmetric.false_positive);
        }
        result.cells.push_back(
            {grid[li], StudyMethod::Directional, dir_flagged.value(), dir_fp.value()});
        result.cells.push_back(
            {grid[li], StudyMethod::Symmetric, sym_flagged.value(), sym_fp.value()});
    }
    return result;
}

StudyResult timing_benchmark(std::span<const std::size_t> n_grid, std::size_t reps,
                             std::uint64_t seed) {
    if (n_grid.empty()) throw ConfigError("timing grid is empty");
    if (reps < 1) throw ConfigError("timing needs at least one repetition");
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        if (n_grid[i] < 3) throw ConfigError("timing sample sizes must be at least 3");
        if (i > 0 && n_grid[i] <= n_grid[i - 1]) {
            throw ConfigError("timing grid must be strictly increasing");
        }
    }

    const RhoConfig cfg = RhoConfig::standard();
    StudyResult result;
    result.timings.reserve(n_grid.size());
    double checksum = 0.0;
    for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
        const std::size_t n = n_grid[gi];
        std::vector<double> sample(n);
        std::vector<double> scratch;
        double total_seconds = 0.0;
        for (std::size_t rep = 0; rep < reps; ++rep) {
            Rng rng(derive_seed(seed, gi * 1000003 + rep));
            for (double& v : sample) v = rng.normal();
            const auto start = std::chrono::steady_clock::now();
            const ScalePair scales = half_sample_scales(sample, cfg, scratch);
            double acc = 0.0;
            for (double v : sample) acc += directional_outlyingness(v, scales);
            const auto stop = std::chrono::steady_clock::now();
            checksum += acc;
            total_seconds += std::chrono::duration<double>(stop - start).count();
        }
        result.timings.push_back({n, total_seconds / static_cast<double>(reps)});
    }
    // Keep the scored values observable so the timed loop cannot be elided.
    if (!std::isfinite(checksum)) {
        throw DegenerateDataError("timing checksum overflowed");
    }

    if (result.timings.size() >= 2) {
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        const double k = static_cast<double>(result.timings.size());
        for (const TimingCell& cell : result.timings) {
            const double lx = std::log(static_cast<double>(cell.n));
            const double ly = std::log(std::max(cell.mean_seconds, 1e-12));
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        result.loglog_slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    }
    return result;
}

} // namespace dirout
