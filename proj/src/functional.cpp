#include "dirout/functional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "dirout/errors.hpp"
#include "dirout/normal.hpp"
#include "dirout/parallel.hpp"
#include "dirout/rng.hpp"

namespace dirout {

namespace {

void validate_values(const std::vector<double>& values) {
    for (double v : values) {
        if (!std::isfinite(v)) throw InputError("functional data contains a non-finite value");
    }
}

std::vector<double> uniform_weights(std::size_t g) {
    return std::vector<double>(g, 1.0 / static_cast<double>(g));
}

void validate_weight_sum(const std::vector<double>& w) {
    double sum = 0.0;
    for (double v : w) {
        if (!std::isfinite(v) || v < 0.0)
            throw InputError("gridpoint weights must be finite and nonnegative");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw InputError("gridpoint weights must sum to 1 (use normalize_weights)");
}

} // namespace

std::vector<double> normalize_weights(std::span<const double> raw) {
    if (raw.empty()) throw InputError("weight vector is empty");
    double sum = 0.0;
    for (double v : raw) {
        if (!std::isfinite(v) || v < 0.0)
            throw InputError("weights must be finite and nonnegative");
        sum += v;
    }
    if (sum <= 0.0) throw InputError("weights must not all be zero");
    std::vector<double> out(raw.begin(), raw.end());
    for (double& v : out) v /= sum;
    return out;
}

FunctionalDataset FunctionalDataset::curves(Grid1D grid, std::size_t n, std::size_t channels,
                                            std::vector<double> values,
                                            std::vector<double> weights) {
    const std::size_t g = grid.points.size();
    if (g < 3) throw InputError("curves need at least 3 gridpoints");
    for (std::size_t j = 1; j < g; ++j) {
        if (!(grid.points[j] > grid.points[j - 1]))
            throw InputError("grid points must be strictly increasing");
    }
    for (double p : grid.points) {
        if (!std::isfinite(p)) throw InputError("grid points must be finite");
    }
    if (n == 0 || channels == 0) throw InputError("need n >= 1 and channels >= 1");
    if (values.size() != n * g * channels)
        throw InputError("functional data length does not match n * gridpoints * channels");
    validate_values(values);
    if (weights.empty()) weights = uniform_weights(g);
    if (weights.size() != g) throw InputError("weight vector length must match the grid");
    validate_weight_sum(weights);

    FunctionalDataset out;
    out.n_ = n;
    out.gridpoints_ = g;
    out.channels_ = channels;
    out.values_ = std::move(values);
    out.weights_ = std::move(weights);
    out.domain_ = std::move(grid);
    return out;
}

FunctionalDataset FunctionalDataset::images(Grid2D grid, std::size_t n, std::size_t channels,
                                            std::vector<double> values,
                                            std::vector<double> weights) {
    const std::size_t g = grid.rows * grid.cols;
    if (grid.rows == 0 || grid.cols == 0) throw InputError("image grid must be nonempty");
    if (n == 0 || channels == 0) throw InputError("need n >= 1 and channels >= 1");
    if (values.size() != n * g * channels)
        throw InputError("functional data length does not match n * gridpoints * channels");
    validate_values(values);
    if (weights.empty()) weights = uniform_weights(g);
    if (weights.size() != g) throw InputError("weight vector length must match the grid");
    validate_weight_sum(weights);

    FunctionalDataset out;
    out.n_ = n;
    out.gridpoints_ = g;
    out.channels_ = channels;
    out.values_ = std::move(values);
    out.weights_ = std::move(weights);
    out.domain_ = grid;
    return out;
}

FunctionalDataset FunctionalDataset::with_mask(std::span<const std::uint8_t> mask) const {
    if (mask.size() != gridpoints_) throw InputError("mask length must match the grid");
    std::vector<double> w(gridpoints_, 0.0);
    bool any = false;
    for (std::size_t g = 0; g < gridpoints_; ++g) {
        if (mask[g] != 0) {
            w[g] = weights_[g];
            any = true;
        }
    }
    if (!any) throw InputError("mask excludes every gridpoint");
    FunctionalDataset out = *this;
    out.weights_ = normalize_weights(w);
    return out;
}

FunctionalDataset FunctionalDataset::with_weights(std::span<const double> raw_weights) const {
    if (raw_weights.size() != gridpoints_) throw InputError("weight length must match the grid");
    FunctionalDataset out = *this;
    out.weights_ = normalize_weights(raw_weights);
    return out;
}

namespace {

// All n channel-vectors identical at gridpoint g?
bool constant_cross_section(const FunctionalDataset& data, std::size_t g) {
    const auto first = data.cell(0, g);
    for (std::size_t i = 1; i < data.size(); ++i) {
        const auto cell = data.cell(i, g);
        for (std::size_t ch = 0; ch < cell.size(); ++ch) {
            if (cell[ch] != first[ch]) return false;
        }
    }
    return true;
}

[[noreturn]] void rethrow_with_gridpoint(std::size_t g) {
    try {
        throw;
    } catch (const DegenerateDataError& e) {
        throw DegenerateDataError("gridpoint " + std::to_string(g) + ": " + e.what());
    } catch (const InputError& e) {
        throw InputError("gridpoint " + std::to_string(g) + ": " + e.what());
    }
}

} // namespace

OutlyingnessMap pointwise_map(const FunctionalDataset& data, const MapOptions& opt) {
    const std::size_t n = data.size();
    const std::size_t G = data.gridpoints();
    const std::size_t C = data.channels();
    if (n < 3) throw InputError("pointwise outlyingness needs at least 3 functions");

    std::vector<std::size_t> active;
    active.reserve(G);
    for (std::size_t g = 0; g < G; ++g) {
        if (data.weights()[g] > 0.0) active.push_back(g);
    }

    // Constant weighted cross-sections carry no ranking information; report
    // them instead of silently producing zeros.
    std::vector<std::size_t> constants;
    for (std::size_t g : active) {
        if (constant_cross_section(data, g)) {
            constants.push_back(g);
            if (constants.size() >= 5) break;
        }
    }
    if (!constants.empty()) {
        std::string msg = "constant cross-section at gridpoint";
        if (constants.size() > 1) msg += "s";
        for (std::size_t g : constants) msg += " " + std::to_string(g);
        msg += "; give such gridpoints weight 0 to exclude them";
        throw DegenerateDataError(msg);
    }

    OutlyingnessMap map;
    map.n = n;
    map.gridpoints = G;
    map.values.assign(n * G, 0.0);
    map.method = opt.method;
    map.seed = opt.seed;
    map.directions = (C > 1 && opt.method != MapMethod::Componentwise)
                         ? (opt.directions ? opt.directions : default_direction_count(C))
                         : 0;

    parallel_for(active.size(), opt.threads, [&](std::size_t item) {
        const std::size_t g = active[item];
        try {
            if (C == 1) {
                std::vector<double> column(n);
                for (std::size_t i = 0; i < n; ++i) column[i] = data.value(i, g, 0);
                if (opt.method == MapMethod::Symmetric) {
                    std::vector<double> scratch = column;
                    const LocationMad lm = location_mad_inplace(scratch);
                    for (std::size_t i = 0; i < n; ++i)
                        map.values[i * G + g] = symmetric_outlyingness(column[i], lm, opt.policy);
                } else {
                    std::vector<double> scratch = column;
                    const ScalePair sp = half_sample_scales_inplace(scratch, opt.rho);
                    for (std::size_t i = 0; i < n; ++i)
                        map.values[i * G + g] =
                            directional_outlyingness(column[i], sp, opt.policy);
                }
                return;
            }

            std::vector<double> cell_data(n * C);
            for (std::size_t i = 0; i < n; ++i) {
                const auto cell = data.cell(i, g);
                std::copy(cell.begin(), cell.end(), cell_data.begin() + static_cast<std::ptrdiff_t>(i * C));
            }
            const PointCloud cloud(n, C, std::move(cell_data));
            if (opt.method == MapMethod::Componentwise) {
                const ComponentwiseDo index(cloud, opt.rho);
                for (std::size_t i = 0; i < n; ++i)
                    map.values[i * G + g] = index.evaluate(cloud.row(i), opt.policy);
                return;
            }
            const std::size_t k = opt.directions ? opt.directions : default_direction_count(C);
            const DirectionSet dirs = generate_directions(cloud, k, derive_seed(opt.seed, g));
            if (opt.method == MapMethod::Symmetric) {
                const SdoProjection index(cloud, dirs);
                for (std::size_t i = 0; i < n; ++i)
                    map.values[i * G + g] = index.evaluate(cloud.row(i), opt.policy);
            } else {
                const DoProjection index(cloud, dirs, opt.rho);
                for (std::size_t i = 0; i < n; ++i)
                    map.values[i * G + g] = index.evaluate(cloud.row(i), opt.policy);
            }
        } catch (const Error&) {
            rethrow_with_gridpoint(g);
        }
    });

    return map;
}

std::vector<double> functional_outlyingness(const OutlyingnessMap& map,
                                            std::span<const double> weights) {
    if (weights.size() != map.gridpoints)
        throw InputError("weight vector length must match the map");
    std::vector<double> out(map.n, 0.0);
    for (std::size_t i = 0; i < map.n; ++i) {
        double sum = 0.0;
        for (std::size_t g = 0; g < map.gridpoints; ++g) {
            const double w = weights[g];
            if (w > 0.0) sum += w * map.value(i, g); // skip w = 0: avoids 0 * inf
        }
        out[i] = sum;
    }
    return out;
}

std::vector<double> outlyingness_variability(const OutlyingnessMap& map,
                                             std::span<const double> level,
                                             std::span<const double> weights, bool weighted) {
    if (weights.size() != map.gridpoints)
        throw InputError("weight vector length must match the map");
    if (level.size() != map.n) throw InputError("level vector length must match the map");

    std::vector<std::size_t> active;
    for (std::size_t g = 0; g < map.gridpoints; ++g) {
        if (weights[g] > 0.0) active.push_back(g);
    }

    std::vector<double> out(map.n, 0.0);
    for (std::size_t i = 0; i < map.n; ++i) {
        bool has_inf = false;
        for (std::size_t g : active) {
            if (std::isinf(map.value(i, g))) {
                has_inf = true;
                break;
            }
        }
        if (has_inf) {
            out[i] = std::numeric_limits<double>::infinity();
            continue;
        }
        const std::size_t A = active.size();
        if (A < 2) {
            out[i] = 0.0;
            continue;
        }
        double sd = 0.0;
        if (!weighted) {
            double mean = 0.0;
            for (std::size_t g : active) mean += map.value(i, g);
            mean /= static_cast<double>(A);
            double ss = 0.0;
            for (std::size_t g : active) {
                const double d = map.value(i, g) - mean;
                ss += d * d;
            }
            sd = std::sqrt(ss / static_cast<double>(A - 1));
        } else {
            // Reliability-weight dispersion; reduces to the plain sample
            // standard deviation under uniform weights.
            double mean = 0.0, wsum = 0.0, w2sum = 0.0;
            for (std::size_t g : active) {
                mean += weights[g] * map.value(i, g);
                wsum += weights[g];
                w2sum += weights[g] * weights[g];
            }
            mean /= wsum;
            double ss = 0.0;
            for (std::size_t g : active) {
                const double d = map.value(i, g) - mean;
                ss += weights[g] * d * d;
            }
            const double denom = wsum - w2sum / wsum;
            sd = denom > 0.0 ? std::sqrt(ss / denom) : 0.0;
        }
        out[i] = sd / (1.0 + level[i]);
    }
    return out;
}

namespace {

double median_of_finite(std::span<const double> v, const char* what) {
    std::vector<double> finite;
    finite.reserve(v.size());
    for (double x : v) {
        if (std::isfinite(x)) finite.push_back(x);
    }
    if (finite.empty())
        throw DegenerateDataError(std::string("no finite ") + what + " values");
    return median_inplace(finite);
}

} // namespace

CombinedResult combined_outlyingness(std::span<const double> level,
                                     std::span<const double> variability) {
    if (level.size() != variability.size())
        throw InputError("level and variability lengths differ");
    CombinedResult out;
    out.median_level = median_of_finite(level, "level");
    out.median_variability = median_of_finite(variability, "variability");
    if (out.median_level <= 0.0)
        throw DegenerateDataError("median level is zero; combined score undefined");
    if (out.median_variability <= 0.0)
        throw DegenerateDataError("median variability is zero; combined score undefined");
    out.score.resize(level.size());
    for (std::size_t i = 0; i < level.size(); ++i) {
        out.score[i] =
            std::hypot(level[i] / out.median_level, variability[i] / out.median_variability);
    }
    return out;
}

FlagResult flag_outliers(std::span<const double> score, double quantile) {
    if (!(quantile > 0.0) || !(quantile < 1.0))
        throw ConfigError("flag quantile must lie strictly between 0 and 1");
    std::vector<double> logs;
    logs.reserve(score.size());
    for (double v : score) {
        if (std::isnan(v) || v < 0.0)
            throw InputError("scores must be nonnegative (NaN not allowed)");
        if (std::isfinite(v)) logs.push_back(std::log(0.1 + v));
    }
    if (logs.empty()) throw DegenerateDataError("no finite scores to calibrate the cutoff");

    // Raw (uncalibrated) MAD of the log scores: the rule is a rank-based
    // yardstick, not a scale estimate, so no normal-consistency factor here.
    const double med = median_inplace(logs);
    for (double& l : logs) l = std::abs(l - med);
    const double mad = median_inplace(logs);
    if (mad == 0.0)
        throw DegenerateDataError("log-score MAD is zero; cutoff cannot be calibrated");
    const double z = norm_quantile(quantile);
    const double log_cut = med + mad * z;

    FlagResult out;
    out.cutoff = std::exp(log_cut) - 0.1;
    out.flags.resize(score.size());
    // Strictly greater than the emitted cutoff; infinities flag by the same
    // comparison. The boundary value itself is not an outlier.
    for (std::size_t i = 0; i < score.size(); ++i) {
        out.flags[i] = score[i] > out.cutoff ? 1 : 0;
    }
    return out;
}

FunctionalSummary summarize(const OutlyingnessMap& map, std::span<const double> weights,
                            double quantile, bool weighted_variability) {
    FunctionalSummary s;
    s.quantile = quantile;
    s.fdo = functional_outlyingness(map, weights);
    s.vdo = outlyingness_variability(map, s.fdo, weights, weighted_variability);
    CombinedResult comb = combined_outlyingness(s.fdo, s.vdo);
    s.cfo = std::move(comb.score);
    s.median_fdo = comb.median_level;
    s.median_vdo = comb.median_variability;
    FlagResult cf = flag_outliers(s.cfo, quantile);
    s.cutoff_cfo = cf.cutoff;
    s.flags = std::move(cf.flags);
    s.cutoff_fdo = flag_outliers(s.fdo, quantile).cutoff;
    return s;
}

OutlierMapData outlier_map(const FunctionalSummary& summary, std::size_t frontier_samples) {
    if (frontier_samples < 2) throw ConfigError("frontier needs at least 2 samples");
    OutlierMapData out;
    out.level = summary.fdo;
    out.variability = summary.vdo;
    out.flags = summary.flags;
    out.frontier_level.resize(frontier_samples);
    out.frontier_variability.resize(frontier_samples);
    const double a = summary.median_fdo * summary.cutoff_cfo;
    const double b = summary.median_vdo * summary.cutoff_cfo;
    for (std::size_t j = 0; j < frontier_samples; ++j) {
        const double theta = (std::numbers::pi / 2.0) * static_cast<double>(j) /
                             static_cast<double>(frontier_samples - 1);
        out.frontier_level[j] = a * std::cos(theta);
        out.frontier_variability[j] = b * std::sin(theta);
    }
    return out;
}

FunctionalDataset augment_with_derivative(const FunctionalDataset& data) {
    if (data.is_image())
        throw ConfigError("derivative augmentation applies to curves; use gradient "
                          "augmentation for images");
    const Grid1D& grid = data.grid1d();
    const std::size_t T = grid.points.size();
    const double href = (grid.points.back() - grid.points.front()) / static_cast<double>(T - 1);
    for (std::size_t j = 1; j < T; ++j) {
        if (std::abs(grid.points[j] - grid.points[j - 1] - href) > 1e-6 * href)
            throw InputError("derivative augmentation requires a uniform grid");
    }

    const std::size_t n = data.size(), C = data.channels();
    std::vector<double> out(n * T * 2 * C);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < T; ++j) {
            double* cell = out.data() + (i * T + j) * 2 * C;
            for (std::size_t ch = 0; ch < C; ++ch) {
                cell[ch] = data.value(i, j, ch);
                double d;
                if (j == 0) {
                    d = (-3.0 * data.value(i, 0, ch) + 4.0 * data.value(i, 1, ch) -
                         data.value(i, 2, ch)) /
                        (2.0 * href);
                } else if (j == T - 1) {
                    d = (data.value(i, T - 3, ch) - 4.0 * data.value(i, T - 2, ch) +
                         3.0 * data.value(i, T - 1, ch)) /
                        (2.0 * href);
                } else {
                    d = (data.value(i, j + 1, ch) - data.value(i, j - 1, ch)) / (2.0 * href);
                }
                cell[C + ch] = d;
            }
        }
    }
    return FunctionalDataset::curves(data.grid1d(), n, 2 * C, std::move(out), data.weights());
}

namespace {

// One-axis derivative at position p along a line of `len` pixels with stride
// `stride`, restricted to mask-active pixels. `at(q)` reads the value at line
// position q; `on(q)` reports activity.
template <typename Value, typename Active>
double masked_line_derivative(std::size_t p, std::size_t len, const Value& at, const Active& on) {
    const bool prev = p > 0 && on(p - 1);
    const bool next = p + 1 < len && on(p + 1);
    if (prev && next) return 0.5 * (at(p + 1) - at(p - 1));
    if (next) {
        if (p + 2 < len && on(p + 2))
            return 0.5 * (-3.0 * at(p) + 4.0 * at(p + 1) - at(p + 2));
        return at(p + 1) - at(p);
    }
    if (prev) {
        if (p >= 2 && on(p - 2))
            return 0.5 * (at(p - 2) - 4.0 * at(p - 1) + 3.0 * at(p));
        return at(p) - at(p - 1);
    }
    return 0.0; // isolated along this axis
}

} // namespace

FunctionalDataset augment_with_gradient(const FunctionalDataset& data,
                                        std::span<const std::uint8_t> mask) {
    if (!data.is_image()) throw ConfigError("gradient augmentation applies to images");
    const Grid2D grid = data.grid2d();
    const std::size_t R = grid.rows, Cc = grid.cols;
    if (!mask.empty() && mask.size() != R * Cc)
        throw InputError("mask length must match the pixel grid");
    if (mask.empty() && (R < 3 || Cc < 3))
        throw ConfigError("gradient augmentation needs at least 3 rows and 3 columns");

    auto active = [&](std::size_t g) { return mask.empty() || mask[g] != 0; };

    const std::size_t n = data.size(), C = data.channels();
    std::vector<double> out(n * R * Cc * 3 * C, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t r = 0; r < R; ++r) {
            for (std::size_t c = 0; c < Cc; ++c) {
                const std::size_t g = r * Cc + c;
                double* cell = out.data() + (i * R * Cc + g) * 3 * C;
                for (std::size_t ch = 0; ch < C; ++ch) {
                    cell[ch] = data.value(i, g, ch);
                    if (!active(g)) continue; // derivatives left at 0, weight drops to 0
                    cell[C + ch] = masked_line_derivative(
                        c, Cc, [&](std::size_t q) { return data.value(i, r * Cc + q, ch); },
                        [&](std::size_t q) { return active(r * Cc + q); });
                    cell[2 * C + ch] = masked_line_derivative(
                        r, R, [&](std::size_t q) { return data.value(i, q * Cc + c, ch); },
                        [&](std::size_t q) { return active(q * Cc + c); });
                }
            }
        }
    }

    FunctionalDataset result =
        FunctionalDataset::images(grid, n, 3 * C, std::move(out), data.weights());
    if (!mask.empty()) result = result.with_mask(mask);
    return result;
}

} // namespace dirout
