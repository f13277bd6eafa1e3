#pragma once

// Desk-scale Monte Carlo studies: contaminated lognormal samples, skew-normal
// clouds with a gaussian contamination cluster, sine-plus-random-slope curve
// bundles, flag-percentage sweeps comparing the directional outlyingness with
// its symmetric competitor, and a timing benchmark for the univariate fit.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dirout/functional.hpp"
#include "dirout/multivariate.hpp"
#include "dirout/rho.hpp"

namespace dirout {

// Generated data plus ground-truth contamination labels (1 = planted outlier).
struct LabeledSample {
    std::vector<double> values;
    std::vector<std::uint8_t> labels;
};

struct LabeledCloud {
    PointCloud cloud;
    std::vector<std::uint8_t> labels;
};

struct LabeledCurves {
    FunctionalDataset data;
    std::vector<std::uint8_t> labels;
};

// ceil(n*(1-frac)) standard lognormal draws followed by floor(n*frac) copies
// of the exact point mass at x (which may sit anywhere, including below 0).
LabeledSample gen_lognormal_contaminated(std::size_t n, double frac, double x,
                                         std::uint64_t seed);

// Skew-normal sample with density 2 phi_d(y) Phi(shape . y), drawn through the
// sign-flip representation: draw u0 ~ N(0,1) and u ~ N_d(0, I); keep u when
// u0 < shape . u, otherwise keep -u.
PointCloud gen_skewnormal(std::size_t n, std::size_t d, std::span<const double> shape,
                          std::uint64_t seed);

// Default shape vector used by the studies: floor(d/2) tens followed by fours
// (d = 2 gives (10, 4), d = 5 gives (10, 10, 4, 4, 4)).
std::vector<double> default_skew_shape(std::size_t d);

// Copy of `base` with the last floor(n*frac) rows replaced by draws from a
// gaussian cluster centered at (x, ..., x) with covariance I/20.
LabeledCloud contaminate_multivariate(const PointCloud& base, double frac, double x,
                                      std::uint64_t seed);

// n curves observed on T uniform gridpoints spanning [0, 1]: each curve is
// sin(2 pi t) + t * slope + noise with i.i.d. N(0, (1/20)^2) noise per
// gridpoint. Clean curves draw a log-normal slope; the last floor(n*frac)
// curves share the fixed slope L. Each curve uses its own derived RNG stream.
LabeledCurves gen_functional_sine(std::size_t n, std::size_t T, double frac, double L,
                                  std::uint64_t seed);

enum class StudyKind { Lognormal, SkewNormal, Functional, Timing };

// The two scoring rules compared throughout: the signed-split directional
// outlyingness and the symmetric (median/MAD or projection-sup) outlyingness.
enum class StudyMethod { Directional, Symmetric };

struct StudyConfig {
    StudyKind kind = StudyKind::Lognormal;
    std::size_t n = 1000;   // points or curves per replication
    std::size_t d = 2;      // cloud dimension; curve gridpoint count when >= 3
    std::size_t m = 100;    // replications per grid location
    double fraction = 0.1;  // planted contamination fraction, in [0, 0.5)
    std::vector<double> locations; // x or L sweep; sorted into the result
    std::uint64_t seed = 1;
    double quantile = 0.995;
    RhoConfig rho = RhoConfig::standard();
    std::size_t directions = 0; // 0 = default budget (multivariate study)
    int threads = 0;            // functional study maps; no effect on values
};

struct StudyCell {
    double location = 0.0;
    StudyMethod method = StudyMethod::Directional;
    double flagged_pct = 0.0;        // NaN when no outliers were planted
    double false_positive_pct = 0.0; // clean points flagged
};

struct TimingCell {
    std::size_t n = 0;
    double mean_seconds = 0.0;
};

struct StudyResult {
    // Location-major, Directional before Symmetric within each location.
    std::vector<StudyCell> cells;
    std::vector<TimingCell> timings;    // timing runs only
    std::optional<double> loglog_slope; // absent for single-point timing grids
};

// Flag-percentage sweep over the location grid. Every replication generates
// one dataset from a derived (seed, location, replication) stream and scores
// it with both methods, so the comparison shares the randomness. For the
// Timing kind the locations are interpreted as the sample-size grid.
// Deterministic: identical configs produce identical results.
StudyResult run_study(const StudyConfig& cfg);

// Wall-clock of the univariate fit-plus-scoring path per sample size, with a
// least-squares slope of log(time) against log(n) across the grid.
StudyResult timing_benchmark(std::span<const std::size_t> n_grid, std::size_t reps,
                             std::uint64_t seed);

} // namespace dirout
