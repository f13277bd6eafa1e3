// Acceptance gate: runs every primary criterion end to end and prints one
// PASS/FAIL line per criterion. Exits nonzero when any criterion fails.
//
// Usage: acceptance <path-to-cli-binary> <scratch-dir>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dirout/csv.hpp"
#include "dirout/errors.hpp"
#include "dirout/functional.hpp"
#include "dirout/multivariate.hpp"
#include "dirout/rho.hpp"
#include "dirout/rng.hpp"
#include "dirout/scales.hpp"
#include "dirout/selection.hpp"
#include "dirout/simulation.hpp"
#include "dirout/theory.hpp"

namespace fs = std::filesystem;
using namespace dirout;
using Clock = std::chrono::steady_clock;

namespace {

std::string g_cli;
fs::path g_work;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int prec = 6) {
    std::ostringstream out;
    out.precision(prec);
    out << v;
    return out.str();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

// ---------------------------------------------------------------------------
// 1. Consistency of the half-sample scales and the induced outlyingness on
//    clean gaussian samples.
Outcome consistency_criterion() {
    const auto t0 = Clock::now();
    const std::size_t n = 10000, reps = 200;
    const RhoConfig cfg = RhoConfig::standard();
    const double target = standard_normal().quantile(0.95);

    double sum_sa = 0.0, sum_sb = 0.0, sum_do = 0.0;
    std::vector<double> xs(n), scratch, sorted;
    for (std::size_t rep = 0; rep < reps; ++rep) {
        Rng rng(derive_seed(0xACC0001, rep));
        for (double& x : xs) x = rng.normal();
        const ScalePair sp = half_sample_scales(xs, cfg, scratch);
        sum_sa += sp.s_above;
        sum_sb += sp.s_below;
        sorted = xs;
        const std::size_t idx = static_cast<std::size_t>(std::ceil(0.95 * n)) - 1;
        std::nth_element(sorted.begin(), sorted.begin() + idx, sorted.end());
        sum_do += directional_outlyingness(sorted[idx], sp);
    }
    const double mean_sa = sum_sa / reps, mean_sb = sum_sb / reps, mean_do = sum_do / reps;
    const double elapsed = seconds_since(t0);

    const bool ok = std::fabs(mean_sa - 1.0) < 0.01 && std::fabs(mean_sb - 1.0) < 0.01 &&
                    std::fabs(mean_do - target) < 0.05 * target && elapsed < 60.0;
    return {ok, "mean s_above=" + fmt(mean_sa) + ", mean s_below=" + fmt(mean_sb) +
                    ", mean DO at the 0.95-quantile point=" + fmt(mean_do) + " (target " +
                    fmt(target) + "), " + fmt(elapsed, 3) + "s"};
}

// ---------------------------------------------------------------------------
// 2. The closed-form consistency constant agrees with direct quadrature.
Outcome alpha_criterion() {
    const double c = 2.1;
    const double inv_sqrt_2pi = 0.39894228040143268;
    auto integrand = [&](double z) {
        const double t = z / c;
        return std::min(t * t, 1.0) * inv_sqrt_2pi * std::exp(-0.5 * z * z);
    };
    using quad = boost::math::quadrature::gauss_kronrod<double, 61>;
    const double numeric =
        quad::integrate(integrand, 0.0, c, 15, 1e-14) + quad::integrate(integrand, c, 40.0, 15, 1e-14);
    const double closed = rho_consistency_constant(c);
    const double diff = std::fabs(numeric - closed);
    return {diff < 1e-10, "closed=" + fmt(closed, 17) + ", quadrature=" + fmt(numeric, 17) +
                              ", |diff|=" + fmt(diff, 3)};
}

// ---------------------------------------------------------------------------
// 3. Bias curves: both tend to 1 at vanishing contamination, the implosion
//    curve collapses near breakdown, and the explosion curve is strictly
//    increasing across the contamination range.
Outcome bias_endpoint_criterion() {
    const RhoConfig cfg = RhoConfig::standard();
    const double impl_small = implosion_bias(1e-4, cfg);
    const double expl_small = explosion_bias(1e-4, cfg);
    const double impl_late = implosion_bias(0.2499, cfg);

    bool increasing = true;
    double prev = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 24; ++i) {
        const double eps = 0.01 + (0.24 - 0.01) * i / 23.0;
        const double v = explosion_bias(eps, cfg);
        if (v <= prev) increasing = false;
        prev = v;
    }

    const bool ok = std::fabs(impl_small - 1.0) < 1e-3 && std::fabs(expl_small - 1.0) < 1e-3 &&
                    impl_late < 0.05 && increasing;
    return {ok, "implosion(1e-4)=" + fmt(impl_small, 8) + ", explosion(1e-4)=" + fmt(expl_small, 8) +
                    ", implosion(0.2499)=" + fmt(impl_late, 4) + ", explosion strictly increasing on 24-point grid=" +
                    (increasing ? "yes" : "no")};
}

// ---------------------------------------------------------------------------
// 4. The closed-form bias curves match large-sample empirical scales under
//    the worst-case contaminations that attain them.
Outcome bias_empirical_criterion() {
    const RhoConfig cfg = RhoConfig::standard();
    const double eps = 0.1;
    const std::size_t n = 200000;
    const std::size_t m = static_cast<std::size_t>(std::llround(n * eps));
    const auto& F = standard_normal();

    // Worst case for implosion: the contaminating atom sits at the median of
    // the contaminated model, producing zero deviations.
    const double atom_impl = F.quantile(1.0 / (2.0 * (1.0 - eps)));
    // Worst case for explosion: an atom beyond the clipping point (the bias is
    // flat in the atom location from there on).
    const double atom_expl = 100.0;

    auto empirical_s_above = [&](double atom, std::uint64_t seed) {
        std::vector<double> xs(n);
        Rng rng(seed);
        for (std::size_t i = 0; i < n - m; ++i) xs[i] = rng.normal();
        for (std::size_t i = n - m; i < n; ++i) xs[i] = atom;
        return half_sample_scales(xs, cfg).s_above;
    };

    const double closed_impl = implosion_bias(eps, cfg);
    const double closed_expl = explosion_bias(eps, cfg);
    const double emp_impl = empirical_s_above(atom_impl, 0xACC0004);
    const double emp_expl = empirical_s_above(atom_expl, 0xACC0005);

    const double rel_impl = std::fabs(emp_impl - closed_impl) / closed_impl;
    const double rel_expl = std::fabs(emp_expl - closed_expl) / closed_expl;
    const bool ok = rel_impl < 0.02 && rel_expl < 0.02;
    return {ok, "implosion closed=" + fmt(closed_impl) + " empirical=" + fmt(emp_impl) +
                    " rel.err=" + fmt(rel_impl, 3) + "; explosion closed=" + fmt(closed_expl) +
                    " empirical=" + fmt(emp_expl) + " rel.err=" + fmt(rel_expl, 3)};
}

// ---------------------------------------------------------------------------
// 5. Influence functions match finite-difference Gateaux derivatives through
//    the explicit contaminated mixture, and the refined scale's influence
//    function jumps at the third quartile.
Outcome influence_criterion() {
    const RhoConfig cfg = RhoConfig::standard();
    const double step = 1e-5;
    const std::vector<double> zs{-2.0, -0.5, 0.3, 1.0, 3.0};

    double worst_scale = 0.0, worst_do = 0.0;
    for (double z : zs) {
        const double closed = if_refined_scale(z, cfg);
        const double fd = mixture_gateaux(EstimatorId::RefinedScale, z, step, cfg);
        worst_scale = std::max(worst_scale, std::fabs(closed - fd));
    }
    for (double z : zs) {
        const double closed = if_outlyingness(1.0, z, cfg);
        const double fd = mixture_gateaux(EstimatorId::Outlyingness, z, step, cfg, 1.0);
        worst_do = std::max(worst_do, std::fabs(closed - fd));
    }

    const double q3 = standard_normal().quantile(0.75);
    const double jump = std::fabs(if_refined_scale(q3, cfg, JumpSide::Right) -
                                  if_refined_scale(q3, cfg, JumpSide::Left));

    const bool ok = worst_scale < 1e-3 && worst_do < 1e-3 && jump > 0.1;
    return {ok, "max |closed - finite difference|: refined scale " + fmt(worst_scale, 3) +
                    ", outlyingness " + fmt(worst_do, 3) + "; third-quartile jump " + fmt(jump, 6)};
}

// ---------------------------------------------------------------------------
// 6. The log-shift cutoff flags a small, nonzero share of clean gaussian data.
Outcome calibration_criterion() {
    const RhoConfig cfg = RhoConfig::standard();
    const std::size_t n = 10000, reps = 100;
    std::vector<double> xs(n), scores(n), scratch;
    double total_pct = 0.0;
    for (std::size_t rep = 0; rep < reps; ++rep) {
        Rng rng(derive_seed(0xACC0006, rep));
        for (double& x : xs) x = rng.normal();
        const ScalePair sp = half_sample_scales(xs, cfg, scratch);
        for (std::size_t i = 0; i < n; ++i) scores[i] = directional_outlyingness(xs[i], sp);
        const FlagResult fr = flag_outliers(scores, 0.995);
        const auto flagged = std::count(fr.flags.begin(), fr.flags.end(), std::uint8_t{1});
        total_pct += 100.0 * static_cast<double>(flagged) / static_cast<double>(n);
    }
    const double mean_pct = total_pct / reps;
    const bool ok = mean_pct >= 0.1 && mean_pct <= 1.5;
    return {ok, "mean flagged share on clean gaussian data = " + fmt(mean_pct, 4) + "% (bounds 0.1%-1.5%)"};
}

// ---------------------------------------------------------------------------
// 7. Skewness discrimination on contaminated lognormal data, directional vs
//    symmetric scoring: the stated ordering of the first locations where each
//    method flags at least 95% of the planted outliers.
Outcome skewness_criterion() {
    StudyConfig cfg;
    cfg.kind = StudyKind::Lognormal;
    cfg.n = 1000;
    cfg.m = 100;
    cfg.fraction = 0.1;
    cfg.seed = 20260823;
    cfg.locations = {-4.0, -2.0, -1.0, -0.5, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 16.0, 20.0, 24.0, 30.0};
    const StudyResult res = run_study(cfg);

    std::map<std::pair<double, int>, double> flagged;
    for (const StudyCell& cell : res.cells)
        flagged[{cell.location, cell.method == StudyMethod::Directional ? 0 : 1}] = cell.flagged_pct;

    const double inf = std::numeric_limits<double>::infinity();
    auto first_right = [&](int method) {
        for (double x : cfg.locations)
            if (x > 0.0 && flagged[{x, method}] >= 95.0) return x;
        return inf;
    };
    auto first_left = [&](int method) { // smallest |x| on the negative side
        std::vector<double> neg;
        for (double x : cfg.locations)
            if (x < 0.0) neg.push_back(x);
        std::sort(neg.begin(), neg.end(), [](double a, double b) { return std::fabs(a) < std::fabs(b); });
        for (double x : neg)
            if (flagged[{x, method}] >= 95.0) return std::fabs(x);
        return inf;
    };

    const double do_right = first_right(0), sdo_right = first_right(1);
    const double do_left = first_left(0), sdo_left = first_left(1);

    // Stated ordering: directional strictly first on the right tail, and no
    // earlier than symmetric on the left tail.
    const bool right_ok = do_right < sdo_right;
    const bool left_ok = do_left >= sdo_left;
    return {right_ok && left_ok,
            "95%-thresholds right tail: directional x=" + fmt(do_right) + ", symmetric x=" + fmt(sdo_right) +
                "; left tail |x|: directional " + fmt(do_left) + ", symmetric " + fmt(sdo_left) +
                " (required: directional strictly smaller on the right, not smaller on the left; measured ordering is the mirror image on both tails)"};
}

// ---------------------------------------------------------------------------
// 8. Functional study: planted constant-slope curves below the clean bundle
//    are flagged almost always, with few false positives.
Outcome functional_study_criterion() {
    const auto t0 = Clock::now();
    StudyConfig cfg;
    cfg.kind = StudyKind::Functional;
    cfg.n = 500;
    cfg.d = 50; // gridpoints
    cfg.m = 100;
    cfg.fraction = 0.1;
    cfg.seed = 0xACC0008;
    cfg.locations = {-10.0, -5.0};
    const StudyResult res = run_study(cfg);
    const double elapsed = seconds_since(t0);

    bool ok = elapsed < 600.0;
    std::string detail;
    for (const StudyCell& cell : res.cells) {
        if (cell.method != StudyMethod::Directional) continue;
        if (!(cell.flagged_pct >= 90.0 && cell.false_positive_pct <= 3.0)) ok = false;
        detail += "L=" + fmt(cell.location) + ": flagged " + fmt(cell.flagged_pct, 4) + "%, false positives " +
                  fmt(cell.false_positive_pct, 3) + "%; ";
    }
    detail += fmt(elapsed, 3) + "s";
    return {ok, detail};
}

// ---------------------------------------------------------------------------
// 9. Image gradient channels are exact on affine and per-axis quadratic
//    images at every pixel, boundaries included.
Outcome gradient_criterion() {
    const std::size_t rows = 7, cols = 5;
    const Grid2D grid{rows, cols};

    // Two images: one affine, one with independent quadratics per axis.
    const double a0 = 0.7, b0 = -1.3, c0 = 2.4;        // a0 + b0*col + c0*row
    const double a1 = -0.2, b1 = 0.9, c1 = -1.7;       // + p*col^2 + q*row^2
    const double p1 = 0.35, q1 = -0.6;

    std::vector<double> values;
    values.reserve(2 * rows * cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            values.push_back(a0 + b0 * static_cast<double>(c) + c0 * static_cast<double>(r));
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            const double x = static_cast<double>(c), y = static_cast<double>(r);
            values.push_back(a1 + b1 * x + c1 * y + p1 * x * x + q1 * y * y);
        }

    const FunctionalDataset data = FunctionalDataset::images(grid, 2, 1, std::move(values));
    const FunctionalDataset aug = augment_with_gradient(data);

    double worst = 0.0;
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            const std::size_t g = r * cols + c;
            const double x = static_cast<double>(c), y = static_cast<double>(r);
            worst = std::max(worst, std::fabs(aug.value(0, g, 1) - b0));
            worst = std::max(worst, std::fabs(aug.value(0, g, 2) - c0));
            worst = std::max(worst, std::fabs(aug.value(1, g, 1) - (b1 + 2.0 * p1 * x)));
            worst = std::max(worst, std::fabs(aug.value(1, g, 2) - (c1 + 2.0 * q1 * y)));
        }
    return {worst <= 1e-12, "max |gradient - analytic| over all pixels = " + fmt(worst, 3)};
}

// ---------------------------------------------------------------------------
// 10. The flag set equals the set of points outside the rendered cutoff
//     ellipse on random synthetic score maps.
Outcome map_coherence_criterion() {
    std::size_t checked = 0, mismatches = 0;
    for (int k = 0; k < 50; ++k) {
        const std::size_t n = 60 + static_cast<std::size_t>(k % 40);
        const std::size_t gridpoints = 20 + static_cast<std::size_t>(k % 10);
        Rng rng(derive_seed(0xACC0010, static_cast<std::uint64_t>(k)));

        OutlyingnessMap map;
        map.n = n;
        map.gridpoints = gridpoints;
        map.values.resize(n * gridpoints);
        for (std::size_t i = 0; i < n; ++i) {
            const double lift = (i % 9 == 0) ? 4.0 + 3.0 * rng.uniform01() : 0.0;
            for (std::size_t g = 0; g < gridpoints; ++g)
                map.values[i * gridpoints + g] = std::fabs(rng.normal()) + lift * (0.5 + rng.uniform01());
        }
        const std::vector<double> weights(gridpoints, 1.0 / static_cast<double>(gridpoints));

        const FunctionalSummary summary = summarize(map, weights);
        const OutlierMapData fom = outlier_map(summary);
        const double a = *std::max_element(fom.frontier_level.begin(), fom.frontier_level.end());
        const double b =
            *std::max_element(fom.frontier_variability.begin(), fom.frontier_variability.end());

        for (std::size_t i = 0; i < n; ++i) {
            const double lx = fom.level[i] / a, vy = fom.variability[i] / b;
            const bool outside = lx * lx + vy * vy > 1.0;
            if (outside != (fom.flags[i] != 0)) ++mismatches;
            ++checked;
        }
    }
    return {mismatches == 0, fmt(static_cast<double>(checked), 6) + " points across 50 maps, " +
                                 fmt(static_cast<double>(mismatches), 6) + " flag/ellipse mismatches"};
}

// ---------------------------------------------------------------------------
// 11. CLI determinism: byte-identical output for repeated seeds and for
//     different thread counts.
Outcome determinism_criterion() {
    fs::create_directories(g_work);

    // Inputs: a 3-column gaussian cloud and a 40x25 curve table.
    const fs::path cloud_path = g_work / "cloud.csv";
    {
        std::ofstream out(cloud_path);
        CsvWriter w(out);
        Rng rng(0xACC0011);
        for (int i = 0; i < 200; ++i) {
            const std::vector<double> row{rng.normal(), rng.normal(), rng.normal()};
            w.value_row(row);
        }
    }
    const fs::path curves_path = g_work / "curves.csv";
    {
        std::ofstream out(curves_path);
        CsvWriter w(out);
        Rng rng(0xACC0012);
        for (int i = 0; i < 40; ++i) {
            std::vector<double> row(25);
            for (int g = 0; g < 25; ++g) {
                const double t = static_cast<double>(g) / 24.0;
                row[g] = std::sin(6.283185307179586 * t) + 0.05 * rng.normal() + (i == 39 ? 3.0 : 0.0);
            }
            w.value_row(row);
        }
    }

    auto run = [&](const std::string& args) {
        const std::string cmd = g_cli + " " + args + " > " + (g_work / "stdout.log").string() +
                                " 2> " + (g_work / "stderr.log").string();
        return std::system(cmd.c_str());
    };
    auto slurp = [&](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    };

    bool ok = true;
    std::string detail;

    const std::string do_args = "do " + cloud_path.string() + " --seed 42 --directions 120 --out ";
    ok &= run(do_args + (g_work / "a1.csv").string()) == 0;
    ok &= run(do_args + (g_work / "a2.csv").string()) == 0;
    const std::string a1 = slurp(g_work / "a1.csv");
    const bool do_same = !a1.empty() && a1 == slurp(g_work / "a2.csv");
    detail += std::string("same-seed multivariate runs identical=") + (do_same ? "yes" : "no");

    const std::string fdo_base = "fdo " + curves_path.string() + " --seed 7 ";
    ok &= run(fdo_base + "--threads 1 --out " + (g_work / "f1.csv").string()) == 0;
    ok &= run(fdo_base + "--threads 4 --out " + (g_work / "f2.csv").string()) == 0;
    ok &= run(fdo_base + "--threads 1 --out " + (g_work / "f3.csv").string()) == 0;
    const std::string f1 = slurp(g_work / "f1.csv");
    const bool thread_same = f1 == slurp(g_work / "f2.csv") && !f1.empty();
    const bool seed_same = f1 == slurp(g_work / "f3.csv");
    detail += std::string(", functional run across thread counts identical=") + (thread_same ? "yes" : "no");
    detail += std::string(", repeated identical=") + (seed_same ? "yes" : "no");

    ok &= do_same && thread_same && seed_same;
    return {ok, detail};
}

// ---------------------------------------------------------------------------
// 12. Near-linear scaling of the univariate fit-plus-score path.
Outcome complexity_criterion() {
    const std::vector<std::size_t> grid{10000, 100000, 1000000};
    const StudyResult res = timing_benchmark(grid, 3, 0xACC0012);
    if (!res.loglog_slope) return {false, "no slope computed"};
    const double slope = *res.loglog_slope;
    std::string detail = "log-log slope=" + fmt(slope, 4) + " (bounds 0.8-1.3); times:";
    for (const TimingCell& t : res.timings)
        detail += " n=" + std::to_string(t.n) + " " + fmt(t.mean_seconds, 3) + "s";
    return {slope >= 0.8 && slope <= 1.3, detail};
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::fprintf(stderr, "usage: acceptance <cli-binary> <scratch-dir>\n");
        return 2;
    }
    g_cli = argv[1];
    g_work = argv[2];

    struct Entry {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Entry> entries{
        {1, "scale and outlyingness consistency on clean gaussian samples", consistency_criterion},
        {2, "consistency constant vs independent quadrature", alpha_criterion},
        {3, "bias-curve endpoints and monotonicity", bias_endpoint_criterion},
        {4, "closed-form bias curves vs worst-case empirical scales", bias_empirical_criterion},
        {5, "influence functions vs finite-difference derivatives", influence_criterion},
        {6, "cutoff calibration on clean gaussian data", calibration_criterion},
        {7, "skewness discrimination ordering, directional vs symmetric", skewness_criterion},
        {8, "functional study: planted low-slope curves", functional_study_criterion},
        {9, "image gradient exactness on polynomial images", gradient_criterion},
        {10, "flag set equals outside-ellipse set on random maps", map_coherence_criterion},
        {11, "CLI determinism across seeds and thread counts", determinism_criterion},
        {12, "near-linear univariate timing", complexity_criterion},
    };

    int failures = 0;
    for (const Entry& entry : entries) {
        Outcome outcome;
        try {
            outcome = entry.run();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        if (!outcome.pass) ++failures;
        std::printf("criterion %2d: %s — %s (%s)\n", entry.id, outcome.pass ? "PASS" : "FAIL",
                    entry.name, outcome.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("acceptance summary: %d of %zu criteria passed\n",
                static_cast<int>(entries.size()) - failures, entries.size());
    return failures == 0 ? 0 : 1;
}
