// Command-line surface for the directional-outlyingness toolkit: pointwise
// and multivariate scoring, functional summaries, heatmaps, outlier maps,
// theory curve tables, simulation studies, and a timing benchmark. Every
// output is CSV with '#' comment headers echoing the semantic configuration
// (the thread count is deliberately not part of it: results never depend on
// scheduling). Exit codes: 0 ok, 2 input error, 3 degenerate data, 4 config
// error.

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dirout/csv.hpp"
#include "dirout/errors.hpp"
#include "dirout/functional.hpp"
#include "dirout/multivariate.hpp"
#include "dirout/pnm.hpp"
#include "dirout/rho.hpp"
#include "dirout/scales.hpp"
#include "dirout/selection.hpp"
#include "dirout/simulation.hpp"
#include "dirout/svg.hpp"
#include "dirout/theory.hpp"

namespace {

using namespace dirout;

// ---------------------------------------------------------------------------
// Small shared plumbing

void write_to(const std::string& path, const std::function<void(std::ostream&)>& emit) {
    if (path.empty() || path == "-") {
        emit(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) throw InputError("cannot open \"" + path + "\" for writing");
    emit(out);
}

MapMethod parse_method(const std::string& name) {
    if (name == "projection") return MapMethod::Projection;
    if (name == "componentwise") return MapMethod::Componentwise;
    if (name == "sdo") return MapMethod::Symmetric;
    throw ConfigError("unknown method \"" + name +
                      "\" (expected projection, componentwise, or sdo)");
}

std::vector<double> parse_value_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(cell, &used));
            if (used != cell.size()) throw std::invalid_argument(cell);
        } catch (const std::exception&) {
            throw ConfigError(std::string(what) + ": cannot parse \"" + cell + "\" as a number");
        }
    }
    if (out.empty()) throw ConfigError(std::string(what) + ": empty list");
    return out;
}

// "lo:hi:count" inclusive linear grid.
std::vector<double> parse_grid(const std::string& text, const char* what) {
    double lo = 0.0, hi = 0.0;
    long count = 0;
    char colon1 = 0, colon2 = 0;
    std::stringstream ss(text);
    if (!(ss >> lo >> colon1 >> hi >> colon2 >> count) || colon1 != ':' || colon2 != ':' ||
        !ss.eof()) {
        throw ConfigError(std::string(what) + ": expected lo:hi:count, got \"" + text + "\"");
    }
    if (count < 2 || !(hi > lo)) {
        throw ConfigError(std::string(what) + ": need lo < hi and count >= 2");
    }
    std::vector<double> out(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) {
        out[static_cast<std::size_t>(i)] =
            lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    return out;
}

// Options shared by the scoring commands; echoed (minus threads) into every
// output so a run can be reproduced from its own header.
struct ScoreOpts {
    std::string input;
    std::string frames_dir;
    std::vector<std::string> channel_paths;
    std::string weights_path;
    std::string mask_path;
    std::string method = "projection";
    double c = 2.1;
    std::size_t directions = 0;
    std::uint64_t seed = 1;
    double quantile = 0.995;
    int threads = 0;
    bool derivative = false;
    bool gradient = false;
    bool weighted_variability = false;
    std::string out_path;
    std::string svg_path;
};

void add_score_flags(CLI::App* cmd, ScoreOpts& o, bool functional) {
    cmd->add_option("input", o.input, "input CSV (rows = observations)");
    cmd->add_option("--method", o.method, "projection | componentwise | sdo");
    cmd->add_option("--c", o.c, "rho tuning constant (default 2.1)");
    cmd->add_option("--directions", o.directions, "projection budget (0 = 250 per dimension)");
    cmd->add_option("--seed", o.seed, "master RNG seed");
    cmd->add_option("--quantile", o.quantile, "cutoff quantile in (0.5, 1)");
    cmd->add_option("--threads", o.threads, "worker threads (0 = auto; never changes values)");
    cmd->add_option("--out", o.out_path, "output CSV path (default stdout)");
    if (functional) {
        cmd->add_option("--frames", o.frames_dir, "directory of .pgm/.ppm/.csv frames");
        cmd->add_option("--channel", o.channel_paths, "extra per-channel CSV (repeatable)");
        cmd->add_option("--weights", o.weights_path, "per-gridpoint weights CSV");
        cmd->add_option("--mask", o.mask_path, "per-gridpoint 0/1 mask CSV");
        cmd->add_flag("--derivative", o.derivative, "append grid derivatives as channels");
        cmd->add_flag("--gradient", o.gradient, "append pixel gradients as channels (frames)");
        cmd->add_flag("--weighted-variability", o.weighted_variability,
                      "weight the variability by gridpoint weights");
    }
}

std::vector<std::uint8_t> load_mask(const std::string& path, std::size_t gridpoints) {
    const NumericTable t = read_numeric_csv(path);
    if (t.data.size() != gridpoints) {
        throw InputError("mask \"" + path + "\" has " + std::to_string(t.data.size()) +
                         " entries; the dataset has " + std::to_string(gridpoints) +
                         " gridpoints");
    }
    std::vector<std::uint8_t> mask(t.data.size());
    for (std::size_t i = 0; i < t.data.size(); ++i) mask[i] = t.data[i] != 0.0 ? 1 : 0;
    return mask;
}

FunctionalDataset load_functional(const ScoreOpts& o) {
    if (!o.frames_dir.empty()) {
        if (!o.input.empty()) {
            throw ConfigError("give either an input CSV or --frames, not both");
        }
        FunctionalDataset data = frames_to_dataset(read_frames(list_frame_files(o.frames_dir)));
        if (!o.mask_path.empty() && !o.gradient) {
            data = data.with_mask(load_mask(o.mask_path, data.gridpoints()));
        }
        if (o.gradient) {
            std::vector<std::uint8_t> mask;
            if (!o.mask_path.empty()) mask = load_mask(o.mask_path, data.gridpoints());
            data = augment_with_gradient(data, mask);
        }
        return data;
    }
    if (o.input.empty()) throw ConfigError("missing input CSV (or --frames directory)");
    const NumericTable base = read_numeric_csv(o.input);
    std::vector<NumericTable> channels;
    channels.reserve(o.channel_paths.size());
    for (const std::string& path : o.channel_paths) channels.push_back(read_numeric_csv(path));
    std::optional<NumericTable> weights;
    if (!o.weights_path.empty()) {
        weights = read_numeric_csv(o.weights_path);
        double sum = 0.0;
        for (double w : weights->data) sum += w;
        if (std::abs(sum - 1.0) > 1e-9) {
            std::cerr << "note: weights sum to " << format_value(sum)
                      << "; renormalizing to 1\n";
        }
    }
    FunctionalDataset data =
        curves_from_tables(base, channels, weights ? &*weights : nullptr);
    if (!o.mask_path.empty()) data = data.with_mask(load_mask(o.mask_path, data.gridpoints()));
    if (o.derivative) data = augment_with_derivative(data);
    return data;
}

MapOptions map_options(const ScoreOpts& o) {
    MapOptions opt;
    opt.method = parse_method(o.method);
    opt.directions = o.directions;
    opt.seed = o.seed;
    opt.threads = o.threads;
    opt.rho = RhoConfig::with_c(o.c);
    return opt;
}

void echo_score_config(CsvWriter& w, const char* command, const ScoreOpts& o) {
    w.comment(std::string("command: ") + command);
    if (!o.input.empty()) w.comment("input: " + o.input);
    if (!o.frames_dir.empty()) w.comment("frames: " + o.frames_dir);
    for (const std::string& path : o.channel_paths) w.comment("channel: " + path);
    if (!o.weights_path.empty()) w.comment("weights: " + o.weights_path);
    if (!o.mask_path.empty()) w.comment("mask: " + o.mask_path);
    w.comment("method: " + o.method);
    w.comment("c: " + format_value(o.c));
    w.comment("directions: " + std::to_string(o.directions));
    w.comment("seed: " + std::to_string(o.seed));
    w.comment("quantile: " + format_value(o.quantile));
    if (o.derivative) w.comment("derivative: on");
    if (o.gradient) w.comment("gradient: on");
    if (o.weighted_variability) w.comment("weighted-variability: on");
}

// ---------------------------------------------------------------------------
// do: score rows of a numeric matrix

void run_do(const ScoreOpts& o) {
    if (o.input.empty()) throw ConfigError("missing input CSV");
    const NumericTable table = read_numeric_csv(o.input);
    const RhoConfig cfg = RhoConfig::with_c(o.c);
    const MapMethod method = parse_method(o.method);

    std::vector<double> scores(table.rows);
    std::size_t budget = 0;
    if (table.cols == 1) {
        const UnivariateSample sample = table_to_sample(table);
        if (method == MapMethod::Symmetric) {
            const LocationMad lm = location_mad_copy(sample.values());
            for (std::size_t i = 0; i < table.rows; ++i) {
                scores[i] = symmetric_outlyingness(sample.values()[i], lm);
            }
        } else {
            const ScalePair scales = half_sample_scales(sample, cfg);
            for (std::size_t i = 0; i < table.rows; ++i) {
                scores[i] = directional_outlyingness(sample.values()[i], scales);
            }
        }
    } else {
        const PointCloud cloud = table_to_cloud(table);
        if (method == MapMethod::Componentwise) {
            scores = ComponentwiseDo(cloud, cfg).evaluate_rows(cloud);
        } else {
            budget = o.directions != 0 ? o.directions : default_direction_count(cloud.dim());
            const DirectionSet dirs = generate_directions(cloud, budget, o.seed);
            scores = method == MapMethod::Symmetric
                         ? SdoProjection(cloud, dirs).evaluate_rows(cloud)
                         : DoProjection(cloud, dirs, cfg).evaluate_rows(cloud);
        }
    }
    const FlagResult flags = flag_outliers(scores, o.quantile);

    write_to(o.out_path, [&](std::ostream& os) {
        CsvWriter w(os);
        echo_score_config(w, "do", o);
        w.comment("n: " + std::to_string(table.rows) + " d: " + std::to_string(table.cols));
        if (budget != 0) w.comment("effective-directions: " + std::to_string(budget));
        w.comment("cutoff: " + format_value(flags.cutoff));
        const std::vector<std::string> head{"index", "score", "flag"};
        w.text_row(head);
        for (std::size_t i = 0; i < scores.size(); ++i) {
            const std::vector<double> row{static_cast<double>(i), scores[i],
                                          static_cast<double>(flags.flags[i])};
            w.value_row(row);
        }
    });
}

// ---------------------------------------------------------------------------
// fdo: functional summary (level, variability, combined score, flags)

void run_fdo(const ScoreOpts& o) {
    const FunctionalDataset data = load_functional(o);
    const OutlyingnessMap map = pointwise_map(data, map_options(o));
    const FunctionalSummary summary =
        summarize(map, data.weights(), o.quantile, o.weighted_variability);

    write_to(o.out_path, [&](std::ostream& os) {
        CsvWriter w(os);
        echo_score_config(w, "fdo", o);
        w.comment("n: " + std::to_string(data.size()) +
                  " gridpoints: " + std::to_string(data.gridpoints()) +
                  " channels: " + std::to_string(data.channels()));
        w.comment("median-level: " + format_value(summary.median_fdo));
        w.comment("median-variability: " + format_value(summary.median_vdo));
        w.comment("cutoff-level: " + format_value(summary.cutoff_fdo));
        w.comment("cutoff-combined: " + format_value(summary.cutoff_cfo));
        const std::vector<std::string> head{"index", "fdo", "vdo", "cfo", "flag"};
        w.text_row(head);
        for (std::size_t i = 0; i < data.size(); ++i) {
            const std::vector<double> row{static_cast<double>(i), summary.fdo[i], summary.vdo[i],
                                          summary.cfo[i],
                                          static_cast<double>(summary.flags[i])};
            w.value_row(row);
        }
    });
}

// ---------------------------------------------------------------------------
// heatmap: per-function, per-gridpoint score matrix

void run_heatmap(const ScoreOpts& o) {
    const FunctionalDataset data = load_functional(o);
    const OutlyingnessMap map = pointwise_map(data, map_options(o));

    write_to(o.out_path, [&](std::ostream& os) {
        CsvWriter w(os);
        echo_score_config(w, "heatmap", o);
        w.comment("n: " + std::to_string(map.n) +
                  " gridpoints: " + std::to_string(map.gridpoints));
        for (std::size_t i = 0; i < map.n; ++i) {
            w.value_row(map.profile(i));
        }
    });

    if (!o.svg_path.empty()) {
        double hi = 0.0;
        for (double v : map.values) {
            if (std::isfinite(v)) hi = std::max(hi, v);
        }
        if (hi <= 0.0) hi = 1.0;
        const std::string svg = svg_heatmap(map.n, map.gridpoints, map.values, 0.0, hi);
        write_to(o.svg_path, [&](std::ostream& os) { os << svg; });
    }
}

// ---------------------------------------------------------------------------
// fom: outlier map points and flagging frontier

void run_fom(const ScoreOpts& o) {
    const FunctionalDataset data = load_functional(o);
    const OutlyingnessMap map = pointwise_map(data, map_options(o));
    const FunctionalSummary summary =
        summarize(map, data.weights(), o.quantile, o.weighted_variability);
    const OutlierMapData fom = outlier_map(summary);

    write_to(o.out_path, [&](std::ostream& os) {
        CsvWriter w(os);
        echo_score_config(w, "fom", o);
        w.comment("median-level: " + format_value(summary.median_fdo));
        w.comment("median-variability: " + format_value(summary.median_vdo));
        w.comment("cutoff-combined: " + format_value(summary.cutoff_cfo));
        const std::vector<std::string> head{"kind", "index", "level", "variability", "flag"};
        w.text_row(head);
        for (std::size_t i = 0; i < fom.level.size(); ++i) {
            const std::vector<std::string> row{
                "point", std::to_string(i), format_value(fom.level[i]),
                format_value(fom.variability[i]), std::to_string(+fom.flags[i])};
            w.text_row(row);
        }
        for (std::size_t i = 0; i < fom.frontier_level.size(); ++i) {
            const std::vector<std::string> row{"frontier", std::to_string(i),
                                               format_value(fom.frontier_level[i]),
                                               format_value(fom.frontier_variability[i]), ""};
            w.text_row(row);
        }
    });

    if (!o.svg_path.empty()) {
        const std::string svg = svg_scatter(fom);
        write_to(o.svg_path, [&](std::ostream& os) { os << svg; });
    }
}

// ---------------------------------------------------------------------------
// theory: bias curves and influence functions as tables

struct TheoryOpts {
    std::string curve = "explosion";
    std::string points;
    std::string grid;
    double c = 2.1;
    double x = 1.0;
    std::string out_path;
};

void run_theory(const TheoryOpts& o) {
    const RhoConfig cfg = RhoConfig::with_c(o.c);
    const bool bias = o.curve == "explosion" || o.curve == "implosion";

    std::vector<double> grid;
    if (!o.points.empty() && !o.grid.empty()) {
        throw ConfigError("give either --points or --grid, not both");
    }
    if (!o.points.empty()) {
        grid = parse_value_list(o.points, "--points");
    } else if (!o.grid.empty()) {
        grid = parse_grid(o.grid, "--grid");
    } else {
        grid = bias ? parse_grid("0.01:0.24:24", "default grid")
                    : parse_grid("-3:3:121", "default grid");
    }

    const auto evaluate = [&](double v) -> double {
        if (o.curve == "explosion") return explosion_bias(v, cfg);
        if (o.curve == "implosion") return implosion_bias(v, cfg);
        if (o.curve == "if-median") return if_median(v);
        if (o.curve == "if-initial") return if_initial_scale(v);
        if (o.curve == "if-refined") return if_refined_scale(v, cfg);
        if (o.curve == "if-do") return if_outlyingness(o.x, v, cfg);
        throw ConfigError("unknown curve \"" + o.curve +
                          "\" (expected explosion, implosion, if-median, if-initial, "
                          "if-refined, or if-do)");
    };

    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = evaluate(grid[i]);

    write_to(o.out_path, [&](std::ostream& os) {
        CsvWriter w(os);
        w.comment("command: theory");
        w.comment("curve: " + o.curve);
        w.comment("c: " + format_value(o.c));
        if (o.curve == "if-do") w.comment("x: " + format_value(o.x));
        const std::vector<std::string> head{bias ? "eps" : "z", "value"};
        w.text_row(head);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const std::vector<double> row{grid[i], values[i]};
            w.value_row(row);
        }
    });
}

// ---------------------------------------------------------------------------
// simulate + bench

struct SimulateOpts {
    std::string study = "lognormal";
    std::size_t n = 1000;
    std::size_t d = 2;
    std::size_t m = 100;
    double fraction = 0.1;
    std::string locations;
    std::uint64_t seed = 1;
    double quantile = 0.995;
    double c = 2.1;
    std::size_t directions = 0;
    int threads = 0;
    std::string out_path;
};

const char* study_method_name(StudyMethod m) {
    return m == StudyMethod::Directional ? "do" : "sdo";
}

void run_simulate(const SimulateOpts& o) {
    StudyConfig cfg;
    if (o.study == "lognormal") {
        cfg.kind = StudyKind::Lognormal;
    } else if (o.study == "skewnormal") {
        cfg.kind = StudyKind::SkewNormal;
    } else if (o.study == "functional") {
        cfg.kind = StudyKind::Functional;
    } else if (o.study == "timing") {
        cfg.kind = StudyKind::Timing;
    } else {
        throw ConfigError("unknown study \"" + o.study +
                          "\" (expected lognormal, skewnormal, functional, or timing)");
    }
    cfg.n = o.n;
    cfg.d = o.d;
    cfg.m = o.m;
    cfg.fraction = o.fraction;
    if (o.locations.empty()) throw ConfigError("missing --locations list");
    cfg.locations = parse_value_list(o.locations, "--locations");
    cfg.seed = o.seed;
    cfg.quantile = o.quantile;
    cfg.rho = RhoConfig::with_c(o.c);
    cfg.directions = o.directions;
    cfg.threads = o.threads;

    const StudyResult result = run_study(cfg);

    write_to(o.out_path, [&](std::ostream& os) {
        CsvWriter w(os);
        w.comment("command: simulate");
        w.comment("study: " + o.study);
        w.comment("n: " + std::to_string(o.n));
        w.comment("d: " + std::to_string(o.d));
        w.comment("m: " + std::to_string(o.m));
        w.comment("fraction: " + format_value(o.fraction));
        w.comment("locations: " + o.locations);
        w.comment("seed: " + std::to_string(o.seed));
        w.comment("quantile: " + format_value(o.quantile));
        w.comment("c: " + format_value(o.c));
        w.comment("directions: " + std::to_string(o.directions));
        if (cfg.kind == StudyKind::Timing) {
            if (result.loglog_slope) {
                w.comment("loglog-slope: " + format_value(*result.loglog_slope));
            }
            const std::vector<std::string> head{"n", "mean_seconds"};
            w.text_row(head);
            for (const TimingCell& cell : result.timings) {
                const std::vector<std::string> row{std::to_string(cell.n),
                                                   format_value(cell.mean_seconds)};
                w.text_row(row);
            }
            return;
        }
        const std::vector<std::string> head{"location",          "method", "flagged_pct",
                                            "false_positive_pct", "m",      "n",
                                            "d",                 "seed"};
        w.text_row(head);
        for (const StudyCell& cell : result.cells) {
            const std::vector<std::string> row{
                format_value(cell.location),       study_method_name(cell.method),
                format_value(cell.flagged_pct),    format_value(cell.false_positive_pct),
                std::to_string(o.m),               std::to_string(o.n),
                std::to_string(o.d),               std::to_string(o.seed)};
            w.text_row(row);
        }
    });
}

struct BenchOpts {
    std::string sizes = "10000,100000,1000000";
    std::size_t reps = 3;
    std::uint64_t seed = 1;
    std::string out_path;
};

void run_bench(const BenchOpts& o) {
    const std::vector<double> raw = parse_value_list(o.sizes, "--sizes");
    std::vector<std::size_t> grid;
    grid.reserve(raw.size());
    for (double v : raw) {
        if (!(v >= 3.0)) throw ConfigError("--sizes entries must be at least 3");
        grid.push_back(static_cast<std::size_t>(std::llround(v)));
    }
    const StudyResult result = timing_benchmark(grid, o.reps, o.seed);

    write_to(o.out_path, [&](std::ostream& os) {
        CsvWriter w(os);
        w.comment("command: bench");
        w.comment("sizes: " + o.sizes);
        w.comment("reps: " + std::to_string(o.reps));
        w.comment("seed: " + std::to_string(o.seed));
        if (result.loglog_slope) {
            w.comment("loglog-slope: " + format_value(*result.loglog_slope));
        }
        const std::vector<std::string> head{"n", "mean_seconds"};
        w.text_row(head);
        for (const TimingCell& cell : result.timings) {
            const std::vector<std::string> row{std::to_string(cell.n),
                                               format_value(cell.mean_seconds)};
            w.text_row(row);
        }
    });
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"directional outlyingness toolkit"};
    app.require_subcommand(1);

    ScoreOpts do_opts, fdo_opts, heat_opts, fom_opts;
    TheoryOpts theory_opts;
    SimulateOpts sim_opts;
    BenchOpts bench_opts;

    CLI::App* cmd_do = app.add_subcommand("do", "score matrix rows (univariate or multivariate)");
    add_score_flags(cmd_do, do_opts, false);

    CLI::App* cmd_fdo = app.add_subcommand("fdo", "functional summary with flags");
    add_score_flags(cmd_fdo, fdo_opts, true);

    CLI::App* cmd_heat = app.add_subcommand("heatmap", "per-gridpoint score matrix");
    add_score_flags(cmd_heat, heat_opts, true);
    cmd_heat->add_option("--svg", heat_opts.svg_path, "also render an SVG heatmap");

    CLI::App* cmd_fom = app.add_subcommand("fom", "outlier map points and frontier");
    add_score_flags(cmd_fom, fom_opts, true);
    cmd_fom->add_option("--svg", fom_opts.svg_path, "also render an SVG scatter");

    CLI::App* cmd_theory = app.add_subcommand("theory", "bias and influence curve tables");
    cmd_theory->add_option("--curve", theory_opts.curve,
                           "explosion | implosion | if-median | if-initial | if-refined | if-do");
    cmd_theory->add_option("--points", theory_opts.points, "comma list of evaluation points");
    cmd_theory->add_option("--grid", theory_opts.grid, "lo:hi:count evaluation grid");
    cmd_theory->add_option("--c", theory_opts.c, "rho tuning constant");
    cmd_theory->add_option("--x", theory_opts.x, "fixed point for if-do");
    cmd_theory->add_option("--out", theory_opts.out_path, "output CSV path (default stdout)");

    CLI::App* cmd_sim = app.add_subcommand("simulate", "flag-percentage study sweep");
    cmd_sim->add_option("--study", sim_opts.study, "lognormal | skewnormal | functional | timing");
    cmd_sim->add_option("--n", sim_opts.n, "sample size per replication");
    cmd_sim->add_option("--d", sim_opts.d, "dimension (or curve gridpoints)");
    cmd_sim->add_option("--m", sim_opts.m, "replications per location");
    cmd_sim->add_option("--frac", sim_opts.fraction, "contamination fraction");
    cmd_sim->add_option("--locations", sim_opts.locations, "comma list of x or L values");
    cmd_sim->add_option("--seed", sim_opts.seed, "master RNG seed");
    cmd_sim->add_option("--quantile", sim_opts.quantile, "cutoff quantile");
    cmd_sim->add_option("--c", sim_opts.c, "rho tuning constant");
    cmd_sim->add_option("--directions", sim_opts.directions, "projection budget");
    cmd_sim->add_option("--threads", sim_opts.threads, "worker threads (values unaffected)");
    cmd_sim->add_option("--out", sim_opts.out_path, "output CSV path (default stdout)");

    CLI::App* cmd_bench = app.add_subcommand("bench", "univariate timing benchmark");
    cmd_bench->add_option("--sizes", bench_opts.sizes, "comma list of sample sizes");
    cmd_bench->add_option("--reps", bench_opts.reps, "repetitions per size");
    cmd_bench->add_option("--seed", bench_opts.seed, "master RNG seed");
    cmd_bench->add_option("--out", bench_opts.out_path, "output CSV path (default stdout)");

    try {
        app.parse(argc, argv);
        if (app.got_subcommand(cmd_do)) run_do(do_opts);
        if (app.got_subcommand(cmd_fdo)) run_fdo(fdo_opts);
        if (app.got_subcommand(cmd_heat)) run_heatmap(heat_opts);
        if (app.got_subcommand(cmd_fom)) run_fom(fom_opts);
        if (app.got_subcommand(cmd_theory)) run_theory(theory_opts);
        if (app.got_subcommand(cmd_sim)) run_simulate(sim_opts);
        if (app.got_subcommand(cmd_bench)) run_bench(bench_opts);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 4; // help/version exit 0; any parse failure is a config error
    } catch (const Error& e) {
        const char* category = e.kind() == ErrorKind::Input        ? "input"
                               : e.kind() == ErrorKind::Degenerate ? "degenerate-data"
                                                                   : "config";
        std::cerr << "error category=" << category << ": " << e.what() << "\n";
        switch (e.kind()) {
        case ErrorKind::Input: return 2;
        case ErrorKind::Degenerate: return 3;
        case ErrorKind::Config: return 4;
        }
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error category=internal: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
