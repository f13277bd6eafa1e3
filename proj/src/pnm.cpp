#include "dirout/pnm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "dirout/csv.hpp"
#include "dirout/errors.hpp"

namespace dirout {

namespace {

// Reads the next whitespace-separated token, skipping '#' comments that run
// to the end of their line.
bool next_token(std::istream& in, std::string& token) {
    token.clear();
    int ch;
    while ((ch = in.get()) != EOF) {
        if (ch == '#') {
            while ((ch = in.get()) != EOF && ch != '\n') {
            }
            continue;
        }
        if (std::isspace(ch)) {
            if (!token.empty()) return true;
            continue;
        }
        token.push_back(static_cast<char>(ch));
    }
    return !token.empty();
}

std::size_t next_size(std::istream& in, const std::string& path, const char* what) {
    std::string token;
    if (!next_token(in, token)) {
        throw InputError(path + ": truncated header, missing " + what);
    }
    try {
        return static_cast<std::size_t>(std::stoull(token));
    } catch (const std::exception&) {
        throw InputError(path + ": malformed " + std::string(what) + " \"" + token + "\"");
    }
}

FrameSequence csv_frame(const std::string& path) {
    const NumericTable table = read_numeric_csv(path);
    FrameSequence seq;
    seq.frames = 1;
    seq.rows = table.rows;
    seq.cols = table.cols;
    seq.channels = 1;
    seq.data = table.data;
    return seq;
}

} // namespace

FrameSequence read_pnm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open \"" + path + "\" for reading");

    std::string magic;
    if (!next_token(in, magic)) throw InputError(path + ": empty file");
    const bool plain = magic == "P2" || magic == "P3";
    const bool binary = magic == "P5" || magic == "P6";
    if (!plain && !binary) {
        throw InputError(path + ": unsupported magic \"" + magic +
                         "\" (expected P2, P3, P5, or P6)");
    }
    const std::size_t channels = (magic == "P3" || magic == "P6") ? 3 : 1;

    FrameSequence seq;
    seq.frames = 1;
    seq.channels = channels;
    seq.cols = next_size(in, path, "width");
    seq.rows = next_size(in, path, "height");
    const std::size_t maxval = next_size(in, path, "maximum value");
    if (maxval == 0 || maxval > 255) {
        throw InputError(path + ": maximum value " + std::to_string(maxval) +
                         " outside the supported 8-bit range");
    }
    if (seq.rows == 0 || seq.cols == 0) {
        throw InputError(path + ": zero image dimension");
    }

    // Stored samples run 0..maxval with maxval = full intensity; carry every
    // frame on the common 0-255 scale (identity when maxval is 255).
    const double scale = 255.0 / static_cast<double>(maxval);

    const std::size_t count = seq.rows * seq.cols * channels;
    seq.data.resize(count);
    if (plain) {
        std::string token;
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t v = next_size(in, path, "pixel value");
            if (v > maxval) {
                throw InputError(path + ": pixel value " + std::to_string(v) +
                                 " exceeds the declared maximum " + std::to_string(maxval));
            }
            seq.data[i] = static_cast<double>(v) * scale;
        }
    } else {
        // Binary rasters start exactly one whitespace byte after the maxval.
        std::vector<unsigned char> raw(count);
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(count));
        if (static_cast<std::size_t>(in.gcount()) != count) {
            throw InputError(path + ": truncated raster (expected " + std::to_string(count) +
                             " bytes, got " + std::to_string(in.gcount()) + ")");
        }
        for (std::size_t i = 0; i < count; ++i) {
            if (raw[i] > maxval) {
                throw InputError(path + ": pixel value " + std::to_string(+raw[i]) +
                                 " exceeds the declared maximum " + std::to_string(maxval));
            }
            seq.data[i] = static_cast<double>(raw[i]) * scale;
        }
    }
    return seq;
}

FrameSequence read_frames(const std::vector<std::string>& paths) {
    if (paths.empty()) throw InputError("no frames to read");
    FrameSequence all;
    for (const std::string& path : paths) {
        std::string ext = std::filesystem::path(path).extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        const FrameSequence one =
            (ext == ".pgm" || ext == ".ppm") ? read_pnm(path) : csv_frame(path);
        if (all.frames == 0) {
            all = one;
        } else {
            if (one.rows != all.rows || one.cols != all.cols || one.channels != all.channels) {
                throw InputError(path + ": frame geometry " + std::to_string(one.rows) + "x" +
                                 std::to_string(one.cols) + "x" + std::to_string(one.channels) +
                                 " drifts from the first frame's " + std::to_string(all.rows) +
                                 "x" + std::to_string(all.cols) + "x" +
                                 std::to_string(all.channels));
            }
            all.data.insert(all.data.end(), one.data.begin(), one.data.end());
            ++all.frames;
        }
    }
    return all;
}

std::vector<std::string> list_frame_files(const std::string& dir_path) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir_path)) {
        throw InputError("\"" + dir_path + "\" is not a directory");
    }
    std::vector<std::string> out;
    for (const fs::directory_entry& entry : fs::directory_iterator(dir_path)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (ext == ".pgm" || ext == ".ppm" || ext == ".csv") {
            out.push_back(entry.path().string());
        }
    }
    std::sort(out.begin(), out.end());
    if (out.empty()) {
        throw InputError("\"" + dir_path + "\" holds no .pgm/.ppm/.csv frames");
    }
    return out;
}

FunctionalDataset frames_to_dataset(const FrameSequence& seq) {
    if (seq.frames == 0) throw InputError("empty frame sequence");
    // Frame storage is already (frame, pixel, channel)-major, matching the
    // dataset layout on the row-major pixel lattice.
    return FunctionalDataset::images(Grid2D{seq.rows, seq.cols}, seq.frames, seq.channels,
                                     seq.data);
}

void write_pgm(const std::string& path, std::size_t rows, std::size_t cols,
               const std::vector<double>& values, double lo, double hi) {
    if (values.size() != rows * cols) {
        throw ConfigError("pgm payload size " + std::to_string(values.size()) +
                          " does not match " + std::to_string(rows) + "x" +
                          std::to_string(cols));
    }
    if (!(hi > lo)) throw ConfigError("pgm range must satisfy lo < hi");
    std::ofstream out(path);
    if (!out) throw InputError("cannot open \"" + path + "\" for writing");
    out << "P2\n" << cols << ' ' << rows << "\n255\n";
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            double v = (values[r * cols + c] - lo) / (hi - lo);
            v = std::clamp(v, 0.0, 1.0);
            out << static_cast<int>(std::lround(v * 255.0));
            out << (c + 1 == cols ? '\n' : ' ');
        }
    }
}

} // namespace dirout
