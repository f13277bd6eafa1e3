#pragma once

// Frame ingestion for image/video analyses. Supported sources: portable
// graymaps and pixmaps (P2/P5/P3/P6, 8-bit) and single-frame numeric CSV.
// Pixel values are carried as reals on the 0-255 scale.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dirout/functional.hpp"

namespace dirout {

// Ordered stack of frames sharing one (rows, cols, channels) geometry,
// stored frame-major with interleaved channels.
struct FrameSequence {
    std::size_t frames = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t channels = 0;
    std::vector<double> data;

    double at(std::size_t f, std::size_t r, std::size_t c, std::size_t ch) const {
        return data[((f * rows + r) * cols + c) * channels + ch];
    }
};

// Reads one PGM/PPM file (any of the four variants); header comments allowed,
// maximum value at most 255. Returns a single-frame sequence.
FrameSequence read_pnm(const std::string& path);

// Reads frames in the given order: .pgm/.ppm by magic number, anything else
// as one-frame numeric CSV (grayscale). Throws InputError on geometry drift
// between frames or unreadable input.
FrameSequence read_frames(const std::vector<std::string>& paths);

// All regular files in a directory with recognized extensions (.pgm, .ppm,
// .csv), ordered by filename.
std::vector<std::string> list_frame_files(const std::string& dir_path);

// Repackages frames as a functional dataset on the pixel lattice: one
// function per frame, one channel per color plane.
FunctionalDataset frames_to_dataset(const FrameSequence& seq);

// Writes an 8-bit PGM: values are linearly mapped from [lo, hi] to 0-255 and
// clamped. Plain-text variant (P2) for diffable output.
void write_pgm(const std::string& path, std::size_t rows, std::size_t cols,
               const std::vector<double>& values, double lo, double hi);

} // namespace dirout
