#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hrvson/sonifier.hpp"

namespace hrvson {

struct SpectrogramParams {
  std::size_t dft_size = 2048;  // power of two, >= 256
  std::size_t hop = 512;        // 0 < hop <= dft_size
  double floor_db = -90.0;

  void validate() const;
};

// Hann-windowed magnitude frames in dB re full scale: a full-scale sine
// centred on a bin reads 0 dB. Values are clamped at floor_db.
struct Spectrogram {
  std::size_t n_frames = 0;
  std::size_t n_bins = 0;  // dft_size / 2 + 1
  std::vector<double> db;  // row-major [frame][bin]
  double frame_hop_s = 0.0;
  double bin_hz = 0.0;
  int sample_rate_hz = 0;
  double floor_db = -90.0;
  std::size_t dft_size = 0;
  std::size_t hop = 0;

  double at(std::size_t frame, std::size_t bin) const { return db[frame * n_bins + bin]; }
  // Largest bin in [lo_bin, hi_bin) of one frame.
  std::size_t peak_bin(std::size_t frame, std::size_t lo_bin = 0, std::size_t hi_bin = SIZE_MAX) const;
};

// floor((N - dft_size) / hop) + 1 for N >= dft_size.
std::size_t frame_count(std::size_t n_samples, std::size_t dft_size, std::size_t hop);

Spectrogram compute_spectrogram(const AudioBuffer& buffer, const SpectrogramParams& params = {});

// Colour map from floor_db (index 0) to 0 dBFS (index 255). The table is a
// piecewise-linear ramp through black, navy, purple, red, orange, yellow and
// white; brightness never decreases with the index.
using Rgb = std::array<std::uint8_t, 3>;
const std::array<Rgb, 256>& colour_map();
std::size_t colour_index(double db, double floor_db);

struct Image {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> rgb;  // row-major from the top row, 3 bytes per pixel

  Rgb pixel(std::size_t x, std::size_t y) const;
};

// Nearest-neighbour resampling: x runs over frames left to right, y over bins
// with the lowest bin on the bottom row.
Image render_image(const Spectrogram& spec, std::size_t width_px, std::size_t height_px);

void write_png(const Image& image, const std::filesystem::path& path);
Image read_png(const std::filesystem::path& path);

// Writes the PNG plus "<path>.txt" with the axis extents.
void render_png(const Spectrogram& spec, const std::filesystem::path& path, std::size_t height_px,
                std::size_t width_px);
std::string axis_sidecar(const Spectrogram& spec, std::size_t width_px, std::size_t height_px);

}  // namespace hrvson
