#include "hrvson/spectrogram.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>

#include <fftw3.h>
#include <png.h>

#include "hrvson/error.hpp"
#include "hrvson/text.hpp"

namespace hrvson {

namespace {

struct FftwPlanDeleter {
  void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

struct Anchor {
  std::size_t index;
  Rgb colour;
};

// Control points of the spectrogram colour ramp.
constexpr Anchor kRamp[] = {
    {0, {0, 0, 0}},        {40, {20, 0, 90}},      {90, {120, 0, 140}},  {140, {210, 30, 60}},
    {190, {250, 120, 0}},  {230, {255, 220, 40}},  {255, {255, 255, 255}},
};

std::array<Rgb, 256> build_colour_map() {
  std::array<Rgb, 256> lut{};
  for (std::size_t s = 0; s + 1 < std::size(kRamp); ++s) {
    const auto& a = kRamp[s];
    const auto& b = kRamp[s + 1];
    for (std::size_t i = a.index; i <= b.index; ++i) {
      const double t = static_cast<double>(i - a.index) / static_cast<double>(b.index - a.index);
      for (std::size_t c = 0; c < 3; ++c) {
        const double v = (1.0 - t) * a.colour[c] + t * b.colour[c];
        lut[i][c] = static_cast<std::uint8_t>(std::lround(v));
      }
    }
  }
  return lut;
}

struct PngWriteGuard {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngWriteGuard() { png_destroy_write_struct(&png, &info); }
};

struct PngReadGuard {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngReadGuard() { png_destroy_read_struct(&png, &info, nullptr); }
};

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};

}  // namespace

void SpectrogramParams::validate() const {
  if (dft_size < 256 || (dft_size & (dft_size - 1)) != 0) {
    throw ConfigError("DFT size must be a power of two >= 256");
  }
  if (hop == 0 || hop > dft_size) throw ConfigError("hop must satisfy 0 < hop <= DFT size");
  if (!(floor_db < 0.0) || !std::isfinite(floor_db)) throw ConfigError("floor must be below 0 dBFS");
}

std::size_t Spectrogram::peak_bin(std::size_t frame, std::size_t lo_bin, std::size_t hi_bin) const {
  hi_bin = std::min(hi_bin, n_bins);
  std::size_t best = lo_bin;
  for (std::size_t k = lo_bin; k < hi_bin; ++k) {
    if (at(frame, k) > at(frame, best)) best = k;
  }
  return best;
}

std::size_t frame_count(std::size_t n_samples, std::size_t dft_size, std::size_t hop) {
  if (n_samples < dft_size) return 0;
  return (n_samples - dft_size) / hop + 1;
}

Spectrogram compute_spectrogram(const AudioBuffer& buffer, const SpectrogramParams& params) {
  params.validate();
  const std::size_t n = params.dft_size;
  if (buffer.samples.size() < n) {
    throw DataError("audio has " + std::to_string(buffer.samples.size()) +
                    " samples, fewer than the DFT size " + std::to_string(n));
  }

  Spectrogram spec;
  spec.n_frames = frame_count(buffer.samples.size(), n, params.hop);
  spec.n_bins = n / 2 + 1;
  spec.sample_rate_hz = buffer.sample_rate_hz;
  spec.bin_hz = static_cast<double>(buffer.sample_rate_hz) / static_cast<double>(n);
  spec.frame_hop_s = static_cast<double>(params.hop) / static_cast<double>(buffer.sample_rate_hz);
  spec.floor_db = params.floor_db;
  spec.dft_size = n;
  spec.hop = params.hop;
  spec.db.resize(spec.n_frames * spec.n_bins);

  std::vector<double> window(n);
  double window_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                     static_cast<double>(n));
    window_sum += window[i];
  }

  std::unique_ptr<double, FftwFree> in(fftw_alloc_real(n));
  std::unique_ptr<fftw_complex, FftwFree> out(fftw_alloc_complex(spec.n_bins));
  std::unique_ptr<fftw_plan_s, FftwPlanDeleter> plan(
      fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE));
  if (!plan) throw std::runtime_error("FFTW plan creation failed");

  for (std::size_t f = 0; f < spec.n_frames; ++f) {
    const double* frame = buffer.samples.data() + f * params.hop;
    for (std::size_t i = 0; i < n; ++i) in.get()[i] = frame[i] * window[i];
    fftw_execute(plan.get());
    for (std::size_t k = 0; k < spec.n_bins; ++k) {
      const double re = out.get()[k][0];
      const double im = out.get()[k][1];
      const double scale = (k == 0 || k == n / 2) ? 1.0 : 2.0;
      const double amp = scale * std::hypot(re, im) / window_sum;
      const double db = amp > 0.0 ? 20.0 * std::log10(amp) : params.floor_db;
      spec.db[f * spec.n_bins + k] = std::max(db, params.floor_db);
    }
  }
  return spec;
}

const std::array<Rgb, 256>& colour_map() {
  static const std::array<Rgb, 256> lut = build_colour_map();
  return lut;
}

std::size_t colour_index(double db, double floor_db) {
  const double t = std::clamp((db - floor_db) / (0.0 - floor_db), 0.0, 1.0);
  return static_cast<std::size_t>(std::lround(t * 255.0));
}

Rgb Image::pixel(std::size_t x, std::size_t y) const {
  const std::size_t at = (y * width + x) * 3;
  return {rgb[at], rgb[at + 1], rgb[at + 2]};
}

Image render_image(const Spectrogram& spec, std::size_t width_px, std::size_t height_px) {
  if (width_px == 0 || height_px == 0) throw ConfigError("image dimensions must be positive");
  if (spec.n_frames == 0 || spec.n_bins == 0) throw DataError("empty spectrogram");
  const auto& lut = colour_map();
  Image img;
  img.width = width_px;
  img.height = height_px;
  img.rgb.resize(width_px * height_px * 3);
  for (std::size_t y = 0; y < height_px; ++y) {
    const std::size_t from_bottom = height_px - 1 - y;
    const std::size_t bin = from_bottom * spec.n_bins / height_px;
    for (std::size_t x = 0; x < width_px; ++x) {
      const std::size_t frame = x * spec.n_frames / width_px;
      const auto& c = lut[colour_index(spec.at(frame, bin), spec.floor_db)];
      std::copy(c.begin(), c.end(), img.rgb.begin() + static_cast<std::ptrdiff_t>((y * width_px + x) * 3));
    }
  }
  return img;
}

void write_png(const Image& image, const std::filesystem::path& path) {
  std::unique_ptr<std::FILE, FileCloser> fp(std::fopen(path.string().c_str(), "wb"));
  if (!fp) throw IoError("cannot open '" + path.string() + "' for writing");

  PngWriteGuard g;
  g.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!g.png) throw std::runtime_error("png_create_write_struct failed");
  g.info = png_create_info_struct(g.png);
  if (!g.info) throw std::runtime_error("png_create_info_struct failed");
  if (setjmp(png_jmpbuf(g.png))) throw IoError("PNG encoding failed for '" + path.string() + "'");

  png_init_io(g.png, fp.get());
  png_set_IHDR(g.png, g.info, static_cast<png_uint_32>(image.width),
               static_cast<png_uint_32>(image.height), 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(g.png, g.info);
  for (std::size_t y = 0; y < image.height; ++y) {
    png_write_row(g.png, const_cast<png_bytep>(image.rgb.data() + y * image.width * 3));
  }
  png_write_end(g.png, nullptr);
  if (std::fflush(fp.get()) != 0) throw IoError("write failed for '" + path.string() + "'");
}

Image read_png(const std::filesystem::path& path) {
  std::unique_ptr<std::FILE, FileCloser> fp(std::fopen(path.string().c_str(), "rb"));
  if (!fp) throw IoError("cannot open '" + path.string() + "' for reading");

  Image img;
  PngReadGuard g;
  g.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!g.png) throw std::runtime_error("png_create_read_struct failed");
  g.info = png_create_info_struct(g.png);
  if (!g.info) throw std::runtime_error("png_create_info_struct failed");
  if (setjmp(png_jmpbuf(g.png))) throw DataError("PNG decoding failed for '" + path.string() + "'");

  png_init_io(g.png, fp.get());
  png_read_info(g.png, g.info);
  if (png_get_color_type(g.png, g.info) != PNG_COLOR_TYPE_RGB ||
      png_get_bit_depth(g.png, g.info) != 8) {
    throw DataError("expected an 8-bit RGB PNG: " + path.string());
  }
  img.width = png_get_image_width(g.png, g.info);
  img.height = png_get_image_height(g.png, g.info);
  img.rgb.resize(img.width * img.height * 3);
  for (std::size_t y = 0; y < img.height; ++y) {
    png_read_row(g.png, img.rgb.data() + y * img.width * 3, nullptr);
  }
  png_read_end(g.png, nullptr);
  return img;
}

std::string axis_sidecar(const Spectrogram& spec, std::size_t width_px, std::size_t height_px) {
  const double duration =
      static_cast<double>((spec.n_frames - 1) * spec.hop + spec.dft_size) / spec.sample_rate_hz;
  std::string out;
  out += "width_px = " + std::to_string(width_px) + "\n";
  out += "height_px = " + std::to_string(height_px) + "\n";
  out += "time_min_s = 0\n";
  out += "time_max_s = " + text::sig6(duration) + "\n";
  out += "freq_min_hz = 0\n";
  out += "freq_max_hz = " + text::sig6(spec.sample_rate_hz / 2.0) + "\n";
  out += "magnitude_min_dbfs = " + text::sig6(spec.floor_db) + "\n";
  out += "magnitude_max_dbfs = 0\n";
  out += "frames = " + std::to_string(spec.n_frames) + "\n";
  out += "bins = " + std::to_string(spec.n_bins) + "\n";
  out += "dft_size = " + std::to_string(spec.dft_size) + "\n";
  out += "hop = " + std::to_string(spec.hop) + "\n";
  out += "window = hann\n";
  return out;
}

void render_png(const Spectrogram& spec, const std::filesystem::path& path, std::size_t height_px,
                std::size_t width_px) {
  write_png(render_image(spec, width_px, height_px), path);
  text::write_file(path.string() + ".txt", axis_sidecar(spec, width_px, height_px));
}

}  // namespace hrvson
