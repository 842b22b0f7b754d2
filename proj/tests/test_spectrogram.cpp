#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <numbers>

#include "hrvson/error.hpp"
#include "hrvson/spectrogram.hpp"
#include "hrvson/text.hpp"
#include "oracles.hpp"

using namespace hrvson;

namespace {

AudioBuffer sine(double hz, double amp, std::size_t n, int fs = 44100) {
  AudioBuffer b{std::vector<double>(n), fs};
  for (std::size_t t = 0; t < n; ++t) b.samples[t] = amp * std::sin(2.0 * std::numbers::pi * hz * t / fs);
  return b;
}

double luminance(const Rgb& c) { return 0.2126 * c[0] + 0.7152 * c[1] + 0.0722 * c[2]; }

}  // namespace

TEST_CASE("frame count") {
  CHECK(frame_count(2048, 2048, 512) == 1);
  CHECK(frame_count(2047, 2048, 512) == 0);
  CHECK(frame_count(44100, 2048, 512) == 83);
  CHECK(frame_count(220500, 2048, 512) == (220500 - 2048) / 512 + 1);
}

TEST_CASE("params validation") {
  CHECK_NOTHROW(SpectrogramParams{}.validate());
  CHECK_THROWS_AS((SpectrogramParams{.dft_size = 1000}.validate()), ConfigError);
  CHECK_THROWS_AS((SpectrogramParams{.dft_size = 128}.validate()), ConfigError);
  CHECK_THROWS_AS((SpectrogramParams{.hop = 0}.validate()), ConfigError);
  CHECK_THROWS_AS((SpectrogramParams{.hop = 4096}.validate()), ConfigError);
  CHECK_THROWS_AS((SpectrogramParams{.floor_db = 0}.validate()), ConfigError);
}

TEST_CASE("440 Hz sine peaks within one bin") {
  const auto spec = compute_spectrogram(sine(440.0, 0.5, 44100));
  CHECK(spec.n_bins == 1025);
  CHECK(spec.n_frames == 83);
  CHECK(spec.bin_hz == doctest::Approx(44100.0 / 2048));
  for (std::size_t f = 0; f < spec.n_frames; ++f) {
    const double peak_hz = spec.peak_bin(f) * spec.bin_hz;
    REQUIRE(std::abs(peak_hz - 440.0) <= spec.bin_hz);
  }
}

TEST_CASE("dB scale against a direct DFT") {
  // bin-centred full-scale sine reads 0 dB
  const double hz = 100 * 44100.0 / 2048;
  const auto spec = compute_spectrogram(sine(hz, 1.0, 2048));
  REQUIRE(spec.n_frames == 1);
  CHECK(spec.at(0, 100) == doctest::Approx(0.0).scale(1.0).epsilon(1e-6));

  const auto buf = sine(1234.5, 0.3, 4096);
  const auto s2 = compute_spectrogram(buf, {.dft_size = 2048, .hop = 1024, .floor_db = -200});
  const auto w = oracle::hann(2048);
  double wsum = 0;
  for (double x : w) wsum += x;
  for (std::size_t f = 0; f < s2.n_frames; ++f) {
    const auto mag = oracle::dft_magnitude(buf.samples, f * 1024, 2048, w);
    for (std::size_t k = 1; k < 1024; k += 37) {
      const double expect = std::max(20.0 * std::log10(2.0 * mag[k] / wsum), -200.0);
      CHECK(s2.at(f, k) == doctest::Approx(expect).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("silence sits on the floor") {
  const auto spec = compute_spectrogram(AudioBuffer{std::vector<double>(8192, 0.0), 44100});
  for (double v : spec.db) REQUIRE(v == -90.0);
  const auto img = render_image(spec, 40, 30);
  for (std::size_t y = 0; y < img.height; ++y) {
    for (std::size_t x = 0; x < img.width; ++x) REQUIRE(img.pixel(x, y) == colour_map()[0]);
  }
}

TEST_CASE("short input is a data error") {
  CHECK_THROWS_AS(compute_spectrogram(AudioBuffer{std::vector<double>(100, 0.0), 44100}), DataError);
}

TEST_CASE("colour map") {
  const auto& lut = colour_map();
  CHECK(lut[0] == Rgb{0, 0, 0});
  CHECK(lut[255] == Rgb{255, 255, 255});
  for (std::size_t i = 1; i < lut.size(); ++i) CHECK(luminance(lut[i]) >= luminance(lut[i - 1]));
  CHECK(colour_index(-90, -90) == 0);
  CHECK(colour_index(-200, -90) == 0);
  CHECK(colour_index(0, -90) == 255);
  CHECK(colour_index(10, -90) == 255);
}

TEST_CASE("image orientation") {
  // a high tone lights a row near the top, not the bottom or top edge
  const auto spec = compute_spectrogram(sine(16000.0, 0.9, 44100));
  const auto img = render_image(spec, 50, 100);
  CHECK(img.width == 50);
  CHECK(img.height == 100);
  // bin k occupies row height-1 - floor(k * height / n_bins)
  const std::size_t row = 99 - static_cast<std::size_t>(16000.0 / spec.bin_hz * 100 / spec.n_bins);
  CHECK(luminance(img.pixel(25, row)) > luminance(img.pixel(25, 99)));
  CHECK(luminance(img.pixel(25, row)) > luminance(img.pixel(25, 0)));
}

TEST_CASE("png file and sidecar") {
  const auto spec = compute_spectrogram(sine(440.0, 0.5, 22050));
  const auto path = std::filesystem::temp_directory_path() / "hrvson_spec_test.png";
  render_png(spec, path, 120, 64);
  const auto img = read_png(path);
  CHECK(img.width == 64);
  CHECK(img.height == 120);
  CHECK(img.rgb == render_image(spec, 64, 120).rgb);
  const auto side = text::read_file(path.string() + ".txt");
  CHECK(side == axis_sidecar(spec, 64, 120));
  CHECK(side.find("22050") != std::string::npos);
  std::filesystem::remove(path);
  std::filesystem::remove(path.string() + ".txt");
  CHECK_THROWS_AS(read_png("/nonexistent/a.png"), IoError);
}
