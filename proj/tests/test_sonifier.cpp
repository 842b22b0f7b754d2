#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "hrvson/error.hpp"
#include "hrvson/sonifier.hpp"
#include "oracles.hpp"

using namespace hrvson;

namespace {

constexpr double kFs = 44100.0;

double tone_gain(const std::vector<double>& y, std::size_t skip) {
  double peak = 0.0;
  for (std::size_t n = skip; n < y.size(); ++n) peak = std::max(peak, std::abs(y[n]));
  return peak;
}

// Bin of the largest value of `power` within +-span_hz of `hz`.
std::size_t local_peak(const std::vector<double>& power, double bin_hz, double hz, double span_hz) {
  const auto lo = static_cast<std::size_t>(std::floor((hz - span_hz) / bin_hz));
  const auto hi = static_cast<std::size_t>(std::ceil((hz + span_hz) / bin_hz));
  std::size_t best = lo;
  for (std::size_t k = lo; k <= hi; ++k) {
    if (power[k] > power[best]) best = k;
  }
  return best;
}

}  // namespace

TEST_CASE("normalize_series") {
  CHECK(normalize_series(std::vector<double>{800, 900, 1000}) == std::vector<double>{0, 0.5, 1});
  CHECK(normalize_series(std::vector<double>{5, 5, 5}) == std::vector<double>{0.5, 0.5, 0.5});
  CHECK(normalize_series(std::vector<double>{0, 1}) == std::vector<double>{0, 1});
  CHECK_THROWS_AS(normalize_series(std::vector<double>{}), DataError);
  CHECK_THROWS_AS(normalize_series(std::vector<double>{1, NAN}), DataError);
}

TEST_CASE("map_controls") {
  SonificationConfig cfg;
  cfg.f0_min_hz = 110;
  cfg.f0_max_hz = 440;
  auto c = map_controls(0.0, cfg);
  CHECK(c.f0_hz == 110.0);
  CHECK(c.alpha == 0.0);
  c = map_controls(1.0, cfg);
  CHECK(c.f0_hz == 440.0);
  CHECK(c.alpha == 1.0);
  c = map_controls(0.5, cfg);
  CHECK(c.f0_hz == 275.0);
  CHECK(c.alpha == 0.5);
  CHECK_THROWS(map_controls(1.5, cfg));
}

TEST_CASE("interpolate_vowel") {
  const auto a = tenor_a();
  const auto i = tenor_i();
  CHECK(interpolate_vowel(0.0, a, i) == a);
  CHECK(interpolate_vowel(1.0, a, i) == i);
  const auto mid = interpolate_vowel(0.5, a, i);
  CHECK(mid.formants[0].center_hz == 470.0);
  CHECK(mid.formants[0].bandwidth_hz == 60.0);
  CHECK(mid.formants[1].gain_db == -10.5);
  CHECK_THROWS(interpolate_vowel(-0.1, a, i));
}

TEST_CASE("vowel state validation") {
  CHECK_NOTHROW(tenor_a().validate(kFs));
  CHECK_NOTHROW(tenor_i().validate(kFs));
  auto v = tenor_a();
  v.formants[2].center_hz = 900;  // below f2
  CHECK_THROWS_AS(v.validate(kFs), ConfigError);
  v = tenor_a();
  v.formants[0].bandwidth_hz = 0;
  CHECK_THROWS_AS(v.validate(kFs), ConfigError);
  v = tenor_a();
  v.formants[3].center_hz = 30000;
  CHECK_THROWS_AS(v.validate(kFs), ConfigError);
}

TEST_CASE("sonification config validation") {
  SonificationConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.f0_max_hz = 700;  // above both first formants
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.f0_min_hz = 500;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.seg_dur_s = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.glide_ms = 600;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("vowel table file") {
  const auto text = format_vowel_table(VowelTable{});
  const auto back = parse_vowel_table(text);
  CHECK(back.a == tenor_a());
  CHECK(back.i == tenor_i());
  CHECK_THROWS_AS(parse_vowel_table("[a]\nf1 = [650, 80, 0]\n"), ConfigError);
  CHECK_THROWS_AS(parse_vowel_table("f1 = [650, 80, 0]\n"), ConfigError);
  CHECK_THROWS_AS(parse_vowel_table("[a]\nf5 = [650, 80, 0]\n"), ConfigError);
  CHECK_THROWS_AS(parse_vowel_table("[a]\nf1 = [650, 80]\n"), ConfigError);
}

TEST_CASE("harmonic count") {
  CHECK(harmonic_count(11025, kFs) == 1);
  CHECK(harmonic_count(110, kFs) == 180);
  CHECK(harmonic_count(440, kFs) == 45);  // 45 * 440 = 19800 < 19845
  CHECK(harmonic_count(19845, kFs) == 0);
}

TEST_CASE("pulse oscillator") {
  SUBCASE("single harmonic is a pure cosine") {
    const auto y = pulse_oscillator(11025, 64, kFs);
    for (std::size_t n = 0; n < y.size(); ++n) {
      CHECK(y[n] == doctest::Approx(std::cos(std::numbers::pi * static_cast<double>(n) / 2.0)).epsilon(1e-12).scale(1.0));
    }
  }
  SUBCASE("matches the direct harmonic sum") {
    const double f0 = 233.3;
    const auto y = pulse_oscillator(f0, 2000, kFs);
    const std::size_t k = harmonic_count(f0, kFs);
    for (std::size_t n = 0; n < y.size(); n += 7) {
      double direct = 0.0;
      const double phase = std::fmod(f0 * static_cast<double>(n) / kFs, 1.0);
      for (std::size_t h = 1; h <= k; ++h) direct += std::cos(2.0 * std::numbers::pi * h * phase);
      CHECK(std::abs(y[n] - direct / static_cast<double>(k)) < 1e-9);
    }
  }
  SUBCASE("phase is continuous across calls") {
    PulseOscillator whole(kFs), split(kFs);
    std::vector<double> a(1000), b(1000);
    whole.render(317.0, a);
    split.render(317.0, std::span<double>(b.data(), 333));
    split.render(317.0, std::span<double>(b.data() + 333, 667));
    for (std::size_t n = 0; n < a.size(); ++n) CHECK(a[n] == doctest::Approx(b[n]).epsilon(1e-12).scale(1.0));
  }
  SUBCASE("nothing above 0.45 fs") {
    // 4410-point blocks at 44.1 kHz put every multiple of 10 Hz on a bin.
    const std::size_t n = 4410;
    for (double f0 : {110.0, 440.0, 1230.0, 5000.0}) {
      const auto y = pulse_oscillator(f0, n, kFs);
      const auto mag = oracle::dft_magnitude(y, 0, n, oracle::rect_window(n));
      const double strongest = *std::max_element(mag.begin(), mag.end());
      double above = 0.0;
      for (std::size_t k = 0; k < mag.size(); ++k) {
        if (static_cast<double>(k) * kFs / n >= 0.45 * kFs) above = std::max(above, mag[k]);
      }
      CHECK(20.0 * std::log10(above / strongest + 1e-300) < -60.0);
    }
  }
  CHECK_THROWS_AS(pulse_oscillator(0.0, 10, kFs), ConfigError);
  CHECK_THROWS_AS(pulse_oscillator(30000.0, 10, kFs), ConfigError);
}

TEST_CASE("bandpass design") {
  SUBCASE("poles inside the unit circle for interpolated vowels") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
      const auto v = interpolate_vowel(u(rng), tenor_a(), tenor_i());
      for (const auto& f : v.formants) {
        const auto q = design_bandpass(f.center_hz, f.bandwidth_hz, kFs);
        for (const auto& p : q.poles()) CHECK(std::abs(p) < 1.0 - 1e-9);
      }
    }
  }
  SUBCASE("magnitude matches the prewarped analog prototype") {
    const double fc = 650, bw = 80;
    const auto q = design_bandpass(fc, bw, kFs);
    const auto warp = [](double f) { return 2.0 * kFs * std::tan(std::numbers::pi * f / kFs); };
    const double b = warp(fc + bw / 2) - warp(fc - bw / 2);
    const double w0sq = warp(fc + bw / 2) * warp(fc - bw / 2);
    for (double f : {100.0, 500.0, 640.0, 650.0, 700.0, 2000.0, 15000.0}) {
      const double w = warp(f);
      const double analog = b * w / std::sqrt((w0sq - w * w) * (w0sq - w * w) + b * b * w * w);
      CHECK(std::abs(q.response(f, kFs)) == doctest::Approx(analog).epsilon(1e-9));
    }
  }
  SUBCASE("tone at the center passes, far tones are attenuated") {
    const double fc = 1080, bw = 90;
    const auto q = design_bandpass(fc, bw, kFs);
    const auto run = [&](double f) {
      std::vector<double> x(44100);
      for (std::size_t n = 0; n < x.size(); ++n) x[n] = std::sin(2.0 * std::numbers::pi * f * n / kFs);
      // one section, unity gain
      double x1 = 0, x2 = 0, y1 = 0, y2 = 0;
      for (auto& s : x) {
        const double y = q.b0 * s + q.b1 * x1 + q.b2 * x2 - q.a1 * y1 - q.a2 * y2;
        x2 = x1; x1 = s; y2 = y1; y1 = y;
        s = y;
      }
      return tone_gain(x, 22050);
    };
    CHECK(run(fc) == doctest::Approx(1.0).epsilon(0.01));
    CHECK(20.0 * std::log10(run(fc + 20 * bw)) < -20.0);
    CHECK(20.0 * std::log10(run(fc - 10 * bw)) < -20.0);
  }
  CHECK_THROWS_AS(design_bandpass(30, 80, kFs), ConfigError);
}

TEST_CASE("formant filter") {
  SUBCASE("zero in, zero out") {
    const auto y = formant_filter(std::vector<double>(1000, 0.0), tenor_a(), kFs);
    CHECK(std::all_of(y.begin(), y.end(), [](double s) { return s == 0.0; }));
  }
  SUBCASE("white noise output peaks where the analytic cascade does") {
    std::mt19937_64 rng(4242);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> noise(1 << 20);
    for (auto& s : noise) s = g(rng);
    const std::size_t n = 2048;
    const double bin_hz = kFs / n;
    const auto cascade = [](const VowelState& v, double f) {
      double mag = 1.0;
      for (const auto& s : v.formants) {
        mag *= std::abs(design_bandpass(s.center_hz, s.bandwidth_hz, kFs).response(f, kFs)) *
               std::pow(10.0, s.gain_db / 20.0);
      }
      return mag;
    };
    for (const auto& vowel : {tenor_a(), tenor_i()}) {
      const auto y = formant_filter(noise, vowel, kFs);
      const auto power = oracle::welch_power(y, n);
      for (const auto& f : vowel.formants) {
        // analytic peak of the whole cascade near this formant
        double peak_hz = f.center_hz, peak = 0.0;
        for (double x = f.center_hz - 100.0; x <= f.center_hz + 100.0; x += 0.25) {
          if (cascade(vowel, x) > peak) {
            peak = cascade(vowel, x);
            peak_hz = x;
          }
        }
        const auto k = local_peak(power, bin_hz, peak_hz, 60.0);
        CHECK(std::abs(static_cast<double>(k) * bin_hz - peak_hz) <= bin_hz);
      }
    }
    // The 'i' formants are far enough apart that each one keeps its own peak.
    const auto y = formant_filter(noise, tenor_i(), kFs);
    const auto power = oracle::welch_power(y, n);
    for (const auto& f : tenor_i().formants) {
      const auto k = local_peak(power, bin_hz, f.center_hz, 60.0);
      CHECK(std::abs(static_cast<double>(k) * bin_hz - f.center_hz) <= bin_hz);
    }
  }
  SUBCASE("state carries across calls") {
    std::vector<double> x(500);
    for (std::size_t n = 0; n < x.size(); ++n) x[n] = std::sin(0.05 * n) + 0.3 * std::cos(0.31 * n);
    FormantFilter a(tenor_i(), kFs), b(tenor_i(), kFs);
    auto whole = x;
    a.process(whole);
    auto split = x;
    b.process(std::span<double>(split.data(), 123));
    b.process(std::span<double>(split.data() + 123, 377));
    CHECK(whole == split);
  }
}

TEST_CASE("render_sonification") {
  SonificationConfig cfg;
  SUBCASE("duration") {
    const std::vector<double> v = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    const auto audio = render_sonification(v, cfg);
    CHECK(audio.samples.size() == 220500);
    CHECK(audio.sample_rate_hz == 44100);
  }
  SUBCASE("duration contract for odd segment lengths") {
    cfg.seg_dur_s = 0.123457;
    for (std::size_t len : {1u, 3u, 7u, 12u}) {
      std::vector<double> v(len);
      for (std::size_t k = 0; k < len; ++k) v[k] = std::sin(static_cast<double>(k));
      const auto audio = render_sonification(v, cfg);
      const double expect = std::round(static_cast<double>(len) * cfg.seg_dur_s * kFs);
      CHECK(std::abs(static_cast<double>(audio.samples.size()) - expect) <= 1.0);
    }
  }
  SUBCASE("bounded, finite, peak normalized, deterministic") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(600, 1100);
    std::vector<double> v(12);
    for (auto& x : v) x = u(rng);
    const auto a = render_sonification(v, cfg);
    const auto b = render_sonification(v, cfg);
    CHECK(a.samples == b.samples);
    double peak = 0;
    for (double s : a.samples) {
      REQUIRE(std::isfinite(s));
      REQUIRE(std::abs(s) <= 1.0);
      peak = std::max(peak, std::abs(s));
    }
    CHECK(peak == doctest::Approx(0.89).epsilon(1e-12));
  }
  SUBCASE("constant series gives a steady harmonic stack at the midpoint f0") {
    const std::vector<double> v(4, 900.0);
    const auto audio = render_sonification(v, cfg);
    const std::size_t n = 4096;
    const double bin_hz = kFs / n;
    for (std::size_t start = 0; start + n <= audio.samples.size(); start += 16384) {
      const auto power = oracle::welch_power(
          std::vector<double>(audio.samples.begin() + start, audio.samples.begin() + start + n), n);
      std::vector<double> db(power.size());
      for (std::size_t k = 0; k < db.size(); ++k) db[k] = 10.0 * std::log10(power[k] + 1e-30);
      const double spacing = oracle::harmonic_spacing(db, 0.8 * cfg.f0_min_hz / bin_hz, 1.25 * cfg.f0_max_hz / bin_hz);
      CHECK(std::abs(spacing * bin_hz - 275.0) <= bin_hz);
    }
  }
  CHECK_THROWS_AS(render_sonification(std::vector<double>{}, cfg), DataError);
}
