#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hrvson {

struct Formant {
  double center_hz = 0.0;
  double bandwidth_hz = 0.0;
  double gain_db = 0.0;

  bool operator==(const Formant&) const = default;
};

// Four formants with strictly increasing centers, each band lying inside
// (0, fs/2).
struct VowelState {
  std::array<Formant, 4> formants{};

  void validate(double sample_rate_hz) const;
  bool operator==(const VowelState&) const = default;
};

// Tenor vowel defaults; overridable through a vowel table file.
VowelState tenor_a();
VowelState tenor_i();

// Vowel table: "[a]" and "[i]" sections, each with keys f1..f4 holding
// "[center_hz, bandwidth_hz, gain_db]". '#' starts a comment.
struct VowelTable {
  VowelState a = tenor_a();
  VowelState i = tenor_i();
};
VowelTable parse_vowel_table(std::string_view text);
VowelTable read_vowel_table(const std::filesystem::path& path);
std::string format_vowel_table(const VowelTable& table);

struct SonificationConfig {
  int sample_rate_hz = 44100;
  double seg_dur_s = 0.5;
  double f0_min_hz = 110.0;
  double f0_max_hz = 440.0;
  VowelState vowel_a = tenor_a();
  VowelState vowel_i = tenor_i();
  double glide_ms = 20.0;
  std::size_t block_size = 64;
  double peak_level = 0.89;

  void validate() const;
};

struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate_hz = 44100;

  double duration_s() const {
    return static_cast<double>(samples.size()) / static_cast<double>(sample_rate_hz);
  }
};

// Min-max scaling to [0, 1]; a constant series maps to 0.5 everywhere.
std::vector<double> normalize_series(std::span<const double> values);

struct Controls {
  double f0_hz = 0.0;
  double alpha = 0.0;
};

// f0 = f0_min + v (f0_max - f0_min), alpha = v.
Controls map_controls(double v, const SonificationConfig& config);

// Per-formant (1 - alpha) a + alpha i over center, bandwidth and gain.
VowelState interpolate_vowel(double alpha, const VowelState& a, const VowelState& i);

// Harmonics of a band-limited pulse: every k >= 1 with k f0 < 0.45 fs.
std::size_t harmonic_count(double f0_hz, double sample_rate_hz);
inline constexpr double kHarmonicCutoff = 0.45;

// Band-limited impulse train: equal-amplitude cosine harmonics normalized by
// their count, with phase carried across render calls.
class PulseOscillator {
 public:
  explicit PulseOscillator(double sample_rate_hz);

  void render(double f0_hz, std::span<double> out);
  // Per-sample fundamental; the harmonic count for the block follows the
  // highest f0 in it so no harmonic crosses the cutoff.
  void render(std::span<const double> f0_hz, std::span<double> out);

  double phase() const { return phase_; }

 private:
  double sample_rate_;
  double phase_ = 0.0;  // cycles, [0, 1)
};

std::vector<double> pulse_oscillator(double f0_hz, std::size_t n_samples, double sample_rate_hz);

struct Biquad {
  // y[n] = b0 x[n] + b1 x[n-1] + b2 x[n-2] - a1 y[n-1] - a2 y[n-2]
  double b0 = 1.0, b1 = 0.0, b2 = 0.0, a1 = 0.0, a2 = 0.0;

  std::array<std::complex<double>, 2> poles() const;
  std::complex<double> response(double freq_hz, double sample_rate_hz) const;
};

// Second-order Butterworth bandpass (bilinear transform of the first-order
// lowpass prototype) with prewarped band edges center +- bandwidth/2 and unit
// peak gain.
Biquad design_bandpass(double center_hz, double bandwidth_hz, double sample_rate_hz);

// Four bandpass sections in series, each followed by its formant gain. State
// carries across calls and survives set_vowel.
class FormantFilter {
 public:
  FormantFilter(const VowelState& vowel, double sample_rate_hz);

  void set_vowel(const VowelState& vowel);
  void process(std::span<double> samples);
  const std::array<Biquad, 4>& sections() const { return sections_; }

 private:
  struct State {
    double x1 = 0.0, x2 = 0.0, y1 = 0.0, y2 = 0.0;
  };
  double sample_rate_;
  std::array<Biquad, 4> sections_{};
  std::array<double, 4> gains_{};
  std::array<State, 4> state_{};
};

std::vector<double> formant_filter(std::span<const double> samples, const VowelState& vowel,
                                   double sample_rate_hz);

// Full chain: normalize -> map controls -> glide -> pulse -> formant cascade
// with per-block vowel redesign -> peak normalization.
AudioBuffer render_sonification(std::span<const double> values, const SonificationConfig& config);

}  // namespace hrvson
