#include "hrvson/sonifier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hrvson/error.hpp"
#include "hrvson/keyvalue.hpp"
#include "hrvson/text.hpp"

namespace hrvson {

namespace {

constexpr double kPi = std::numbers::pi;

double lerp(double a, double b, double t) { return (1.0 - t) * a + t * b; }

}  // namespace

void VowelState::validate(double sample_rate_hz) const {
  const double nyquist = sample_rate_hz / 2.0;
  for (std::size_t k = 0; k < formants.size(); ++k) {
    const auto& f = formants[k];
    const auto name = "formant " + std::to_string(k + 1);
    if (!(f.center_hz > 0.0) || !(f.center_hz < nyquist)) {
      throw ConfigError(name + ": center must lie in (0, fs/2)");
    }
    if (!(f.bandwidth_hz > 0.0)) throw ConfigError(name + ": bandwidth must be > 0");
    if (!(f.center_hz - f.bandwidth_hz / 2.0 > 0.0) ||
        !(f.center_hz + f.bandwidth_hz / 2.0 < nyquist)) {
      throw ConfigError(name + ": band edges must lie in (0, fs/2)");
    }
    if (!std::isfinite(f.gain_db)) throw ConfigError(name + ": gain must be finite");
    if (k > 0 && !(f.center_hz > formants[k - 1].center_hz)) {
      throw ConfigError("formant centers must be strictly increasing");
    }
  }
}

VowelState tenor_a() {
  return VowelState{{{{650.0, 80.0, 0.0}, {1080.0, 90.0, -6.0}, {2650.0, 120.0, -7.0},
                      {2900.0, 130.0, -8.0}}}};
}

VowelState tenor_i() {
  return VowelState{{{{290.0, 40.0, 0.0}, {1870.0, 90.0, -15.0}, {2800.0, 100.0, -18.0},
                      {3250.0, 120.0, -20.0}}}};
}

VowelTable parse_vowel_table(std::string_view text) {
  VowelTable table;
  std::array<std::array<bool, 4>, 2> seen{};
  for (const auto& e : parse_key_values(text, "vowel table")) {
    if (e.section != "a" && e.section != "i") {
      throw ConfigError("vowel table line " + std::to_string(e.line) +
                        ": entries must sit under [a] or [i]");
    }
    if (e.key.size() != 2 || e.key[0] != 'f' || e.key[1] < '1' || e.key[1] > '4') {
      throw ConfigError("vowel table line " + std::to_string(e.line) + ": unknown key '" + e.key +
                        "' (expected f1..f4)");
    }
    const auto items = kv_list(e);
    if (items.size() != 3) {
      throw ConfigError("vowel table line " + std::to_string(e.line) +
                        ": expected [center_hz, bandwidth_hz, gain_db]");
    }
    std::array<double, 3> nums{};
    for (std::size_t k = 0; k < 3; ++k) {
      const auto v = text::parse_double(items[k]);
      if (!v) throw ConfigError("vowel table line " + std::to_string(e.line) + ": bad number");
      nums[k] = *v;
    }
    const std::size_t vowel = e.section == "a" ? 0 : 1;
    const std::size_t idx = static_cast<std::size_t>(e.key[1] - '1');
    auto& state = vowel == 0 ? table.a : table.i;
    state.formants[idx] = Formant{nums[0], nums[1], nums[2]};
    seen[vowel][idx] = true;
  }
  for (std::size_t v = 0; v < 2; ++v) {
    for (std::size_t k = 0; k < 4; ++k) {
      if (!seen[v][k]) {
        throw ConfigError(std::string("vowel table: missing [") + (v == 0 ? "a" : "i") + "] f" +
                          std::to_string(k + 1));
      }
    }
  }
  return table;
}

VowelTable read_vowel_table(const std::filesystem::path& path) {
  return parse_vowel_table(text::read_file(path));
}

std::string format_vowel_table(const VowelTable& table) {
  std::string out;
  const auto section = [&out](const char* name, const VowelState& v) {
    out += std::string("[") + name + "]\n";
    for (std::size_t k = 0; k < 4; ++k) {
      const auto& f = v.formants[k];
      out += "f" + std::to_string(k + 1) + " = [" + text::shortest(f.center_hz) + ", " +
             text::shortest(f.bandwidth_hz) + ", " + text::shortest(f.gain_db) + "]\n";
    }
  };
  section("a", table.a);
  out += '\n';
  section("i", table.i);
  return out;
}

void SonificationConfig::validate() const {
  if (sample_rate_hz <= 0) throw ConfigError("sample rate must be positive");
  if (!(seg_dur_s > 0.0)) throw ConfigError("segment duration must be > 0");
  if (!(f0_min_hz > 0.0) || !(f0_min_hz < f0_max_hz)) {
    throw ConfigError("f0 range must satisfy 0 < f0_min < f0_max");
  }
  vowel_a.validate(sample_rate_hz);
  vowel_i.validate(sample_rate_hz);
  const double top_f1 =
      std::max(vowel_a.formants[0].center_hz, vowel_i.formants[0].center_hz);
  if (!(f0_max_hz < top_f1)) {
    throw ConfigError("f0_max must stay below the first formant (" + text::sig6(top_f1) + " Hz)");
  }
  if (!(glide_ms >= 0.0) || glide_ms > seg_dur_s * 1000.0) {
    throw ConfigError("glide must lie in [0, segment duration]");
  }
  if (block_size == 0) throw ConfigError("control block size must be >= 1");
  if (!(peak_level > 0.0) || peak_level > 1.0) throw ConfigError("peak level must lie in (0, 1]");
}

std::vector<double> normalize_series(std::span<const double> values) {
  if (values.empty()) throw DataError("cannot normalize an empty series");
  for (double v : values) {
    if (!std::isfinite(v)) throw DataError("series contains a non-finite value");
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double range = *hi - *lo;
  std::vector<double> out(values.size(), 0.5);
  if (range > 0.0) {
    for (std::size_t k = 0; k < values.size(); ++k) out[k] = (values[k] - *lo) / range;
  }
  return out;
}

Controls map_controls(double v, const SonificationConfig& config) {
  if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("control value must lie in [0, 1]");
  return Controls{config.f0_min_hz + v * (config.f0_max_hz - config.f0_min_hz), v};
}

VowelState interpolate_vowel(double alpha, const VowelState& a, const VowelState& i) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in [0, 1]");
  if (alpha == 0.0) return a;
  if (alpha == 1.0) return i;
  VowelState out;
  for (std::size_t k = 0; k < out.formants.size(); ++k) {
    const auto& fa = a.formants[k];
    const auto& fi = i.formants[k];
    out.formants[k] = Formant{lerp(fa.center_hz, fi.center_hz, alpha),
                              lerp(fa.bandwidth_hz, fi.bandwidth_hz, alpha),
                              lerp(fa.gain_db, fi.gain_db, alpha)};
  }
  return out;
}

std::size_t harmonic_count(double f0_hz, double sample_rate_hz) {
  const double cutoff = kHarmonicCutoff * sample_rate_hz;
  if (!(f0_hz > 0.0) || !(f0_hz < cutoff)) return 0;
  auto k = static_cast<std::size_t>(std::floor(cutoff / f0_hz));
  while (k > 0 && static_cast<double>(k) * f0_hz >= cutoff) --k;
  while (static_cast<double>(k + 1) * f0_hz < cutoff) ++k;
  return k;
}

PulseOscillator::PulseOscillator(double sample_rate_hz) : sample_rate_(sample_rate_hz) {
  if (!(sample_rate_hz > 0.0)) throw ConfigError("sample rate must be positive");
}

void PulseOscillator::render(double f0_hz, std::span<double> out) {
  std::vector<double> f0(out.size(), f0_hz);
  render(f0, out);
}

void PulseOscillator::render(std::span<const double> f0_hz, std::span<double> out) {
  if (f0_hz.size() != out.size()) throw std::invalid_argument("f0/out length mismatch");
  if (out.empty()) return;
  const double highest = *std::max_element(f0_hz.begin(), f0_hz.end());
  const double lowest = *std::min_element(f0_hz.begin(), f0_hz.end());
  if (!(lowest > 0.0) || !(highest < sample_rate_ / 2.0)) {
    throw ConfigError("oscillator f0 must lie in (0, fs/2)");
  }
  const std::size_t harmonics = std::max<std::size_t>(harmonic_count(highest, sample_rate_), 1);
  const double k = static_cast<double>(harmonics);
  const double order = 2.0 * k + 1.0;

  for (std::size_t n = 0; n < out.size(); ++n) {
    // sum_{h=1..K} cos(2 pi h phase) in closed form (Dirichlet kernel).
    const double s = std::sin(kPi * phase_);
    double sum;
    if (std::abs(s) < 1e-6) {
      sum = k;
    } else {
      const double wrapped = std::fmod(order * phase_, 2.0);
      sum = std::sin(kPi * wrapped) / (2.0 * s) - 0.5;
    }
    out[n] = sum / k;
    phase_ += f0_hz[n] / sample_rate_;
    phase_ -= std::floor(phase_);
  }
}

std::vector<double> pulse_oscillator(double f0_hz, std::size_t n_samples, double sample_rate_hz) {
  std::vector<double> out(n_samples);
  PulseOscillator osc(sample_rate_hz);
  osc.render(f0_hz, out);
  return out;
}

std::array<std::complex<double>, 2> Biquad::poles() const {
  // z^2 + a1 z + a2 = 0
  const std::complex<double> disc = std::sqrt(std::complex<double>(a1 * a1 - 4.0 * a2, 0.0));
  return {(-a1 + disc) / 2.0, (-a1 - disc) / 2.0};
}

std::complex<double> Biquad::response(double freq_hz, double sample_rate_hz) const {
  const double w = 2.0 * kPi * freq_hz / sample_rate_hz;
  const std::complex<double> z1 = std::polar(1.0, -w);
  const std::complex<double> z2 = z1 * z1;
  return (b0 + b1 * z1 + b2 * z2) / (1.0 + a1 * z1 + a2 * z2);
}

Biquad design_bandpass(double center_hz, double bandwidth_hz, double sample_rate_hz) {
  const double lo = center_hz - bandwidth_hz / 2.0;
  const double hi = center_hz + bandwidth_hz / 2.0;
  if (!(lo > 0.0) || !(hi < sample_rate_hz / 2.0)) {
    throw ConfigError("bandpass edges must lie in (0, fs/2)");
  }
  const double k = 2.0 * sample_rate_hz;
  const double w_lo = k * std::tan(kPi * lo / sample_rate_hz);
  const double w_hi = k * std::tan(kPi * hi / sample_rate_hz);
  const double bw = w_hi - w_lo;
  const double w0_sq = w_lo * w_hi;

  // H(s) = bw s / (s^2 + bw s + w0^2) with s = k (1 - z^-1) / (1 + z^-1).
  const double a0 = k * k + bw * k + w0_sq;
  Biquad q;
  q.b0 = bw * k / a0;
  q.b1 = 0.0;
  q.b2 = -q.b0;
  q.a1 = 2.0 * (w0_sq - k * k) / a0;
  q.a2 = (k * k - bw * k + w0_sq) / a0;

  for (const auto& p : q.poles()) {
    if (!(std::abs(p) < 1.0)) throw std::logic_error("unstable bandpass section");
  }
  return q;
}

FormantFilter::FormantFilter(const VowelState& vowel, double sample_rate_hz)
    : sample_rate_(sample_rate_hz) {
  set_vowel(vowel);
}

void FormantFilter::set_vowel(const VowelState& vowel) {
  for (std::size_t k = 0; k < 4; ++k) {
    const auto& f = vowel.formants[k];
    sections_[k] = design_bandpass(f.center_hz, f.bandwidth_hz, sample_rate_);
    gains_[k] = std::pow(10.0, f.gain_db / 20.0);
  }
}

void FormantFilter::process(std::span<double> samples) {
  for (double& sample : samples) {
    double x = sample;
    for (std::size_t k = 0; k < 4; ++k) {
      const auto& q = sections_[k];
      auto& st = state_[k];
      const double y = q.b0 * x + q.b1 * st.x1 + q.b2 * st.x2 - q.a1 * st.y1 - q.a2 * st.y2;
      st.x2 = st.x1;
      st.x1 = x;
      st.y2 = st.y1;
      st.y1 = y;
      x = y * gains_[k];
    }
    sample = x;
  }
}

std::vector<double> formant_filter(std::span<const double> samples, const VowelState& vowel,
                                   double sample_rate_hz) {
  vowel.validate(sample_rate_hz);
  std::vector<double> out(samples.begin(), samples.end());
  FormantFilter filter(vowel, sample_rate_hz);
  filter.process(out);
  return out;
}

AudioBuffer render_sonification(std::span<const double> values, const SonificationConfig& config) {
  config.validate();
  const auto levels = normalize_series(values);
  const double fs = static_cast<double>(config.sample_rate_hz);
  const double seg_samples = config.seg_dur_s * fs;
  const auto total = static_cast<std::size_t>(std::llround(static_cast<double>(levels.size()) * seg_samples));
  const auto glide = static_cast<std::size_t>(std::llround(config.glide_ms * fs / 1000.0));

  std::vector<double> f0(total);
  std::vector<double> alpha(total);
  Controls prev{};
  for (std::size_t j = 0; j < levels.size(); ++j) {
    const Controls cur = map_controls(levels[j], config);
    const auto begin = static_cast<std::size_t>(std::llround(static_cast<double>(j) * seg_samples));
    const auto end = std::min(
        total, static_cast<std::size_t>(std::llround(static_cast<double>(j + 1) * seg_samples)));
    for (std::size_t n = begin; n < end; ++n) {
      const std::size_t into = n - begin;
      if (j > 0 && into < glide) {
        const double t = static_cast<double>(into) / static_cast<double>(glide);
        f0[n] = lerp(prev.f0_hz, cur.f0_hz, t);
        alpha[n] = lerp(prev.alpha, cur.alpha, t);
      } else {
        f0[n] = cur.f0_hz;
        alpha[n] = cur.alpha;
      }
    }
    prev = cur;
  }

  AudioBuffer buffer;
  buffer.sample_rate_hz = config.sample_rate_hz;
  buffer.samples.assign(total, 0.0);
  PulseOscillator osc(fs);
  FormantFilter filter(config.vowel_a, fs);
  for (std::size_t start = 0; start < total; start += config.block_size) {
    const std::size_t len = std::min(config.block_size, total - start);
    filter.set_vowel(
        interpolate_vowel(std::clamp(alpha[start], 0.0, 1.0), config.vowel_a, config.vowel_i));
    const std::span<double> block(buffer.samples.data() + start, len);
    osc.render(std::span<const double>(f0.data() + start, len), block);
    filter.process(block);
  }

  double peak = 0.0;
  for (double s : buffer.samples) {
    if (!std::isfinite(s)) throw std::logic_error("non-finite sample in rendered audio");
    peak = std::max(peak, std::abs(s));
  }
  if (peak > 0.0) {
    const double gain = config.peak_level / peak;
    for (double& s : buffer.samples) s = std::clamp(s * gain, -1.0, 1.0);
  }
  return buffer;
}

}  // namespace hrvson
