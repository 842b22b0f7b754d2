#include "hrvson/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "hrvson/error.hpp"
#include "hrvson/text.hpp"

namespace hrvson {

namespace {

void put_tag(std::vector<std::uint8_t>& out, const char (&tag)[5]) {
  out.insert(out.end(), tag, tag + 4);
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

std::uint16_t get_u16(const std::vector<std::uint8_t>& b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

std::uint32_t get_u32(const std::vector<std::uint8_t>& b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) | (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) |
         (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

bool tag_is(const std::vector<std::uint8_t>& b, std::size_t at, const char* tag) {
  return std::memcmp(b.data() + at, tag, 4) == 0;
}

}  // namespace

std::int16_t quantize_pcm16(double sample) {
  if (std::isnan(sample)) throw DataError("cannot quantize NaN sample");
  const double s = std::clamp(sample, -1.0, 1.0);
  const double scaled = s >= 0.0 ? s * 32767.0 : s * 32768.0;
  return static_cast<std::int16_t>(std::lround(scaled));
}

double dequantize_pcm16(std::int16_t value) {
  return value >= 0 ? static_cast<double>(value) / 32767.0 : static_cast<double>(value) / 32768.0;
}

std::vector<std::uint8_t> encode_wav(const AudioBuffer& buffer) {
  if (buffer.sample_rate_hz <= 0) throw DataError("WAV sample rate must be positive");
  constexpr std::uint16_t channels = 1;
  constexpr std::uint16_t bits = 16;
  constexpr std::uint16_t block_align = channels * bits / 8;
  const auto data_bytes = buffer.samples.size() * block_align;
  if (data_bytes > std::numeric_limits<std::uint32_t>::max() - 36) {
    throw DataError("audio too long for a RIFF/WAVE file");
  }
  const auto rate = static_cast<std::uint32_t>(buffer.sample_rate_hz);

  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, static_cast<std::uint32_t>(36 + data_bytes));
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, 1);  // PCM
  put_u16(out, channels);
  put_u32(out, rate);
  put_u32(out, rate * block_align);
  put_u16(out, block_align);
  put_u16(out, bits);
  put_tag(out, "data");
  put_u32(out, static_cast<std::uint32_t>(data_bytes));
  for (double s : buffer.samples) put_u16(out, static_cast<std::uint16_t>(quantize_pcm16(s)));
  return out;
}

void write_wav(const AudioBuffer& buffer, const std::filesystem::path& path) {
  const auto bytes = encode_wav(buffer);
  text::write_file(path, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

WavData decode_wav(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 12 || !tag_is(bytes, 0, "RIFF") || !tag_is(bytes, 8, "WAVE")) {
    throw DataError("not a RIFF/WAVE file");
  }
  WavData wav;
  bool have_fmt = false;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t size = get_u32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size()) throw DataError("truncated WAV chunk");
    if (tag_is(bytes, pos, "fmt ")) {
      if (size < 16) throw DataError("short fmt chunk");
      if (get_u16(bytes, body) != 1) throw DataError("only PCM WAV files are supported");
      wav.channels = get_u16(bytes, body + 2);
      wav.sample_rate_hz = static_cast<int>(get_u32(bytes, body + 4));
      wav.bits_per_sample = get_u16(bytes, body + 14);
      if (wav.bits_per_sample != 16) throw DataError("only 16-bit WAV files are supported");
      have_fmt = true;
    } else if (tag_is(bytes, pos, "data")) {
      if (!have_fmt) throw DataError("WAV data chunk precedes fmt chunk");
      wav.pcm.resize(size / 2);
      for (std::size_t k = 0; k < wav.pcm.size(); ++k) {
        wav.pcm[k] = static_cast<std::int16_t>(get_u16(bytes, body + 2 * k));
      }
      return wav;
    }
    pos = body + size + (size & 1u);
  }
  throw DataError("WAV file has no data chunk");
}

WavData read_wav(const std::filesystem::path& path) {
  const auto contents = text::read_file(path);
  return decode_wav(std::vector<std::uint8_t>(contents.begin(), contents.end()));
}

AudioBuffer read_wav_buffer(const std::filesystem::path& path) {
  const auto wav = read_wav(path);
  if (wav.channels != 1) throw DataError("expected a mono WAV file: " + path.string());
  AudioBuffer buffer;
  buffer.sample_rate_hz = wav.sample_rate_hz;
  buffer.samples.reserve(wav.pcm.size());
  for (auto v : wav.pcm) buffer.samples.push_back(dequantize_pcm16(v));
  return buffer;
}

}  // namespace hrvson
