#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hrvson/sonifier.hpp"

namespace hrvson {

// Clamp to [-1, 1] then round: 1.0 -> 32767, -1.0 -> -32768.
std::int16_t quantize_pcm16(double sample);
double dequantize_pcm16(std::int16_t value);

// 44-byte canonical RIFF/WAVE header, PCM, mono, 16-bit little-endian.
std::vector<std::uint8_t> encode_wav(const AudioBuffer& buffer);
void write_wav(const AudioBuffer& buffer, const std::filesystem::path& path);

struct WavData {
  int sample_rate_hz = 0;
  int channels = 0;
  int bits_per_sample = 0;
  std::vector<std::int16_t> pcm;
};

// Reads PCM16 RIFF/WAVE files, skipping unknown chunks.
WavData decode_wav(const std::vector<std::uint8_t>& bytes);
WavData read_wav(const std::filesystem::path& path);

// Mono PCM16 file as an AudioBuffer (dequantized).
AudioBuffer read_wav_buffer(const std::filesystem::path& path);

}  // namespace hrvson
