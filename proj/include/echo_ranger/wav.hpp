#pragma once

// Mono RIFF/WAVE reading (16-bit PCM, 32-bit float) and writing.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "echo_ranger/error.hpp"
#include "echo_ranger/signal.hpp"

namespace echo_ranger {

enum class WavFormat { Pcm16, Float32 };

namespace detail {

inline std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}
inline std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | p[1] << 8);
}
inline void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
inline void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

}  // namespace detail

inline SampledSignal decode_wav(const std::string& bytes) {
  const auto* b = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::size_t size = bytes.size();
  detail::require(size >= 12 && std::memcmp(b, "RIFF", 4) == 0 && std::memcmp(b + 8, "WAVE", 4) == 0,
                  "wav: not a RIFF/WAVE file");
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  std::size_t pos = 12;
  while (pos + 8 <= size) {
    const std::uint32_t chunk = detail::read_u32(b + pos + 4);
    const std::size_t body = pos + 8;
    detail::require(body + chunk <= size, "wav: truncated chunk");
    if (std::memcmp(b + pos, "fmt ", 4) == 0) {
      detail::require(chunk >= 16, "wav: short fmt chunk");
      format = detail::read_u16(b + body);
      channels = detail::read_u16(b + body + 2);
      rate = detail::read_u32(b + body + 4);
      bits = detail::read_u16(b + body + 14);
      if (format == 0xFFFE && chunk >= 40) format = detail::read_u16(b + body + 24);  // extensible
      have_fmt = true;
    } else if (std::memcmp(b + pos, "data", 4) == 0) {
      detail::require(have_fmt, "wav: data chunk before fmt chunk");
      detail::require(channels == 1, "wav: only mono files are supported");
      detail::require(rate > 0, "wav: zero sample rate");
      std::vector<double> samples;
      if (format == 1 && bits == 16) {
        samples.resize(chunk / 2);
        for (std::size_t i = 0; i < samples.size(); ++i) {
          const auto v = static_cast<std::int16_t>(detail::read_u16(b + body + 2 * i));
          samples[i] = static_cast<double>(v) / 32768.0;
        }
      } else if (format == 3 && bits == 32) {
        samples.resize(chunk / 4);
        for (std::size_t i = 0; i < samples.size(); ++i) {
          const std::uint32_t u = detail::read_u32(b + body + 4 * i);
          float f;
          std::memcpy(&f, &u, 4);
          samples[i] = static_cast<double>(f);
        }
      } else {
        detail::fail("wav: unsupported encoding (need 16-bit PCM or 32-bit float)");
      }
      return {std::move(samples), static_cast<double>(rate)};
    }
    pos = body + chunk + (chunk & 1u);
  }
  detail::fail("wav: no data chunk");
}

inline std::string encode_wav(const SampledSignal& signal, WavFormat format = WavFormat::Float32) {
  const auto rate = static_cast<std::uint32_t>(std::lround(signal.sample_rate));
  const std::uint16_t bits = format == WavFormat::Pcm16 ? 16 : 32;
  const std::uint16_t code = format == WavFormat::Pcm16 ? 1 : 3;
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(signal.size() * (bits / 8));
  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  detail::put_u32(out, 36 + data_bytes);
  out += "WAVEfmt ";
  detail::put_u32(out, 16);
  detail::put_u16(out, code);
  detail::put_u16(out, 1);
  detail::put_u32(out, rate);
  detail::put_u32(out, rate * (bits / 8));
  detail::put_u16(out, bits / 8);
  detail::put_u16(out, bits);
  out += "data";
  detail::put_u32(out, data_bytes);
  for (double v : signal.samples) {
    if (format == WavFormat::Pcm16) {
      const double c = std::clamp(v, -1.0, 32767.0 / 32768.0);
      detail::put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(std::lround(c * 32768.0))));
    } else {
      const float f = static_cast<float>(v);
      std::uint32_t u;
      std::memcpy(&u, &f, 4);
      detail::put_u32(out, u);
    }
  }
  return out;
}

inline SampledSignal read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  detail::require(static_cast<bool>(in), "wav: cannot open " + path);
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_wav(bytes);
}

/// The header stores an integer rate, so fractional rates are rounded.
inline void write_wav(const std::string& path, const SampledSignal& signal, WavFormat format = WavFormat::Float32) {
  std::ofstream out(path, std::ios::binary);
  detail::require(static_cast<bool>(out), "wav: cannot write " + path);
  const auto bytes = encode_wav(signal, format);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace echo_ranger
