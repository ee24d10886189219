// Copyright 2026 The svckit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "svckit/audio_io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>

#include "svckit/errors.hpp"

namespace svckit::audio {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatIeeeFloat = 3;

std::uint32_t read_u32le(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

std::uint16_t read_u16le(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | p[1] << 8);
}

void put_u32le(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 24));
}

void put_u16le(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

[[noreturn]] void fail(const std::string& message, std::size_t offset) {
  throw ValidationError(message + " (byte offset " + std::to_string(offset) + ")");
}

double decode_sample(const std::uint8_t* p, WavEncoding encoding) {
  switch (encoding) {
    case WavEncoding::pcm16: {
      auto v = static_cast<std::int16_t>(read_u16le(p));
      return static_cast<double>(v) / 32768.0;
    }
    case WavEncoding::pcm24: {
      std::int32_t v = p[0] | p[1] << 8 | p[2] << 16;
      if (v & 0x800000) v -= 0x1000000;  // sign-extend 24 -> 32
      return static_cast<double>(v) / 8388608.0;
    }
    case WavEncoding::float32: {
      std::uint32_t bits = read_u32le(p);
      return static_cast<double>(std::bit_cast<float>(bits));
    }
  }
  return 0.0;
}

void encode_sample(std::vector<std::uint8_t>& out, double x, WavEncoding encoding) {
  switch (encoding) {
    case WavEncoding::pcm16: {
      double clamped = std::fmin(std::fmax(x, -1.0), 1.0);
      auto q = static_cast<std::int32_t>(std::llround(clamped * 32768.0));
      if (q > 32767) q = 32767;
      put_u16le(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
      break;
    }
    case WavEncoding::pcm24: {
      double clamped = std::fmin(std::fmax(x, -1.0), 1.0);
      auto q = static_cast<std::int32_t>(std::llround(clamped * 8388608.0));
      if (q > 8388607) q = 8388607;
      auto u = static_cast<std::uint32_t>(q);
      out.push_back(static_cast<std::uint8_t>(u));
      out.push_back(static_cast<std::uint8_t>(u >> 8));
      out.push_back(static_cast<std::uint8_t>(u >> 16));
      break;
    }
    case WavEncoding::float32: {
      put_u32le(out, std::bit_cast<std::uint32_t>(static_cast<float>(x)));
      break;
    }
  }
}

}  // namespace

int bytes_per_sample(WavEncoding encoding) {
  switch (encoding) {
    case WavEncoding::pcm16: return 2;
    case WavEncoding::pcm24: return 3;
    case WavEncoding::float32: return 4;
  }
  return 0;
}

const std::vector<double>& AudioBuffer::mono() const {
  if (!is_mono()) throw ValidationError("expected a mono buffer");
  return channels[0];
}

std::vector<double>& AudioBuffer::mono() {
  if (!is_mono()) throw ValidationError("expected a mono buffer");
  return channels[0];
}

AudioBuffer make_mono(std::vector<double> samples, int sample_rate_hz) {
  if (sample_rate_hz <= 0) throw ValidationError("sample rate must be positive");
  AudioBuffer buffer;
  buffer.channels.push_back(std::move(samples));
  buffer.sample_rate_hz = sample_rate_hz;
  return buffer;
}

std::pair<AudioBuffer, WavFormat> read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed for " + path.string());

  if (bytes.size() < 12) fail("file too short for a RIFF header", bytes.size());
  if (std::memcmp(bytes.data(), "RIFF", 4) != 0) fail("missing RIFF tag", 0);
  if (std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) fail("missing WAVE tag", 8);

  bool have_fmt = false;
  WavFormat format;
  std::uint16_t block_align = 0;
  const std::uint8_t* data = nullptr;
  std::size_t data_size = 0;
  std::size_t data_offset = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk_id = bytes.data() + pos;
    std::size_t chunk_size = read_u32le(bytes.data() + pos + 4);
    std::size_t body = pos + 8;
    if (body + chunk_size > bytes.size()) {
      fail("chunk size " + std::to_string(chunk_size) + " runs past end of file", pos);
    }

    if (std::memcmp(chunk_id, "fmt ", 4) == 0) {
      if (chunk_size < 16) fail("fmt chunk too small", pos);
      std::uint16_t code = read_u16le(bytes.data() + body);
      std::uint16_t channels = read_u16le(bytes.data() + body + 2);
      std::uint32_t rate = read_u32le(bytes.data() + body + 4);
      std::uint16_t bits = read_u16le(bytes.data() + body + 14);
      block_align = read_u16le(bytes.data() + body + 12);

      if (code == kFormatPcm && bits == 16) {
        format.encoding = WavEncoding::pcm16;
      } else if (code == kFormatPcm && bits == 24) {
        format.encoding = WavEncoding::pcm24;
      } else if (code == kFormatIeeeFloat && bits == 32) {
        format.encoding = WavEncoding::float32;
      } else {
        fail("unsupported encoding: format code " + std::to_string(code) + ", " +
                 std::to_string(bits) + " bits",
             body);
      }
      if (channels == 0) fail("fmt declares zero channels", body + 2);
      if (rate == 0) fail("fmt declares zero sample rate", body + 4);
      format.channels = channels;
      format.sample_rate_hz = static_cast<int>(rate);
      have_fmt = true;
    } else if (std::memcmp(chunk_id, "data", 4) == 0) {
      if (!have_fmt) fail("data chunk precedes fmt chunk", pos);
      data = bytes.data() + body;
      data_size = chunk_size;
      data_offset = pos;
      break;
    }
    // unknown chunk: skip, honoring the even-byte padding rule
    pos = body + chunk_size + (chunk_size & 1);
  }

  if (!have_fmt) fail("no fmt chunk found", bytes.size());
  if (data == nullptr) fail("no data chunk found", bytes.size());

  int bps = bytes_per_sample(format.encoding);
  std::size_t frame_bytes = static_cast<std::size_t>(bps) * format.channels;
  if (block_align != 0 && block_align != frame_bytes) {
    fail("block align " + std::to_string(block_align) + " does not match format",
         data_offset);
  }
  if (data_size % frame_bytes != 0) {
    fail("data size " + std::to_string(data_size) + " is not a whole number of frames",
         data_offset);
  }

  std::size_t frames = data_size / frame_bytes;
  AudioBuffer buffer;
  buffer.sample_rate_hz = format.sample_rate_hz;
  buffer.channels.assign(format.channels, std::vector<double>(frames));
  const std::uint8_t* p = data;
  for (std::size_t f = 0; f < frames; ++f) {
    for (int c = 0; c < format.channels; ++c, p += bps) {
      buffer.channels[c][f] = decode_sample(p, format.encoding);
    }
  }
  return {std::move(buffer), format};
}

void write_wav(const std::filesystem::path& path, const AudioBuffer& buffer,
               const WavFormat& format) {
  if (buffer.channel_count() != format.channels) {
    throw ValidationError("buffer has " + std::to_string(buffer.channel_count()) +
                          " channels but format declares " +
                          std::to_string(format.channels));
  }
  for (const auto& channel : buffer.channels) {
    if (channel.size() != buffer.frames()) {
      throw ValidationError("channels differ in length");
    }
    for (std::size_t i = 0; i < channel.size(); ++i) {
      if (!std::isfinite(channel[i])) {
        throw ValidationError("non-finite sample at index " + std::to_string(i));
      }
    }
  }

  int bps = bytes_per_sample(format.encoding);
  std::size_t frames = buffer.frames();
  std::size_t data_size = frames * static_cast<std::size_t>(bps) * format.channels;
  std::uint16_t code =
      format.encoding == WavEncoding::float32 ? kFormatIeeeFloat : kFormatPcm;

  std::vector<std::uint8_t> out;
  out.reserve(44 + data_size + 1);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  put_u32le(out, static_cast<std::uint32_t>(36 + data_size + (data_size & 1)));
  out.insert(out.end(), {'W', 'A', 'V', 'E'});
  out.insert(out.end(), {'f', 'm', 't', ' '});
  put_u32le(out, 16);
  put_u16le(out, code);
  put_u16le(out, static_cast<std::uint16_t>(format.channels));
  put_u32le(out, static_cast<std::uint32_t>(format.sample_rate_hz));
  put_u32le(out, static_cast<std::uint32_t>(format.sample_rate_hz) * format.channels * bps);
  put_u16le(out, static_cast<std::uint16_t>(format.channels * bps));
  put_u16le(out, static_cast<std::uint16_t>(bps * 8));
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  put_u32le(out, static_cast<std::uint32_t>(data_size));
  for (std::size_t f = 0; f < frames; ++f) {
    for (int c = 0; c < format.channels; ++c) {
      encode_sample(out, buffer.channels[c][f], format.encoding);
    }
  }
  if (data_size & 1) out.push_back(0);  // RIFF pads chunks to even length

  std::ofstream stream(path, std::ios::binary | std::ios::trunc);
  if (!stream) throw IoError("cannot open " + path.string() + " for writing");
  stream.write(reinterpret_cast<const char*>(out.data()),
               static_cast<std::streamsize>(out.size()));
  if (!stream) throw IoError("write failed for " + path.string());
}

AudioBuffer to_mono(const AudioBuffer& buffer) {
  if (buffer.channel_count() < 1) throw ValidationError("buffer has no channels");
  if (buffer.is_mono()) return buffer;

  std::size_t frames = buffer.frames();
  for (const auto& channel : buffer.channels) {
    if (channel.size() != frames) throw ValidationError("channels differ in length");
  }

  std::vector<double> mixed(frames, 0.0);
  for (const auto& channel : buffer.channels) {
    for (std::size_t i = 0; i < frames; ++i) mixed[i] += channel[i];
  }
  double inv = 1.0 / buffer.channel_count();
  for (double& v : mixed) v *= inv;
  return make_mono(std::move(mixed), buffer.sample_rate_hz);
}

}  // namespace svckit::audio
