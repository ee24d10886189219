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

#pragma once

#include <cstddef>
#include <filesystem>
#include <utility>
#include <vector>

namespace svckit::audio {

enum class WavEncoding { pcm16, pcm24, float32 };

int bytes_per_sample(WavEncoding encoding);

struct WavFormat {
  WavEncoding encoding = WavEncoding::pcm16;
  int channels = 1;
  int sample_rate_hz = 48000;
};

/// Deinterleaved floating-point audio. All channels have equal length;
/// integer PCM decodes land in [-1.0, 1.0] but processed buffers may
/// exceed that range until written back to an integer encoding.
struct AudioBuffer {
  std::vector<std::vector<double>> channels;
  int sample_rate_hz = 0;

  std::size_t frames() const { return channels.empty() ? 0 : channels[0].size(); }
  int channel_count() const { return static_cast<int>(channels.size()); }
  bool is_mono() const { return channels.size() == 1; }

  /// Channel 0 of a mono buffer. Throws ValidationError otherwise.
  const std::vector<double>& mono() const;
  std::vector<double>& mono();
};

AudioBuffer make_mono(std::vector<double> samples, int sample_rate_hz);

/// Decodes a RIFF/WAVE file holding PCM16, PCM24, or IEEE float32 data.
/// Integer samples are scaled by 2^-(bits-1). Unknown chunks are skipped;
/// fmt must appear before data. Malformed containers raise ValidationError
/// with the offending byte offset; filesystem trouble raises IoError.
std::pair<AudioBuffer, WavFormat> read_wav(const std::filesystem::path& path);

/// Encodes `buffer` at `format`. Integer encodings clamp out-of-range
/// amplitudes to the representable range before quantizing; float32 is
/// written as-is. NaN or infinite samples raise ValidationError.
void write_wav(const std::filesystem::path& path, const AudioBuffer& buffer,
               const WavFormat& format);

/// Per-sample arithmetic mean across channels; sample rate unchanged.
AudioBuffer to_mono(const AudioBuffer& buffer);

}  // namespace svckit::audio
