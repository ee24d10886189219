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

#include <filesystem>
#include <string>

#include "svckit/audio_io.hpp"

namespace svckit::postproc {

/// Knobs for the high-frequency supplementation pass. The defaults are
/// the documented workflow: 10 kHz crossover at a 48 kHz target rate.
struct PostProcessConfig {
  double crossover_hz = 10000.0;
  int target_rate_hz = 48000;
  int num_taps = 511;
  long length_tolerance_samples = 0;
};

/// The full-band mean-absolute-amplitude ratio used to gain-match the
/// converted low band to the source.
struct DiffRatio {
  double value = 1.0;
};

/// mean(|source|) / mean(|converted|) over whole waveforms. Both inputs
/// must be mono at the same rate and length. A silent converted signal
/// is an explicit error rather than an infinite ratio.
DiffRatio compute_diff(const audio::AudioBuffer& source,
                       const audio::AudioBuffer& converted);

/// out[n] = highpass(source)[n] + lowpass(converted)[n] * diff, with the
/// complementary crossover pair designed at config.crossover_hz and the
/// diff ratio computed on the full-band inputs. Inputs must be mono at
/// the target rate with equal lengths.
audio::AudioBuffer supplement_high(const audio::AudioBuffer& source,
                                   const audio::AudioBuffer& converted,
                                   const PostProcessConfig& config = {});

struct PostProcessReport {
  double diff = 1.0;
  double peak = 0.0;
  long trimmed_samples = 0;
  double crossover_hz = 0.0;
  int output_rate_hz = 0;
  std::size_t output_frames = 0;

  /// Single-line key=value record: diff=… peak=… trimmed_samples=… crossover_hz=…
  std::string to_line() const;
};

/// File-to-file pipeline: read both inputs, mix to mono, upsample the
/// converted signal to the target rate by an integer factor, align
/// lengths within the configured tolerance (trimming the longer tail),
/// run supplement_high, and write the result as float32 WAV. The source
/// is never resampled; its rate must equal the target rate.
PostProcessReport postprocess_file(const std::filesystem::path& source_path,
                                   const std::filesystem::path& converted_path,
                                   const std::filesystem::path& output_path,
                                   const PostProcessConfig& config = {});

}  // namespace svckit::postproc
