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

#include "svckit/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "svckit/dsp.hpp"
#include "svckit/errors.hpp"
#include "svckit/simd/kernels.hpp"

namespace svckit::postproc {
namespace {

void check_pair(const audio::AudioBuffer& source, const audio::AudioBuffer& converted) {
  if (!source.is_mono() || !converted.is_mono()) {
    throw ValidationError("post-processing expects mono buffers");
  }
  if (source.sample_rate_hz != converted.sample_rate_hz) {
    throw ValidationError("sample rates differ: source " +
                          std::to_string(source.sample_rate_hz) + " Hz, converted " +
                          std::to_string(converted.sample_rate_hz) + " Hz");
  }
  if (source.frames() != converted.frames()) {
    throw ValidationError("lengths differ: source " + std::to_string(source.frames()) +
                          " samples, converted " + std::to_string(converted.frames()) +
                          " samples");
  }
}

void check_config(const PostProcessConfig& config) {
  if (config.crossover_hz <= 0.0 ||
      config.crossover_hz >= config.target_rate_hz / 2.0) {
    throw ValidationError("crossover must lie strictly between 0 and Nyquist");
  }
  if (config.length_tolerance_samples < 0) {
    throw ValidationError("length tolerance cannot be negative");
  }
}

}  // namespace

DiffRatio compute_diff(const audio::AudioBuffer& source,
                       const audio::AudioBuffer& converted) {
  check_pair(source, converted);
  if (source.frames() == 0) throw ValidationError("cannot gain-match empty buffers");

  const auto& kernels = simd::active();
  double mean_s = kernels.sum_abs(source.mono().data(), source.frames()) /
                  static_cast<double>(source.frames());
  double mean_c = kernels.sum_abs(converted.mono().data(), converted.frames()) /
                  static_cast<double>(converted.frames());
  if (mean_c == 0.0) {
    throw ValidationError(
        "converted audio is silent: mean absolute amplitude is zero, so the "
        "gain ratio is undefined");
  }
  return DiffRatio{mean_s / mean_c};
}

audio::AudioBuffer supplement_high(const audio::AudioBuffer& source,
                                   const audio::AudioBuffer& converted,
                                   const PostProcessConfig& config) {
  check_config(config);
  check_pair(source, converted);
  if (source.sample_rate_hz != config.target_rate_hz) {
    throw ValidationError("buffers are at " + std::to_string(source.sample_rate_hz) +
                          " Hz but the configured target rate is " +
                          std::to_string(config.target_rate_hz) + " Hz");
  }

  const double diff = compute_diff(source, converted).value;

  dsp::FilterKernel low = dsp::design_lowpass(
      config.crossover_hz, static_cast<double>(config.target_rate_hz), config.num_taps);
  dsp::FilterKernel high = dsp::complement(low);

  audio::AudioBuffer high_band = dsp::apply_filter(high, source);
  audio::AudioBuffer low_band = dsp::apply_filter(low, converted);

  auto& out = high_band.mono();
  simd::active().scale_add(out.data(), out.data(), low_band.mono().data(), diff,
                           out.size());
  return high_band;
}

std::string PostProcessReport::to_line() const {
  char line[160];
  std::snprintf(line, sizeof(line),
                "diff=%.6f peak=%.6f trimmed_samples=%ld crossover_hz=%.1f",
                diff, peak, trimmed_samples, crossover_hz);
  return line;
}

PostProcessReport postprocess_file(const std::filesystem::path& source_path,
                                   const std::filesystem::path& converted_path,
                                   const std::filesystem::path& output_path,
                                   const PostProcessConfig& config) {
  check_config(config);

  audio::AudioBuffer source = audio::to_mono(audio::read_wav(source_path).first);
  audio::AudioBuffer converted = audio::to_mono(audio::read_wav(converted_path).first);

  // The source is the high-frequency reference and is never resampled.
  if (source.sample_rate_hz != config.target_rate_hz) {
    throw ValidationError("source rate " + std::to_string(source.sample_rate_hz) +
                          " Hz must equal the target rate " +
                          std::to_string(config.target_rate_hz) + " Hz");
  }
  if (converted.sample_rate_hz != config.target_rate_hz) {
    if (config.target_rate_hz % converted.sample_rate_hz != 0) {
      throw ValidationError("converted rate " +
                            std::to_string(converted.sample_rate_hz) +
                            " Hz does not divide the target rate " +
                            std::to_string(config.target_rate_hz) + " Hz");
    }
    converted = dsp::upsample(converted,
                              config.target_rate_hz / converted.sample_rate_hz,
                              config.num_taps);
  }

  long trimmed = 0;
  if (source.frames() != converted.frames()) {
    long gap = static_cast<long>(source.frames()) - static_cast<long>(converted.frames());
    if (std::labs(gap) > config.length_tolerance_samples) {
      throw ValidationError("length mismatch of " + std::to_string(std::labs(gap)) +
                            " samples exceeds the tolerance of " +
                            std::to_string(config.length_tolerance_samples));
    }
    trimmed = std::labs(gap);
    std::size_t target = std::min(source.frames(), converted.frames());
    source.mono().resize(target);
    converted.mono().resize(target);
  }

  audio::AudioBuffer out = supplement_high(source, converted, config);

  PostProcessReport report;
  report.diff = compute_diff(source, converted).value;
  report.trimmed_samples = trimmed;
  report.crossover_hz = config.crossover_hz;
  report.output_rate_hz = out.sample_rate_hz;
  report.output_frames = out.frames();
  double peak = 0.0;
  for (double v : out.mono()) peak = std::fmax(peak, std::fabs(v));
  report.peak = peak;

  audio::write_wav(output_path, out,
                   audio::WavFormat{audio::WavEncoding::float32, 1, out.sample_rate_hz});
  return report;
}

}  // namespace svckit::postproc
