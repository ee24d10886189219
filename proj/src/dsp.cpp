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

#include "svckit/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>

#include "svckit/errors.hpp"
#include "svckit/simd/kernels.hpp"

namespace svckit::dsp {
namespace {

constexpr double kPi = std::numbers::pi;

double sinc(double x) {
  if (x == 0.0) return 1.0;
  return std::sin(kPi * x) / (kPi * x);
}

// Blackman window written as a function of the signed offset from the
// center tap, so mirrored taps come out bit-identical.
double blackman_at_offset(int offset, int half) {
  double phase = kPi * offset / half;
  return 0.42 + 0.5 * std::cos(phase) + 0.08 * std::cos(2.0 * phase);
}

void require_mono_rate(const audio::AudioBuffer& x, double rate_hz) {
  if (!x.is_mono()) throw ValidationError("filtering expects a mono buffer");
  if (static_cast<double>(x.sample_rate_hz) != rate_hz) {
    throw ValidationError("kernel designed for " + std::to_string(rate_hz) +
                          " Hz but buffer is " + std::to_string(x.sample_rate_hz) +
                          " Hz");
  }
}

// Convolution with zero-padded edges, output trimmed by the group delay:
// y[n] = sum_k taps[k] * x[n + D - k]. Reversing the taps turns the sum
// into a contiguous dot product over the padded signal.
std::vector<double> convolve_trimmed(const std::vector<double>& taps,
                                     const std::vector<double>& x) {
  const std::size_t tap_count = taps.size();
  const int delay = static_cast<int>(tap_count - 1) / 2;

  std::vector<double> reversed(taps.rbegin(), taps.rend());
  std::vector<double> padded(x.size() + 2 * static_cast<std::size_t>(delay), 0.0);
  std::copy(x.begin(), x.end(), padded.begin() + delay);

  const auto& kernels = simd::active();
  std::vector<double> y(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) {
    y[n] = kernels.dot(reversed.data(), padded.data() + n, tap_count);
  }
  return y;
}

}  // namespace

FilterKernel design_lowpass(double cutoff_hz, double sample_rate_hz, int num_taps) {
  if (sample_rate_hz <= 0.0) throw ValidationError("sample rate must be positive");
  if (cutoff_hz <= 0.0 || cutoff_hz >= sample_rate_hz / 2.0) {
    throw ValidationError("cutoff must lie strictly between 0 and Nyquist");
  }
  if (num_taps < 11 || num_taps % 2 == 0) {
    throw ValidationError("tap count must be odd and at least 11");
  }

  const int half = (num_taps - 1) / 2;
  const double normalized = 2.0 * cutoff_hz / sample_rate_hz;

  std::vector<double> taps(static_cast<std::size_t>(num_taps));
  for (int i = 0; i <= half; ++i) {
    double v = normalized * sinc(normalized * i) * blackman_at_offset(i, half);
    taps[static_cast<std::size_t>(half + i)] = v;
    taps[static_cast<std::size_t>(half - i)] = v;
  }

  double dc = 0.0;
  for (double t : taps) dc += t;
  for (double& t : taps) t /= dc;

  return FilterKernel{std::move(taps), half, FilterKind::lowpass, cutoff_hz,
                      sample_rate_hz};
}

FilterKernel complement(const FilterKernel& lowpass) {
  if (lowpass.kind != FilterKind::lowpass) {
    throw ValidationError("complement expects a lowpass kernel");
  }
  const std::size_t tap_count = lowpass.taps.size();
  if (tap_count < 3 || tap_count % 2 == 0) {
    throw ValidationError("complement expects an odd tap count");
  }
  const std::size_t center = (tap_count - 1) / 2;
  for (std::size_t i = 0; i <= center; ++i) {
    if (std::fabs(lowpass.taps[i] - lowpass.taps[tap_count - 1 - i]) > 1e-12) {
      throw ValidationError("complement expects symmetric taps");
    }
  }
  double dc = 0.0;
  for (double t : lowpass.taps) dc += t;
  if (std::fabs(dc - 1.0) > 1e-6) {
    throw ValidationError("complement expects unit DC gain");
  }

  FilterKernel high = lowpass;
  high.kind = FilterKind::highpass;
  for (double& t : high.taps) t = -t;
  high.taps[center] += 1.0;
  return high;
}

audio::AudioBuffer apply_filter(const FilterKernel& kernel,
                                const audio::AudioBuffer& x) {
  require_mono_rate(x, kernel.design_rate_hz);
  return audio::make_mono(convolve_trimmed(kernel.taps, x.mono()),
                          x.sample_rate_hz);
}

audio::AudioBuffer upsample(const audio::AudioBuffer& x, int factor, int num_taps) {
  if (factor < 1) throw ValidationError("upsampling factor must be at least 1");
  if (!x.is_mono()) throw ValidationError("upsampling expects a mono buffer");
  if (factor == 1) return x;

  const int out_rate = x.sample_rate_hz * factor;
  const auto& in = x.mono();
  std::vector<double> stuffed(in.size() * static_cast<std::size_t>(factor), 0.0);
  for (std::size_t i = 0; i < in.size(); ++i) {
    stuffed[i * static_cast<std::size_t>(factor)] = in[i];
  }

  // Anti-imaging lowpass at the original Nyquist; the factor restores
  // the amplitude lost to zero-stuffing.
  FilterKernel anti_image =
      design_lowpass(x.sample_rate_hz / 2.0, static_cast<double>(out_rate), num_taps);
  for (double& t : anti_image.taps) t *= factor;

  return audio::make_mono(convolve_trimmed(anti_image.taps, stuffed), out_rate);
}

void write_taps_text(std::ostream& out, const FilterKernel& kernel) {
  char line[64];
  for (double t : kernel.taps) {
    std::snprintf(line, sizeof(line), "%.17g\n", t);
    out << line;
  }
}

}  // namespace svckit::dsp
