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

#include <iosfwd>
#include <vector>

#include "svckit/audio_io.hpp"

namespace svckit::dsp {

enum class FilterKind { lowpass, highpass };

/// Linear-phase Type-I FIR: odd tap count, coefficients symmetric about
/// the center, group delay (taps-1)/2. A lowpass has unit DC gain; its
/// spectral-inversion complement has zero DC gain, and the pair sums to
/// a pure delay.
struct FilterKernel {
  std::vector<double> taps;
  int group_delay_samples = 0;
  FilterKind kind = FilterKind::lowpass;
  double cutoff_hz = 0.0;
  double design_rate_hz = 0.0;
};

/// Blackman-windowed sinc lowpass, normalized to unit DC gain. The
/// magnitude response sits at about -6 dB at the cutoff. num_taps must
/// be odd and at least 11; cutoff must lie below Nyquist.
FilterKernel design_lowpass(double cutoff_hz, double sample_rate_hz, int num_taps);

/// Spectral inversion: unit impulse at the center minus the lowpass
/// taps. The result is the matching highpass; highpass + lowpass applied
/// to any signal reconstructs it exactly (up to rounding).
FilterKernel complement(const FilterKernel& lowpass);

/// Direct-form convolution with zero-padded edges, trimmed by the group
/// delay so the output is time-aligned with the input and equally long.
audio::AudioBuffer apply_filter(const FilterKernel& kernel,
                                const audio::AudioBuffer& x);

/// Integer-factor upsampling: zero-stuff, then anti-imaging lowpass at
/// the original Nyquist (gain-compensated by the factor). Output length
/// and sample rate scale by the factor; zero net delay.
audio::AudioBuffer upsample(const audio::AudioBuffer& x, int factor,
                            int num_taps = 511);

/// One coefficient per line, full decimal precision.
void write_taps_text(std::ostream& out, const FilterKernel& kernel);

}  // namespace svckit::dsp
