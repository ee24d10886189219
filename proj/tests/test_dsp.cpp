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

#include <cmath>
#include <complex>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "svckit/dsp.hpp"
#include "svckit/errors.hpp"
#include "test_util.hpp"

namespace {

using svckit::ValidationError;
using svckit::audio::AudioBuffer;
using svckit::audio::make_mono;
using svckit::dsp::FilterKernel;
using svckit::dsp::FilterKind;

// Direct evaluation of the kernel's frequency response, independent of
// any library transform: H(f) = sum_k taps[k] * e^{-i 2 pi f k / rate}.
double magnitude_response(const FilterKernel& kernel, double freq_hz) {
  std::complex<double> acc{0.0, 0.0};
  const double w = 2.0 * M_PI * freq_hz / kernel.design_rate_hz;
  for (std::size_t k = 0; k < kernel.taps.size(); ++k) {
    acc += kernel.taps[k] *
           std::exp(std::complex<double>(0.0, -w * static_cast<double>(k)));
  }
  return std::abs(acc);
}

// Brute-force "same" convolution with zero padding: the oracle for
// apply_filter. O(n*m), fine at test sizes.
std::vector<double> naive_filter(const FilterKernel& kernel,
                                 const std::vector<double>& x) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
  const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(kernel.taps.size());
  std::vector<double> y(x.size(), 0.0);
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::ptrdiff_t k = 0; k < m; ++k) {
      const std::ptrdiff_t j = i + kernel.group_delay_samples - k;
      if (j >= 0 && j < n) acc += kernel.taps[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(j)];
    }
    y[static_cast<std::size_t>(i)] = acc;
  }
  return y;
}

}  // namespace

TEST_CASE("lowpass design has unit DC gain and exact symmetry") {
  const FilterKernel lp = svckit::dsp::design_lowpass(10000.0, 48000.0, 511);
  CHECK(lp.taps.size() == 511);
  CHECK(lp.group_delay_samples == 255);
  CHECK(lp.kind == FilterKind::lowpass);

  const double dc = std::accumulate(lp.taps.begin(), lp.taps.end(), 0.0);
  CHECK(dc == doctest::Approx(1.0).epsilon(1e-6));

  for (std::size_t k = 0; k < lp.taps.size(); ++k) {
    // Mirrored construction: symmetry holds bit-for-bit, not just approximately.
    CHECK(lp.taps[k] == lp.taps[lp.taps.size() - 1 - k]);
  }
}

TEST_CASE("lowpass magnitude response hits the designed corners") {
  const FilterKernel lp = svckit::dsp::design_lowpass(10000.0, 48000.0, 511);

  SUBCASE("about -6 dB at the cutoff") {
    const double db = testutil::db_amplitude(magnitude_response(lp, 10000.0));
    CHECK(db > -7.0);
    CHECK(db < -5.0);
  }
  SUBCASE("passband is flat within 0.01 dB up to 8 kHz") {
    for (double f = 0.0; f <= 8000.0; f += 250.0) {
      const double db = testutil::db_amplitude(magnitude_response(lp, f));
      CHECK(std::fabs(db) < 0.01);
    }
  }
  SUBCASE("stopband stays at or below -60 dB from 12 kHz to Nyquist") {
    for (double f = 12000.0; f <= 24000.0; f += 250.0) {
      const double db = testutil::db_amplitude(magnitude_response(lp, f));
      CHECK(db <= -60.0);
    }
  }
}

TEST_CASE("lowpass design rejects invalid parameters") {
  CHECK_THROWS_AS(svckit::dsp::design_lowpass(10000.0, 48000.0, 510),
                  ValidationError);  // even
  CHECK_THROWS_AS(svckit::dsp::design_lowpass(10000.0, 48000.0, 9),
                  ValidationError);  // too short
  CHECK_THROWS_AS(svckit::dsp::design_lowpass(24000.0, 48000.0, 511),
                  ValidationError);  // at Nyquist
  CHECK_THROWS_AS(svckit::dsp::design_lowpass(-1.0, 48000.0, 511),
                  ValidationError);
  CHECK_THROWS_AS(svckit::dsp::design_lowpass(10000.0, 0.0, 511),
                  ValidationError);
}

TEST_CASE("complement is the exact spectral inversion") {
  const FilterKernel lp = svckit::dsp::design_lowpass(10000.0, 48000.0, 127);
  const FilterKernel hp = svckit::dsp::complement(lp);
  CHECK(hp.kind == FilterKind::highpass);
  CHECK(hp.taps.size() == lp.taps.size());
  CHECK(hp.group_delay_samples == lp.group_delay_samples);

  SUBCASE("pair sums to a unit impulse at the center, zeros elsewhere") {
    for (std::size_t k = 0; k < lp.taps.size(); ++k) {
      const double sum = lp.taps[k] + hp.taps[k];
      if (k == static_cast<std::size_t>(lp.group_delay_samples)) {
        CHECK(sum == 1.0);
      } else {
        CHECK(sum == 0.0);
      }
    }
  }
  SUBCASE("highpass blocks DC") {
    const double dc = std::accumulate(hp.taps.begin(), hp.taps.end(), 0.0);
    CHECK(std::fabs(dc) < 1e-6);
  }
  SUBCASE("highpass passes frequencies above the band edge") {
    const double db = testutil::db_amplitude(magnitude_response(hp, 16000.0));
    CHECK(std::fabs(db) < 0.01);
  }
  SUBCASE("only a symmetric lowpass is accepted") {
    CHECK_THROWS_AS(svckit::dsp::complement(hp), ValidationError);
    FilterKernel bent = lp;
    bent.taps[0] += 1e-3;
    CHECK_THROWS_AS(svckit::dsp::complement(bent), ValidationError);
  }
}

TEST_CASE("high + low split reconstructs broadband noise") {
  const FilterKernel lp = svckit::dsp::design_lowpass(10000.0, 48000.0, 511);
  const FilterKernel hp = svckit::dsp::complement(lp);
  const AudioBuffer x = make_mono(testutil::white_noise(8000, 11), 48000);

  const AudioBuffer low = svckit::dsp::apply_filter(lp, x);
  const AudioBuffer high = svckit::dsp::apply_filter(hp, x);
  std::vector<double> sum = low.channels[0];
  testutil::add_into(sum, high.channels[0]);

  // Edge samples see the zero padding in both paths identically, so the
  // identity holds over the full length, not only the interior.
  CHECK(testutil::rms_diff(sum, x.channels[0]) < 1e-12);
}

TEST_CASE("apply_filter convolves, time-aligned and length-preserving") {
  const FilterKernel lp = svckit::dsp::design_lowpass(6000.0, 24000.0, 61);

  SUBCASE("matches a brute-force convolution oracle") {
    const std::vector<double> x = testutil::white_noise(500, 21);
    const AudioBuffer y = svckit::dsp::apply_filter(lp, make_mono(x, 24000));
    const std::vector<double> expected = naive_filter(lp, x);
    REQUIRE(y.frames() == x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      CHECK(y.channels[0][i] == doctest::Approx(expected[i]).epsilon(1e-12));
    }
  }
  SUBCASE("an identity kernel returns the input bit-for-bit") {
    FilterKernel ident;
    ident.taps = {0.0, 1.0, 0.0};
    ident.group_delay_samples = 1;
    ident.cutoff_hz = 6000.0;
    ident.design_rate_hz = 24000.0;
    const std::vector<double> x = testutil::white_noise(100, 22);
    const AudioBuffer y = svckit::dsp::apply_filter(ident, make_mono(x, 24000));
    CHECK(y.channels[0] == x);
  }
  SUBCASE("passband tone keeps its amplitude, interior samples") {
    const std::vector<double> x = testutil::sine(4000, 24000.0, 1000.0, 0.5);
    const AudioBuffer y = svckit::dsp::apply_filter(lp, make_mono(x, 24000));
    CHECK(testutil::rms_diff_interior(y.channels[0], x, 61) < 1e-3);
  }
  SUBCASE("stopband tone is attenuated below -60 dB, interior samples") {
    const std::vector<double> x = testutil::sine(4000, 24000.0, 11000.0, 1.0);
    const AudioBuffer y = svckit::dsp::apply_filter(lp, make_mono(x, 24000));
    std::vector<double> mid(y.channels[0].begin() + 61, y.channels[0].end() - 61);
    CHECK(testutil::db_amplitude(testutil::rms(mid) / testutil::rms(x)) < -60.0);
  }
  SUBCASE("linearity: F(a + b) == F(a) + F(b)") {
    const std::vector<double> a = testutil::white_noise(300, 23);
    const std::vector<double> b = testutil::white_noise(300, 24);
    std::vector<double> ab = a;
    testutil::add_into(ab, b);
    const auto fa = svckit::dsp::apply_filter(lp, make_mono(a, 24000)).channels[0];
    const auto fb = svckit::dsp::apply_filter(lp, make_mono(b, 24000)).channels[0];
    const auto fab = svckit::dsp::apply_filter(lp, make_mono(ab, 24000)).channels[0];
    std::vector<double> sum = fa;
    testutil::add_into(sum, fb);
    CHECK(testutil::rms_diff(fab, sum) < 1e-14);
  }
  SUBCASE("sample-rate mismatch is rejected") {
    CHECK_THROWS_AS(
        svckit::dsp::apply_filter(lp, make_mono({0.0, 0.0}, 48000)),
        ValidationError);
  }
  SUBCASE("stereo input is rejected") {
    AudioBuffer stereo;
    stereo.sample_rate_hz = 24000;
    stereo.channels = {{0.0}, {0.0}};
    CHECK_THROWS_AS(svckit::dsp::apply_filter(lp, stereo), ValidationError);
  }
}

TEST_CASE("upsample by 2 doubles rate and length and preserves tones") {
  const AudioBuffer x = make_mono(testutil::sine(24000, 24000.0, 1000.0, 0.5), 24000);
  const AudioBuffer y = svckit::dsp::upsample(x, 2);
  CHECK(y.sample_rate_hz == 48000);
  CHECK(y.frames() == 2 * x.frames());

  // Measure the tone and its image against a direct DFT oracle on the
  // interior (edges carry filter transients).
  std::vector<double> mid(y.channels[0].begin() + 2000, y.channels[0].end() - 2000);
  const double tone = testutil::tone_amplitude(mid, 48000.0, 1000.0);
  CHECK(std::fabs(testutil::db_amplitude(tone / 0.5)) < 0.1);

  const double image = testutil::tone_amplitude(mid, 48000.0, 23000.0);
  CHECK(testutil::db_amplitude(image / 0.5) <= -60.0);
}

TEST_CASE("upsample edge behavior") {
  SUBCASE("factor 1 returns the input unchanged") {
    const AudioBuffer x = make_mono(testutil::white_noise(128, 31), 24000);
    const AudioBuffer y = svckit::dsp::upsample(x, 1);
    CHECK(y.channels[0] == x.channels[0]);
    CHECK(y.sample_rate_hz == 24000);
  }
  SUBCASE("DC level survives within 1e-4, interior samples") {
    const AudioBuffer x = make_mono(std::vector<double>(6000, 0.25), 24000);
    const AudioBuffer y = svckit::dsp::upsample(x, 2);
    for (std::size_t i = 2000; i + 2000 < y.frames(); ++i) {
      CHECK(std::fabs(y.channels[0][i] - 0.25) < 1e-4);
    }
  }
  SUBCASE("picking every other output recovers the input, interior samples") {
    const AudioBuffer x =
        make_mono(testutil::bandlimited_noise(8000, 24000.0, 100.0, 9000.0, 32), 24000);
    const AudioBuffer y = svckit::dsp::upsample(x, 2);
    std::vector<double> even;
    std::vector<double> orig;
    for (std::size_t i = 1000; i + 1000 < x.frames(); ++i) {
      even.push_back(y.channels[0][2 * i]);
      orig.push_back(x.channels[0][i]);
    }
    CHECK(testutil::rms_diff(even, orig) < 1e-3);
  }
  SUBCASE("factor must be positive") {
    const AudioBuffer x = make_mono({0.0}, 24000);
    CHECK_THROWS_AS(svckit::dsp::upsample(x, 0), ValidationError);
    CHECK_THROWS_AS(svckit::dsp::upsample(x, -2), ValidationError);
  }
}

TEST_CASE("write_taps_text round-trips at full precision") {
  const FilterKernel lp = svckit::dsp::design_lowpass(10000.0, 48000.0, 51);
  std::ostringstream out;
  svckit::dsp::write_taps_text(out, lp);

  std::istringstream in(out.str());
  std::string line;
  std::size_t k = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    REQUIRE(k < lp.taps.size());
    CHECK(std::strtod(line.c_str(), nullptr) == lp.taps[k]);
    ++k;
  }
  CHECK(k == lp.taps.size());
}
