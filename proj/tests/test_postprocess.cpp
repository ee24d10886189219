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
#include <cstdlib>
#include <random>
#include <vector>

#include "doctest.h"
#include "svckit/audio_io.hpp"
#include "svckit/dsp.hpp"
#include "svckit/errors.hpp"
#include "svckit/postprocess.hpp"
#include "test_util.hpp"

namespace {

using svckit::ValidationError;
using svckit::audio::AudioBuffer;
using svckit::audio::make_mono;
using svckit::postproc::PostProcessConfig;

// Brute-force mean-absolute ratio, the oracle for compute_diff.
double naive_diff(const std::vector<double>& s, const std::vector<double>& c) {
  double num = 0.0;
  double den = 0.0;
  for (double v : s) num += std::fabs(v);
  for (double v : c) den += std::fabs(v);
  return (num / static_cast<double>(s.size())) /
         (den / static_cast<double>(c.size()));
}

std::vector<double> scaled(const std::vector<double>& x, double k) {
  std::vector<double> y = x;
  for (double& v : y) v *= k;
  return y;
}

}  // namespace

TEST_CASE("compute_diff equals the brute-force amplitude ratio") {
  SUBCASE("identical signals give exactly 1.0") {
    const auto x = make_mono(testutil::white_noise(777, 5), 48000);
    CHECK(svckit::postproc::compute_diff(x, x).value == 1.0);
  }
  SUBCASE("halving the converted signal gives exactly 2.0") {
    const auto s = testutil::white_noise(777, 6);
    const auto c = scaled(s, 0.5);
    CHECK(svckit::postproc::compute_diff(make_mono(s, 48000),
                                         make_mono(c, 48000))
              .value == 2.0);
  }
  SUBCASE("random pairs match the oracle to 1e-12") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> gain(0.05, 3.0);
    for (int trial = 0; trial < 100; ++trial) {
      const auto s = testutil::white_noise(512, 1000 + trial);
      auto c = testutil::white_noise(512, 2000 + trial, gain(rng));
      const double got = svckit::postproc::compute_diff(make_mono(s, 48000),
                                                        make_mono(c, 48000))
                             .value;
      CHECK(got == doctest::Approx(naive_diff(s, c)).epsilon(1e-12));
    }
  }
  SUBCASE("scaling the converted signal by k scales diff by 1/k") {
    const auto s = testutil::white_noise(512, 77);
    const auto c = testutil::white_noise(512, 78, 0.8);
    const double base = svckit::postproc::compute_diff(make_mono(s, 48000),
                                                       make_mono(c, 48000))
                            .value;
    for (double k : {0.25, 0.5, 2.0, 4.0, 1.3}) {
      const double got =
          svckit::postproc::compute_diff(make_mono(s, 48000),
                                         make_mono(scaled(c, k), 48000))
              .value;
      CHECK(got == doctest::Approx(base / k).epsilon(1e-12));
    }
  }
  SUBCASE("silent converted input is an error, not infinity") {
    const auto s = make_mono(testutil::white_noise(64, 8), 48000);
    const auto silent = make_mono(std::vector<double>(64, 0.0), 48000);
    CHECK_THROWS_WITH_AS(svckit::postproc::compute_diff(s, silent),
                         doctest::Contains("silent"), ValidationError);
  }
  SUBCASE("rate and length mismatches are rejected") {
    const auto a = make_mono(testutil::white_noise(64, 9), 48000);
    const auto b = make_mono(testutil::white_noise(64, 9), 24000);
    CHECK_THROWS_AS(svckit::postproc::compute_diff(a, b), ValidationError);
    const auto c = make_mono(testutil::white_noise(63, 9), 48000);
    CHECK_THROWS_AS(svckit::postproc::compute_diff(a, c), ValidationError);
  }
}

TEST_CASE("supplement_high with converted == source returns the source") {
  // F_h(s) + F_l(s) * 1.0 is the exact crossover identity.
  const auto s = make_mono(testutil::white_noise(9000, 13), 48000);
  const AudioBuffer out = svckit::postproc::supplement_high(s, s);
  CHECK(testutil::rms_diff(out.channels[0], s.channels[0]) < 1e-6);
}

TEST_CASE("supplement_high cancels pure gain on the converted signal") {
  // With c = k * s, diff becomes exactly 1/k (k dyadic keeps this exact
  // in floating point), so the gain cancels and the output is s again.
  const auto samples = testutil::white_noise(9000, 14);
  const auto s = make_mono(samples, 48000);
  for (double k : {0.25, 0.5, 2.0, 4.0}) {
    const auto c = make_mono(scaled(samples, k), 48000);
    const AudioBuffer out = svckit::postproc::supplement_high(s, c);
    CHECK(testutil::rms_diff(out.channels[0], s.channels[0]) < 1e-6);
  }
}

TEST_CASE("supplement output is covariant with source scaling") {
  const auto s_samples = testutil::bandlimited_noise(8000, 48000.0, 50.0, 20000.0, 15);
  const auto c_samples = testutil::bandlimited_noise(8000, 48000.0, 50.0, 9000.0, 16);
  const auto out1 = svckit::postproc::supplement_high(make_mono(s_samples, 48000),
                                                      make_mono(c_samples, 48000));
  const auto out2 = svckit::postproc::supplement_high(
      make_mono(scaled(s_samples, 2.0), 48000), make_mono(c_samples, 48000));
  // Doubling the source doubles both the high band and the diff ratio.
  CHECK(testutil::rms_diff(out2.channels[0], scaled(out1.channels[0], 2.0)) < 1e-9);
}

TEST_CASE("bands come from the right input: two-tone spectral check") {
  // Source carries 1 kHz + 14 kHz; converted carries only 1 kHz at a
  // different level. The output must take 14 kHz from the source and
  // 1 kHz from the gain-corrected converted signal.
  const int n = 48000;
  auto s_samples = testutil::sine(n, 48000.0, 1000.0, 0.4);
  testutil::add_into(s_samples, testutil::sine(n, 48000.0, 14000.0, 0.2));
  const auto c_samples = testutil::sine(n, 48000.0, 1000.0, 0.25);

  const auto s = make_mono(s_samples, 48000);
  const auto c = make_mono(c_samples, 48000);
  const double diff = svckit::postproc::compute_diff(s, c).value;
  const AudioBuffer out = svckit::postproc::supplement_high(s, c);

  std::vector<double> mid(out.channels[0].begin() + 2000,
                          out.channels[0].end() - 2000);
  const double high = testutil::tone_amplitude(mid, 48000.0, 14000.0);
  CHECK(std::fabs(testutil::db_amplitude(high / 0.2)) < 0.5);
  const double low = testutil::tone_amplitude(mid, 48000.0, 1000.0);
  CHECK(std::fabs(testutil::db_amplitude(low / (0.25 * diff))) < 0.5);
}

TEST_CASE("high band is invariant to converted-signal changes") {
  // Perturbing the converted signal, even inside the transition region,
  // must leave the output's high band untouched at the -60 dB level.
  const int n = 48000;
  auto s_samples = testutil::bandlimited_noise(n, 48000.0, 50.0, 9000.0, 21, 0.3);
  testutil::add_into(s_samples, testutil::sine(n, 48000.0, 16000.0, 0.3));
  const auto c_base = testutil::bandlimited_noise(n, 48000.0, 50.0, 9000.0, 22, 0.3);
  auto c_pert = c_base;
  testutil::add_into(c_pert, testutil::sine(n, 48000.0, 13000.0, 0.1));

  const auto s = make_mono(s_samples, 48000);
  const auto out_a =
      svckit::postproc::supplement_high(s, make_mono(c_base, 48000));
  const auto out_b =
      svckit::postproc::supplement_high(s, make_mono(c_pert, 48000));

  // Compare high-band energy of the delta against the output's own
  // high-band energy using an independent Hann power spectrum.
  std::vector<double> delta = out_b.channels[0];
  for (std::size_t i = 0; i < delta.size(); ++i) delta[i] -= out_a.channels[0][i];

  const int n_fft = 8192;
  double delta_high = 0.0;
  double ref_high = 0.0;
  for (std::size_t off = 4000; off + n_fft + 4000 < delta.size(); off += n_fft) {
    const auto pd = testutil::power_spectrum(delta, n_fft, off);
    const auto pr = testutil::power_spectrum(out_a.channels[0], n_fft, off);
    delta_high += testutil::band_energy(pd, 48000.0, n_fft, 12000.0, 24000.0);
    ref_high += testutil::band_energy(pr, 48000.0, n_fft, 12000.0, 24000.0);
  }
  CHECK(10.0 * std::log10(delta_high / ref_high) <= -60.0);
}

TEST_CASE("matched pairs are idempotent within 1e-4 RMS") {
  // Supplementing (s, Out) where Out itself came from (s, c) reproduces
  // Out: the second pass finds a gain ratio of ~1 and an already-correct
  // low band. Fixture clips fade in and out like real recordings; a
  // hard-cut clip would instead measure the convolution's zero-padding
  // transient at the boundaries, not the invariant.
  const int n = 48000;
  auto s_samples = testutil::bandlimited_noise(n, 48000.0, 50.0, 8000.0, 23, 0.35);
  testutil::add_into(s_samples, testutil::sine(n, 48000.0, 14000.0, 0.003));
  auto c_samples = testutil::bandlimited_noise(n, 48000.0, 50.0, 8000.0, 24, 0.3);
  testutil::fade_edges(s_samples, 1024);
  testutil::fade_edges(c_samples, 1024);
  const auto s = make_mono(s_samples, 48000);
  const auto c = make_mono(c_samples, 48000);

  const AudioBuffer out = svckit::postproc::supplement_high(s, c);
  const AudioBuffer again = svckit::postproc::supplement_high(s, out);
  CHECK(testutil::rms_diff(again.channels[0], out.channels[0]) < 1e-4);
}

TEST_CASE("supplement_high validates its inputs") {
  const auto s = make_mono(testutil::white_noise(256, 31), 48000);
  SUBCASE("wrong rate") {
    const auto c = make_mono(testutil::white_noise(256, 32), 24000);
    CHECK_THROWS_AS(svckit::postproc::supplement_high(s, c), ValidationError);
  }
  SUBCASE("length mismatch") {
    const auto c = make_mono(testutil::white_noise(255, 32), 48000);
    CHECK_THROWS_AS(svckit::postproc::supplement_high(s, c), ValidationError);
  }
  SUBCASE("crossover above Nyquist") {
    PostProcessConfig config;
    config.crossover_hz = 25000.0;
    CHECK_THROWS_AS(svckit::postproc::supplement_high(s, s, config),
                    ValidationError);
  }
}

TEST_CASE("postprocess_file runs the whole pipeline") {
  testutil::TempDir dir;
  const svckit::audio::WavFormat f48{svckit::audio::WavEncoding::float32, 1, 48000};
  const svckit::audio::WavFormat f24{svckit::audio::WavEncoding::float32, 1, 24000};

  SUBCASE("identity run reports diff=1 and reproduces the source") {
    const auto s = make_mono(testutil::white_noise(24000, 41, 0.4), 48000);
    const auto src = dir.file("s.wav");
    const auto out = dir.file("o.wav");
    svckit::audio::write_wav(src, s, f48);
    const auto report = svckit::postproc::postprocess_file(src, src, out);
    CHECK(report.diff == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(report.trimmed_samples == 0);
    CHECK(report.output_rate_hz == 48000);
    const auto [written, format] = svckit::audio::read_wav(out);
    CHECK(format.encoding == svckit::audio::WavEncoding::float32);
    // float32 storage quantizes to ~1e-7 relative.
    CHECK(testutil::rms_diff(written.channels[0], s.channels[0]) < 1e-5);
  }
  SUBCASE("a 24 kHz converted file is upsampled to the target rate") {
    const int n24 = 12000;
    const auto s = make_mono(
        testutil::bandlimited_noise(2 * n24, 48000.0, 50.0, 20000.0, 42), 48000);
    const auto c =
        make_mono(testutil::bandlimited_noise(n24, 24000.0, 50.0, 9000.0, 43), 24000);
    const auto src = dir.file("s24.wav");
    const auto conv = dir.file("c24.wav");
    const auto out = dir.file("o24.wav");
    svckit::audio::write_wav(src, s, f48);
    svckit::audio::write_wav(conv, c, f24);
    const auto report = svckit::postproc::postprocess_file(src, conv, out);
    CHECK(report.output_rate_hz == 48000);
    CHECK(report.output_frames == s.frames());
    const auto written = svckit::audio::read_wav(out).first;
    CHECK(written.frames() == s.frames());
  }
  SUBCASE("length slack within the tolerance trims the longer tail") {
    const auto s = make_mono(testutil::white_noise(24000, 44, 0.4), 48000);
    const auto c = make_mono(testutil::white_noise(24010, 45, 0.4), 48000);
    const auto src = dir.file("sl.wav");
    const auto conv = dir.file("cl.wav");
    const auto out = dir.file("ol.wav");
    svckit::audio::write_wav(src, s, f48);
    svckit::audio::write_wav(conv, c, f48);

    PostProcessConfig config;
    config.length_tolerance_samples = 16;
    const auto report = svckit::postproc::postprocess_file(src, conv, out, config);
    CHECK(report.trimmed_samples == 10);
    CHECK(report.output_frames == 24000);

    // The same inputs without tolerance must fail and leave no output.
    const auto out2 = dir.file("never.wav");
    CHECK_THROWS_WITH_AS(
        svckit::postproc::postprocess_file(src, conv, out2),
        doctest::Contains("tolerance"), ValidationError);
    CHECK(!std::filesystem::exists(out2));
  }
  SUBCASE("non-integer rate ratios are rejected") {
    const auto s = make_mono(testutil::white_noise(4800, 46), 48000);
    AudioBuffer c = make_mono(testutil::white_noise(4410, 47), 44100);
    const auto src = dir.file("sr.wav");
    const auto conv = dir.file("cr.wav");
    svckit::audio::write_wav(src, s, f48);
    svckit::audio::write_wav(conv, c,
                             svckit::audio::WavFormat{
                                 svckit::audio::WavEncoding::float32, 1, 44100});
    CHECK_THROWS_WITH_AS(
        svckit::postproc::postprocess_file(src, conv, dir.file("or.wav")),
        doctest::Contains("divide"), ValidationError);
  }
  SUBCASE("source below the target rate is rejected") {
    const auto s = make_mono(testutil::white_noise(2400, 48), 24000);
    const auto src = dir.file("slow.wav");
    svckit::audio::write_wav(src, s, f24);
    CHECK_THROWS_WITH_AS(
        svckit::postproc::postprocess_file(src, src, dir.file("oo.wav")),
        doctest::Contains("target rate"), ValidationError);
  }
}

TEST_CASE("report line is a stable key=value record") {
  svckit::postproc::PostProcessReport report;
  report.diff = 1.25;
  report.peak = 0.5;
  report.trimmed_samples = 3;
  report.crossover_hz = 10000.0;
  CHECK(report.to_line() ==
        "diff=1.250000 peak=0.500000 trimmed_samples=3 crossover_hz=10000.0");
}
