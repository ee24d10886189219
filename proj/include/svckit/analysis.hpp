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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "svckit/audio_io.hpp"

namespace svckit::analysis {

/// Row-major dense matrix, just large enough for spectrogram work.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  double* row(std::size_t r) { return data.data() + r * cols; }
  const double* row(std::size_t r) const { return data.data() + r * cols; }
};

struct SpectrogramConfig {
  int n_fft = 1024;   // power of two
  int hop = 256;      // <= n_fft
  int n_mels = 80;
  double fmin_hz = 0.0;
  double fmax_hz = 0.0;  // 0 means Nyquist of the analyzed buffer
  double log_floor = 1e-5;

  bool operator==(const SpectrogramConfig&) const = default;
};

/// Hann-windowed, non-centered frames: frame count is
/// 1 + floor((len - n_fft) / hop). Returns magnitudes of the half
/// spectrum, frames x (n_fft/2 + 1).
Matrix stft_magnitude(const audio::AudioBuffer& x, const SpectrogramConfig& config);

/// Triangular filterbank on the HTK mel scale, n_mels x (n_fft/2 + 1).
Matrix mel_filterbank(const SpectrogramConfig& config, int sample_rate_hz);

struct MelSpectrogram {
  Matrix values;  // frames x n_mels, natural-log magnitudes
  SpectrogramConfig config;
  int source_rate_hz = 0;
};

/// Filterbank applied to STFT magnitudes, then natural log clamped at
/// config.log_floor.
MelSpectrogram mel_spectrogram(const audio::AudioBuffer& x,
                               const SpectrogramConfig& config);

/// Mean absolute difference over all cells. Shapes, configs, and source
/// rates must match.
double mel_l1(const MelSpectrogram& a, const MelSpectrogram& b);

/// Comma-separated rows under a one-line config header.
void write_mel_text(std::ostream& out, const MelSpectrogram& mel);
MelSpectrogram read_mel_text(std::istream& in);

/// Per-frame fundamental frequency. f0_hz is positive exactly where
/// voiced and zero elsewhere.
struct F0Contour {
  std::vector<double> f0_hz;
  std::vector<std::uint8_t> voiced;
  double hop_seconds = 0.0;
};

/// Transposes voiced frames by `keys` semitones (factor 2^(keys/12));
/// unvoiced frames and voicing flags are untouched.
F0Contour shift_f0(const F0Contour& contour, int keys);

struct F0EstimateOptions {
  double fmin_hz = 50.0;
  double fmax_hz = 1100.0;
  int frame = 2048;
  int hop = 256;
  double voicing_threshold = 0.5;
};

/// Normalized-autocorrelation pitch tracker with parabolic lag
/// refinement. A desk-scale fixture: contours from external extractors
/// are accepted through the contour text format instead.
F0Contour estimate_f0(const audio::AudioBuffer& x,
                      const F0EstimateOptions& options = {});

/// One frame per line: "time_seconds f0_hz", f0 zero when unvoiced.
void write_contour(std::ostream& out, const F0Contour& contour);
F0Contour read_contour(std::istream& in);

struct EmbeddingVector {
  std::string name;
  std::vector<double> values;
};

/// dot(a,b) / (|a| * |b|). Lengths must match and both norms must be
/// nonzero.
double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

/// One vector per line, comma-separated decimals, optional leading
/// "name:" token.
std::vector<EmbeddingVector> read_embeddings(std::istream& in);
std::vector<EmbeddingVector> read_embeddings_file(const std::filesystem::path& path);

}  // namespace svckit::analysis
