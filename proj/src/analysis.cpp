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

#include "svckit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "svckit/errors.hpp"
#include "svckit/simd/kernels.hpp"
#include "text_util.hpp"

namespace svckit::analysis {
namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 FFT. Size must be a power of two; the
// spectrogram configs this library accepts guarantee that.
void fft(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double angle = -2.0 * std::numbers::pi / static_cast<double>(len);
    const std::complex<double> step(std::cos(angle), std::sin(angle));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= step;
      }
    }
  }
}

void check_config(const SpectrogramConfig& config, int sample_rate_hz) {
  if (sample_rate_hz <= 0) {
    throw ValidationError("sample rate must be positive, got " +
                          std::to_string(sample_rate_hz));
  }
  if (!is_power_of_two(config.n_fft)) {
    throw ValidationError("n_fft must be a power of two, got " +
                          std::to_string(config.n_fft));
  }
  if (config.hop <= 0 || config.hop > config.n_fft) {
    throw ValidationError("hop must be in [1, n_fft], got " +
                          std::to_string(config.hop));
  }
  if (config.n_mels < 1) {
    throw ValidationError("n_mels must be at least 1, got " +
                          std::to_string(config.n_mels));
  }
  if (!(config.log_floor > 0.0)) {
    throw ValidationError("log_floor must be positive");
  }
  const double nyquist = sample_rate_hz / 2.0;
  const double fmax = config.fmax_hz == 0.0 ? nyquist : config.fmax_hz;
  if (config.fmin_hz < 0.0 || config.fmin_hz >= fmax) {
    throw ValidationError("fmin must satisfy 0 <= fmin < fmax");
  }
  if (fmax > nyquist + 1e-9) {
    throw ValidationError("fmax " + std::to_string(fmax) +
                          " Hz exceeds the Nyquist frequency " +
                          std::to_string(nyquist) + " Hz");
  }
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

const std::vector<double>& require_mono(const audio::AudioBuffer& x,
                                        const char* what) {
  if (!x.is_mono()) {
    throw ValidationError(std::string(what) + " expects mono audio, got " +
                          std::to_string(x.channel_count()) + " channels");
  }
  return x.channels[0];
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Matrix stft_magnitude(const audio::AudioBuffer& x,
                      const SpectrogramConfig& config) {
  const std::vector<double>& samples = require_mono(x, "stft");
  check_config(config, x.sample_rate_hz);
  const std::size_t n_fft = static_cast<std::size_t>(config.n_fft);
  if (samples.size() < n_fft) {
    throw ValidationError("audio of " + std::to_string(samples.size()) +
                          " samples is shorter than one analysis window of " +
                          std::to_string(n_fft) + " samples");
  }
  const std::size_t hop = static_cast<std::size_t>(config.hop);
  const std::size_t frames = 1 + (samples.size() - n_fft) / hop;
  const std::size_t bins = n_fft / 2 + 1;

  // Periodic Hann, the variant whose shifted copies sum to a constant.
  std::vector<double> window(n_fft);
  for (std::size_t i = 0; i < n_fft; ++i) {
    window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi *
                                     static_cast<double>(i) /
                                     static_cast<double>(n_fft));
  }

  Matrix out(frames, bins);
  std::vector<std::complex<double>> buf(n_fft);
  for (std::size_t t = 0; t < frames; ++t) {
    const double* frame = samples.data() + t * hop;
    for (std::size_t i = 0; i < n_fft; ++i) {
      buf[i] = std::complex<double>(frame[i] * window[i], 0.0);
    }
    fft(buf);
    double* row = out.row(t);
    for (std::size_t k = 0; k < bins; ++k) row[k] = std::abs(buf[k]);
  }
  return out;
}

Matrix mel_filterbank(const SpectrogramConfig& config, int sample_rate_hz) {
  check_config(config, sample_rate_hz);
  const double fmax =
      config.fmax_hz == 0.0 ? sample_rate_hz / 2.0 : config.fmax_hz;
  const std::size_t bins = static_cast<std::size_t>(config.n_fft) / 2 + 1;
  const std::size_t n_mels = static_cast<std::size_t>(config.n_mels);

  // n_mels + 2 edges, equally spaced on the mel scale.
  std::vector<double> edges_hz(n_mels + 2);
  const double mel_lo = hz_to_mel(config.fmin_hz);
  const double mel_hi = hz_to_mel(fmax);
  for (std::size_t i = 0; i < edges_hz.size(); ++i) {
    const double mel = mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) /
                                    static_cast<double>(n_mels + 1);
    edges_hz[i] = mel_to_hz(mel);
  }

  Matrix fb(n_mels, bins);
  const double bin_hz = static_cast<double>(sample_rate_hz) /
                        static_cast<double>(config.n_fft);
  for (std::size_t m = 0; m < n_mels; ++m) {
    const double left = edges_hz[m];
    const double center = edges_hz[m + 1];
    const double right = edges_hz[m + 2];
    double* row = fb.row(m);
    for (std::size_t k = 0; k < bins; ++k) {
      const double f = bin_hz * static_cast<double>(k);
      double up = 0.0;
      double down = 0.0;
      if (center > left) up = (f - left) / (center - left);
      if (right > center) down = (right - f) / (right - center);
      row[k] = std::max(0.0, std::min(up, down));
    }
  }
  return fb;
}

MelSpectrogram mel_spectrogram(const audio::AudioBuffer& x,
                               const SpectrogramConfig& config) {
  Matrix mag = stft_magnitude(x, config);
  Matrix fb = mel_filterbank(config, x.sample_rate_hz);
  const simd::Kernels& kernels = simd::active();

  MelSpectrogram mel;
  mel.config = config;
  mel.source_rate_hz = x.sample_rate_hz;
  mel.values = Matrix(mag.rows, fb.rows);
  for (std::size_t t = 0; t < mag.rows; ++t) {
    const double* spectrum = mag.row(t);
    double* row = mel.values.row(t);
    for (std::size_t m = 0; m < fb.rows; ++m) {
      const double energy = kernels.dot(fb.row(m), spectrum, mag.cols);
      row[m] = std::log(std::max(energy, config.log_floor));
    }
  }
  return mel;
}

double mel_l1(const MelSpectrogram& a, const MelSpectrogram& b) {
  if (!(a.config == b.config)) {
    throw ValidationError(
        "mel spectrograms were computed with different configurations");
  }
  if (a.source_rate_hz != b.source_rate_hz) {
    throw ValidationError("mel spectrograms come from different sample rates: " +
                          std::to_string(a.source_rate_hz) + " Hz vs " +
                          std::to_string(b.source_rate_hz) + " Hz");
  }
  if (a.values.rows != b.values.rows || a.values.cols != b.values.cols) {
    throw ValidationError("mel spectrogram shapes differ: " +
                          std::to_string(a.values.rows) + "x" +
                          std::to_string(a.values.cols) + " vs " +
                          std::to_string(b.values.rows) + "x" +
                          std::to_string(b.values.cols));
  }
  const std::size_t n = a.values.data.size();
  if (n == 0) throw ValidationError("mel spectrograms are empty");
  const simd::Kernels& kernels = simd::active();
  std::vector<double> diff(n);
  kernels.scale_add(diff.data(), a.values.data.data(), b.values.data.data(),
                    -1.0, n);
  return kernels.sum_abs(diff.data(), n) / static_cast<double>(n);
}

void write_mel_text(std::ostream& out, const MelSpectrogram& mel) {
  out << "mel frames=" << mel.values.rows << " mels=" << mel.values.cols
      << " n_fft=" << mel.config.n_fft << " hop=" << mel.config.hop
      << " rate=" << mel.source_rate_hz
      << " fmin=" << format_double(mel.config.fmin_hz)
      << " fmax=" << format_double(mel.config.fmax_hz)
      << " log_floor=" << format_double(mel.config.log_floor) << "\n";
  for (std::size_t t = 0; t < mel.values.rows; ++t) {
    const double* row = mel.values.row(t);
    for (std::size_t m = 0; m < mel.values.cols; ++m) {
      if (m != 0) out << ',';
      out << format_double(row[m]);
    }
    out << "\n";
  }
}

MelSpectrogram read_mel_text(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ValidationError("mel text is empty");
  }
  std::istringstream header(line);
  std::string tag;
  header >> tag;
  if (tag != "mel") {
    throw ValidationError("mel text must start with a 'mel' header line");
  }
  MelSpectrogram mel;
  std::size_t frames = 0;
  std::size_t mels = 0;
  std::string field;
  while (header >> field) {
    const std::size_t eq = field.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("mel header field '" + field +
                            "' is not key=value");
    }
    const std::string key = field.substr(0, eq);
    const std::string value = field.substr(eq + 1);
    const std::string context = "mel header field '" + key + "'";
    if (key == "frames") {
      frames = static_cast<std::size_t>(textio::parse_long(value, context));
    } else if (key == "mels") {
      mels = static_cast<std::size_t>(textio::parse_long(value, context));
    } else if (key == "n_fft") {
      mel.config.n_fft = static_cast<int>(textio::parse_long(value, context));
    } else if (key == "hop") {
      mel.config.hop = static_cast<int>(textio::parse_long(value, context));
    } else if (key == "rate") {
      mel.source_rate_hz =
          static_cast<int>(textio::parse_long(value, context));
    } else if (key == "fmin") {
      mel.config.fmin_hz = textio::parse_double(value, context);
    } else if (key == "fmax") {
      mel.config.fmax_hz = textio::parse_double(value, context);
    } else if (key == "log_floor") {
      mel.config.log_floor = textio::parse_double(value, context);
    } else {
      throw ValidationError("mel header has unknown key '" + key + "'");
    }
  }
  if (frames == 0 || mels == 0) {
    throw ValidationError("mel header must give nonzero frames and mels");
  }
  mel.config.n_mels = static_cast<int>(mels);
  mel.values = Matrix(frames, mels);
  for (std::size_t t = 0; t < frames; ++t) {
    if (!std::getline(in, line)) {
      throw ValidationError("mel text ends after " + std::to_string(t) +
                            " of " + std::to_string(frames) + " rows");
    }
    const std::vector<std::string> fields = textio::split(line, ',');
    if (fields.size() != mels) {
      throw ValidationError("mel row " + std::to_string(t + 1) + " has " +
                            std::to_string(fields.size()) + " values, expected " +
                            std::to_string(mels));
    }
    double* row = mel.values.row(t);
    for (std::size_t m = 0; m < mels; ++m) {
      row[m] = textio::parse_double(
          fields[m], "mel row " + std::to_string(t + 1));
    }
  }
  return mel;
}

F0Contour shift_f0(const F0Contour& contour, int keys) {
  if (contour.f0_hz.size() != contour.voiced.size()) {
    throw ValidationError("contour has " + std::to_string(contour.f0_hz.size()) +
                          " f0 values but " + std::to_string(contour.voiced.size()) +
                          " voicing flags");
  }
  const double factor = std::exp2(static_cast<double>(keys) / 12.0);
  F0Contour shifted = contour;
  for (std::size_t i = 0; i < shifted.f0_hz.size(); ++i) {
    shifted.f0_hz[i] = shifted.voiced[i] ? shifted.f0_hz[i] * factor : 0.0;
  }
  return shifted;
}

F0Contour estimate_f0(const audio::AudioBuffer& x,
                      const F0EstimateOptions& options) {
  const std::vector<double>& samples = require_mono(x, "f0 estimation");
  const int rate = x.sample_rate_hz;
  if (rate <= 0) {
    throw ValidationError("sample rate must be positive, got " +
                          std::to_string(rate));
  }
  if (!(options.fmin_hz > 0.0) || !(options.fmax_hz > options.fmin_hz)) {
    throw ValidationError("f0 search range must satisfy 0 < fmin < fmax");
  }
  if (options.fmax_hz >= rate / 2.0) {
    throw ValidationError("fmax must be below the Nyquist frequency");
  }
  if (options.hop <= 0) {
    throw ValidationError("hop must be positive");
  }
  if (options.voicing_threshold < 0.0 || options.voicing_threshold > 1.0) {
    throw ValidationError("voicing threshold must be in [0, 1]");
  }
  const int lag_min = std::max(2, static_cast<int>(std::floor(rate / options.fmax_hz)));
  const int lag_max = static_cast<int>(std::ceil(rate / options.fmin_hz));
  const int window = options.frame - lag_max;
  if (window < 32) {
    throw ValidationError(
        "frame of " + std::to_string(options.frame) +
        " samples is too short: the longest searched period is " +
        std::to_string(lag_max) + " samples and at least 32 samples of "
        "correlation window must remain");
  }
  const std::size_t frame = static_cast<std::size_t>(options.frame);
  const std::size_t hop = static_cast<std::size_t>(options.hop);
  const simd::Kernels& kernels = simd::active();

  F0Contour contour;
  contour.hop_seconds = static_cast<double>(hop) / static_cast<double>(rate);
  // Audio shorter than one frame is degenerate, not an error: no frames.
  if (samples.size() < frame) return contour;
  const std::size_t frames = 1 + (samples.size() - frame) / hop;
  contour.f0_hz.assign(frames, 0.0);
  contour.voiced.assign(frames, 0);

  std::vector<double> buf(frame);
  std::vector<double> energy_prefix(frame + 1);
  std::vector<double> nccf(static_cast<std::size_t>(lag_max) + 2, 0.0);
  const std::size_t w = static_cast<std::size_t>(window);

  for (std::size_t t = 0; t < frames; ++t) {
    const double* src = samples.data() + t * hop;
    double mean = 0.0;
    for (std::size_t i = 0; i < frame; ++i) mean += src[i];
    mean /= static_cast<double>(frame);
    for (std::size_t i = 0; i < frame; ++i) buf[i] = src[i] - mean;

    energy_prefix[0] = 0.0;
    for (std::size_t i = 0; i < frame; ++i) {
      energy_prefix[i + 1] = energy_prefix[i] + buf[i] * buf[i];
    }
    const double e0 = energy_prefix[w];
    if (e0 <= 0.0) continue;  // silent frame stays unvoiced

    // Normalized cross-correlation of the frame head against itself at
    // every candidate period.
    double best = 0.0;
    for (int lag = lag_min; lag <= lag_max; ++lag) {
      const double elag = energy_prefix[lag + w] - energy_prefix[lag];
      if (elag <= 0.0) {
        nccf[static_cast<std::size_t>(lag)] = 0.0;
        continue;
      }
      const double num = kernels.dot(buf.data(), buf.data() + lag, w);
      const double r = num / std::sqrt(e0 * elag);
      nccf[static_cast<std::size_t>(lag)] = r;
      if (r > best) best = r;
    }
    if (best < options.voicing_threshold) continue;

    // The true period is the shortest strong lag; subharmonics repeat at
    // multiples of it with near-equal correlation. Taking the first local
    // maximum within 10% of the peak avoids octave-down errors.
    int picked = -1;
    for (int lag = lag_min; lag <= lag_max; ++lag) {
      const double r = nccf[static_cast<std::size_t>(lag)];
      if (r < 0.9 * best) continue;
      const double prev = lag > lag_min ? nccf[static_cast<std::size_t>(lag - 1)] : -1.0;
      const double next = lag < lag_max ? nccf[static_cast<std::size_t>(lag + 1)] : -1.0;
      if (r >= prev && r >= next) {
        picked = lag;
        break;
      }
    }
    if (picked < 0) continue;

    double refined = static_cast<double>(picked);
    if (picked > lag_min && picked < lag_max) {
      const double rl = nccf[static_cast<std::size_t>(picked - 1)];
      const double rc = nccf[static_cast<std::size_t>(picked)];
      const double rr = nccf[static_cast<std::size_t>(picked + 1)];
      const double denom = rl - 2.0 * rc + rr;
      if (std::abs(denom) > 1e-12) {
        const double delta = 0.5 * (rl - rr) / denom;
        if (delta > -0.5 && delta < 0.5) refined += delta;
      }
    }
    contour.f0_hz[t] = static_cast<double>(rate) / refined;
    contour.voiced[t] = 1;
  }
  return contour;
}

void write_contour(std::ostream& out, const F0Contour& contour) {
  if (contour.f0_hz.size() != contour.voiced.size()) {
    throw ValidationError("contour has " + std::to_string(contour.f0_hz.size()) +
                          " f0 values but " + std::to_string(contour.voiced.size()) +
                          " voicing flags");
  }
  char buf[80];
  for (std::size_t i = 0; i < contour.f0_hz.size(); ++i) {
    const double t = static_cast<double>(i) * contour.hop_seconds;
    const double f0 = contour.voiced[i] ? contour.f0_hz[i] : 0.0;
    std::snprintf(buf, sizeof(buf), "%.6f %.6f\n", t, f0);
    out << buf;
  }
}

F0Contour read_contour(std::istream& in) {
  F0Contour contour;
  std::vector<double> times;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string_view text = textio::trim(line);
    if (text.empty() || text.front() == '#') continue;
    std::istringstream fields{std::string(text)};
    double t = 0.0;
    double f0 = 0.0;
    std::string extra;
    if (!(fields >> t >> f0) || (fields >> extra)) {
      throw ValidationError("contour line " + std::to_string(line_number) +
                            ": expected 'time_seconds f0_hz'");
    }
    if (f0 < 0.0) {
      throw ValidationError("contour line " + std::to_string(line_number) +
                            ": f0 must be nonnegative, got " +
                            std::to_string(f0));
    }
    if (!times.empty() && t <= times.back()) {
      throw ValidationError("contour line " + std::to_string(line_number) +
                            ": times must be strictly increasing");
    }
    times.push_back(t);
    contour.f0_hz.push_back(f0);
    contour.voiced.push_back(f0 > 0.0 ? 1 : 0);
  }
  if (contour.f0_hz.empty()) {
    throw ValidationError("contour is empty");
  }
  contour.hop_seconds = times.size() >= 2 ? times[1] - times[0] : 0.0;
  return contour;
}

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.values.size() != b.values.size()) {
    throw ValidationError("embedding lengths differ: " +
                          std::to_string(a.values.size()) + " vs " +
                          std::to_string(b.values.size()));
  }
  if (a.values.empty()) {
    throw ValidationError("embeddings are empty");
  }
  const simd::Kernels& kernels = simd::active();
  const double na = kernels.sum_squares(a.values.data(), a.values.size());
  const double nb = kernels.sum_squares(b.values.data(), b.values.size());
  if (na <= 0.0 || nb <= 0.0) {
    throw ValidationError(
        "cosine similarity is undefined for a zero vector");
  }
  const double dot = kernels.dot(a.values.data(), b.values.data(),
                                 a.values.size());
  return dot / std::sqrt(na * nb);
}

std::vector<EmbeddingVector> read_embeddings(std::istream& in) {
  std::vector<EmbeddingVector> vectors;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::string_view text = textio::trim(line);
    if (text.empty() || text.front() == '#') continue;

    EmbeddingVector vec;
    const std::size_t colon = text.find(':');
    if (colon != std::string_view::npos) {
      vec.name = std::string(textio::trim(text.substr(0, colon)));
      text = text.substr(colon + 1);
    }
    const std::string context = "embeddings line " + std::to_string(line_number);
    for (const std::string& field : textio::split(text, ',')) {
      vec.values.push_back(textio::parse_double(field, context));
    }
    vectors.push_back(std::move(vec));
  }
  return vectors;
}

std::vector<EmbeddingVector> read_embeddings_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open embeddings file " + path.string());
  }
  return read_embeddings(in);
}

}  // namespace svckit::analysis
