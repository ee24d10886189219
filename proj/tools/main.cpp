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

// Command-line front end. Machine-readable results go to stdout,
// diagnostics to stderr; exit codes are 0 (success), 1 (validation
// error), 2 (I/O error).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "svckit/analysis.hpp"
#include "svckit/audio_io.hpp"
#include "svckit/dsp.hpp"
#include "svckit/errors.hpp"
#include "svckit/evaluation.hpp"
#include "svckit/postprocess.hpp"

namespace {

using svckit::IoError;
using svckit::ValidationError;

std::string fmt(const char* pattern, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, value);
  return buf;
}

svckit::audio::AudioBuffer read_mono(const std::filesystem::path& path) {
  return svckit::audio::to_mono(svckit::audio::read_wav(path).first);
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open output file " + path.string());
  return out;
}

svckit::analysis::F0Contour read_contour_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open contour file " + path.string());
  return svckit::analysis::read_contour(in);
}

struct PostprocessArgs {
  std::string source;
  std::string converted;
  std::string out;
  svckit::postproc::PostProcessConfig config;
};

void add_postprocess(CLI::App& app, PostprocessArgs& args) {
  CLI::App* cmd = app.add_subcommand(
      "postprocess",
      "Replace a converted song's band above the crossover with the source "
      "song's band, gain-matching the rest");
  cmd->add_option("--source", args.source,
                  "source WAV, the high-frequency reference (must be at the "
                  "target rate)")
      ->required();
  cmd->add_option("--converted", args.converted,
                  "converted WAV (upsampled to the target rate when its rate "
                  "divides it)")
      ->required();
  cmd->add_option("--out", args.out, "output WAV (float32)")->required();
  cmd->add_option("--crossover-hz", args.config.crossover_hz,
                  "crossover frequency in Hz")
      ->capture_default_str();
  cmd->add_option("--target-rate", args.config.target_rate_hz,
                  "output sample rate in Hz")
      ->capture_default_str();
  cmd->add_option("--taps", args.config.num_taps, "FIR tap count (odd)")
      ->capture_default_str();
  cmd->add_option("--length-tolerance", args.config.length_tolerance_samples,
                  "max sample-count mismatch trimmed from the longer tail")
      ->capture_default_str();
  cmd->callback([&args] {
    const svckit::postproc::PostProcessReport report =
        svckit::postproc::postprocess_file(args.source, args.converted,
                                           args.out, args.config);
    if (report.trimmed_samples > 0) {
      std::cerr << "warning: trimmed " << report.trimmed_samples
                << " tail samples to align lengths\n";
    }
    std::cout << report.to_line() << "\n";
  });
}

struct MelArgs {
  std::string a;
  std::string b;
  svckit::analysis::SpectrogramConfig config;
};

void add_mel_l1(CLI::App& app, MelArgs& args) {
  CLI::App* cmd = app.add_subcommand(
      "mel-l1", "Mean absolute difference between two mel spectrograms");
  cmd->add_option("--a", args.a, "first WAV")->required();
  cmd->add_option("--b", args.b, "second WAV")->required();
  cmd->add_option("--n-fft", args.config.n_fft, "FFT size (power of two)")
      ->capture_default_str();
  cmd->add_option("--hop", args.config.hop, "hop size in samples")
      ->capture_default_str();
  cmd->add_option("--n-mels", args.config.n_mels, "mel band count")
      ->capture_default_str();
  cmd->add_option("--fmin", args.config.fmin_hz, "lowest band edge in Hz")
      ->capture_default_str();
  cmd->add_option("--fmax", args.config.fmax_hz,
                  "highest band edge in Hz (0 = Nyquist)")
      ->capture_default_str();
  cmd->add_option("--log-floor", args.config.log_floor,
                  "magnitude floor before the log")
      ->capture_default_str();
  cmd->callback([&args] {
    const auto mel_a =
        svckit::analysis::mel_spectrogram(read_mono(args.a), args.config);
    const auto mel_b =
        svckit::analysis::mel_spectrogram(read_mono(args.b), args.config);
    std::cout << fmt("%.6f", svckit::analysis::mel_l1(mel_a, mel_b)) << "\n";
  });
}

struct F0Args {
  std::string in;
  std::string out;
  int keys = 0;
  svckit::analysis::F0EstimateOptions options;
};

void add_f0(CLI::App& app, F0Args& args) {
  CLI::App* cmd = app.add_subcommand("f0", "Fundamental-frequency tools");
  cmd->require_subcommand(1);

  CLI::App* estimate = cmd->add_subcommand(
      "estimate", "Estimate an F0 contour from a WAV (autocorrelation method)");
  estimate->add_option("--in", args.in, "input WAV")->required();
  estimate->add_option("--out", args.out, "output contour file")->required();
  estimate->add_option("--fmin", args.options.fmin_hz, "lowest F0 in Hz")
      ->capture_default_str();
  estimate->add_option("--fmax", args.options.fmax_hz, "highest F0 in Hz")
      ->capture_default_str();
  estimate->add_option("--frame", args.options.frame, "frame size in samples")
      ->capture_default_str();
  estimate->add_option("--hop", args.options.hop, "hop size in samples")
      ->capture_default_str();
  estimate
      ->add_option("--threshold", args.options.voicing_threshold,
                   "voicing decision threshold on peak correlation")
      ->capture_default_str();
  estimate->callback([&args] {
    const auto contour =
        svckit::analysis::estimate_f0(read_mono(args.in), args.options);
    std::ofstream out = open_output(args.out);
    svckit::analysis::write_contour(out, contour);
    std::size_t voiced = 0;
    for (auto v : contour.voiced) voiced += v;
    std::cout << "frames=" << contour.f0_hz.size() << " voiced=" << voiced
              << "\n";
  });

  CLI::App* shift = cmd->add_subcommand(
      "shift", "Transpose a contour by a signed number of keys (semitones)");
  shift->add_option("--in", args.in, "input contour file")->required();
  shift
      ->add_option("--keys", args.keys,
                   "semitones to shift; 4 is the usual cross-gender setting")
      ->required();
  shift->add_option("--out", args.out, "output contour file")->required();
  shift->callback([&args] {
    const auto contour = read_contour_file(args.in);
    const auto shifted = svckit::analysis::shift_f0(contour, args.keys);
    std::ofstream out = open_output(args.out);
    svckit::analysis::write_contour(out, shifted);
    std::cout << "frames=" << shifted.f0_hz.size() << " keys=" << args.keys
              << "\n";
  });
}

struct CossimArgs {
  std::string pairs;
};

void add_cossim(CLI::App& app, CossimArgs& args) {
  CLI::App* cmd = app.add_subcommand(
      "cossim", "Mean cosine similarity over a list of embedding pairs");
  cmd->add_option("--pairs", args.pairs,
                  "pair list: lines of system,converted_path,reference_path "
                  "(relative paths resolve against the list's directory)")
      ->required();
  cmd->callback([&args] {
    const std::filesystem::path list_path(args.pairs);
    const auto pairs = svckit::eval::load_embedding_pairs_file(list_path);
    if (pairs.empty()) {
      throw ValidationError("pair list " + list_path.string() +
                            " contains no pairs");
    }
    const auto sims =
        svckit::eval::pair_similarities(pairs, list_path.parent_path());
    double sum = 0.0;
    for (const auto& [system, value] : sims) sum += value;
    std::cout << fmt("%.4f", sum / static_cast<double>(sims.size())) << "\n";
  });
}

struct MosArgs {
  std::string ratings;
  std::string embeddings;
  std::string format = "text";
  bool by_group = false;
};

void warn_single_sample(const svckit::eval::Report& report) {
  for (const auto& row : report.rows) {
    for (std::size_t d = 0; d < row.cells.size(); ++d) {
      if (row.cells[d].single_sample) {
        std::cerr << "warning: system '" << row.system << "' dimension '"
                  << svckit::eval::to_string(svckit::eval::kDimensions[d])
                  << "' has a single rating; no interval is estimable\n";
      }
    }
  }
}

void add_mos(CLI::App& app, MosArgs& args) {
  CLI::App* cmd = app.add_subcommand(
      "mos", "Aggregate listener ratings into a mean-opinion-score table");
  cmd->add_option("--ratings", args.ratings, "ratings CSV")->required();
  cmd->add_option("--embeddings", args.embeddings,
                  "embedding pair list for the cosine-similarity column");
  cmd->add_option("--format", args.format, "output format")
      ->check(CLI::IsMember({"text", "csv"}))
      ->capture_default_str();
  cmd->add_flag("--by-group", args.by_group,
                "report each listener cohort separately");
  cmd->callback([&args] {
    const auto records = svckit::eval::load_ratings_file(args.ratings);
    std::vector<std::pair<std::string, double>> sims;
    if (!args.embeddings.empty()) {
      const std::filesystem::path list_path(args.embeddings);
      sims = svckit::eval::pair_similarities(
          svckit::eval::load_embedding_pairs_file(list_path),
          list_path.parent_path());
    }
    const auto render = [&args](const svckit::eval::Report& report) {
      return args.format == "csv" ? svckit::eval::render_csv(report)
                                  : svckit::eval::render_text(report);
    };
    if (!args.by_group) {
      const auto report = svckit::eval::aggregate_report(records, {}, sims);
      warn_single_sample(report);
      std::cout << render(report);
      return;
    }
    bool first = true;
    for (const auto group : {svckit::eval::ListenerGroup::ordinary,
                             svckit::eval::ListenerGroup::professional}) {
      const auto subset = svckit::eval::records_for_group(records, group);
      if (subset.empty()) {
        std::cerr << "warning: no ratings from "
                  << svckit::eval::to_string(group) << " listeners\n";
        continue;
      }
      const auto report = svckit::eval::aggregate_report(subset, {}, sims);
      warn_single_sample(report);
      if (!first) std::cout << "\n";
      std::cout << "# group=" << svckit::eval::to_string(group) << "\n"
                << render(report);
      first = false;
    }
  });
}

struct ManifestArgs {
  std::string in;
  std::string out;
  std::string gender;
  std::vector<std::string> techniques;
};

void print_totals(const svckit::eval::ManifestTotals& sums, const char* prefix) {
  std::cout << prefix << "techniques=" << sums.techniques
            << " clips=" << sums.clips
            << " duration_min=" << fmt("%.2f", sums.duration_min) << "\n";
}

void add_manifest(CLI::App& app, ManifestArgs& args) {
  CLI::App* cmd = app.add_subcommand("manifest", "Test-set manifest tools");
  cmd->require_subcommand(1);

  CLI::App* validate =
      cmd->add_subcommand("validate", "Check a manifest and report its totals");
  validate->add_option("--in", args.in, "manifest CSV/TSV")->required();
  validate->callback([&args] {
    const auto entries = svckit::eval::load_manifest_file(args.in);
    print_totals(svckit::eval::totals(entries), "valid ");
  });

  CLI::App* summarize =
      cmd->add_subcommand("summarize", "Print manifest totals");
  summarize->add_option("--in", args.in, "manifest CSV/TSV")->required();
  summarize->callback([&args] {
    const auto entries = svckit::eval::load_manifest_file(args.in);
    print_totals(svckit::eval::totals(entries), "");
  });

  CLI::App* filter = cmd->add_subcommand(
      "filter", "Select manifest rows by technique and/or gender");
  filter->add_option("--in", args.in, "manifest CSV/TSV")->required();
  filter->add_option("--gender", args.gender, "gender code: F, M, or FM")
      ->check(CLI::IsMember({"F", "M", "FM"}));
  filter->add_option("--technique", args.techniques,
                     "technique name (repeatable)");
  filter->add_option("--out", args.out,
                     "write the filtered manifest here instead of stdout");
  filter->callback([&args] {
    const auto entries = svckit::eval::load_manifest_file(args.in);
    svckit::eval::ManifestFilter manifest_filter;
    manifest_filter.techniques = args.techniques;
    if (!args.gender.empty()) {
      manifest_filter.gender =
          svckit::eval::parse_gender(args.gender, "--gender");
    }
    const auto subset = svckit::eval::select_subset(entries, manifest_filter);
    if (args.out.empty()) {
      svckit::eval::write_manifest(std::cout, subset);
    } else {
      std::ofstream out = open_output(args.out);
      svckit::eval::write_manifest(out, subset);
      print_totals(svckit::eval::totals(subset), "");
    }
  });
}

struct ResampleArgs {
  std::string in;
  std::string out;
  int factor = 1;
  int taps = 511;
};

void add_resample(CLI::App& app, ResampleArgs& args) {
  CLI::App* cmd = app.add_subcommand(
      "resample", "Upsample a WAV by an integer factor (anti-imaging FIR)");
  cmd->add_option("--in", args.in, "input WAV")->required();
  cmd->add_option("--factor", args.factor, "integer upsampling factor")
      ->required();
  cmd->add_option("--out", args.out, "output WAV (float32)")->required();
  cmd->add_option("--taps", args.taps, "FIR tap count (odd)")
      ->capture_default_str();
  cmd->callback([&args] {
    const auto upsampled =
        svckit::dsp::upsample(read_mono(args.in), args.factor, args.taps);
    svckit::audio::write_wav(
        args.out, upsampled,
        svckit::audio::WavFormat{svckit::audio::WavEncoding::float32, 1,
                                 upsampled.sample_rate_hz});
    std::cout << "rate=" << upsampled.sample_rate_hz
              << " frames=" << upsampled.frames() << "\n";
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "svckit: post-processing and evaluation tools for singing voice "
      "conversion output"};
  app.require_subcommand(1);

  PostprocessArgs postprocess_args;
  MelArgs mel_args;
  F0Args f0_args;
  CossimArgs cossim_args;
  MosArgs mos_args;
  ManifestArgs manifest_args;
  ResampleArgs resample_args;

  add_postprocess(app, postprocess_args);
  add_mel_l1(app, mel_args);
  add_f0(app, f0_args);
  add_cossim(app, cossim_args);
  add_mos(app, mos_args);
  add_manifest(app, manifest_args);
  add_resample(app, resample_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
