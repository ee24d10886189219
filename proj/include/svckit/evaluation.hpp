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

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace svckit::eval {

// ---------------------------------------------------------------------
// Listener ratings and MOS statistics.
// ---------------------------------------------------------------------

enum class ListenerGroup { ordinary, professional };

/// The four rated dimensions, in report column order.
enum class Dimension {
  vocal_naturalness,
  bite_reproduction,
  technique_reproduction,
  tone_similarity,
};

inline constexpr std::array<Dimension, 4> kDimensions = {
    Dimension::vocal_naturalness,
    Dimension::bite_reproduction,
    Dimension::technique_reproduction,
    Dimension::tone_similarity,
};

std::string_view to_string(Dimension dimension);
std::string_view to_string(ListenerGroup group);
Dimension parse_dimension(std::string_view token, const std::string& context);
ListenerGroup parse_group(std::string_view token, const std::string& context);

/// One listener's score for one clip on one dimension.
struct RatingRecord {
  std::string listener_id;
  ListenerGroup listener_group = ListenerGroup::ordinary;
  std::string system;
  std::string clip_id;
  Dimension dimension = Dimension::vocal_naturalness;
  int score = 0;
};

/// CSV with header listener_id,listener_group,system,clip_id,dimension,score.
/// Invalid enums or out-of-range scores are rejected with line numbers.
std::vector<RatingRecord> load_ratings(std::istream& in);
std::vector<RatingRecord> load_ratings_file(const std::filesystem::path& path);

/// Mean opinion score with a 95% confidence half-width.
struct MosCell {
  double mean = 0.0;
  double ci_halfwidth = 0.0;
  std::size_t n = 0;
  bool single_sample = false;  // n == 1: half-width 0 by convention
};

/// mean and 1.96 * s / sqrt(n), with s the sample standard deviation
/// (n - 1 denominator). Scores must be integers in 1..5 and nonempty.
MosCell mos_with_ci(const std::vector<int>& scores);

/// "m.mm ± c.cc", two decimals each.
std::string format_mos(const MosCell& cell);

// ---------------------------------------------------------------------
// Embedding pairs feeding the cosine-similarity column.
// ---------------------------------------------------------------------

/// One line of the pair list file: "system,converted_path,reference_path".
struct EmbeddingPairLine {
  std::string system;
  std::string converted_path;
  std::string reference_path;
};

std::vector<EmbeddingPairLine> load_embedding_pairs(std::istream& in);
std::vector<EmbeddingPairLine> load_embedding_pairs_file(
    const std::filesystem::path& path);

/// Reads both embedding files of every pair (first vector in each file)
/// and returns (system, cosine similarity) per pair, in input order.
/// Relative paths resolve against base_dir.
std::vector<std::pair<std::string, double>> pair_similarities(
    const std::vector<EmbeddingPairLine>& pairs,
    const std::filesystem::path& base_dir);

// ---------------------------------------------------------------------
// The aggregated report.
// ---------------------------------------------------------------------

struct SystemRow {
  std::string system;
  std::array<MosCell, 4> cells;  // indexed in kDimensions order
  double cos_sim = 0.0;          // mean over the system's pairs
  std::size_t pair_count = 0;    // 0 renders as "-"
};

struct Report {
  std::vector<SystemRow> rows;
};

/// One row per system with all four MOS cells and the mean cosine
/// similarity. systems_order empty means first-appearance order of the
/// records. A (system, dimension) cell without ratings is an error, as
/// is a rated system missing from a nonempty systems_order.
Report aggregate_report(
    const std::vector<RatingRecord>& records,
    const std::vector<std::string>& systems_order,
    const std::vector<std::pair<std::string, double>>& similarities);

/// Aligned plain-text table: system, four "m.mm ± c.cc" cells, cos_sim
/// with four decimals.
std::string render_text(const Report& report);

/// Machine-readable variant: per-cell mean, half-width, and count as
/// separate columns, six decimals.
std::string render_csv(const Report& report);

/// The subset of records rated by one listener cohort.
std::vector<RatingRecord> records_for_group(
    const std::vector<RatingRecord>& records, ListenerGroup group);

// ---------------------------------------------------------------------
// Test-set manifest.
// ---------------------------------------------------------------------

enum class Gender { F, M, FM };

std::string_view to_string(Gender gender);
Gender parse_gender(std::string_view token, const std::string& context);

struct ManifestEntry {
  std::string technique;
  double duration_min = 0.0;
  Gender gender = Gender::FM;
  long number = 0;  // clip count, >= 1
};

struct ManifestTotals {
  std::size_t techniques = 0;
  long clips = 0;
  double duration_min = 0.0;
};

/// CSV or TSV (sniffed from the header line) with columns
/// technique,duration_min,gender,number. Lines starting with '#' are
/// comments. Violations are reported with line numbers.
std::vector<ManifestEntry> load_manifest(std::istream& in);
std::vector<ManifestEntry> load_manifest_file(const std::filesystem::path& path);

ManifestTotals totals(const std::vector<ManifestEntry>& entries);

/// Empty technique list means no technique filter; unset gender means
/// no gender filter. Gender matching is exact (F does not match FM).
struct ManifestFilter {
  std::vector<std::string> techniques;
  std::optional<Gender> gender;
};

std::vector<ManifestEntry> select_subset(const std::vector<ManifestEntry>& entries,
                                         const ManifestFilter& filter);

/// Re-emits entries in the CSV manifest format, followed by a comment
/// line with the totals, so filtered output stays loadable.
void write_manifest(std::ostream& out, const std::vector<ManifestEntry>& entries);

}  // namespace svckit::eval
