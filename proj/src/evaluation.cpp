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

#include "svckit/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "svckit/analysis.hpp"
#include "svckit/errors.hpp"
#include "text_util.hpp"

namespace svckit::eval {
namespace {

constexpr char kRatingsHeader[] =
    "listener_id,listener_group,system,clip_id,dimension,score";
constexpr char kManifestHeader[] = "technique,duration_min,gender,number";

std::string line_context(const char* what, std::size_t line_number) {
  return std::string(what) + " line " + std::to_string(line_number);
}

std::string fmt(const char* pattern, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, value);
  return buf;
}

// Column width as displayed, not as stored: UTF-8 continuation bytes
// (the "±" sign) take no terminal cells.
std::size_t display_width(std::string_view s) {
  std::size_t width = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++width;
  }
  return width;
}

void append_padded(std::string& out, std::string_view cell, std::size_t width) {
  out += cell;
  for (std::size_t i = display_width(cell); i < width; ++i) out += ' ';
}

}  // namespace

std::string_view to_string(Dimension dimension) {
  switch (dimension) {
    case Dimension::vocal_naturalness: return "vocal_naturalness";
    case Dimension::bite_reproduction: return "bite_reproduction";
    case Dimension::technique_reproduction: return "technique_reproduction";
    case Dimension::tone_similarity: return "tone_similarity";
  }
  return "?";
}

std::string_view to_string(ListenerGroup group) {
  switch (group) {
    case ListenerGroup::ordinary: return "ordinary";
    case ListenerGroup::professional: return "professional";
  }
  return "?";
}

Dimension parse_dimension(std::string_view token, const std::string& context) {
  for (Dimension d : kDimensions) {
    if (token == to_string(d)) return d;
  }
  throw ValidationError(context + ": unknown dimension '" + std::string(token) +
                        "' (expected vocal_naturalness, bite_reproduction, "
                        "technique_reproduction, or tone_similarity)");
}

ListenerGroup parse_group(std::string_view token, const std::string& context) {
  if (token == "ordinary") return ListenerGroup::ordinary;
  if (token == "professional") return ListenerGroup::professional;
  throw ValidationError(context + ": unknown listener_group '" +
                        std::string(token) +
                        "' (expected ordinary or professional)");
}

std::vector<RatingRecord> load_ratings(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || textio::trim(line) != kRatingsHeader) {
    throw ValidationError(std::string("ratings header must be '") +
                          kRatingsHeader + "'");
  }
  std::vector<RatingRecord> records;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string_view text = textio::trim(line);
    if (text.empty() || text.front() == '#') continue;
    const std::string context = line_context("ratings", line_number);
    const std::vector<std::string> fields = textio::split(text, ',');
    if (fields.size() != 6) {
      throw ValidationError(context + ": expected 6 fields, got " +
                            std::to_string(fields.size()));
    }
    RatingRecord record;
    record.listener_id = fields[0];
    record.listener_group = parse_group(fields[1], context);
    record.system = fields[2];
    record.clip_id = fields[3];
    record.dimension = parse_dimension(fields[4], context);
    const long score = textio::parse_long(fields[5], context + ", field score");
    if (score < 1 || score > 5) {
      throw ValidationError(context + ": score must be in 1..5, got " +
                            std::to_string(score));
    }
    record.score = static_cast<int>(score);
    if (record.listener_id.empty() || record.system.empty() ||
        record.clip_id.empty()) {
      throw ValidationError(context +
                            ": listener_id, system, and clip_id must be nonempty");
    }
    records.push_back(std::move(record));
  }
  return records;
}

std::vector<RatingRecord> load_ratings_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open ratings file " + path.string());
  return load_ratings(in);
}

MosCell mos_with_ci(const std::vector<int>& scores) {
  if (scores.empty()) {
    throw ValidationError("cannot aggregate an empty score list");
  }
  long sum = 0;
  long sum_sq = 0;
  for (int s : scores) {
    if (s < 1 || s > 5) {
      throw ValidationError("score must be in 1..5, got " + std::to_string(s));
    }
    sum += s;
    sum_sq += static_cast<long>(s) * s;
  }
  MosCell cell;
  cell.n = scores.size();
  const double n = static_cast<double>(cell.n);
  cell.mean = static_cast<double>(sum) / n;
  if (cell.n == 1) {
    cell.single_sample = true;
    return cell;
  }
  // Integer sums keep the variance exact up to the final divisions:
  // s^2 = (sum_sq - n * mean^2) / (n - 1).
  const double ss = static_cast<double>(sum_sq) - n * cell.mean * cell.mean;
  const double sd = std::sqrt(std::max(0.0, ss) / (n - 1.0));
  cell.ci_halfwidth = 1.96 * sd / std::sqrt(n);
  return cell;
}

std::string format_mos(const MosCell& cell) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.2f ± %.2f", cell.mean, cell.ci_halfwidth);
  return buf;
}

std::vector<EmbeddingPairLine> load_embedding_pairs(std::istream& in) {
  std::vector<EmbeddingPairLine> pairs;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string_view text = textio::trim(line);
    if (text.empty() || text.front() == '#') continue;
    const std::string context = line_context("pair list", line_number);
    const std::vector<std::string> fields = textio::split(text, ',');
    if (fields.size() != 3) {
      throw ValidationError(
          context + ": expected 'system,converted_path,reference_path'");
    }
    if (fields[0].empty() || fields[1].empty() || fields[2].empty()) {
      throw ValidationError(context + ": fields must be nonempty");
    }
    pairs.push_back({fields[0], fields[1], fields[2]});
  }
  return pairs;
}

std::vector<EmbeddingPairLine> load_embedding_pairs_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open pair list " + path.string());
  return load_embedding_pairs(in);
}

std::vector<std::pair<std::string, double>> pair_similarities(
    const std::vector<EmbeddingPairLine>& pairs,
    const std::filesystem::path& base_dir) {
  auto resolve = [&base_dir](const std::string& raw) {
    std::filesystem::path p(raw);
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    return p;
  };
  auto first_vector = [](const std::filesystem::path& path) {
    std::vector<analysis::EmbeddingVector> vectors =
        analysis::read_embeddings_file(path);
    if (vectors.empty()) {
      throw ValidationError("embedding file " + path.string() +
                            " contains no vectors");
    }
    return vectors.front();
  };
  std::vector<std::pair<std::string, double>> similarities;
  similarities.reserve(pairs.size());
  for (const EmbeddingPairLine& pair : pairs) {
    const analysis::EmbeddingVector converted =
        first_vector(resolve(pair.converted_path));
    const analysis::EmbeddingVector reference =
        first_vector(resolve(pair.reference_path));
    similarities.emplace_back(pair.system,
                              analysis::cosine_similarity(converted, reference));
  }
  return similarities;
}

Report aggregate_report(
    const std::vector<RatingRecord>& records,
    const std::vector<std::string>& systems_order,
    const std::vector<std::pair<std::string, double>>& similarities) {
  if (records.empty()) {
    throw ValidationError("no ratings to aggregate");
  }

  std::vector<std::string> order = systems_order;
  if (order.empty()) {
    for (const RatingRecord& record : records) {
      if (std::find(order.begin(), order.end(), record.system) == order.end()) {
        order.push_back(record.system);
      }
    }
  }

  std::map<std::string, std::array<std::vector<int>, 4>> scores;
  for (const RatingRecord& record : records) {
    if (std::find(order.begin(), order.end(), record.system) == order.end()) {
      throw ValidationError("system '" + record.system +
                            "' has ratings but is not in the requested order");
    }
    scores[record.system][static_cast<std::size_t>(record.dimension)].push_back(
        record.score);
  }

  std::map<std::string, std::pair<double, std::size_t>> sim_sums;
  for (const auto& [system, value] : similarities) {
    if (std::find(order.begin(), order.end(), system) == order.end()) {
      throw ValidationError("embedding pair refers to unknown system '" +
                            system + "'");
    }
    auto& [sum, count] = sim_sums[system];
    sum += value;
    ++count;
  }

  Report report;
  for (const std::string& system : order) {
    SystemRow row;
    row.system = system;
    const auto it = scores.find(system);
    for (std::size_t d = 0; d < kDimensions.size(); ++d) {
      if (it == scores.end() || it->second[d].empty()) {
        throw ValidationError(
            "system '" + system + "' has no ratings for dimension '" +
            std::string(to_string(kDimensions[d])) + "'");
      }
      row.cells[d] = mos_with_ci(it->second[d]);
    }
    if (const auto sim = sim_sums.find(system); sim != sim_sums.end()) {
      row.pair_count = sim->second.second;
      row.cos_sim = sim->second.first / static_cast<double>(sim->second.second);
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string render_text(const Report& report) {
  std::vector<std::array<std::string, 6>> grid;
  grid.push_back({"system", "vocal_naturalness", "bite_reproduction",
                  "technique_reproduction", "tone_similarity", "cos_sim"});
  for (const SystemRow& row : report.rows) {
    std::array<std::string, 6> cells;
    cells[0] = row.system;
    for (std::size_t d = 0; d < 4; ++d) cells[d + 1] = format_mos(row.cells[d]);
    cells[5] = row.pair_count > 0 ? fmt("%.4f", row.cos_sim) : std::string("-");
    grid.push_back(std::move(cells));
  }

  std::array<std::size_t, 6> widths{};
  for (const auto& cells : grid) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      widths[c] = std::max(widths[c], display_width(cells[c]));
    }
  }

  std::string out;
  for (const auto& cells : grid) {
    std::string line;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c != 0) line += "  ";
      append_padded(line, cells[c], widths[c]);
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line;
    out += '\n';
  }
  return out;
}

std::string render_csv(const Report& report) {
  std::string out = "system";
  for (Dimension d : kDimensions) {
    const std::string name(to_string(d));
    out += "," + name + "_mean," + name + "_ci," + name + "_n";
  }
  out += ",cos_sim,pairs\n";
  for (const SystemRow& row : report.rows) {
    out += row.system;
    for (std::size_t d = 0; d < 4; ++d) {
      out += ',' + fmt("%.6f", row.cells[d].mean);
      out += ',' + fmt("%.6f", row.cells[d].ci_halfwidth);
      out += ',' + std::to_string(row.cells[d].n);
    }
    out += ',';
    if (row.pair_count > 0) out += fmt("%.6f", row.cos_sim);
    out += ',' + std::to_string(row.pair_count);
    out += '\n';
  }
  return out;
}

std::vector<RatingRecord> records_for_group(
    const std::vector<RatingRecord>& records, ListenerGroup group) {
  std::vector<RatingRecord> subset;
  std::copy_if(records.begin(), records.end(), std::back_inserter(subset),
               [group](const RatingRecord& r) { return r.listener_group == group; });
  return subset;
}

std::string_view to_string(Gender gender) {
  switch (gender) {
    case Gender::F: return "F";
    case Gender::M: return "M";
    case Gender::FM: return "FM";
  }
  return "?";
}

Gender parse_gender(std::string_view token, const std::string& context) {
  if (token == "F") return Gender::F;
  if (token == "M") return Gender::M;
  if (token == "FM") return Gender::FM;
  throw ValidationError(context + ": unknown gender code '" +
                        std::string(token) + "' (expected F, M, or FM)");
}

std::vector<ManifestEntry> load_manifest(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ValidationError("manifest is empty");
  }
  // The header also decides the delimiter: tab means TSV, comma means CSV.
  const char delimiter =
      line.find('\t') != std::string::npos ? '\t' : ',';
  {
    std::string normalized(textio::trim(line));
    std::replace(normalized.begin(), normalized.end(), '\t', ',');
    if (normalized != kManifestHeader) {
      throw ValidationError(std::string("manifest header must be '") +
                            kManifestHeader + "' (comma or tab separated)");
    }
  }

  std::vector<ManifestEntry> entries;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string_view text = textio::trim(line);
    if (text.empty() || text.front() == '#') continue;
    const std::string context = line_context("manifest", line_number);
    const std::vector<std::string> fields = textio::split(text, delimiter);
    if (fields.size() != 4) {
      throw ValidationError(context + ": expected 4 fields, got " +
                            std::to_string(fields.size()));
    }
    ManifestEntry entry;
    entry.technique = fields[0];
    if (entry.technique.empty()) {
      throw ValidationError(context + ": technique must be nonempty");
    }
    entry.duration_min =
        textio::parse_double(fields[1], context + ", field duration_min");
    if (entry.duration_min < 0.0) {
      throw ValidationError(context + ": duration_min must be nonnegative");
    }
    entry.gender = parse_gender(fields[2], context);
    entry.number = textio::parse_long(fields[3], context + ", field number");
    if (entry.number < 1) {
      throw ValidationError(context + ": number must be at least 1, got " +
                            std::to_string(entry.number));
    }
    for (const ManifestEntry& seen : entries) {
      if (seen.technique == entry.technique) {
        throw ValidationError(context + ": duplicate technique '" +
                              entry.technique + "'");
      }
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::vector<ManifestEntry> load_manifest_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path.string());
  return load_manifest(in);
}

ManifestTotals totals(const std::vector<ManifestEntry>& entries) {
  ManifestTotals sums;
  sums.techniques = entries.size();
  for (const ManifestEntry& entry : entries) {
    sums.clips += entry.number;
    sums.duration_min += entry.duration_min;
  }
  return sums;
}

std::vector<ManifestEntry> select_subset(const std::vector<ManifestEntry>& entries,
                                         const ManifestFilter& filter) {
  // Technique filters are identifiers; a name that matches nothing is a
  // typo, not an empty selection.
  for (const std::string& name : filter.techniques) {
    const bool known =
        std::any_of(entries.begin(), entries.end(), [&](const ManifestEntry& e) {
          return e.technique == name;
        });
    if (!known) {
      throw ValidationError("unknown technique '" + name +
                            "' is not in the manifest");
    }
  }
  std::vector<ManifestEntry> subset;
  for (const ManifestEntry& entry : entries) {
    if (filter.gender && entry.gender != *filter.gender) continue;
    if (!filter.techniques.empty() &&
        std::find(filter.techniques.begin(), filter.techniques.end(),
                  entry.technique) == filter.techniques.end()) {
      continue;
    }
    subset.push_back(entry);
  }
  return subset;
}

void write_manifest(std::ostream& out, const std::vector<ManifestEntry>& entries) {
  out << kManifestHeader << "\n";
  for (const ManifestEntry& entry : entries) {
    out << entry.technique << ',' << fmt("%g", entry.duration_min) << ','
        << to_string(entry.gender) << ',' << entry.number << "\n";
  }
  const ManifestTotals sums = totals(entries);
  out << "# techniques=" << sums.techniques << " clips=" << sums.clips
      << " duration_min=" << fmt("%.2f", sums.duration_min) << "\n";
}

}  // namespace svckit::eval
