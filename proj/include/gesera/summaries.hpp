#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace gesera {

enum class SummaryKind { Candidate, Reference };

std::string_view to_string(SummaryKind kind);
SummaryKind parse_summary_kind(std::string_view name);

/// A candidate summary, or a reference summary whose system_id is the
/// annotator id.
struct SummaryRecord {
  std::string topic_id;
  std::string system_id;
  SummaryKind kind = SummaryKind::Candidate;
  std::string text;

  bool operator==(const SummaryRecord&) const = default;
};

/// jsonl with string fields topic_id, system_id, kind (candidate|reference)
/// and text. Throws Error naming the line on malformed records and on a
/// repeated (topic_id, system_id, kind).
std::vector<SummaryRecord> load_summaries(const std::filesystem::path& path);
void write_summaries(const std::vector<SummaryRecord>& records,
                     const std::filesystem::path& path);

/// Throws Error if (topic_id, system_id, kind) repeats.
void check_unique_summaries(const std::vector<SummaryRecord>& records);

}  // namespace gesera
