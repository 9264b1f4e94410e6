#pragma once

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gesera/index.hpp"
#include "gesera/summaries.hpp"
#include "gesera/tagger.hpp"
#include "gesera/text.hpp"

namespace gesera {

struct MetricScore {
  double value = 0.0;
  bool degenerate = false;  // the candidate retrieved nothing
};

/// Mean over references of |ids(C) ∩ ids(G_i)| / |C|. Rank-blind.
/// Throws Error when references is empty.
MetricScore sera(const RankedList& candidate, std::span<const RankedList> references);

/// Rank-discounted overlap:
///
///   sum_i sum_j sum_k X(j, k) / (M * D_max),  X(j, k) = 1 / log(|j - k| + 2)
///
/// where X is non-zero only when candidate rank j and reference rank k hold
/// the same document, and D_max = cutoff / log(2) is the largest per-reference
/// sum (every candidate slot matched at zero displacement). The cutoff is the
/// candidate's. The ratio does not depend on the logarithm base; log_base is
/// exposed for testing that.
MetricScore sera_dis(const RankedList& candidate, std::span<const RankedList> references,
                     double log_base = std::numbers::e);

enum class Variant { Sera, SeraDis };

std::string_view to_string(Variant variant);
Variant parse_variant(std::string_view name);

struct EvalConfig {
  Strategy strategy = Strategy::GeSeraPos;
  Variant variant = Variant::Sera;
  std::size_t cutoff = 10;

  /// SERA-5, SERA-DIS-NP-10, GeSERA-DIS-5, ...
  std::string metric_name() const;
};

/// The shared, read-only pieces every evaluation needs.
struct ScoringContext {
  const InvertedIndex& index;
  const Tagger& tagger;
};

Query reformulate_text(const Tagger& tagger, std::string_view text, Strategy strategy);

RankedList retrieve_text(const ScoringContext& ctx, std::string_view text,
                         Strategy strategy, std::size_t cutoff);

MetricScore score_lists(const RankedList& candidate, std::span<const RankedList> references,
                        Variant variant);

/// Reformulate, retrieve top-cutoff for the candidate and every reference,
/// then score. References must be Reference records on the candidate's topic.
MetricScore evaluate_summary(const ScoringContext& ctx, const SummaryRecord& candidate,
                             std::span<const SummaryRecord> references,
                             const EvalConfig& config);

struct ScoreRow {
  std::string topic_id;
  std::string system_id;
  std::string metric;
  double score = 0.0;

  bool operator==(const ScoreRow&) const = default;
};

struct ScoreTable {
  std::vector<ScoreRow> rows;

  /// CSV with header topic_id,system_id,metric,score. Scores use the
  /// shortest round-trip decimal form.
  void write_csv(std::ostream& out) const;
  static ScoreTable read_csv(std::istream& in);
};

struct DatasetOptions {
  unsigned threads = 1;
  /// When set, only references whose system_id is listed are used.
  std::optional<std::set<std::string>> annotators;
};

struct DatasetReport {
  ScoreTable table;
  std::size_t degenerate_candidates = 0;  // (candidate, config) pairs
  std::vector<std::size_t> degenerate_rows;  // indices into table.rows
  std::size_t degenerate_references = 0;  // (reference, strategy) pairs
};

/// One row per (candidate, config), candidates in input order and configs in
/// input order within each candidate. Throws Error listing every candidate
/// topic left without references (after annotator filtering).
DatasetReport evaluate_dataset(const ScoringContext& ctx,
                               std::span<const SummaryRecord> candidates,
                               std::span<const SummaryRecord> references,
                               std::span<const EvalConfig> configs,
                               const DatasetOptions& options = {});

}  // namespace gesera
