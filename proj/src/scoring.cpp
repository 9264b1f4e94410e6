#include "gesera/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cctype>
#include <map>
#include <set>
#include <ostream>
#include <unordered_set>

#include <fmt/format.h>

#include "csv.hpp"
#include "gesera/parallel.hpp"

namespace gesera {

namespace {

void require_references(std::span<const RankedList> references) {
  if (references.empty()) {
    throw Error("scoring needs at least one reference list");
  }
}

void require_within_cutoff(const RankedList& list) {
  if (list.size() > list.cutoff) {
    throw Error(fmt::format("ranked list holds {} entries but its cutoff is {}", list.size(),
                            list.cutoff));
  }
}

}  // namespace

MetricScore sera(const RankedList& candidate, std::span<const RankedList> references) {
  require_references(references);
  if (candidate.empty()) {
    return {0.0, true};
  }
  const auto c = static_cast<double>(candidate.size());
  double sum = 0.0;
  for (const auto& reference : references) {
    std::unordered_set<std::string_view> ids;
    for (const auto& e : reference.entries) {
      ids.insert(e.doc_id);
    }
    std::size_t shared = 0;
    for (const auto& e : candidate.entries) {
      shared += ids.count(e.doc_id);
    }
    sum += static_cast<double>(shared) / c;
  }
  return {sum / static_cast<double>(references.size()), false};
}

MetricScore sera_dis(const RankedList& candidate, std::span<const RankedList> references,
                     double log_base) {
  require_references(references);
  if (candidate.cutoff == 0) {
    throw Error("ranked list cutoff must be > 0");
  }
  require_within_cutoff(candidate);
  if (candidate.empty()) {
    return {0.0, true};
  }
  const double ln_base = std::log(log_base);
  auto log_b = [ln_base](double x) { return std::log(x) / ln_base; };
  // Each match adds X / (1 / log 2), so a zero-displacement match adds
  // exactly 1 and a perfect list sums to exactly M * cutoff.
  const double log_2 = log_b(2.0);

  double total = 0.0;
  for (const auto& reference : references) {
    std::map<std::string_view, std::size_t> rank_of;
    for (std::size_t k = 0; k < reference.size(); ++k) {
      rank_of.emplace(reference.id(k), k);
    }
    for (std::size_t j = 0; j < candidate.size(); ++j) {
      auto it = rank_of.find(candidate.id(j));
      if (it == rank_of.end()) {
        continue;
      }
      const auto displacement =
          static_cast<double>(j > it->second ? j - it->second : it->second - j);
      total += log_2 / log_b(displacement + 2.0);
    }
  }
  return {total / (static_cast<double>(references.size()) *
                   static_cast<double>(candidate.cutoff)),
          false};
}

std::string_view to_string(Variant variant) {
  return variant == Variant::Sera ? "sera" : "sera-dis";
}

Variant parse_variant(std::string_view name) {
  std::string lower;
  for (char c : name) {
    lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (lower == "sera") {
    return Variant::Sera;
  }
  if (lower == "sera-dis" || lower == "sera_dis" || lower == "dis") {
    return Variant::SeraDis;
  }
  throw Error(fmt::format("unknown variant '{}' (expected sera or sera-dis)", name));
}

std::string EvalConfig::metric_name() const {
  std::string name = strategy == Strategy::GeSeraPos ? "GeSERA" : "SERA";
  if (variant == Variant::SeraDis) {
    name += "-DIS";
  }
  if (strategy == Strategy::NounPhrase) {
    name += "-NP";
  } else if (strategy == Strategy::Keyword) {
    name += "-KW";
  }
  return fmt::format("{}-{}", name, cutoff);
}

Query reformulate_text(const Tagger& tagger, std::string_view text, Strategy strategy) {
  const auto tokens = tagger.tag_text(text);
  return reformulate(tokens, strategy);
}

RankedList retrieve_text(const ScoringContext& ctx, std::string_view text, Strategy strategy,
                         std::size_t cutoff) {
  return ctx.index.retrieve(reformulate_text(ctx.tagger, text, strategy), cutoff);
}

MetricScore score_lists(const RankedList& candidate, std::span<const RankedList> references,
                        Variant variant) {
  return variant == Variant::Sera ? sera(candidate, references)
                                  : sera_dis(candidate, references);
}

MetricScore evaluate_summary(const ScoringContext& ctx, const SummaryRecord& candidate,
                             std::span<const SummaryRecord> references,
                             const EvalConfig& config) {
  if (references.empty()) {
    throw Error(fmt::format("candidate {}/{} has no references", candidate.topic_id,
                            candidate.system_id));
  }
  for (const auto& ref : references) {
    if (ref.kind != SummaryKind::Reference) {
      throw Error(fmt::format("record {}/{} is not a reference", ref.topic_id, ref.system_id));
    }
    if (ref.topic_id != candidate.topic_id) {
      throw Error(fmt::format("reference topic {} does not match candidate topic {}",
                              ref.topic_id, candidate.topic_id));
    }
  }
  const auto cand_list = retrieve_text(ctx, candidate.text, config.strategy, config.cutoff);
  std::vector<RankedList> ref_lists;
  ref_lists.reserve(references.size());
  for (const auto& ref : references) {
    ref_lists.push_back(retrieve_text(ctx, ref.text, config.strategy, config.cutoff));
  }
  return score_lists(cand_list, ref_lists, config.variant);
}

void ScoreTable::write_csv(std::ostream& out) const {
  out << "topic_id,system_id,metric,score\n";
  for (const auto& row : rows) {
    out << csv::escape(row.topic_id) << ',' << csv::escape(row.system_id) << ','
        << csv::escape(row.metric) << ',' << fmt::format("{}", row.score) << '\n';
  }
}

ScoreTable ScoreTable::read_csv(std::istream& in) {
  ScoreTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 || line.empty()) {
      continue;
    }
    auto fields = csv::split(line);
    if (fields.size() != 4) {
      throw Error(fmt::format("score table line {}: expected 4 fields", line_no));
    }
    char* end = nullptr;
    const double score = std::strtod(fields[3].c_str(), &end);
    if (end == fields[3].c_str() || *end != '\0') {
      throw Error(fmt::format("score table line {}: bad score '{}'", line_no, fields[3]));
    }
    table.rows.push_back({fields[0], fields[1], fields[2], score});
  }
  return table;
}

namespace {

RankedList truncated(const RankedList& list, std::size_t cutoff) {
  RankedList out;
  out.cutoff = cutoff;
  out.degenerate = list.degenerate;
  const auto n = std::min(cutoff, list.size());
  out.entries.assign(list.entries.begin(), list.entries.begin() + static_cast<std::ptrdiff_t>(n));
  return out;
}

}  // namespace

DatasetReport evaluate_dataset(const ScoringContext& ctx,
                               std::span<const SummaryRecord> candidates,
                               std::span<const SummaryRecord> references,
                               std::span<const EvalConfig> configs,
                               const DatasetOptions& options) {
  for (const auto& c : candidates) {
    if (c.kind != SummaryKind::Candidate) {
      throw Error(fmt::format("record {}/{} passed as a candidate is a reference", c.topic_id,
                              c.system_id));
    }
  }
  for (const auto& config : configs) {
    if (config.cutoff == 0) {
      throw Error(fmt::format("config {} has cutoff 0", config.metric_name()));
    }
  }

  std::vector<const SummaryRecord*> refs;
  for (const auto& r : references) {
    if (r.kind != SummaryKind::Reference) {
      throw Error(fmt::format("record {}/{} passed as a reference is a candidate", r.topic_id,
                              r.system_id));
    }
    if (options.annotators && options.annotators->count(r.system_id) == 0) {
      continue;
    }
    refs.push_back(&r);
  }
  std::map<std::string_view, std::vector<std::size_t>> refs_by_topic;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    refs_by_topic[refs[i]->topic_id].push_back(i);
  }
  std::set<std::string> missing;
  for (const auto& c : candidates) {
    if (refs_by_topic.count(c.topic_id) == 0) {
      missing.insert(c.topic_id);
    }
  }
  if (!missing.empty()) {
    throw Error(fmt::format("topics without references: {}", fmt::join(missing, ", ")));
  }

  // Retrieve once per (text, strategy) at the largest cutoff that strategy
  // needs; shorter cutoffs are prefixes because ranking is deterministic.
  std::map<Strategy, std::size_t> depth;
  for (const auto& config : configs) {
    depth[config.strategy] = std::max(depth[config.strategy], config.cutoff);
  }
  std::vector<Strategy> strategies;
  for (const auto& [s, _] : depth) {
    strategies.push_back(s);
  }
  auto strategy_slot = [&](Strategy s) {
    return static_cast<std::size_t>(std::find(strategies.begin(), strategies.end(), s) -
                                    strategies.begin());
  };
  const std::size_t ns = strategies.size();

  std::vector<RankedList> ref_lists(refs.size() * ns);
  parallel_for(ref_lists.size(), options.threads, [&](std::size_t task) {
    const auto s = strategies[task % ns];
    ref_lists[task] = retrieve_text(ctx, refs[task / ns]->text, s, depth[s]);
  });
  std::vector<RankedList> cand_lists(candidates.size() * ns);
  parallel_for(cand_lists.size(), options.threads, [&](std::size_t task) {
    const auto s = strategies[task % ns];
    cand_lists[task] = retrieve_text(ctx, candidates[task / ns].text, s, depth[s]);
  });

  DatasetReport report;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    for (std::size_t s = 0; s < ns; ++s) {
      report.degenerate_references += ref_lists[i * ns + s].degenerate ? 1 : 0;
    }
  }

  const std::size_t nc = configs.size();
  std::vector<ScoreRow> rows(candidates.size() * nc);
  std::vector<char> degenerate(rows.size(), 0);
  parallel_for(rows.size(), options.threads, [&](std::size_t task) {
    const auto& cand = candidates[task / nc];
    const auto& config = configs[task % nc];
    const auto slot = strategy_slot(config.strategy);
    const auto cand_list = truncated(cand_lists[(task / nc) * ns + slot], config.cutoff);
    std::vector<RankedList> topic_refs;
    for (auto r : refs_by_topic.at(cand.topic_id)) {
      topic_refs.push_back(truncated(ref_lists[r * ns + slot], config.cutoff));
    }
    const auto score = score_lists(cand_list, topic_refs, config.variant);
    rows[task] = {cand.topic_id, cand.system_id, config.metric_name(), score.value};
    degenerate[task] = score.degenerate ? 1 : 0;
  });
  report.table.rows = std::move(rows);
  for (std::size_t i = 0; i < degenerate.size(); ++i) {
    if (degenerate[i] != 0) {
      report.degenerate_rows.push_back(i);
    }
  }
  report.degenerate_candidates = report.degenerate_rows.size();
  return report;
}

}  // namespace gesera
