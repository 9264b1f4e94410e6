#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gesera/corpus.hpp"
#include "gesera/correlation.hpp"
#include "gesera/index.hpp"
#include "gesera/scoring.hpp"
#include "gesera/tagger.hpp"

namespace gesera {

enum class TaggerKind { Heuristic, Pretagged };

/// Flat "key = value" file; list values are comma separated and annotator
/// subsets are ';'-separated groups of '+'-joined ids. Relative paths are
/// resolved against the config file's directory. See README for the schema.
struct ExperimentConfig {
  std::filesystem::path corpus;
  CorpusFormat corpus_format = CorpusFormat::Jsonl;
  std::vector<std::size_t> subset_sizes;
  std::uint64_t seed = 0;
  std::filesystem::path queries;
  /// manual method -> system-level score CSV
  std::map<std::string, std::filesystem::path> manual_scores;
  /// annotator subset label -> (manual method -> CSV); falls back to
  /// manual_scores when a subset has no entry for a method
  std::map<std::string, std::map<std::string, std::filesystem::path>> subset_manual_scores;
  std::vector<Strategy> strategies{Strategy::GeSeraPos};
  std::vector<Variant> variants{Variant::Sera, Variant::SeraDis};
  std::vector<std::size_t> cutoffs{5, 10};
  std::vector<std::vector<std::string>> annotator_subsets;
  std::filesystem::path output_dir;
  IndexParams index_params;
  TaggerKind tagger = TaggerKind::Heuristic;
  std::optional<std::filesystem::path> lexicon;
  std::optional<std::filesystem::path> stopwords;

  /// strategy x variant x cutoff, in that nesting order.
  std::vector<EvalConfig> eval_configs() const;

  /// Stable textual form used for the manifest hash.
  std::string canonical() const;
};

/// Parses and validates in one pass; every problem found is reported in a
/// single Error, one per line.
ExperimentConfig parse_experiment_config(std::string_view text,
                                         const std::filesystem::path& base_dir);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// "A1+A2+A3"
std::string subset_label(const std::vector<std::string>& subset);

std::unique_ptr<Tagger> make_tagger(TaggerKind kind,
                                    const std::optional<std::filesystem::path>& lexicon,
                                    const std::optional<std::filesystem::path>& stopwords);

struct SweepRow {
  std::string annotators;  // "all" outside annotator studies
  std::size_t index_size = 0;
  std::string metric;
  std::string manual_method;
  std::size_t n_systems = 0;
  double pearson = 0.0;
  double spearman = 0.0;
  double kendall = 0.0;
  std::string error;  // non-empty for a failed grid cell

  bool ok() const { return error.empty(); }
};

struct SweepResult {
  std::vector<SweepRow> rows;
  /// index size -> per-summary scores, for Table-style output
  std::map<std::size_t, ScoreTable> scores;

  /// annotators,index_size,metric,manual_method,n_systems,pearson,spearman,kendall,error
  void write_csv(std::ostream& out) const;
  /// Long format: annotators,index_size,metric,manual_method,coefficient,value
  void write_long_csv(std::ostream& out) const;
};

struct RunOptions {
  unsigned threads = 1;
  std::optional<std::uint64_t> seed_override;
  bool write_outputs = true;
  std::ostream* log = nullptr;
};

/// Sampling seed for an index size: mix_seed(base_seed, size).
std::uint64_t subset_seed(std::uint64_t base_seed, std::size_t size);

/// For each index size: sample, index, score every (strategy, variant,
/// cutoff), aggregate per system and correlate against each manual method.
/// Writes sweep.csv, sweep_long.csv, scores_I<size>.csv and manifest.txt
/// into config.output_dir when options.write_outputs is set.
SweepResult run_sweep(const ExperimentConfig& config, const RunOptions& options = {});

/// As run_sweep, once per configured annotator subset, with references
/// restricted to that subset. Rows carry the subset label. Writes
/// annotators.csv, annotators_long.csv and manifest.txt.
SweepResult run_annotator_study(const ExperimentConfig& config,
                                const RunOptions& options = {});

struct PosReportRow {
  std::string corpus;
  std::string tag_class;
  double percentage = 0.0;
  std::string error;
};

/// One row per (corpus, class) over Noun, Verb, Adjective, Preposition,
/// Others. A corpus that fails to load or is empty yields a single error row.
std::vector<PosReportRow> report_pos_distribution(
    const std::vector<std::filesystem::path>& corpora, CorpusFormat format,
    const Tagger& tagger, unsigned threads = 1);

/// corpus,tag_class,percentage,error
void write_pos_report(const std::vector<PosReportRow>& rows, std::ostream& out);

struct ScoreCommandResult {
  ScoreTable table;
  Warnings warnings;
};

/// One-shot scoring against a saved index. Candidates and references are
/// summary files; records of the other kind in either file are ignored.
ScoreCommandResult score_command(const std::filesystem::path& index_path,
                                 const std::filesystem::path& candidates_path,
                                 const std::filesystem::path& references_path,
                                 const EvalConfig& config, const Tagger& tagger,
                                 unsigned threads = 1);

/// 64-bit FNV-1a over a file's bytes, as 16 hex digits.
std::string file_checksum(const std::filesystem::path& path);
std::string text_checksum(std::string_view text);

}  // namespace gesera
