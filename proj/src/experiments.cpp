#include "gesera/experiments.hpp"

#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "csv.hpp"

namespace gesera {

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

std::uint64_t fnv1a(std::uint64_t h, std::string_view bytes) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

std::string format_score(double v) { return fmt::format("{}", v); }

struct Inputs {
  DocumentCollection corpus;
  std::vector<SummaryRecord> candidates;
  std::vector<SummaryRecord> references;
  std::unique_ptr<Tagger> tagger;
  std::set<std::string> annotators;
};

Inputs load_inputs(const ExperimentConfig& config) {
  Inputs in;
  in.corpus = load_corpus(config.corpus, config.corpus_format);
  for (auto& r : load_summaries(config.queries)) {
    if (r.kind == SummaryKind::Candidate) {
      in.candidates.push_back(std::move(r));
    } else {
      in.annotators.insert(r.system_id);
      in.references.push_back(std::move(r));
    }
  }
  in.tagger = make_tagger(config.tagger, config.lexicon, config.stopwords);

  std::vector<std::string> errors;
  for (auto size : config.subset_sizes) {
    if (size > in.corpus.size()) {
      errors.push_back(fmt::format("subset size {} exceeds corpus size {}", size,
                                   in.corpus.size()));
    }
  }
  if (in.candidates.empty()) {
    errors.push_back(fmt::format("{} holds no candidate summaries", config.queries.string()));
  }
  if (!errors.empty()) {
    throw Error(fmt::format("invalid experiment:\n  {}", fmt::join(errors, "\n  ")));
  }
  return in;
}

struct Block {
  std::string label;
  std::optional<std::set<std::string>> annotators;
  std::map<std::string, SystemScoreVector> manual;  // method -> scores
  std::string manual_error;
};

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(fmt::format("cannot write {}", path.string()));
  }
  out << content;
}

void write_manifest(const ExperimentConfig& config, std::string_view command,
                    std::uint64_t seed, const std::filesystem::path& dir) {
  std::ostringstream out;
  out << "tool=gesera\n"
      << "tool_version=" << GESERA_VERSION << '\n'
      << "command=" << command << '\n'
      << "config_hash=" << text_checksum(config.canonical()) << '\n'
      << "seed=" << seed << '\n';
  for (auto size : config.subset_sizes) {
    out << "subset_seed.I" << size << '=' << subset_seed(seed, size) << '\n';
  }
  if (std::filesystem::is_regular_file(config.corpus)) {
    out << "corpus_checksum=" << file_checksum(config.corpus) << '\n';
  } else {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(config.corpus)) {
      if (e.is_regular_file() && e.path().extension() == ".txt") {
        files.push_back(e.path());
      }
    }
    std::sort(files.begin(), files.end());
    std::uint64_t h = kFnvOffset;
    for (const auto& f : files) {
      h = fnv1a(h, f.filename().string());
      h = fnv1a(h, file_checksum(f));
    }
    out << "corpus_checksum=" << fmt::format("{:016x}", h) << '\n';
  }
  out << "queries_checksum=" << file_checksum(config.queries) << '\n';
  for (const auto& [method, path] : config.manual_scores) {
    out << "manual." << method << "_checksum=" << file_checksum(path) << '\n';
  }
  for (const auto& [label, methods] : config.subset_manual_scores) {
    for (const auto& [method, path] : methods) {
      out << "manual." << method << '@' << label << "_checksum=" << file_checksum(path)
          << '\n';
    }
  }
  write_file(dir / "manifest.txt", out.str());
}

void log_line(const RunOptions& options, const std::string& message) {
  if (options.log != nullptr) {
    *options.log << message << '\n';
  }
}

SweepResult run_grid(const ExperimentConfig& config, const RunOptions& options,
                     const Inputs& inputs, std::vector<Block>& blocks, std::uint64_t seed,
                     bool keep_scores) {
  const auto configs = config.eval_configs();
  // rows[block][size]
  std::vector<std::vector<std::vector<SweepRow>>> grid(
      blocks.size(), std::vector<std::vector<SweepRow>>(config.subset_sizes.size()));
  SweepResult result;

  auto fail_cell = [&](std::vector<SweepRow>& out, const Block& block, std::size_t size,
                       const std::string& metric, const std::string& method,
                       const std::string& message) {
    SweepRow row;
    row.annotators = block.label;
    row.index_size = size;
    row.metric = metric;
    row.manual_method = method;
    row.error = fmt::format("I={} {}: {}", size, metric, message);
    out.push_back(std::move(row));
  };

  for (std::size_t si = 0; si < config.subset_sizes.size(); ++si) {
    const auto size = config.subset_sizes[si];
    log_line(options, fmt::format("index size {}: sampling and indexing", size));
    std::optional<InvertedIndex> index;
    std::string index_error;
    try {
      auto subset = sample_subset(inputs.corpus, {size, subset_seed(seed, size)});
      index = InvertedIndex::build(subset, config.index_params, options.threads);
    } catch (const Error& e) {
      index_error = e.what();
    }

    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
      auto& block = blocks[bi];
      auto& out = grid[bi][si];
      std::vector<std::string> methods;
      for (const auto& [method, _] : block.manual) {
        methods.push_back(method);
      }
      if (!block.manual_error.empty()) {
        for (const auto& c : configs) {
          fail_cell(out, block, size, c.metric_name(), "*", block.manual_error);
        }
        continue;
      }
      if (!index) {
        for (const auto& c : configs) {
          for (const auto& m : methods) {
            fail_cell(out, block, size, c.metric_name(), m, index_error);
          }
        }
        continue;
      }

      ScoringContext ctx{*index, *inputs.tagger};
      DatasetReport report;
      try {
        report = evaluate_dataset(ctx, inputs.candidates, inputs.references, configs,
                                  {options.threads, block.annotators});
      } catch (const Error& e) {
        for (const auto& c : configs) {
          for (const auto& m : methods) {
            fail_cell(out, block, size, c.metric_name(), m, e.what());
          }
        }
        continue;
      }
      log_line(options,
               fmt::format("index size {} [{}]: {} rows, {} degenerate candidate queries, "
                           "{} degenerate reference queries",
                           size, block.label, report.table.rows.size(),
                           report.degenerate_candidates, report.degenerate_references));

      for (const auto& c : configs) {
        const auto metric = c.metric_name();
        for (const auto& m : methods) {
          try {
            auto automatic = aggregate_to_system(report.table, metric);
            auto corr = correlate(automatic, block.manual.at(m));
            SweepRow row;
            row.annotators = block.label;
            row.index_size = size;
            row.metric = metric;
            row.manual_method = m;
            row.n_systems = corr.n_systems;
            row.pearson = corr.pearson;
            row.spearman = corr.spearman;
            row.kendall = corr.kendall_tau_b;
            out.push_back(std::move(row));
          } catch (const Error& e) {
            fail_cell(out, block, size, metric, m, e.what());
          }
        }
      }
      if (keep_scores) {
        result.scores[size] = std::move(report.table);
      }
    }
  }

  for (auto& per_block : grid) {
    for (auto& per_size : per_block) {
      for (auto& row : per_size) {
        result.rows.push_back(std::move(row));
      }
    }
  }
  return result;
}

std::uint64_t effective_seed(const ExperimentConfig& config, const RunOptions& options) {
  return options.seed_override.value_or(config.seed);
}

void emit(const SweepResult& result, const ExperimentConfig& config, const RunOptions& options,
          std::string_view command, std::string_view stem, std::uint64_t seed) {
  if (!options.write_outputs) {
    return;
  }
  if (config.output_dir.empty()) {
    throw Error("no output directory configured");
  }
  std::filesystem::create_directories(config.output_dir);
  std::ostringstream table;
  result.write_csv(table);
  write_file(config.output_dir / fmt::format("{}.csv", stem), table.str());
  std::ostringstream long_form;
  result.write_long_csv(long_form);
  write_file(config.output_dir / fmt::format("{}_long.csv", stem), long_form.str());
  for (const auto& [size, scores] : result.scores) {
    std::ostringstream out;
    scores.write_csv(out);
    write_file(config.output_dir / fmt::format("scores_I{}.csv", size), out.str());
  }
  write_manifest(config, command, seed, config.output_dir);
}

}  // namespace

std::unique_ptr<Tagger> make_tagger(TaggerKind kind,
                                    const std::optional<std::filesystem::path>& lexicon,
                                    const std::optional<std::filesystem::path>& stopwords) {
  if (kind == TaggerKind::Pretagged) {
    return std::make_unique<PretaggedTagger>();
  }
  return std::make_unique<HeuristicTagger>(
      lexicon ? Lexicon::load(*lexicon) : Lexicon::bundled(),
      stopwords ? StopwordList::load(*stopwords) : StopwordList::bundled());
}

void SweepResult::write_csv(std::ostream& out) const {
  out << "annotators,index_size,metric,manual_method,n_systems,pearson,spearman,kendall,error\n";
  for (const auto& r : rows) {
    out << csv::escape(r.annotators) << ',' << r.index_size << ',' << csv::escape(r.metric)
        << ',' << csv::escape(r.manual_method) << ',';
    if (r.ok()) {
      out << r.n_systems << ',' << format_score(r.pearson) << ',' << format_score(r.spearman)
          << ',' << format_score(r.kendall) << ",\n";
    } else {
      out << ",,,," << csv::escape(r.error) << '\n';
    }
  }
}

void SweepResult::write_long_csv(std::ostream& out) const {
  out << "annotators,index_size,metric,manual_method,coefficient,value\n";
  for (const auto& r : rows) {
    if (!r.ok()) {
      continue;
    }
    const std::pair<const char*, double> values[] = {
        {"pearson", r.pearson}, {"spearman", r.spearman}, {"kendall", r.kendall}};
    for (const auto& [name, value] : values) {
      out << csv::escape(r.annotators) << ',' << r.index_size << ',' << csv::escape(r.metric)
          << ',' << csv::escape(r.manual_method) << ',' << name << ',' << format_score(value)
          << '\n';
    }
  }
}

std::uint64_t subset_seed(std::uint64_t base_seed, std::size_t size) {
  return mix_seed(base_seed, static_cast<std::uint64_t>(size));
}

SweepResult run_sweep(const ExperimentConfig& config, const RunOptions& options) {
  const auto inputs = load_inputs(config);
  const auto seed = effective_seed(config, options);

  std::vector<Block> blocks(1);
  blocks[0].label = "all";
  try {
    for (const auto& [method, path] : config.manual_scores) {
      blocks[0].manual.emplace(method, load_manual_scores(path, method));
    }
  } catch (const Error& e) {
    blocks[0].manual_error = e.what();
  }
  auto result = run_grid(config, options, inputs, blocks, seed, true);
  emit(result, config, options, "sweep", "sweep", seed);
  return result;
}

SweepResult run_annotator_study(const ExperimentConfig& config, const RunOptions& options) {
  const auto inputs = load_inputs(config);
  const auto seed = effective_seed(config, options);

  if (config.annotator_subsets.empty()) {
    throw Error("annotator study needs at least one entry in annotator_subsets");
  }
  std::vector<std::string> errors;
  for (const auto& subset : config.annotator_subsets) {
    if (subset.empty()) {
      errors.emplace_back("empty annotator subset");
    }
    for (const auto& id : subset) {
      if (inputs.annotators.count(id) == 0) {
        errors.push_back(fmt::format("annotator subset {} names unknown annotator {}",
                                     subset_label(subset), id));
      }
    }
  }
  if (!errors.empty()) {
    throw Error(fmt::format("invalid annotator study:\n  {}", fmt::join(errors, "\n  ")));
  }

  std::vector<Block> blocks;
  for (const auto& subset : config.annotator_subsets) {
    Block block;
    block.label = subset_label(subset);
    block.annotators.emplace(subset.begin(), subset.end());
    std::map<std::string, std::filesystem::path> files = config.manual_scores;
    if (auto it = config.subset_manual_scores.find(block.label);
        it != config.subset_manual_scores.end()) {
      for (const auto& [method, path] : it->second) {
        files[method] = path;
      }
    }
    try {
      for (const auto& [method, path] : files) {
        block.manual.emplace(method, load_manual_scores(path, method));
      }
    } catch (const Error& e) {
      block.manual_error = e.what();
    }
    blocks.push_back(std::move(block));
  }
  auto result = run_grid(config, options, inputs, blocks, seed, false);
  emit(result, config, options, "annotators", "annotators", seed);
  return result;
}

std::vector<PosReportRow> report_pos_distribution(
    const std::vector<std::filesystem::path>& corpora, CorpusFormat format,
    const Tagger& tagger, unsigned threads) {
  std::vector<PosReportRow> rows;
  for (const auto& path : corpora) {
    const auto label = path.string();
    try {
      auto collection = load_corpus(path, format);
      const auto dist = pos_distribution(collection, tagger, threads);
      for (std::size_t c = 0; c < kPosClassCount; ++c) {
        rows.push_back({label, std::string(to_string(static_cast<PosClass>(c))),
                        dist.percentages[c], {}});
      }
    } catch (const Error& e) {
      rows.push_back({label, {}, 0.0, e.what()});
    }
  }
  return rows;
}

void write_pos_report(const std::vector<PosReportRow>& rows, std::ostream& out) {
  out << "corpus,tag_class,percentage,error\n";
  for (const auto& r : rows) {
    out << csv::escape(r.corpus) << ',' << csv::escape(r.tag_class) << ',';
    if (r.error.empty()) {
      out << format_score(r.percentage) << ",\n";
    } else {
      out << ',' << csv::escape(r.error) << '\n';
    }
  }
}

ScoreCommandResult score_command(const std::filesystem::path& index_path,
                                 const std::filesystem::path& candidates_path,
                                 const std::filesystem::path& references_path,
                                 const EvalConfig& config, const Tagger& tagger,
                                 unsigned threads) {
  const auto index = InvertedIndex::load(index_path);
  std::vector<SummaryRecord> candidates;
  for (auto& r : load_summaries(candidates_path)) {
    if (r.kind == SummaryKind::Candidate) {
      candidates.push_back(std::move(r));
    }
  }
  std::vector<SummaryRecord> references;
  for (auto& r : load_summaries(references_path)) {
    if (r.kind == SummaryKind::Reference) {
      references.push_back(std::move(r));
    }
  }
  if (candidates.empty()) {
    throw Error(fmt::format("{} holds no candidate summaries", candidates_path.string()));
  }
  ScoringContext ctx{index, tagger};
  const EvalConfig configs[] = {config};
  auto report = evaluate_dataset(ctx, candidates, references, configs, {threads, std::nullopt});
  ScoreCommandResult result;
  for (auto i : report.degenerate_rows) {
    const auto& row = report.table.rows[i];
    result.warnings.push_back(
        fmt::format("degenerate query: candidate (topic {}, system {}) retrieved no "
                    "documents under {}; scored 0",
                    row.topic_id, row.system_id, row.metric));
  }
  result.table = std::move(report.table);
  return result;
}

std::string file_checksum(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(fmt::format("cannot open {}", path.string()));
  }
  std::uint64_t h = kFnvOffset;
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    h = fnv1a(h, std::string_view(buf, static_cast<std::size_t>(in.gcount())));
  }
  return fmt::format("{:016x}", h);
}

std::string text_checksum(std::string_view text) {
  return fmt::format("{:016x}", fnv1a(kFnvOffset, text));
}

}  // namespace gesera
