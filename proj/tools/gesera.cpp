// gesera: retrieval-based summary evaluation.
//
//   gesera build-index  --corpus docs.jsonl --out docs.gidx
//   gesera score        --index docs.gidx --candidates c.jsonl --references r.jsonl
//   gesera sweep        --config sweep.conf
//   gesera annotators   --config sweep.conf
//   gesera pos-report   wiki.jsonl news.jsonl
//   gesera import-tac   --peers peers/ --models models/ --out tac.jsonl
//   gesera synth        --out demo/

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "gesera/corpus.hpp"
#include "gesera/experiments.hpp"
#include "gesera/index.hpp"
#include "gesera/scoring.hpp"
#include "gesera/summaries.hpp"
#include "gesera/synthetic.hpp"
#include "gesera/tac_import.hpp"

namespace {

struct TaggerFlags {
  std::string kind = "heuristic";
  std::string lexicon;
  std::string stopwords;

  void add(CLI::App* app) {
    app->add_option("--tagger", kind, "POS tagger backend")
        ->check(CLI::IsMember({"heuristic", "pretagged"}))
        ->capture_default_str();
    app->add_option("--lexicon", lexicon, "Lexicon file (word<TAB>TAG) replacing the bundled one")
        ->check(CLI::ExistingFile);
    app->add_option("--stopwords", stopwords, "Stopword file replacing the bundled list")
        ->check(CLI::ExistingFile);
  }

  std::unique_ptr<gesera::Tagger> make() const {
    auto opt = [](const std::string& s) {
      return s.empty() ? std::nullopt : std::optional<std::filesystem::path>(s);
    };
    return gesera::make_tagger(
        kind == "pretagged" ? gesera::TaggerKind::Pretagged : gesera::TaggerKind::Heuristic,
        opt(lexicon), opt(stopwords));
  }
};

void print_warnings(const gesera::Warnings& warnings) {
  for (const auto& w : warnings) {
    std::cerr << "warning: " << w << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gesera: summary evaluation by retrieval overlap (SERA / SERA-DIS / GeSERA)"};
  app.set_version_flag("--version", std::string(GESERA_VERSION));
  app.require_subcommand(1);

  unsigned threads = 0;
  auto add_threads = [&](CLI::App* sub) {
    sub->add_option("--threads", threads, "Worker threads (0 = available parallelism)")
        ->capture_default_str();
  };

  // build-index
  auto* build = app.add_subcommand("build-index", "Index a corpus (or a random subset of it)");
  std::string corpus_path;
  std::string corpus_format = "jsonl";
  std::string index_out;
  std::size_t subset_size = 0;
  std::uint64_t seed = 0;
  gesera::IndexParams params;
  build->add_option("--corpus", corpus_path, "Corpus file (jsonl) or directory of .txt files")
      ->required();
  build->add_option("--format", corpus_format, "Corpus format")
      ->check(CLI::IsMember({"jsonl", "dir"}))
      ->capture_default_str();
  build->add_option("--size", subset_size, "Index a random subset of this many documents (0 = all)")
      ->capture_default_str();
  build->add_option("--seed", seed, "Sampling seed for --size")->capture_default_str();
  build->add_option("--k1", params.k1, "BM25F term-frequency saturation")->capture_default_str();
  build->add_option("--b", params.b, "BM25F length normalisation")->capture_default_str();
  build->add_option("--title-boost", params.boosts[0], "Title field boost")->capture_default_str();
  build->add_option("--body-boost", params.boosts[1], "Body field boost")->capture_default_str();
  build->add_option("--out", index_out, "Output index file")->required();
  add_threads(build);

  // score
  auto* score = app.add_subcommand("score", "Score candidate summaries against a saved index");
  std::string index_path;
  std::string candidates_path;
  std::string references_path;
  std::string strategy = "gesera";
  std::string variant = "sera";
  std::size_t cutoff = 10;
  std::string score_out;
  TaggerFlags score_tagger;
  score->add_option("--index", index_path, "Index file from build-index")
      ->required()
      ->check(CLI::ExistingFile);
  score->add_option("--candidates", candidates_path, "Summary file holding the candidates")
      ->required()
      ->check(CLI::ExistingFile);
  score->add_option("--references", references_path, "Summary file holding the references")
      ->required()
      ->check(CLI::ExistingFile);
  score->add_option("--strategy", strategy, "Query reformulation: raw, np, kw or gesera")
      ->capture_default_str();
  score->add_option("--variant", variant, "Scoring variant: sera or sera-dis")
      ->capture_default_str();
  score->add_option("--cutoff", cutoff, "Retrieved list length")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  score->add_option("--out", score_out, "Write the CSV here instead of stdout");
  score_tagger.add(score);
  add_threads(score);

  // sweep / annotators
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed_override;
  auto add_experiment_flags = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Experiment config file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", seed_override, "Override the config seed");
    sub->add_option("--out", out_dir, "Override the config output_dir");
    add_threads(sub);
  };
  auto* sweep = app.add_subcommand("sweep", "Correlate every metric with manual scores per index size");
  add_experiment_flags(sweep);
  auto* annotators =
      app.add_subcommand("annotators", "Repeat the sweep per reference-annotator subset");
  add_experiment_flags(annotators);

  // pos-report
  auto* pos = app.add_subcommand("pos-report", "POS class percentages per corpus");
  std::vector<std::string> pos_corpora;
  std::string pos_out;
  std::string pos_format = "jsonl";
  TaggerFlags pos_tagger;
  pos->add_option("corpora", pos_corpora, "Corpus files or directories")->required();
  pos->add_option("--format", pos_format, "Corpus format")
      ->check(CLI::IsMember({"jsonl", "dir"}))
      ->capture_default_str();
  pos->add_option("--out", pos_out, "Write the CSV here instead of stdout");
  pos_tagger.add(pos);
  add_threads(pos);

  // import-tac
  auto* tac = app.add_subcommand("import-tac", "Convert TAC-style peer/model files and manual tables");
  std::string peers_dir;
  std::string models_dir;
  std::string tac_out;
  std::string manual_table;
  std::string manual_out;
  std::string manual_name = "pyramid";
  gesera::ManualTableLayout layout;
  tac->add_option("--peers", peers_dir, "Directory of candidate summaries")->check(CLI::ExistingDirectory);
  tac->add_option("--models", models_dir, "Directory of reference summaries")->check(CLI::ExistingDirectory);
  tac->add_option("--out", tac_out, "Output summary file (jsonl)");
  tac->add_option("--manual", manual_table, "Whitespace-separated per-topic manual score table")
      ->check(CLI::ExistingFile);
  tac->add_option("--manual-out", manual_out, "Output system-level manual score CSV");
  tac->add_option("--manual-name", manual_name, "Manual method name")->capture_default_str();
  tac->add_option("--topic-col", layout.topic_column, "0-based topic column")->capture_default_str();
  tac->add_option("--system-col", layout.system_column, "0-based system column")->capture_default_str();
  tac->add_option("--score-col", layout.score_column, "0-based score column")->capture_default_str();

  // synth
  auto* synth = app.add_subcommand("synth", "Write a synthetic benchmark and a sweep config for it");
  gesera::SyntheticOptions synth_options;
  std::string synth_out;
  std::size_t noise_annotator = 0;
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--topics", synth_options.topics, "Query topics")->capture_default_str();
  synth->add_option("--systems", synth_options.systems, "Systems of graded quality")
      ->capture_default_str();
  synth->add_option("--annotators", synth_options.annotators, "References per topic")
      ->capture_default_str();
  synth->add_option("--documents", synth_options.documents, "Corpus size")->capture_default_str();
  synth->add_option("--noise-annotator", noise_annotator,
                    "1-based annotator whose references are noise (0 = none)")
      ->capture_default_str();
  synth->add_option("--seed", synth_options.seed, "Generator seed")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed()) {
      gesera::Warnings warnings;
      auto collection = gesera::load_corpus(corpus_path, gesera::parse_corpus_format(corpus_format),
                                            &warnings);
      print_warnings(warnings);
      if (subset_size > 0) {
        collection = gesera::sample_subset(collection, {subset_size, seed});
      }
      auto index = gesera::InvertedIndex::build(collection, params, threads);
      index.save(index_out);
      std::cerr << fmt::format("indexed {} documents, {} terms -> {}\n", index.doc_count(),
                               index.vocabulary_size(), index_out);
    } else if (score->parsed()) {
      const gesera::EvalConfig config{gesera::parse_strategy(strategy),
                                      gesera::parse_variant(variant), cutoff};
      auto tagger = score_tagger.make();
      auto result = gesera::score_command(index_path, candidates_path, references_path, config,
                                          *tagger, threads);
      print_warnings(result.warnings);
      if (score_out.empty()) {
        result.table.write_csv(std::cout);
      } else {
        std::ofstream out(score_out, std::ios::binary);
        result.table.write_csv(out);
      }
    } else if (sweep->parsed() || annotators->parsed()) {
      auto config = gesera::load_experiment_config(config_path);
      if (!out_dir.empty()) {
        config.output_dir = out_dir;
      }
      gesera::RunOptions options;
      options.threads = threads;
      options.seed_override = seed_override;
      options.log = &std::cerr;
      const auto result = sweep->parsed() ? gesera::run_sweep(config, options)
                                          : gesera::run_annotator_study(config, options);
      std::size_t failed = 0;
      for (const auto& row : result.rows) {
        failed += row.ok() ? 0 : 1;
      }
      std::cerr << fmt::format("{} result rows ({} failed) written to {}\n", result.rows.size(),
                               failed, config.output_dir.string());
      return failed == 0 ? 0 : 2;
    } else if (pos->parsed()) {
      auto tagger = pos_tagger.make();
      std::vector<std::filesystem::path> paths(pos_corpora.begin(), pos_corpora.end());
      auto rows = gesera::report_pos_distribution(paths, gesera::parse_corpus_format(pos_format),
                                                  *tagger, threads);
      if (pos_out.empty()) {
        gesera::write_pos_report(rows, std::cout);
      } else {
        std::ofstream out(pos_out, std::ios::binary);
        gesera::write_pos_report(rows, out);
      }
    } else if (synth->parsed()) {
      if (noise_annotator > 0) {
        synth_options.noise_annotator = noise_annotator - 1;
      }
      const auto bench = gesera::make_synthetic_benchmark(synth_options);
      const std::filesystem::path dir(synth_out);
      std::filesystem::create_directories(dir);
      gesera::write_corpus(bench.corpus, dir / "corpus.jsonl");
      auto records = bench.candidates;
      records.insert(records.end(), bench.references.begin(), bench.references.end());
      gesera::write_summaries(records, dir / "queries.jsonl");
      std::ofstream manual(dir / "quality.csv", std::ios::binary);
      manual << "system_id,score\n";
      for (const auto& [system, q] : bench.quality) {
        manual << system << ',' << fmt::format("{}", q) << '\n';
      }
      const auto n = synth_options.documents;
      std::ofstream config(dir / "sweep.conf", std::ios::binary);
      config << "corpus = corpus.jsonl\n"
             << "queries = queries.jsonl\n"
             << "manual.quality = quality.csv\n"
             << fmt::format("subset_sizes = {}, {}, {}\n", n / 4, n / 2, n)
             << "seed = 1\n"
             << "output_dir = results\n";
      std::cerr << fmt::format("wrote {} documents, {} candidates, {} references to {}\n",
                               bench.corpus.size(), bench.candidates.size(),
                               bench.references.size(), dir.string());
    } else if (tac->parsed()) {
      bool did_something = false;
      if (!peers_dir.empty() || !models_dir.empty()) {
        if (peers_dir.empty() || models_dir.empty() || tac_out.empty()) {
          throw gesera::Error("--peers, --models and --out must be given together");
        }
        auto records = gesera::import_tac_summaries(peers_dir, models_dir);
        gesera::write_summaries(records, tac_out);
        std::cerr << fmt::format("wrote {} summaries to {}\n", records.size(), tac_out);
        did_something = true;
      }
      if (!manual_table.empty()) {
        if (manual_out.empty()) {
          throw gesera::Error("--manual needs --manual-out");
        }
        auto scores = gesera::import_manual_table(manual_table, layout, manual_name);
        std::ofstream out(manual_out, std::ios::binary);
        out << "system_id,score\n";
        for (const auto& [system, value] : scores.entries) {
          out << system << ',' << fmt::format("{}", value) << '\n';
        }
        did_something = true;
      }
      if (!did_something) {
        throw gesera::Error("nothing to import: give --peers/--models/--out or --manual");
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
