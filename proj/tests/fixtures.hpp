#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "gesera/synthetic.hpp"
#include "test_util.hpp"

namespace testutil {

/// Writes corpus.jsonl, queries.jsonl (candidates then references) and
/// quality.csv under dir.
inline void write_benchmark(const gesera::SyntheticBenchmark& bench,
                            const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  gesera::write_corpus(bench.corpus, dir / "corpus.jsonl");
  auto records = bench.candidates;
  records.insert(records.end(), bench.references.begin(), bench.references.end());
  gesera::write_summaries(records, dir / "queries.jsonl");
  std::string manual = "system_id,score\n";
  for (const auto& [system, q] : bench.quality) {
    manual += fmt::format("{},{}\n", system, q);
  }
  write_file(dir / "quality.csv", manual);
}

/// Config text for a benchmark written by write_benchmark into the same
/// directory.
inline std::string benchmark_config(const std::string& sizes, const std::string& extra = {}) {
  return fmt::format(
      "corpus = corpus.jsonl\n"
      "queries = queries.jsonl\n"
      "manual.quality = quality.csv\n"
      "subset_sizes = {}\n"
      "seed = 17\n"
      "output_dir = out\n"
      "{}",
      sizes, extra);
}

}  // namespace testutil
