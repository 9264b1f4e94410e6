#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "gesera/corpus.hpp"
#include "gesera/summaries.hpp"

namespace gesera {

/// Generator for a labelled benchmark with known system quality.
///
/// Words are pronounceable pseudo-words built so the heuristic tagger reads
/// them as nouns (plain stems), verbs (stem + "ed") or adjectives
/// (stem + "ous"). Each latent topic owns a private vocabulary; documents mix
/// topical and shared background words with English function words.
///
/// Every query topic has a hidden gold summary sampled from the topic.
/// Annotators paraphrase it by resampling a share of its content words from
/// the topic. System s replaces a fraction s / systems of the gold summary's
/// content words with background filler, so system 1 is the best and
/// quality(s) = 1 - (s - 1) / systems.
struct SyntheticOptions {
  std::size_t topics = 30;
  std::size_t distractor_topics = 10;  // latent topics with documents only
  std::size_t systems = 10;
  std::size_t annotators = 4;
  std::size_t documents = 2000;
  std::size_t topic_vocabulary = 80;
  std::size_t background_vocabulary = 400;
  std::size_t document_length = 80;
  std::size_t summary_length = 40;
  double topical_share = 0.6;  // fraction of a document's content words from its topic
  double paraphrase_share = 0.3;  // content words an annotator rewrites
  /// Annotator index (0-based) whose references are random tokens copied
  /// from one random document of the topic instead of a paraphrase.
  std::optional<std::size_t> noise_annotator;
  std::uint64_t seed = 1;
};

struct SyntheticBenchmark {
  DocumentCollection corpus;
  std::vector<SummaryRecord> candidates;
  std::vector<SummaryRecord> references;  // system_id is "A1".."An"
  std::map<std::string, double> quality;   // system_id -> ground truth
  std::vector<std::string> vocabulary;     // every content word in the corpus
};

SyntheticBenchmark make_synthetic_benchmark(const SyntheticOptions& options);

enum class ReplacementSource { OutOfVocabulary, Vocabulary };

/// Replaces round(fraction * n) of the n content words (anything the
/// heuristic tagger keeps as Noun, Verb or Adjective) chosen uniformly
/// without replacement. OutOfVocabulary replacements are fresh pseudo-words
/// that never occur in a synthetic corpus.
std::string corrupt_text(std::string_view text, double fraction,
                         ReplacementSource source,
                         const std::vector<std::string>& vocabulary,
                         std::mt19937_64& rng);

}  // namespace gesera
