#include "gesera/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include <fmt/format.h>

#include "gesera/tagger.hpp"

namespace gesera {

namespace {

constexpr std::string_view kConsonants = "bdfgkmnprstvz";
constexpr std::string_view kVowels = "aiou";
constexpr std::array<std::string_view, 12> kFunctionWords{
    "the", "of", "and", "in", "to", "a", "with", "for", "on", "was", "is", "by"};

const HeuristicTagger& default_tagger() {
  static const HeuristicTagger tagger;
  return tagger;
}

std::string random_stem(std::mt19937_64& rng, std::size_t syllables) {
  std::string stem;
  for (std::size_t i = 0; i < syllables; ++i) {
    stem.push_back(kConsonants[bounded_draw(rng, kConsonants.size())]);
    stem.push_back(kVowels[bounded_draw(rng, kVowels.size())]);
  }
  return stem;
}

class WordFactory {
 public:
  explicit WordFactory(std::mt19937_64& rng) : rng_(rng) {}

  /// A new word the default tagger reads as `tag`.
  std::string make(PosTag tag) {
    for (;;) {
      auto word = random_stem(rng_, 3);
      if (tag == PosTag::Verb) {
        word += "ed";
      } else if (tag == PosTag::Adjective) {
        word += "ous";
      }
      if (default_tagger().tag_word(word) == tag && used_.insert(word).second) {
        return word;
      }
    }
  }

  /// Words of the given size with a 2:1:1 noun/verb/adjective mix.
  std::vector<std::string> vocabulary(std::size_t size) {
    std::vector<std::string> words;
    words.reserve(size);
    for (std::size_t i = 0; i < size; ++i) {
      const PosTag tag = i % 4 == 1 ? PosTag::Verb : i % 4 == 3 ? PosTag::Adjective : PosTag::Noun;
      words.push_back(make(tag));
    }
    return words;
  }

 private:
  std::mt19937_64& rng_;
  std::unordered_set<std::string> used_;
};

/// Zipf-weighted sampler over a word list.
class ZipfSampler {
 public:
  explicit ZipfSampler(const std::vector<std::string>& words) : words_(&words) {
    double total = 0.0;
    for (std::size_t r = 0; r < words.size(); ++r) {
      total += 1.0 / static_cast<double>(r + 1);
      cumulative_.push_back(total);
    }
  }

  const std::string& operator()(std::mt19937_64& rng) const {
    // 53-bit uniform in [0, 1).
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    auto idx = static_cast<std::size_t>(it - cumulative_.begin());
    return (*words_)[std::min(idx, words_->size() - 1)];
  }

 private:
  const std::vector<std::string>* words_;
  std::vector<double> cumulative_;
};

std::string compose(const std::vector<std::string>& content, std::mt19937_64& rng) {
  std::string text;
  for (std::size_t i = 0; i < content.size(); ++i) {
    if (i > 0 && bounded_draw(rng, 3) == 0) {
      text += kFunctionWords[bounded_draw(rng, kFunctionWords.size())];
      text.push_back(' ');
    }
    text += content[i];
    text.push_back(i + 1 == content.size() ? '.' : ' ');
  }
  return text;
}

template <typename Draw>
std::string replace_content_words(std::string_view text, double fraction, std::mt19937_64& rng,
                                  Draw draw) {
  if (fraction < 0.0 || fraction > 1.0) {
    throw Error(fmt::format("corruption fraction {} outside [0, 1]", fraction));
  }
  std::vector<std::string> words;
  std::istringstream in{std::string(text)};
  for (std::string w; in >> w;) {
    words.push_back(std::move(w));
  }
  std::vector<std::size_t> content;
  for (std::size_t i = 0; i < words.size(); ++i) {
    const auto tokens = tokenize(words[i]);
    if (tokens.size() != 1) {
      continue;
    }
    const auto tag = default_tagger().tag_word(tokens[0]);
    if (tag == PosTag::Noun || tag == PosTag::Verb || tag == PosTag::Adjective) {
      content.push_back(i);
    }
  }
  const auto replace =
      static_cast<std::size_t>(std::llround(fraction * static_cast<double>(content.size())));
  for (std::size_t i = 0; i < replace; ++i) {
    const auto j = i + static_cast<std::size_t>(bounded_draw(rng, content.size() - i));
    std::swap(content[i], content[j]);
    auto& word = words[content[i]];
    const bool trailing_period = word.back() == '.';
    word = draw(rng);
    if (trailing_period) {
      word.push_back('.');
    }
  }
  return fmt::format("{}", fmt::join(words, " "));
}

}  // namespace

SyntheticBenchmark make_synthetic_benchmark(const SyntheticOptions& options) {
  if (options.topics == 0 || options.systems == 0 || options.annotators == 0 ||
      options.documents == 0) {
    throw Error("synthetic benchmark needs topics, systems, annotators and documents > 0");
  }
  std::mt19937_64 rng(mix_seed(options.seed, 0));
  WordFactory factory(rng);

  const std::size_t latent = options.topics + options.distractor_topics;
  std::vector<std::vector<std::string>> topic_words;
  for (std::size_t t = 0; t < latent; ++t) {
    topic_words.push_back(factory.vocabulary(options.topic_vocabulary));
  }
  const auto background = factory.vocabulary(options.background_vocabulary);

  SyntheticBenchmark bench;
  for (const auto& words : topic_words) {
    bench.vocabulary.insert(bench.vocabulary.end(), words.begin(), words.end());
  }
  bench.vocabulary.insert(bench.vocabulary.end(), background.begin(), background.end());

  std::vector<ZipfSampler> topic_samplers;
  for (const auto& words : topic_words) {
    topic_samplers.emplace_back(words);
  }
  const ZipfSampler background_sampler(background);

  std::vector<Document> docs;
  docs.reserve(options.documents);
  for (std::size_t d = 0; d < options.documents; ++d) {
    const auto& topic = topic_samplers[d % latent];
    std::vector<std::string> title;
    for (int i = 0; i < 3; ++i) {
      title.push_back(topic(rng));
    }
    std::vector<std::string> body;
    for (std::size_t i = 0; i < options.document_length; ++i) {
      const bool topical = static_cast<double>(rng() >> 11) * 0x1.0p-53 < options.topical_share;
      body.push_back(topical ? topic(rng) : background_sampler(rng));
    }
    docs.push_back({fmt::format("doc{:05}", d), fmt::format("{}", fmt::join(title, " ")),
                    compose(body, rng)});
  }
  bench.corpus = DocumentCollection(std::move(docs), "synthetic");

  auto sample_summary = [&](const ZipfSampler& sampler) {
    std::vector<std::string> words;
    for (std::size_t i = 0; i < options.summary_length; ++i) {
      words.push_back(sampler(rng));
    }
    return compose(words, rng);
  };

  for (std::size_t s = 0; s < options.systems; ++s) {
    bench.quality[fmt::format("S{:02}", s + 1)] =
        1.0 - static_cast<double>(s) / static_cast<double>(options.systems);
  }
  auto topic_document = [&](std::size_t topic) -> const Document& {
    // Documents are dealt round-robin over latent topics.
    const std::size_t per_topic = (options.documents - topic + latent - 1) / latent;
    return bench.corpus[topic + latent * bounded_draw(rng, per_topic)];
  };

  for (std::size_t t = 0; t < options.topics; ++t) {
    const auto topic_id = fmt::format("T{:03}", t + 1);
    const auto gold = sample_summary(topic_samplers[t]);
    for (std::size_t a = 0; a < options.annotators; ++a) {
      std::string text;
      if (options.noise_annotator && *options.noise_annotator == a) {
        const auto tokens = tokenize(topic_document(t).body);
        std::vector<std::string> words;
        for (std::size_t i = 0; i < options.summary_length; ++i) {
          words.push_back(tokens[bounded_draw(rng, tokens.size())]);
        }
        text = compose(words, rng);
      } else {
        text = replace_content_words(gold, options.paraphrase_share, rng,
                                     [&](std::mt19937_64& r) { return topic_samplers[t](r); });
      }
      bench.references.push_back(
          {topic_id, fmt::format("A{}", a + 1), SummaryKind::Reference, std::move(text)});
    }
    for (std::size_t s = 0; s < options.systems; ++s) {
      const double fraction = static_cast<double>(s) / static_cast<double>(options.systems);
      bench.candidates.push_back(
          {topic_id, fmt::format("S{:02}", s + 1), SummaryKind::Candidate,
           replace_content_words(gold, fraction, rng,
                                 [&](std::mt19937_64& r) { return background_sampler(r); })});
    }
  }
  return bench;
}

std::string corrupt_text(std::string_view text, double fraction, ReplacementSource source,
                         const std::vector<std::string>& vocabulary, std::mt19937_64& rng) {
  if (source == ReplacementSource::Vocabulary && vocabulary.empty()) {
    throw Error("vocabulary replacement needs a non-empty vocabulary");
  }
  return replace_content_words(text, fraction, rng, [&](std::mt19937_64& r) {
    // 'x' never starts a generated corpus word.
    return source == ReplacementSource::OutOfVocabulary
               ? "x" + random_stem(r, 4)
               : vocabulary[bounded_draw(r, vocabulary.size())];
  });
}

}  // namespace gesera
