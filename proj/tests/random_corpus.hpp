#pragma once

#include <random>
#include <string>
#include <vector>

#include "gesera/corpus.hpp"
#include "gesera/text.hpp"

namespace testutil {

inline std::string vocab_word(std::size_t i) { return "w" + std::to_string(i); }

/// Random collection with up to max_docs documents over a vocabulary of
/// vocab words "w0".."w<vocab-1>". Titles are empty about a third of the time.
inline gesera::DocumentCollection random_collection(std::mt19937_64& rng, std::size_t max_docs,
                                                    std::size_t vocab) {
  const std::size_t n = 1 + rng() % max_docs;
  std::vector<gesera::Document> docs;
  for (std::size_t d = 0; d < n; ++d) {
    std::string title;
    if (rng() % 3 != 0) {
      for (std::size_t i = 0, len = 1 + rng() % 4; i < len; ++i) {
        title += vocab_word(rng() % vocab) + " ";
      }
    }
    std::string body;
    for (std::size_t i = 0, len = 1 + rng() % 30; i < len; ++i) {
      body += vocab_word(rng() % vocab) + " ";
    }
    // Ids are not in index order, so DocNo order must come from sorting.
    docs.push_back({"doc" + std::to_string((d * 7919) % 100000), title, body});
  }
  return gesera::DocumentCollection(std::move(docs), "random");
}

inline gesera::Query random_query(std::mt19937_64& rng, std::size_t vocab) {
  gesera::Query q;
  for (std::size_t i = 0, len = 1 + rng() % 6; i < len; ++i) {
    std::string term = vocab_word(rng() % vocab);
    if (rng() % 4 == 0) {
      term += " " + vocab_word(rng() % vocab);
    }
    q.terms.push_back(term);
  }
  return q;
}

}  // namespace testutil
