#include "gesera/index.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <fmt/format.h>

#include "gesera/parallel.hpp"

namespace gesera {

void IndexParams::validate() const {
  if (!(k1 > 0.0)) {
    throw Error(fmt::format("k1 must be > 0 (got {})", k1));
  }
  if (!(b >= 0.0 && b <= 1.0)) {
    throw Error(fmt::format("b must lie in [0, 1] (got {})", b));
  }
  if (!(boost(Field::Title) >= 0.0)) {
    throw Error(fmt::format("title boost must be >= 0 (got {})", boost(Field::Title)));
  }
  if (!(boost(Field::Body) > 0.0)) {
    throw Error(fmt::format("body boost must be > 0 (got {})", boost(Field::Body)));
  }
}

std::vector<std::string> query_words(const Query& query) {
  std::set<std::string> words;
  for (const auto& term : query.terms) {
    for (auto& word : tokenize(term)) {
      words.insert(std::move(word));
    }
  }
  return {words.begin(), words.end()};
}

namespace {

struct DocTerms {
  std::map<std::string, std::array<std::uint32_t, kFieldCount>> tf;
  std::array<std::uint32_t, kFieldCount> lengths{};
};

DocTerms analyze(const Document& doc) {
  DocTerms out;
  const std::array<const std::string*, kFieldCount> fields{&doc.title, &doc.body};
  for (std::size_t f = 0; f < kFieldCount; ++f) {
    auto tokens = tokenize(*fields[f]);
    out.lengths[f] = static_cast<std::uint32_t>(tokens.size());
    for (auto& token : tokens) {
      ++out.tf[std::move(token)][f];
    }
  }
  return out;
}

}  // namespace

InvertedIndex InvertedIndex::build(const DocumentCollection& collection,
                                   const IndexParams& params, unsigned threads) {
  if (collection.empty()) {
    throw Error("cannot build an index over an empty collection");
  }
  params.validate();

  // DocNo order is ascending id order.
  std::vector<const Document*> docs;
  docs.reserve(collection.size());
  for (const auto& doc : collection) {
    docs.push_back(&doc);
  }
  std::sort(docs.begin(), docs.end(),
            [](const Document* a, const Document* b) { return a->id < b->id; });

  std::vector<DocTerms> analyzed(docs.size());
  parallel_for(docs.size(), threads, [&](std::size_t i) { analyzed[i] = analyze(*docs[i]); });

  InvertedIndex index;
  index.params_ = params;
  index.doc_ids_.reserve(docs.size());
  index.field_lengths_.reserve(docs.size());

  std::map<std::string, std::vector<Posting>> merged;
  std::array<double, kFieldCount> total_lengths{};
  for (std::size_t i = 0; i < docs.size(); ++i) {
    index.doc_ids_.push_back(docs[i]->id);
    index.field_lengths_.push_back(analyzed[i].lengths);
    for (std::size_t f = 0; f < kFieldCount; ++f) {
      total_lengths[f] += analyzed[i].lengths[f];
    }
    for (auto& [term, tf] : analyzed[i].tf) {
      merged[term].push_back(Posting{static_cast<DocNo>(i), tf});
    }
    analyzed[i] = DocTerms{};
  }
  for (std::size_t f = 0; f < kFieldCount; ++f) {
    index.average_lengths_[f] = total_lengths[f] / static_cast<double>(docs.size());
  }
  index.terms_.reserve(merged.size());
  index.postings_.reserve(merged.size());
  for (auto& [term, list] : merged) {
    index.terms_.push_back(term);
    index.postings_.push_back(std::move(list));
  }
  return index;
}

std::optional<DocNo> InvertedIndex::find_doc(std::string_view doc_id) const {
  auto it = std::lower_bound(doc_ids_.begin(), doc_ids_.end(), doc_id);
  if (it == doc_ids_.end() || *it != doc_id) {
    return std::nullopt;
  }
  return static_cast<DocNo>(it - doc_ids_.begin());
}

const std::vector<Posting>* InvertedIndex::find_postings(std::string_view term) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), term);
  if (it == terms_.end() || *it != term) {
    return nullptr;
  }
  return &postings_[static_cast<std::size_t>(it - terms_.begin())];
}

std::span<const Posting> InvertedIndex::postings(std::string_view term) const {
  const auto* list = find_postings(term);
  return list == nullptr ? std::span<const Posting>{} : std::span<const Posting>(*list);
}

double InvertedIndex::idf(std::string_view term) const {
  const auto n = static_cast<double>(doc_count());
  const auto df = static_cast<double>(document_frequency(term));
  return std::max(0.0, std::log(1.0 + (n - df + 0.5) / (df + 0.5)));
}

double InvertedIndex::pseudo_frequency(const Posting& posting) const {
  double tf = 0.0;
  for (std::size_t f = 0; f < kFieldCount; ++f) {
    if (posting.tf[f] == 0) {
      continue;
    }
    const double norm = 1.0 - params_.b +
                        params_.b * field_lengths_[posting.doc][f] / average_lengths_[f];
    tf += params_.boosts[f] * posting.tf[f] / norm;
  }
  return tf;
}

double InvertedIndex::bm25f_score(const Query& query, std::string_view doc_id) const {
  auto doc = find_doc(doc_id);
  if (!doc) {
    throw Error(fmt::format("unknown document id '{}'", doc_id));
  }
  double score = 0.0;
  for (const auto& word : query_words(query)) {
    auto list = postings(word);
    auto it = std::lower_bound(list.begin(), list.end(), *doc,
                               [](const Posting& p, DocNo d) { return p.doc < d; });
    if (it == list.end() || it->doc != *doc) {
      continue;
    }
    const double tf = pseudo_frequency(*it);
    score += idf(word) * tf / (params_.k1 + tf);
  }
  return score;
}

RankedList InvertedIndex::retrieve(const Query& query, std::size_t k) const {
  if (k == 0) {
    throw Error("retrieval cutoff must be > 0");
  }
  RankedList result;
  result.cutoff = k;
  const auto words = query_words(query);
  if (words.empty()) {
    result.degenerate = true;
    return result;
  }

  std::vector<double> accumulators(doc_count(), 0.0);
  std::vector<DocNo> touched;
  for (const auto& word : words) {
    const auto* list = find_postings(word);
    if (list == nullptr) {
      continue;
    }
    const double w = idf(word);
    for (const auto& posting : *list) {
      const double tf = pseudo_frequency(posting);
      if (accumulators[posting.doc] == 0.0) {
        touched.push_back(posting.doc);
      }
      accumulators[posting.doc] += w * tf / (params_.k1 + tf);
    }
  }

  std::vector<DocNo> hits;
  hits.reserve(touched.size());
  for (DocNo doc : touched) {
    if (accumulators[doc] > 0.0) {
      hits.push_back(doc);
    }
  }
  // A doc whose first contribution was 0 can be pushed twice.
  std::sort(hits.begin(), hits.end());
  hits.erase(std::unique(hits.begin(), hits.end()), hits.end());

  auto better = [&](DocNo a, DocNo b) {
    if (accumulators[a] != accumulators[b]) {
      return accumulators[a] > accumulators[b];
    }
    return a < b;
  };
  const std::size_t take = std::min(k, hits.size());
  std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(take), hits.end(),
                    better);
  result.entries.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    result.entries.push_back({doc_ids_[hits[i]], accumulators[hits[i]]});
  }
  return result;
}

}  // namespace gesera
