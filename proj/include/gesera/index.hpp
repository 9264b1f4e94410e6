#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gesera/corpus.hpp"
#include "gesera/text.hpp"

namespace gesera {

enum class Field : std::size_t { Title = 0, Body = 1 };
inline constexpr std::size_t kFieldCount = 2;

struct IndexParams {
  double k1 = 1.2;
  double b = 0.75;
  std::array<double, kFieldCount> boosts{2.0, 1.0};  // title, body

  double boost(Field f) const { return boosts[static_cast<std::size_t>(f)]; }

  /// k1 > 0, 0 <= b <= 1, title boost >= 0, body boost > 0.
  void validate() const;

  bool operator==(const IndexParams&) const = default;
};

using DocNo = std::uint32_t;

struct Posting {
  DocNo doc = 0;
  std::array<std::uint32_t, kFieldCount> tf{};

  bool operator==(const Posting&) const = default;
};

struct RankedEntry {
  std::string doc_id;
  double score = 0.0;

  bool operator==(const RankedEntry&) const = default;
};

/// Top-k result list: scores non-increasing, ids distinct, size <= cutoff.
struct RankedList {
  std::vector<RankedEntry> entries;
  std::size_t cutoff = 0;
  bool degenerate = false;  // produced from an empty query

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
  const std::string& id(std::size_t rank) const { return entries[rank].doc_id; }
};

/// Unique words of a query, sorted. Phrase terms contribute each of their
/// words. This is the summation order used for scores.
std::vector<std::string> query_words(const Query& query);

/// BM25F over a title and a body field.
///
///   score(q, d) = sum_w idf(w) * tf'(w, d) / (k1 + tf'(w, d))
///   tf'(w, d)   = sum_f boost_f * tf(w, f, d) / (1 - b + b * len_f(d) / avglen_f)
///   idf(w)      = max(0, ln(1 + (N - df(w) + 0.5) / (df(w) + 0.5)))
///
/// Documents are numbered in ascending id order, so posting lists are sorted
/// by id and DocNo order breaks score ties. Stopwords are indexed; queries are
/// responsible for dropping them.
class InvertedIndex {
 public:
  static constexpr std::uint32_t kFormatVersion = 1;

  InvertedIndex() = default;

  /// Throws Error on an empty collection or invalid params.
  static InvertedIndex build(const DocumentCollection& collection,
                             const IndexParams& params, unsigned threads = 1);

  double bm25f_score(const Query& query, std::string_view doc_id) const;

  /// Top-k documents by score, ties by ascending doc id. Documents scoring 0
  /// are not returned. An empty query yields an empty, degenerate list.
  RankedList retrieve(const Query& query, std::size_t k) const;

  std::size_t doc_count() const { return doc_ids_.size(); }
  std::size_t vocabulary_size() const { return terms_.size(); }
  const IndexParams& params() const { return params_; }

  const std::string& doc_id(DocNo doc) const { return doc_ids_[doc]; }
  std::optional<DocNo> find_doc(std::string_view doc_id) const;

  std::uint32_t field_length(DocNo doc, Field f) const {
    return field_lengths_[doc][static_cast<std::size_t>(f)];
  }
  double average_field_length(Field f) const {
    return average_lengths_[static_cast<std::size_t>(f)];
  }

  std::span<const Posting> postings(std::string_view term) const;
  std::size_t document_frequency(std::string_view term) const {
    return postings(term).size();
  }
  double idf(std::string_view term) const;

  /// Per-field length-normalised, boosted pseudo-frequency.
  double pseudo_frequency(const Posting& posting) const;

  /// Single binary file: magic, format version, params, documents, postings.
  void save(const std::filesystem::path& path) const;

  /// Throws Error if the magic is wrong or the version differs from
  /// kFormatVersion (the message names both versions).
  static InvertedIndex load(const std::filesystem::path& path);

  bool operator==(const InvertedIndex&) const = default;

 private:
  const std::vector<Posting>* find_postings(std::string_view term) const;

  IndexParams params_;
  std::vector<std::string> doc_ids_;  // sorted
  std::vector<std::array<std::uint32_t, kFieldCount>> field_lengths_;
  std::array<double, kFieldCount> average_lengths_{};
  std::vector<std::string> terms_;  // sorted
  std::vector<std::vector<Posting>> postings_;

  friend struct IndexSerializer;
};

}  // namespace gesera
