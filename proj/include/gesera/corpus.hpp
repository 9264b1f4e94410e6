#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gesera/error.hpp"

namespace gesera {

struct Document {
  std::string id;
  std::string title;
  std::string body;

  bool operator==(const Document&) const = default;
};

/// An immutable, load-ordered set of documents with unique ids and
/// non-blank bodies. Safe to share across threads once constructed.
class DocumentCollection {
 public:
  DocumentCollection() = default;

  /// Throws Error on a duplicate id or a blank body.
  DocumentCollection(std::vector<Document> documents, std::string source_label);

  const std::vector<Document>& documents() const { return documents_; }
  const std::string& source_label() const { return source_label_; }
  std::size_t size() const { return documents_.size(); }
  bool empty() const { return documents_.empty(); }

  const Document& operator[](std::size_t i) const { return documents_[i]; }
  auto begin() const { return documents_.begin(); }
  auto end() const { return documents_.end(); }

  const Document* find(std::string_view id) const;

 private:
  std::vector<Document> documents_;
  std::string source_label_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

enum class CorpusFormat { Jsonl, DirOfText };

/// Accepts "jsonl" or "dir" / "dir_of_text".
CorpusFormat parse_corpus_format(std::string_view name);

/// Loads a corpus in file order (jsonl) or filename order (directory).
///
/// jsonl: one object per line with string fields `id`, `body` and an
/// optional `title`. Blank lines are skipped. Errors name the 1-based line.
///
/// dir_of_text: every `*.txt` file is a document whose id is the filename
/// stem. The first line is the title when a blank line follows it.
DocumentCollection load_corpus(const std::filesystem::path& path,
                               CorpusFormat format,
                               Warnings* warnings = nullptr);

/// Writes the collection as jsonl; load_corpus reads it back unchanged.
void write_corpus(const DocumentCollection& collection,
                  const std::filesystem::path& path);

struct SubsetSpec {
  std::size_t size = 0;
  std::uint64_t seed = 0;
};

/// Uniform sample without replacement.
///
/// The generator is std::mt19937_64 seeded with spec.seed; bounded draws use
/// Lemire's multiply-and-reject method so results do not depend on the
/// standard library's distribution implementation. The first spec.size steps
/// of a Fisher-Yates shuffle over the collection order give the sample, in
/// draw order.
DocumentCollection sample_subset(const DocumentCollection& collection,
                                 const SubsetSpec& spec);

/// Unbiased integer in [0, bound) from a 64-bit engine; bound must be > 0.
template <typename Engine>
std::uint64_t bounded_draw(Engine& engine, std::uint64_t bound) {
  using wide = unsigned __int128;
  std::uint64_t x = engine();
  wide m = static_cast<wide>(x) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      x = engine();
      m = static_cast<wide>(x) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

/// SplitMix64 finalizer; used to derive independent seeds.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt);

}  // namespace gesera
