#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gesera/error.hpp"

namespace gesera {

class DocumentCollection;
class Tagger;

enum class PosTag { Noun, Verb, Adjective, Preposition, Number, Stopword, Other };

std::string_view to_string(PosTag tag);

struct TaggedToken {
  std::string surface;
  PosTag tag = PosTag::Other;

  bool operator==(const TaggedToken&) const = default;
};

/// Lowercased word tokens. A token is a maximal run of ASCII alphanumerics
/// (bytes >= 0x80 count as word characters) in which single hyphens or
/// apostrophes may appear between word characters.
std::vector<std::string> tokenize(std::string_view text);

/// Digits, optionally separated by single '-' or '\'' (e.g. "2009", "9-11").
/// Mixed tokens such as "2009-style" are not numbers.
bool is_number_token(std::string_view token);

enum class Strategy { Raw, NounPhrase, Keyword, GeSeraPos };

std::string_view to_string(Strategy strategy);

/// Accepts raw, np, kw, gesera (case-insensitive).
Strategy parse_strategy(std::string_view name);

struct Query {
  std::vector<std::string> terms;  // a term may be a space-joined phrase
  Strategy strategy = Strategy::Raw;

  bool empty() const { return terms.empty(); }
};

// Query reformulation. Every strategy only drops tokens; it never invents
// words or reorders them within a term.

/// Drops Stopword and Number tokens.
Query reformulate_raw(std::span<const TaggedToken> tokens);

/// Maximal chunks matching (Adjective | Noun)* Noun, one phrase per chunk.
/// A trailing run of adjectives after the last noun is not part of a chunk.
Query reformulate_np(std::span<const TaggedToken> tokens);

/// Unigrams, bigrams and trigrams over the Raw-filtered sequence. N-grams do
/// not bridge a removed token. All unigrams come first, then bigrams, then
/// trigrams, each in text order; repeats keep their first occurrence.
Query reformulate_kw(std::span<const TaggedToken> tokens);

/// Keeps Noun, Verb and Adjective tokens.
Query reformulate_gesera(std::span<const TaggedToken> tokens);

Query reformulate(std::span<const TaggedToken> tokens, Strategy strategy);

enum class PosClass { Noun, Verb, Adjective, Preposition, Others };
inline constexpr std::size_t kPosClassCount = 5;

std::string_view to_string(PosClass cls);
PosClass pos_class(PosTag tag);

struct PosDistribution {
  std::array<double, kPosClassCount> percentages{};
  std::size_t token_count = 0;

  double operator[](PosClass cls) const {
    return percentages[static_cast<std::size_t>(cls)];
  }
};

/// Percentage of each coarse class over all body tokens of the collection.
/// Throws Error for an empty collection or one whose bodies yield no tokens.
PosDistribution pos_distribution(const DocumentCollection& collection,
                                 const Tagger& tagger, unsigned threads = 1);

}  // namespace gesera
