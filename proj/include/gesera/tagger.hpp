#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gesera/text.hpp"

namespace gesera {

/// Maps a Penn Treebank label to the internal tag set:
///   NN* -> Noun, VB* -> Verb, JJ* -> Adjective, IN/TO -> Preposition,
///   CD -> Number, function-word tags (DT PDT PRP PRP$ WDT WP WP$ WRB CC MD
///   EX POS RP) -> Stopword, every other known label -> Other.
/// Unknown labels throw Error naming the label.
PosTag map_penn_tag(std::string_view label);

/// word -> tag table. File format: "word<TAB>TAG" per line, Penn labels,
/// '#' comments. The first entry for a word wins.
class Lexicon {
 public:
  static Lexicon bundled();
  static Lexicon load(const std::filesystem::path& path);
  static Lexicon parse(std::string_view text, std::string_view source);

  std::optional<PosTag> lookup(std::string_view word) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_map<std::string, PosTag> entries_;
};

/// One word per line, '#' comments.
class StopwordList {
 public:
  static StopwordList bundled();
  static StopwordList load(const std::filesystem::path& path);
  static StopwordList parse(std::string_view text);

  bool contains(std::string_view word) const;
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

/// Pluggable POS tagging backend.
class Tagger {
 public:
  virtual ~Tagger() = default;

  /// Exactly one TaggedToken per input token.
  virtual std::vector<TaggedToken> tag(std::span<const std::string> tokens) const = 0;

  /// Splits raw text the way this backend expects, then tags it.
  virtual std::vector<TaggedToken> tag_text(std::string_view text) const = 0;
};

/// Rule-based tagger. Decision order for a token:
///   1. number pattern -> Number
///   2. lexicon entry
///   3. stopword list -> Stopword
///   4. suffixes: -ly -> Other; -ing, -ed -> Verb;
///      -ous, -ful, -ive, -able, -ible, -less -> Adjective
///   5. Noun
class HeuristicTagger final : public Tagger {
 public:
  HeuristicTagger();
  HeuristicTagger(Lexicon lexicon, StopwordList stopwords);

  PosTag tag_word(std::string_view word) const;

  std::vector<TaggedToken> tag(std::span<const std::string> tokens) const override;
  std::vector<TaggedToken> tag_text(std::string_view text) const override;

 private:
  Lexicon lexicon_;
  StopwordList stopwords_;
};

/// Passthrough for text already tagged as whitespace-separated "token/TAG"
/// pairs (Penn labels). The surface is lowercased; the split is at the last
/// '/'.
class PretaggedTagger final : public Tagger {
 public:
  static TaggedToken parse_pair(std::string_view pair);

  std::vector<TaggedToken> tag(std::span<const std::string> tokens) const override;
  std::vector<TaggedToken> tag_text(std::string_view text) const override;
};

}  // namespace gesera
