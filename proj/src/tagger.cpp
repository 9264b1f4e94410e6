#include "gesera/tagger.hpp"

#include <array>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace gesera {

namespace detail {
extern const std::string_view kBundledLexicon;
extern const std::string_view kBundledStopwords;
}  // namespace detail

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') {
      c = static_cast<char>(c - 'A' + 'a');
    }
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(fmt::format("cannot open {}", path.string()));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    auto end = text.find('\n');
    std::string_view line = text.substr(0, end);
    ++line_no;
    fn(line, line_no);
    if (end == std::string_view::npos) {
      break;
    }
    text.remove_prefix(end + 1);
  }
}

constexpr std::array kStopwordTags{"DT", "PDT", "PRP", "PRP$", "WDT", "WP", "WP$",
                                   "WRB", "CC",  "MD",  "EX",   "POS", "RP"};
constexpr std::array kOtherTags{"RB",  "RBR", "RBS",   "FW",    "LS",   "SYM", "UH",
                                ".",   ",",   ":",     "``",    "''",   "\"",  "#",
                                "$",   "(",   ")",     "-LRB-", "-RRB-", "HYPH", "NFP",
                                "ADD", "AFX", "-NONE-", "XX",   "GW"};

}  // namespace

PosTag map_penn_tag(std::string_view label) {
  if (label.starts_with("NN")) {
    if (label == "NN" || label == "NNS" || label == "NNP" || label == "NNPS") {
      return PosTag::Noun;
    }
  } else if (label.starts_with("VB")) {
    if (label == "VB" || label == "VBD" || label == "VBG" || label == "VBN" ||
        label == "VBP" || label == "VBZ") {
      return PosTag::Verb;
    }
  } else if (label == "JJ" || label == "JJR" || label == "JJS") {
    return PosTag::Adjective;
  } else if (label == "IN" || label == "TO") {
    return PosTag::Preposition;
  } else if (label == "CD") {
    return PosTag::Number;
  }
  for (const char* tag : kStopwordTags) {
    if (label == tag) {
      return PosTag::Stopword;
    }
  }
  for (const char* tag : kOtherTags) {
    if (label == tag) {
      return PosTag::Other;
    }
  }
  throw Error(fmt::format("unknown POS tag label '{}'", label));
}

Lexicon Lexicon::bundled() { return parse(detail::kBundledLexicon, "bundled lexicon"); }

Lexicon Lexicon::load(const std::filesystem::path& path) {
  return parse(read_file(path), path.string());
}

Lexicon Lexicon::parse(std::string_view text, std::string_view source) {
  Lexicon lex;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    line = trim(line);
    if (line.empty() || line.front() == '#') {
      return;
    }
    auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw Error(fmt::format("{}:{}: expected word<TAB>TAG", source, line_no));
    }
    auto word = lowercase(trim(line.substr(0, tab)));
    auto label = trim(line.substr(tab + 1));
    if (word.empty()) {
      throw Error(fmt::format("{}:{}: empty word", source, line_no));
    }
    PosTag tag;
    try {
      tag = map_penn_tag(label);
    } catch (const Error& e) {
      throw Error(fmt::format("{}:{}: {}", source, line_no, e.what()));
    }
    lex.entries_.emplace(std::move(word), tag);
  });
  return lex;
}

std::optional<PosTag> Lexicon::lookup(std::string_view word) const {
  auto it = entries_.find(std::string(word));
  if (it == entries_.end()) {
    return std::nullopt;
  }
  return it->second;
}

StopwordList StopwordList::bundled() { return parse(detail::kBundledStopwords); }

StopwordList StopwordList::load(const std::filesystem::path& path) {
  return parse(read_file(path));
}

StopwordList StopwordList::parse(std::string_view text) {
  StopwordList list;
  for_each_line(text, [&](std::string_view line, std::size_t) {
    line = trim(line);
    if (line.empty() || line.front() == '#') {
      return;
    }
    list.words_.insert(lowercase(line));
  });
  return list;
}

bool StopwordList::contains(std::string_view word) const {
  return words_.count(std::string(word)) != 0;
}

HeuristicTagger::HeuristicTagger()
    : HeuristicTagger(Lexicon::bundled(), StopwordList::bundled()) {}

HeuristicTagger::HeuristicTagger(Lexicon lexicon, StopwordList stopwords)
    : lexicon_(std::move(lexicon)), stopwords_(std::move(stopwords)) {}

PosTag HeuristicTagger::tag_word(std::string_view word) const {
  if (is_number_token(word)) {
    return PosTag::Number;
  }
  if (auto tag = lexicon_.lookup(word)) {
    return *tag;
  }
  if (stopwords_.contains(word)) {
    return PosTag::Stopword;
  }
  struct SuffixRule {
    std::string_view suffix;
    PosTag tag;
  };
  static constexpr std::array kRules{
      SuffixRule{"ly", PosTag::Other},        SuffixRule{"ing", PosTag::Verb},
      SuffixRule{"ed", PosTag::Verb},         SuffixRule{"ous", PosTag::Adjective},
      SuffixRule{"ful", PosTag::Adjective},   SuffixRule{"ive", PosTag::Adjective},
      SuffixRule{"able", PosTag::Adjective},  SuffixRule{"ible", PosTag::Adjective},
      SuffixRule{"less", PosTag::Adjective},
  };
  for (const auto& rule : kRules) {
    // Short words such as "bed" or "king" are left to the default.
    if (word.size() >= rule.suffix.size() + 3 && word.ends_with(rule.suffix)) {
      return rule.tag;
    }
  }
  return PosTag::Noun;
}

std::vector<TaggedToken> HeuristicTagger::tag(std::span<const std::string> tokens) const {
  std::vector<TaggedToken> out;
  out.reserve(tokens.size());
  for (const auto& token : tokens) {
    out.push_back({token, tag_word(token)});
  }
  return out;
}

std::vector<TaggedToken> HeuristicTagger::tag_text(std::string_view text) const {
  auto tokens = tokenize(text);
  return tag(tokens);
}

TaggedToken PretaggedTagger::parse_pair(std::string_view pair) {
  auto slash = pair.rfind('/');
  if (slash == std::string_view::npos || slash == 0 || slash + 1 == pair.size()) {
    throw Error(fmt::format("malformed pre-tagged token '{}' (expected token/TAG)", pair));
  }
  return {lowercase(pair.substr(0, slash)), map_penn_tag(pair.substr(slash + 1))};
}

std::vector<TaggedToken> PretaggedTagger::tag(std::span<const std::string> tokens) const {
  std::vector<TaggedToken> out;
  out.reserve(tokens.size());
  for (const auto& token : tokens) {
    out.push_back(parse_pair(token));
  }
  return out;
}

std::vector<TaggedToken> PretaggedTagger::tag_text(std::string_view text) const {
  std::vector<std::string> pairs;
  std::istringstream in{std::string(text)};
  std::string pair;
  while (in >> pair) {
    pairs.push_back(std::move(pair));
  }
  return tag(pairs);
}

}  // namespace gesera
