#include "gesera/text.hpp"

#include <algorithm>
#include <unordered_set>

#include <fmt/format.h>

#include "gesera/corpus.hpp"
#include "gesera/parallel.hpp"
#include "gesera/tagger.hpp"

namespace gesera {

namespace {

bool is_word_byte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         c >= 0x80;
}

bool is_joiner(char c) { return c == '-' || c == '\''; }

char to_lower_ascii(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

bool drops_in_raw(PosTag tag) { return tag == PosTag::Stopword || tag == PosTag::Number; }

std::string join(std::span<const TaggedToken> tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) {
      out.push_back(' ');
    }
    out += t.surface;
  }
  return out;
}

}  // namespace

std::string_view to_string(PosTag tag) {
  switch (tag) {
    case PosTag::Noun: return "Noun";
    case PosTag::Verb: return "Verb";
    case PosTag::Adjective: return "Adjective";
    case PosTag::Preposition: return "Preposition";
    case PosTag::Number: return "Number";
    case PosTag::Stopword: return "Stopword";
    case PosTag::Other: return "Other";
  }
  return "Other";
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  const std::size_t n = text.size();
  for (std::size_t i = 0; i < n; ++i) {
    const char c = text[i];
    if (is_word_byte(static_cast<unsigned char>(c))) {
      current.push_back(to_lower_ascii(c));
    } else if (is_joiner(c) && !current.empty() && i + 1 < n &&
               is_word_byte(static_cast<unsigned char>(text[i + 1]))) {
      current.push_back(c);
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) {
    tokens.push_back(std::move(current));
  }
  return tokens;
}

bool is_number_token(std::string_view token) {
  if (token.empty()) {
    return false;
  }
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!digit(token.front()) || !digit(token.back())) {
    return false;
  }
  for (std::size_t i = 0; i < token.size(); ++i) {
    if (digit(token[i])) {
      continue;
    }
    if (!is_joiner(token[i]) || !digit(token[i + 1])) {
      return false;
    }
  }
  return true;
}

std::string_view to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::Raw: return "raw";
    case Strategy::NounPhrase: return "np";
    case Strategy::Keyword: return "kw";
    case Strategy::GeSeraPos: return "gesera";
  }
  return "raw";
}

Strategy parse_strategy(std::string_view name) {
  std::string lower;
  for (char c : name) {
    lower.push_back(to_lower_ascii(c));
  }
  if (lower == "raw") return Strategy::Raw;
  if (lower == "np") return Strategy::NounPhrase;
  if (lower == "kw") return Strategy::Keyword;
  if (lower == "gesera" || lower == "pos") return Strategy::GeSeraPos;
  throw Error(fmt::format("unknown strategy '{}' (expected raw, np, kw or gesera)", name));
}

Query reformulate_raw(std::span<const TaggedToken> tokens) {
  Query q{.terms = {}, .strategy = Strategy::Raw};
  for (const auto& t : tokens) {
    if (!drops_in_raw(t.tag)) {
      q.terms.push_back(t.surface);
    }
  }
  return q;
}

Query reformulate_np(std::span<const TaggedToken> tokens) {
  Query q{.terms = {}, .strategy = Strategy::NounPhrase};
  auto in_chunk = [](PosTag tag) { return tag == PosTag::Adjective || tag == PosTag::Noun; };
  std::size_t i = 0;
  while (i < tokens.size()) {
    if (!in_chunk(tokens[i].tag)) {
      ++i;
      continue;
    }
    std::size_t run_end = i;
    std::size_t last_noun = tokens.size();
    while (run_end < tokens.size() && in_chunk(tokens[run_end].tag)) {
      if (tokens[run_end].tag == PosTag::Noun) {
        last_noun = run_end;
      }
      ++run_end;
    }
    if (last_noun != tokens.size()) {
      q.terms.push_back(join(tokens.subspan(i, last_noun - i + 1)));
    }
    i = run_end;
  }
  return q;
}

Query reformulate_kw(std::span<const TaggedToken> tokens) {
  Query q{.terms = {}, .strategy = Strategy::Keyword};
  // Segments of consecutive kept tokens.
  std::vector<std::vector<std::string_view>> segments(1);
  for (const auto& t : tokens) {
    if (drops_in_raw(t.tag)) {
      if (!segments.back().empty()) {
        segments.emplace_back();
      }
    } else {
      segments.back().push_back(t.surface);
    }
  }
  std::unordered_set<std::string> seen;
  for (std::size_t n = 1; n <= 3; ++n) {
    for (const auto& seg : segments) {
      for (std::size_t start = 0; start + n <= seg.size(); ++start) {
        std::string gram(seg[start]);
        for (std::size_t k = 1; k < n; ++k) {
          gram.push_back(' ');
          gram += seg[start + k];
        }
        if (seen.insert(gram).second) {
          q.terms.push_back(std::move(gram));
        }
      }
    }
  }
  return q;
}

Query reformulate_gesera(std::span<const TaggedToken> tokens) {
  Query q{.terms = {}, .strategy = Strategy::GeSeraPos};
  for (const auto& t : tokens) {
    if (t.tag == PosTag::Noun || t.tag == PosTag::Verb || t.tag == PosTag::Adjective) {
      q.terms.push_back(t.surface);
    }
  }
  return q;
}

Query reformulate(std::span<const TaggedToken> tokens, Strategy strategy) {
  switch (strategy) {
    case Strategy::Raw: return reformulate_raw(tokens);
    case Strategy::NounPhrase: return reformulate_np(tokens);
    case Strategy::Keyword: return reformulate_kw(tokens);
    case Strategy::GeSeraPos: return reformulate_gesera(tokens);
  }
  throw Error("unknown strategy");
}

std::string_view to_string(PosClass cls) {
  switch (cls) {
    case PosClass::Noun: return "Noun";
    case PosClass::Verb: return "Verb";
    case PosClass::Adjective: return "Adjective";
    case PosClass::Preposition: return "Preposition";
    case PosClass::Others: return "Others";
  }
  return "Others";
}

PosClass pos_class(PosTag tag) {
  switch (tag) {
    case PosTag::Noun: return PosClass::Noun;
    case PosTag::Verb: return PosClass::Verb;
    case PosTag::Adjective: return PosClass::Adjective;
    case PosTag::Preposition: return PosClass::Preposition;
    default: return PosClass::Others;
  }
}

PosDistribution pos_distribution(const DocumentCollection& collection, const Tagger& tagger,
                                 unsigned threads) {
  if (collection.empty()) {
    throw Error(fmt::format("cannot compute a POS distribution of empty corpus {}",
                            collection.source_label()));
  }
  std::vector<std::array<std::size_t, kPosClassCount>> per_doc(collection.size());
  parallel_for(collection.size(), threads, [&](std::size_t i) {
    auto& counts = per_doc[i];
    counts.fill(0);
    for (const auto& token : tagger.tag_text(collection[i].body)) {
      ++counts[static_cast<std::size_t>(pos_class(token.tag))];
    }
  });

  std::array<std::size_t, kPosClassCount> totals{};
  for (const auto& counts : per_doc) {
    for (std::size_t c = 0; c < kPosClassCount; ++c) {
      totals[c] += counts[c];
    }
  }
  PosDistribution dist;
  for (auto count : totals) {
    dist.token_count += count;
  }
  if (dist.token_count == 0) {
    throw Error(fmt::format("corpus {} contains no tokens", collection.source_label()));
  }
  for (std::size_t c = 0; c < kPosClassCount; ++c) {
    dist.percentages[c] =
        100.0 * static_cast<double>(totals[c]) / static_cast<double>(dist.token_count);
  }
  return dist;
}

}  // namespace gesera
