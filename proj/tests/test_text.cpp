#include <doctest.h>

#include <random>

#include "gesera/corpus.hpp"
#include "gesera/tagger.hpp"
#include "gesera/text.hpp"
#include "oracles.hpp"
#include "properties.hpp"
#include "test_util.hpp"

using namespace gesera;

namespace {

using Tokens = std::vector<TaggedToken>;
using Terms = std::vector<std::string>;

TaggedToken tok(std::string s, PosTag t) { return {std::move(s), t}; }

/// Tag of `word` in the shipped lexicon file, read independently of Lexicon.
std::string shipped_lexicon_tag(const std::string& word) {
  std::istringstream in(testutil::read_file(std::filesystem::path(GESERA_DATA_DIR) / "lexicon.tsv"));
  for (std::string line; std::getline(in, line);) {
    auto tab = line.find('\t');
    if (tab != std::string::npos && line.substr(0, tab) == word) {
      return line.substr(tab + 1);
    }
  }
  return {};
}

}  // namespace

TEST_CASE("tokenize") {
  CHECK(tokenize("The cat sat.") == Terms{"the", "cat", "sat"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("state-of-the-art, 2009!") == Terms{"state-of-the-art", "2009"});
  CHECK(tokenize("don't -dash- end- 'quote'") == Terms{"don't", "dash", "end", "quote"});
  CHECK(tokenize("a--b") == Terms{"a", "b"});
  CHECK(tokenize("3.5 U.S.") == Terms{"3", "5", "u", "s"});
  CHECK(tokenize("Caf\xc3\xa9 NOIR") == Terms{"caf\xc3\xa9", "noir"});
}

TEST_CASE("is_number_token") {
  CHECK(is_number_token("2009"));
  CHECK(is_number_token("9-11"));
  CHECK_FALSE(is_number_token("2009-style"));
  CHECK_FALSE(is_number_token("abc"));
  CHECK_FALSE(is_number_token(""));
  CHECK_FALSE(is_number_token("-1"));
}

TEST_CASE("heuristic tagger") {
  const HeuristicTagger tagger;

  SUBCASE("lexicon words follow the shipped lexicon") {
    for (const auto* word : {"dog", "ran", "fast", "in", "of", "the"}) {
      INFO(word);
      const auto label = shipped_lexicon_tag(word);
      REQUIRE_FALSE(label.empty());
      CHECK(tagger.tag_word(word) == map_penn_tag(label));
    }
    Terms dog{"dog"};
    CHECK(tagger.tag(dog) == Tokens{tok("dog", PosTag::Noun)});
  }
  SUBCASE("fallbacks") {
    CHECK(tagger.tag_word("2009") == PosTag::Number);
    CHECK(tagger.tag_word("however") == PosTag::Stopword);
    CHECK(tagger.tag_word("swiftly") == PosTag::Other);
    CHECK(tagger.tag_word("jumping") == PosTag::Verb);
    CHECK(tagger.tag_word("painted") == PosTag::Verb);
    CHECK(tagger.tag_word("famous") == PosTag::Adjective);
    CHECK(tagger.tag_word("careful") == PosTag::Adjective);
    CHECK(tagger.tag_word("zorblax") == PosTag::Noun);
    CHECK(tagger.tag_word("2009-style") == PosTag::Noun);
    CHECK(tagger.tag_word("king") == PosTag::Noun);
  }
  SUBCASE("empty input") { CHECK(tagger.tag(Terms{}).empty()); }
  SUBCASE("custom stopwords override the bundled list") {
    HeuristicTagger custom(Lexicon::parse("", "none"), StopwordList::parse("# c\nzorblax\n"));
    CHECK(custom.tag_word("zorblax") == PosTag::Stopword);
    CHECK(custom.tag_word("however") == PosTag::Noun);
  }
}

TEST_CASE("Penn tag mapping") {
  CHECK(map_penn_tag("NNS") == PosTag::Noun);
  CHECK(map_penn_tag("VBD") == PosTag::Verb);
  CHECK(map_penn_tag("JJR") == PosTag::Adjective);
  CHECK(map_penn_tag("IN") == PosTag::Preposition);
  CHECK(map_penn_tag("TO") == PosTag::Preposition);
  CHECK(map_penn_tag("CD") == PosTag::Number);
  CHECK(map_penn_tag("DT") == PosTag::Stopword);
  CHECK(map_penn_tag("PRP$") == PosTag::Stopword);
  CHECK(map_penn_tag("RB") == PosTag::Other);
  CHECK(map_penn_tag(".") == PosTag::Other);
  CHECK_THROWS_WITH_AS(map_penn_tag("NNX"), "unknown POS tag label 'NNX'", Error);
}

TEST_CASE("pre-tagged passthrough") {
  const PretaggedTagger tagger;
  CHECK(PretaggedTagger::parse_pair("run/VB") == tok("run", PosTag::Verb));
  CHECK(PretaggedTagger::parse_pair("and/or/CC") == tok("and/or", PosTag::Stopword));
  CHECK(tagger.tag_text("The/DT Dog/NN ran/VBD ./.") ==
        Tokens{tok("the", PosTag::Stopword), tok("dog", PosTag::Noun), tok("ran", PosTag::Verb),
               tok(".", PosTag::Other)});
  CHECK_THROWS_WITH_AS(tagger.tag_text("dog/FOO"), "unknown POS tag label 'FOO'", Error);
  CHECK_THROWS_AS(tagger.tag_text("dog"), Error);
}

TEST_CASE("lexicon file errors carry the line number") {
  CHECK_THROWS_WITH_AS(Lexicon::parse("dog\tNN\ncat NN\n", "lex"),
                       "lex:2: expected word<TAB>TAG", Error);
  CHECK_THROWS_WITH_AS(Lexicon::parse("dog\tZZ\n", "lex"),
                       "lex:1: unknown POS tag label 'ZZ'", Error);
}

TEST_CASE("reformulate_raw") {
  CHECK(reformulate_raw(Tokens{tok("the", PosTag::Stopword), tok("cat", PosTag::Noun),
                               tok("7", PosTag::Number)})
            .terms == Terms{"cat"});
  CHECK(reformulate_raw(Tokens{tok("the", PosTag::Stopword), tok("of", PosTag::Stopword)})
            .empty());
  CHECK(reformulate_raw(Tokens{tok("fast", PosTag::Adjective), tok("cars", PosTag::Noun)})
            .terms == Terms{"fast", "cars"});
}

TEST_CASE("reformulate_np") {
  CHECK(reformulate_np(Tokens{tok("big", PosTag::Adjective), tok("red", PosTag::Adjective),
                              tok("dog", PosTag::Noun), tok("ran", PosTag::Verb)})
            .terms == Terms{"big red dog"});
  CHECK(reformulate_np(Tokens{tok("ran", PosTag::Verb), tok("big", PosTag::Adjective)}).empty());
  CHECK(reformulate_np(Tokens{tok("dog", PosTag::Noun), tok("and", PosTag::Stopword),
                              tok("cat", PosTag::Noun)})
            .terms == Terms{"dog", "cat"});
  // Trailing adjectives after the last noun are not part of the chunk.
  CHECK(reformulate_np(Tokens{tok("dog", PosTag::Noun), tok("house", PosTag::Noun),
                              tok("red", PosTag::Adjective), tok("ran", PosTag::Verb)})
            .terms == Terms{"dog house"});
}

TEST_CASE("reformulate_kw") {
  auto n = [](const char* s) { return tok(s, PosTag::Noun); };
  CHECK(reformulate_kw(Tokens{n("a"), n("b"), n("c")}).terms ==
        Terms{"a", "b", "c", "a b", "b c", "a b c"});
  CHECK(reformulate_kw(Tokens{n("x")}).terms == Terms{"x"});
  CHECK(reformulate_kw(Tokens{}).empty());
  // Removed tokens split n-grams; repeats are dropped.
  CHECK(reformulate_kw(Tokens{n("a"), n("b"), tok("the", PosTag::Stopword), n("a"), n("b")})
            .terms == Terms{"a", "b", "a b"});
}

TEST_CASE("reformulate_gesera") {
  CHECK(reformulate_gesera(Tokens{tok("the", PosTag::Stopword), tok("dog", PosTag::Noun),
                                  tok("ran", PosTag::Verb), tok("quickly", PosTag::Other)})
            .terms == Terms{"dog", "ran"});
  CHECK(reformulate_gesera(Tokens{tok("in", PosTag::Preposition), tok("of", PosTag::Preposition)})
            .empty());
  CHECK(reformulate_gesera(Tokens{tok("green", PosTag::Adjective), tok("ideas", PosTag::Noun),
                                  tok("sleep", PosTag::Verb)})
            .terms == Terms{"green", "ideas", "sleep"});
}

TEST_CASE("reformulation properties over random token sequences") {
  std::mt19937_64 rng(2024);
  for (int iter = 0; iter < 1000; ++iter) {
    CHECK(props::check_reformulation(props::random_tokens(rng)) == "");
  }
}

TEST_CASE("pos_distribution") {
  const HeuristicTagger tagger;

  SUBCASE("hand-counted two-word corpus") {
    DocumentCollection c({{"d", "", "dog ran"}}, "c");
    const auto dist = pos_distribution(c, tagger);
    CHECK(dist[PosClass::Noun] == doctest::Approx(50.0));
    CHECK(dist[PosClass::Verb] == doctest::Approx(50.0));
    CHECK(dist[PosClass::Adjective] == 0.0);
    CHECK(dist[PosClass::Preposition] == 0.0);
    CHECK(dist[PosClass::Others] == 0.0);
  }
  SUBCASE("prepositions only") {
    DocumentCollection c({{"d", "", "in of under"}, {"e", "", "with"}}, "c");
    CHECK(pos_distribution(c, tagger)[PosClass::Preposition] == 100.0);
  }
  SUBCASE("stopwords, numbers and adverbs fold into Others") {
    DocumentCollection c({{"d", "", "the dog 42 swiftly"}}, "c");
    const auto dist = pos_distribution(c, tagger);
    CHECK(dist[PosClass::Others] == doctest::Approx(75.0));
    CHECK(dist.token_count == 4);
  }
  SUBCASE("percentages sum to 100 and are independent of threads") {
    std::vector<Document> docs;
    std::mt19937_64 rng(5);
    const char* vocab[] = {"dog", "ran", "fast", "in", "the", "42", "walked", "famous", "zorb"};
    for (int i = 0; i < 200; ++i) {
      std::string body;
      for (int w = 0; w < 1 + static_cast<int>(rng() % 20); ++w) {
        body += std::string(vocab[rng() % 9]) + " ";
      }
      docs.push_back({"d" + std::to_string(i), "", body});
    }
    DocumentCollection c(std::move(docs), "rand");
    const auto one = pos_distribution(c, tagger, 1);
    const auto four = pos_distribution(c, tagger, 4);
    double sum = 0;
    for (double p : one.percentages) {
      CHECK(p >= 0.0);
      sum += p;
    }
    CHECK(std::fabs(sum - 100.0) <= 1e-9);
    CHECK(one.percentages == four.percentages);
  }
  SUBCASE("empty corpus is an error") {
    CHECK_THROWS_AS(pos_distribution(DocumentCollection{}, tagger), Error);
  }
}
