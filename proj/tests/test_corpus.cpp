#include <doctest.h>

#include <map>
#include <random>

#include <set>

#include "gesera/corpus.hpp"
#include "test_util.hpp"

using namespace gesera;

namespace {

DocumentCollection numbered(std::size_t n) {
  std::vector<Document> docs;
  for (std::size_t i = 0; i < n; ++i) {
    docs.push_back({"d" + std::to_string(i), "", "body " + std::to_string(i)});
  }
  return DocumentCollection(std::move(docs), "numbered");
}

std::vector<std::string> ids_of(const DocumentCollection& c) {
  std::vector<std::string> ids;
  for (const auto& d : c) {
    ids.push_back(d.id);
  }
  return ids;
}

}  // namespace

TEST_CASE("load_corpus reads jsonl in file order") {
  testutil::TempDir dir;
  testutil::write_file(dir / "c.jsonl",
                       R"({"id":"d1","title":"One","body":"first doc"})"
                       "\n"
                       R"({"id":"d2","body":"second doc"})"
                       "\n\n"
                       R"({"id":"d3","title":"Three","body":"third doc"})"
                       "\n");
  auto c = load_corpus(dir / "c.jsonl", CorpusFormat::Jsonl);
  REQUIRE(c.size() == 3);
  CHECK(ids_of(c) == std::vector<std::string>{"d1", "d2", "d3"});
  CHECK(c[0].title == "One");
  CHECK(c[1].title.empty());
  CHECK(c.find("d3")->body == "third doc");
  CHECK(c.find("nope") == nullptr);
}

TEST_CASE("load_corpus on an empty file warns and returns nothing") {
  testutil::TempDir dir;
  testutil::write_file(dir / "empty.jsonl", "");
  Warnings warnings;
  auto c = load_corpus(dir / "empty.jsonl", CorpusFormat::Jsonl, &warnings);
  CHECK(c.empty());
  CHECK(warnings.size() == 1);
}

TEST_CASE("load_corpus errors name the line or the id") {
  testutil::TempDir dir;
  testutil::write_file(dir / "missing.jsonl",
                       R"({"id":"d1","body":"ok"})"
                       "\n"
                       R"({"id":"d2","title":"t"})"
                       "\n");
  CHECK_THROWS_WITH_AS(load_corpus(dir / "missing.jsonl", CorpusFormat::Jsonl),
                       "line 2: missing field body", Error);

  testutil::write_file(dir / "bad.jsonl", "{\"id\": \n");
  CHECK_THROWS_WITH_AS(load_corpus(dir / "bad.jsonl", CorpusFormat::Jsonl),
                       doctest::Contains("line 1: malformed record"), Error);

  testutil::write_file(dir / "dup.jsonl",
                       R"({"id":"d1","body":"a"})"
                       "\n"
                       R"({"id":"d1","body":"b"})"
                       "\n");
  CHECK_THROWS_WITH_AS(load_corpus(dir / "dup.jsonl", CorpusFormat::Jsonl),
                       "duplicate document id d1", Error);

  testutil::write_file(dir / "blank.jsonl", R"({"id":"d1","body":"   "})"
                                            "\n");
  CHECK_THROWS_WITH_AS(load_corpus(dir / "blank.jsonl", CorpusFormat::Jsonl),
                       "line 1: empty body", Error);
}

TEST_CASE("load_corpus reads a directory of text files") {
  testutil::TempDir dir;
  testutil::write_file(dir / "docs" / "b.txt", "A Title\n\nBody text here.\n");
  testutil::write_file(dir / "docs" / "a.txt", "no title line\nstill body\n");
  testutil::write_file(dir / "docs" / "ignored.md", "not a document");
  auto c = load_corpus(dir / "docs", CorpusFormat::DirOfText);
  REQUIRE(c.size() == 2);
  CHECK(c[0].id == "a");
  CHECK(c[0].title.empty());
  CHECK(c[0].body == "no title line\nstill body\n");
  CHECK(c[1].id == "b");
  CHECK(c[1].title == "A Title");
  CHECK(c[1].body == "Body text here.\n");
}

TEST_CASE("write_corpus then load_corpus is the identity") {
  testutil::TempDir dir;
  DocumentCollection c({{"x", "T \"quoted\"", "line one\nline two"},
                        {"y", "", "caf\xc3\xa9 au lait"},
                        {"z", "title", "tab\there"}},
                       "mem");
  write_corpus(c, dir / "rt.jsonl");
  auto back = load_corpus(dir / "rt.jsonl", CorpusFormat::Jsonl);
  CHECK(back.documents() == c.documents());
}

TEST_CASE("sample_subset") {
  const auto c = numbered(100);

  SUBCASE("full-size sample is a permutation") {
    const auto five = numbered(5);
    auto s = sample_subset(five, {5, 123});
    auto got = ids_of(s);
    std::sort(got.begin(), got.end());
    CHECK(got == ids_of(five));
  }
  SUBCASE("same seed gives the same subset in the same order") {
    CHECK(ids_of(sample_subset(c, {10, 42})) == ids_of(sample_subset(c, {10, 42})));
  }
  SUBCASE("different seeds give different subsets") {
    CHECK(ids_of(sample_subset(c, {10, 1})) != ids_of(sample_subset(c, {10, 2})));
  }
  SUBCASE("ids are distinct") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      auto ids = ids_of(sample_subset(c, {37, seed}));
      CHECK(std::set<std::string>(ids.begin(), ids.end()).size() == 37);
    }
  }
  SUBCASE("oversized request names both sizes") {
    CHECK_THROWS_WITH_AS(sample_subset(c, {101, 0}),
                         "subset size 101 exceeds collection size 100", Error);
  }
}

TEST_CASE("sampling is roughly uniform") {
  // Each of 20 docs should be picked about 5/20 of the time.
  const auto c = numbered(20);
  std::map<std::string, int> hits;
  const int trials = 4000;
  for (int t = 0; t < trials; ++t) {
    for (const auto& d : sample_subset(c, {5, static_cast<std::uint64_t>(t)})) {
      ++hits[d.id];
    }
  }
  for (const auto& [id, n] : hits) {
    CHECK(std::abs(n - 1000) < 150);
  }
}

TEST_CASE("bounded_draw stays in range") {
  std::mt19937_64 rng(9);
  for (std::uint64_t bound : {1ULL, 2ULL, 3ULL, 7ULL, 1000ULL, (1ULL << 63) + 5}) {
    for (int i = 0; i < 200; ++i) {
      CHECK(bounded_draw(rng, bound) < bound);
    }
  }
}

TEST_CASE("DocumentCollection rejects blank bodies") {
  CHECK_THROWS_AS(DocumentCollection({{"a", "t", " \n"}}, "x"), Error);
}
