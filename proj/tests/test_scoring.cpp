#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "gesera/scoring.hpp"
#include "gesera/synthetic.hpp"
#include "oracles.hpp"

using namespace gesera;

namespace {

RankedList list_of(std::vector<std::string> ids, std::size_t cutoff) {
  RankedList list;
  list.cutoff = cutoff;
  double score = static_cast<double>(ids.size());
  for (auto& id : ids) {
    list.entries.push_back({std::move(id), score});
    score -= 1.0;
  }
  return list;
}

std::vector<std::string> random_ids(std::mt19937_64& rng, std::size_t max_len, std::size_t pool) {
  std::vector<std::string> all;
  for (std::size_t i = 0; i < pool; ++i) {
    all.push_back("d" + std::to_string(i));
  }
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(std::min(pool, rng() % (max_len + 1)));
  return all;
}

SummaryRecord cand(std::string topic, std::string system, std::string text) {
  return {std::move(topic), std::move(system), SummaryKind::Candidate, std::move(text)};
}

SummaryRecord ref(std::string topic, std::string system, std::string text) {
  return {std::move(topic), std::move(system), SummaryKind::Reference, std::move(text)};
}

DocumentCollection fixture_corpus() {
  return DocumentCollection(
      {
          {"n01", "Flood warning", "heavy rain caused a river flood in the valley"},
          {"n02", "", "the river flood damaged farms and roads"},
          {"n03", "Election", "voters chose a new mayor in the city election"},
          {"n04", "", "the mayor promised new roads for the city"},
          {"n05", "Storm", "a storm brought heavy rain and strong wind"},
          {"n06", "", "farms in the valley lost crops after the storm"},
          {"n07", "Markets", "stock markets fell after the election results"},
          {"n08", "", "strong wind closed roads near the river"},
      },
      "fixture");
}

}  // namespace

TEST_CASE("sera examples") {
  const std::vector<RankedList> refs{list_of({"d2", "d3", "d4"}, 3)};
  CHECK(sera(list_of({"d1", "d2", "d3"}, 3), refs).value == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

  const std::vector<RankedList> two{list_of({"a", "x"}, 2), list_of({"y", "z"}, 2)};
  CHECK(sera(list_of({"a", "b"}, 2), two).value == 0.25);

  SUBCASE("empty candidate is degenerate zero") {
    const auto s = sera(list_of({}, 5), refs);
    CHECK(s.value == 0.0);
    CHECK(s.degenerate);
  }
  SUBCASE("no references is an error") {
    CHECK_THROWS_AS(sera(list_of({"a"}, 1), std::span<const RankedList>{}), Error);
    CHECK_THROWS_AS(sera_dis(list_of({"a"}, 1), std::span<const RankedList>{}), Error);
  }
}

TEST_CASE("sera_dis examples") {
  SUBCASE("swapped pair") {
    const std::vector<RankedList> refs{list_of({"b", "a"}, 2)};
    // Two matches at displacement 1: (2 / ln 3) / (2 / ln 2).
    CHECK(std::fabs(sera_dis(list_of({"a", "b"}, 2), refs).value - 0.6309297535714574) <= 1e-15);
  }
  SUBCASE("identical full lists score 1") {
    const std::vector<RankedList> refs{list_of({"a", "b", "c"}, 3)};
    CHECK(std::fabs(sera_dis(list_of({"a", "b", "c"}, 3), refs).value - 1.0) <= 1e-15);
  }
  SUBCASE("short candidate is normalised by its cutoff") {
    const std::vector<RankedList> refs{list_of({"a", "b"}, 4)};
    CHECK(std::fabs(sera_dis(list_of({"a", "b"}, 4), refs).value - 0.5) <= 1e-15);
  }
  SUBCASE("list longer than its cutoff") {
    const std::vector<RankedList> refs{list_of({"a"}, 1)};
    CHECK_THROWS_AS(sera_dis(list_of({"a", "b"}, 1), refs), Error);
  }
}

TEST_CASE("scoring agrees with the oracle on random lists") {
  std::mt19937_64 rng(5);
  for (int iter = 0; iter < 500; ++iter) {
    const std::size_t cutoff = 1 + rng() % 10;
    const std::size_t pool = 1 + rng() % 15;
    const auto c = random_ids(rng, cutoff, pool);
    std::vector<std::vector<std::string>> r;
    std::vector<RankedList> refs;
    for (std::size_t m = 0, n = 1 + rng() % 4; m < n; ++m) {
      r.push_back(random_ids(rng, cutoff, pool));
      refs.push_back(list_of(r.back(), cutoff));
    }
    const auto cl = list_of(c, cutoff);
    const auto s = sera(cl, refs).value;
    const auto d = sera_dis(cl, refs).value;
    CHECK(std::fabs(s - oracle::sera(c, r)) <= 1e-12);
    CHECK(std::fabs(d - oracle::sera_dis(c, r, cutoff)) <= 1e-12);
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
    CHECK(d >= 0.0);
    CHECK(d <= 1.0 + 1e-12);
    for (double base : {2.0, 10.0}) {
      CHECK(std::fabs(sera_dis(cl, refs, base).value - d) <= 1e-12);
    }
  }
}

TEST_CASE("sera ignores order, sera_dis does not") {
  const std::vector<RankedList> refs{list_of({"a", "b", "c", "d"}, 4)};
  const auto forward = list_of({"a", "b", "c", "d"}, 4);
  const auto reversed = list_of({"d", "c", "b", "a"}, 4);
  CHECK(sera(forward, refs).value == sera(reversed, refs).value);
  CHECK(sera_dis(forward, refs).value > sera_dis(reversed, refs).value);
}

TEST_CASE("scores average over references") {
  const auto c = list_of({"a", "b"}, 2);
  const std::vector<RankedList> one{list_of({"a", "b"}, 2)};
  const std::vector<RankedList> two{list_of({"a", "b"}, 2), list_of({"x", "y"}, 2)};
  CHECK(sera(c, two).value == sera(c, one).value / 2);
  CHECK(sera_dis(c, two).value == doctest::Approx(sera_dis(c, one).value / 2).epsilon(1e-15));
}

TEST_CASE("metric names") {
  CHECK(EvalConfig{Strategy::GeSeraPos, Variant::Sera, 5}.metric_name() == "GeSERA-5");
  CHECK(EvalConfig{Strategy::GeSeraPos, Variant::SeraDis, 10}.metric_name() == "GeSERA-DIS-10");
  CHECK(EvalConfig{Strategy::NounPhrase, Variant::Sera, 10}.metric_name() == "SERA-NP-10");
  CHECK(EvalConfig{Strategy::Keyword, Variant::SeraDis, 5}.metric_name() == "SERA-DIS-KW-5");
  CHECK(EvalConfig{Strategy::Raw, Variant::Sera, 5}.metric_name() == "SERA-5");
  CHECK(parse_variant("SERA-DIS") == Variant::SeraDis);
  CHECK_THROWS_AS(parse_variant("rouge"), Error);
}

TEST_CASE("evaluate_summary") {
  const auto docs = fixture_corpus();
  const auto index = InvertedIndex::build(docs, {});
  const HeuristicTagger tagger;
  const ScoringContext ctx{index, tagger};

  SUBCASE("identical candidate and reference score 1") {
    const auto c = cand("t1", "S1", "Heavy rain flooded the river valley.");
    const std::vector<SummaryRecord> refs{ref("t1", "A", "Heavy rain flooded the river valley.")};
    for (auto variant : {Variant::Sera, Variant::SeraDis}) {
      for (auto strategy : {Strategy::Raw, Strategy::NounPhrase, Strategy::Keyword,
                            Strategy::GeSeraPos}) {
        const auto list = retrieve_text(ctx, c.text, strategy, 3);
        const auto s = evaluate_summary(ctx, c, refs, {strategy, variant, 3});
        if (variant == Variant::Sera || list.size() == 3) {
          CHECK(s.value == doctest::Approx(1.0).epsilon(1e-12));
        }
      }
    }
  }
  SUBCASE("a candidate of stopwords is degenerate") {
    const auto c = cand("t1", "S1", "the of and a");
    const std::vector<SummaryRecord> refs{ref("t1", "A", "river flood")};
    const auto s = evaluate_summary(ctx, c, refs, {Strategy::GeSeraPos, Variant::Sera, 5});
    CHECK(s.value == 0.0);
    CHECK(s.degenerate);
  }
  SUBCASE("references must match the topic and kind") {
    const auto c = cand("t1", "S1", "river");
    const std::vector<SummaryRecord> other_topic{ref("t2", "A", "river")};
    CHECK_THROWS_AS(evaluate_summary(ctx, c, other_topic, {}), Error);
    const std::vector<SummaryRecord> not_ref{cand("t1", "S2", "river")};
    CHECK_THROWS_AS(evaluate_summary(ctx, c, not_ref, {}), Error);
    CHECK_THROWS_AS(evaluate_summary(ctx, c, std::span<const SummaryRecord>{}, {}), Error);
  }
  SUBCASE("end to end equals the hand-chained oracle") {
    const auto c = cand("t1", "S1", "A storm with strong wind hit the valley farms.");
    const std::vector<SummaryRecord> refs{
        ref("t1", "A", "Strong wind and heavy rain damaged valley farms."),
        ref("t1", "B", "The river flood closed roads."),
    };
    for (std::size_t cutoff : {3, 5}) {
      auto oracle_list = [&](const std::string& text) {
        const auto q = reformulate(tagger.tag_text(text), Strategy::GeSeraPos);
        auto scored = oracle::exhaustive_bm25f(docs, {}, query_words(q));
        std::vector<std::string> ids;
        for (std::size_t i = 0; i < scored.size() && i < cutoff; ++i) {
          ids.push_back(scored[i].id);
        }
        return ids;
      };
      const auto oc = oracle_list(c.text);
      std::vector<std::vector<std::string>> orefs;
      for (const auto& r : refs) {
        orefs.push_back(oracle_list(r.text));
      }
      const auto s = evaluate_summary(ctx, c, refs, {Strategy::GeSeraPos, Variant::Sera, cutoff});
      const auto d =
          evaluate_summary(ctx, c, refs, {Strategy::GeSeraPos, Variant::SeraDis, cutoff});
      CHECK(std::fabs(s.value - oracle::sera(oc, orefs)) <= 1e-12);
      CHECK(std::fabs(d.value - oracle::sera_dis(oc, orefs, cutoff)) <= 1e-12);
      CHECK(s.value > 0.0);
    }
  }
}

TEST_CASE("evaluate_dataset") {
  const auto docs = fixture_corpus();
  const auto index = InvertedIndex::build(docs, {});
  const HeuristicTagger tagger;
  const ScoringContext ctx{index, tagger};

  const std::vector<SummaryRecord> candidates{
      cand("t1", "S1", "River flood in the valley."),
      cand("t1", "S2", "The mayor won the election."),
      cand("t2", "S1", "Storm wind closed roads."),
      cand("t2", "S2", "Markets fell."),
  };
  const std::vector<SummaryRecord> references{
      ref("t1", "A", "Heavy rain caused a river flood."),
      ref("t1", "B", "Valley farms were flooded by the river."),
      ref("t2", "A", "A storm with strong wind hit roads."),
      ref("t2", "B", "Wind and rain from the storm."),
  };
  const std::vector<EvalConfig> configs{
      {Strategy::GeSeraPos, Variant::Sera, 5},     {Strategy::GeSeraPos, Variant::SeraDis, 5},
      {Strategy::Keyword, Variant::Sera, 3},
  };

  SUBCASE("one row per candidate and config, in order") {
    const auto report = evaluate_dataset(ctx, candidates, references, configs);
    REQUIRE(report.table.rows.size() == 12);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      for (std::size_t j = 0; j < configs.size(); ++j) {
        const auto& row = report.table.rows[i * configs.size() + j];
        CHECK(row.topic_id == candidates[i].topic_id);
        CHECK(row.system_id == candidates[i].system_id);
        CHECK(row.metric == configs[j].metric_name());
        std::vector<SummaryRecord> topic_refs;
        for (const auto& r : references) {
          if (r.topic_id == row.topic_id) {
            topic_refs.push_back(r);
          }
        }
        CHECK(row.score == evaluate_summary(ctx, candidates[i], topic_refs, configs[j]).value);
      }
    }
  }
  SUBCASE("deterministic across runs and thread counts") {
    const auto a = evaluate_dataset(ctx, candidates, references, configs);
    const auto b = evaluate_dataset(ctx, candidates, references, configs, {4, std::nullopt});
    CHECK(a.table.rows == b.table.rows);
  }
  SUBCASE("annotator filter leaves one reference per topic") {
    DatasetOptions options;
    options.annotators = std::set<std::string>{"A"};
    const auto report = evaluate_dataset(ctx, candidates, references, configs, options);
    const std::vector<SummaryRecord> only_a{references[0]};
    CHECK(report.table.rows[0].score ==
          evaluate_summary(ctx, candidates[0], only_a, configs[0]).value);
  }
  SUBCASE("topics without references are reported together") {
    auto extra = candidates;
    extra.push_back(cand("t9", "S1", "river"));
    extra.push_back(cand("t8", "S1", "river"));
    CHECK_THROWS_WITH_AS(evaluate_dataset(ctx, extra, references, configs),
                         "topics without references: t8, t9", Error);
  }
  SUBCASE("degenerate candidates are counted") {
    auto extra = candidates;
    extra.push_back(cand("t1", "S3", "of the and"));
    const auto report = evaluate_dataset(ctx, extra, references, configs);
    CHECK(report.degenerate_candidates == 3);
    CHECK(report.degenerate_rows == std::vector<std::size_t>{12, 13, 14});
  }
}

TEST_CASE("score table csv round-trip") {
  ScoreTable table;
  table.rows = {{"t1", "S,1", "GeSERA-5", 0.1 + 0.2}, {"t2", "S\"2", "SERA-DIS-10", 1.0 / 3.0}};
  std::stringstream buffer;
  table.write_csv(buffer);
  CHECK(buffer.str().rfind("topic_id,system_id,metric,score\n", 0) == 0);
  CHECK(ScoreTable::read_csv(buffer).rows == table.rows);
}

TEST_CASE("corrupting a summary lowers its score on average") {
  // Replacing content words with words absent from the corpus can only
  // remove query terms, so mean scores fall as the fraction grows. One engine
  // state per candidate makes each fraction's replacements a superset of the
  // previous fraction's.
  SyntheticOptions options;
  options.topics = 6;
  options.distractor_topics = 2;
  options.documents = 300;
  options.systems = 2;
  options.annotators = 2;
  const std::vector<double> fractions{0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<double> means(fractions.size(), 0.0);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    options.seed = seed;
    const auto bench = make_synthetic_benchmark(options);
    const auto index = InvertedIndex::build(bench.corpus, {});
    const HeuristicTagger tagger;
    const ScoringContext ctx{index, tagger};
    std::mt19937_64 rng(seed);
    for (const auto& c : bench.candidates) {
      if (c.system_id != "S01") {
        continue;
      }
      const std::mt19937_64 start(rng());
      std::vector<SummaryRecord> refs;
      for (const auto& r : bench.references) {
        if (r.topic_id == c.topic_id) {
          refs.push_back(r);
        }
      }
      for (std::size_t f = 0; f < fractions.size(); ++f) {
        auto corrupted = c;
        auto engine = start;
        corrupted.text = corrupt_text(c.text, fractions[f], ReplacementSource::OutOfVocabulary,
                                      bench.vocabulary, engine);
        means[f] +=
            evaluate_summary(ctx, corrupted, refs, {Strategy::GeSeraPos, Variant::Sera, 10}).value;
      }
    }
  }
  for (std::size_t f = 1; f < fractions.size(); ++f) {
    CHECK(means[f] <= means[f - 1]);
  }
  CHECK(means.back() == 0.0);
}
