#include "doctest.h"

#include <sstream>

#include "irsense/bm25.hpp"
#include "irsense/index.hpp"
#include "irsense/tokenizer.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace irsense;

namespace {

passage_collection make_coll(std::map<std::string, std::string> texts) {
  passage_collection c;
  for (auto& [id, text] : texts) c.entries.emplace(id, text);
  return c;
}

}  // namespace

TEST_CASE("tokenize lowercases and splits on non-alphanumerics") {
  tokenizer_config no_stem{false};
  CHECK(tokenize("Super Bowl, 4 hours!", no_stem) ==
        std::vector<std::string>{"super", "bowl", "4", "hours"});
  CHECK(tokenize("", no_stem).empty());
  CHECK(tokenize("...,!?", no_stem).empty());
}

TEST_CASE("s-stemmer rules") {
  CHECK(s_stem("hours") == "hour");
  CHECK(s_stem("flies") == "fly");
  CHECK(s_stem("houses") == "house");
  CHECK(s_stem("glass") == "glass");   // -ss guard
  CHECK(s_stem("corpus") == "corpu" "s");  // -us guard
  CHECK(s_stem("goes") == "goes");     // -oes guard
  CHECK(s_stem("fly") == "fly");
  CHECK(s_stem("as") == "as");         // too short
}

TEST_CASE("tokenize idempotence over random strings") {
  static const char charset[] = "abcXYZ 0189,.!-_\t'\"e\xc3\xa9";  // includes UTF-8 e-acute
  gen::engine eng(321);
  for (int iter = 0; iter < 500; ++iter) {
    std::string text;
    const std::size_t len = gen::range(eng, 0, 60);
    for (std::size_t i = 0; i < len; ++i) text.push_back(charset[gen::below(eng, sizeof(charset) - 1)]);
    for (bool stem : {false, true}) {
      tokenizer_config cfg{stem};
      auto tokens = tokenize(text, cfg);
      std::string joined;
      for (const auto& t : tokens) {
        if (!joined.empty()) joined.push_back(' ');
        joined += t;
      }
      CHECK(tokenize(joined, cfg) == tokens);
    }
  }
}

TEST_CASE("build_index counts terms and lengths") {
  auto coll = make_coll({{"p", "a b a"}});
  auto idx = inverted_index::build(coll, tokenizer_config{false});
  CHECK(idx.doc_count() == 1);
  CHECK(idx.doc_lengths()[0] == 3);
  CHECK(idx.avg_doc_length() == 3.0);
  auto a = idx.term_postings("a");
  REQUIRE(a.size() == 1);
  CHECK(a[0] == std::pair<passage_id, std::uint32_t>{"p", 2});
  auto b = idx.term_postings("b");
  REQUIRE(b.size() == 1);
  CHECK(b[0] == std::pair<passage_id, std::uint32_t>{"p", 1});
}

TEST_CASE("build_index: equal-length passages give that avg length") {
  auto idx = inverted_index::build(make_coll({{"a", "x y z"}, {"b", "q r s"}}),
                                   tokenizer_config{false});
  CHECK(idx.avg_doc_length() == 3.0);
}

TEST_CASE("build_index rejects an empty collection") {
  CHECK_THROWS_AS(inverted_index::build(passage_collection{}), data_error);
}

TEST_CASE("build_index matches a naive recount on random corpora") {
  gen::engine eng(99);
  for (int iter = 0; iter < 20; ++iter) {
    std::map<std::string, std::string> texts;
    const std::size_t n_docs = gen::range(eng, 1, 12);
    for (std::size_t d = 0; d < n_docs; ++d) {
      std::string text;
      const std::size_t len = gen::range(eng, 0, 30);
      for (std::size_t i = 0; i < len; ++i) {
        text += gen::token(eng, 1, 3);
        text.push_back(' ');
      }
      texts.emplace("d" + std::to_string(d), text.empty() ? "filler" : text);
    }
    tokenizer_config cfg{false};
    auto coll = make_coll(texts);
    auto idx = inverted_index::build(coll, cfg);
    auto corpus = oracle::bm25_corpus::from_texts(texts, cfg);

    std::map<std::string, std::map<std::string, std::uint32_t>> expected;  // term -> doc -> tf
    std::uint64_t total = 0;
    for (const auto& [id, toks] : corpus.docs) {
      total += toks.size();
      for (const auto& t : toks) expected[t][id] += 1;
    }
    CHECK(idx.total_tokens() == total);
    CHECK(idx.vocabulary_size() == expected.size());
    for (const auto& [term, docs] : expected) {
      auto postings = idx.term_postings(term);
      REQUIRE(postings.size() == docs.size());
      for (const auto& [pid, tf] : postings) {
        CHECK(docs.at(pid) == tf);
      }
      // sorted by passage id
      for (std::size_t i = 1; i < postings.size(); ++i)
        CHECK(postings[i - 1].first < postings[i].first);
    }
  }
}

TEST_CASE("bm25_score basics") {
  tokenizer_config cfg{false};
  auto coll = make_coll({{"d1", "cat dog"}, {"d2", "cat cat fish"}, {"d3", "bird"}});
  auto idx = inverted_index::build(coll, cfg);
  bm25_params params;  // defaults

  SUBCASE("absent query term contributes zero") {
    CHECK(bm25_score(idx, params, {"unicorn"}, "d1") == 0.0);
    double with = bm25_score(idx, params, {"cat", "unicorn"}, "d1");
    double without = bm25_score(idx, params, {"cat"}, "d1");
    CHECK(with == without);
  }

  SUBCASE("k1=0 reduces to idf sum over matched occurrences") {
    bm25_params flat{0.0, 0.4};
    const double idf_cat = bm25_idf(3, 2);
    CHECK(bm25_score(idx, flat, {"cat"}, "d2") == doctest::Approx(idf_cat).epsilon(1e-12));
    // repeated query term contributes once per occurrence
    CHECK(bm25_score(idx, flat, {"cat", "cat"}, "d2") ==
          doctest::Approx(2 * idf_cat).epsilon(1e-12));
  }

  SUBCASE("matches the from-definition oracle on a hand corpus") {
    auto corpus = oracle::bm25_corpus::from_texts(
        {{"d1", "cat dog"}, {"d2", "cat cat fish"}, {"d3", "bird"}}, cfg);
    for (const auto& doc : {"d1", "d2", "d3"}) {
      std::vector<std::string> query{"cat", "fish", "cat"};
      const double got = bm25_score(idx, params, query, doc);
      const double want = corpus.score(query, doc, params.k1, params.b);
      CHECK(got == doctest::Approx(want).epsilon(1e-12));
    }
  }

  SUBCASE("unknown passage is an error") {
    CHECK_THROWS_AS(bm25_score(idx, params, {"cat"}, "nope"), data_error);
  }

  SUBCASE("scores are non-negative") {
    gen::engine eng(7);
    for (int i = 0; i < 50; ++i) {
      std::vector<std::string> query;
      for (std::size_t t = 0; t < gen::range(eng, 1, 4); ++t) query.push_back(gen::token(eng, 1, 3));
      query.insert(query.end(), {"cat", "bird"});
      for (const auto& doc : {"d1", "d2", "d3"}) {
        CHECK(bm25_score(idx, params, query, doc) >= 0.0);
      }
    }
  }
}

TEST_CASE("search basics") {
  tokenizer_config cfg{false};
  auto coll = make_coll({{"d1", "cat dog"}, {"d2", "cat cat fish"}, {"d3", "bird"}});
  auto idx = inverted_index::build(coll, cfg);
  bm25_params params;
  searcher s(idx, params);

  SUBCASE("out-of-vocabulary query returns an empty list") {
    CHECK(s.search("unicorn rainbow", 10).entries.empty());
  }

  SUBCASE("depth=1 returns the argmax") {
    auto list = s.search("cat fish", 1);
    REQUIRE(list.entries.size() == 1);
    CHECK(list.entries[0].passage == "d2");
  }
}

TEST_CASE("search equals the exhaustive-scoring oracle on random corpora") {
  gen::engine eng(2024);
  for (int iter = 0; iter < 15; ++iter) {
    std::map<std::string, std::string> texts;
    const std::size_t n_docs = gen::range(eng, 2, 40);
    for (std::size_t d = 0; d < n_docs; ++d) {
      std::string text;
      const std::size_t len = gen::range(eng, 1, 20);
      for (std::size_t i = 0; i < len; ++i) {
        text += gen::token(eng, 1, 2);  // tiny alphabet: dense overlap and tf > 1
        text.push_back(' ');
      }
      texts.emplace("d" + std::to_string(d), text);
    }
    tokenizer_config cfg{false};
    auto idx = inverted_index::build(make_coll(texts), cfg);
    auto corpus = oracle::bm25_corpus::from_texts(texts, cfg);
    bm25_params params{0.9, 0.4};
    searcher s(idx, params);

    std::string query = gen::token(eng, 1, 2) + " " + gen::token(eng, 1, 2);
    auto expected = corpus.exhaustive(tokenize(query, cfg), params.k1, params.b);
    auto got = s.search(query, n_docs);
    REQUIRE(got.entries.size() == expected.size());
    CHECK(oracle::rankings_match(expected, got, 1e-9));
    for (std::size_t i = 0; i < got.entries.size(); ++i) {
      CHECK(got.entries[i].score ==
            doctest::Approx(expected[i].second).epsilon(1e-9));
    }
  }
}

TEST_CASE("adding a document with no query terms, N and avgdl held fixed, preserves order") {
  gen::engine eng(555);
  for (int iter = 0; iter < 10; ++iter) {
    std::map<std::string, std::string> texts;
    const std::size_t n_docs = gen::range(eng, 3, 15);
    for (std::size_t d = 0; d < n_docs; ++d) {
      std::string text;
      for (std::size_t i = 0; i < gen::range(eng, 1, 12); ++i) {
        text += gen::token(eng, 1, 2);
        text.push_back(' ');
      }
      texts.emplace("d" + std::to_string(d), text);
    }
    tokenizer_config cfg{false};
    bm25_params params;
    auto before_corpus = oracle::bm25_corpus::from_texts(texts, cfg);
    const std::size_t n_before = before_corpus.docs.size();
    const double avgdl_before = before_corpus.avg_len();

    std::string query = gen::token(eng, 1, 2) + " " + gen::token(eng, 1, 2);
    auto query_tokens = tokenize(query, cfg);

    // the unrelated document: vocabulary disjoint from the query
    texts.emplace("zzz_unrelated", "qqqq wwww qqqq wwww");
    auto idx_after = inverted_index::build(make_coll(texts), cfg);
    auto after_corpus = oracle::bm25_corpus::from_texts(texts, cfg);

    // (a) oracle equivalence on the updated index
    searcher s(idx_after, params);
    auto got = s.search(query, texts.size());
    auto expected = after_corpus.exhaustive(query_tokens, params.k1, params.b);
    CHECK(oracle::rankings_match(expected, got, 1e-9));

    // (b) with N and avgdl pinned to their old values, old documents keep
    //     their old scores exactly, so the old ranking is preserved
    for (const auto& [id, toks] : before_corpus.docs) {
      (void)toks;
      const double before = before_corpus.score(query_tokens, id, params.k1, params.b);
      const double pinned = after_corpus.score(query_tokens, id, params.k1, params.b,
                                               n_before, avgdl_before);
      CHECK(pinned == doctest::Approx(before).epsilon(1e-12));
    }
  }
}

TEST_CASE("query_by_passage") {
  tokenizer_config cfg{false};

  SUBCASE("seed sharing no terms is alone at rank 1") {
    auto coll = make_coll({{"a", "unique words only"}, {"b", "other stuff"}, {"c", "more things"}});
    auto idx = inverted_index::build(coll, cfg);
    searcher s(idx, bm25_params{});
    auto list = s.query_by_passage(coll, "a", 10);
    REQUIRE(list.entries.size() == 1);
    CHECK(list.entries[0].passage == "a");
  }

  SUBCASE("duplicate passage text appears adjacent in id order") {
    auto coll = make_coll({{"dup1", "same text here"}, {"dup2", "same text here"},
                           {"zz", "unrelated thing"}});
    auto idx = inverted_index::build(coll, cfg);
    searcher s(idx, bm25_params{});
    auto list = s.query_by_passage(coll, "dup2", 10);
    REQUIRE(list.entries.size() >= 2);
    CHECK(list.entries[0].passage == "dup1");
    CHECK(list.entries[1].passage == "dup2");
    CHECK(list.entries[0].score == list.entries[1].score);
  }

  SUBCASE("unknown seed id is an error") {
    auto coll = make_coll({{"a", "x"}});
    auto idx = inverted_index::build(coll, cfg);
    searcher s(idx, bm25_params{});
    CHECK_THROWS_AS(s.query_by_passage(coll, "nope", 5), data_error);
  }

  SUBCASE("self-retrieval at rank 1 across a 20-doc corpus") {
    std::map<std::string, std::string> texts;
    for (int d = 0; d < 20; ++d) {
      std::string text = "common filler words";
      for (int r = 0; r < 3; ++r) text += " special" + std::to_string(d);
      texts.emplace("p" + std::to_string(d), text);
    }
    auto coll = make_coll(texts);
    auto idx = inverted_index::build(coll, cfg);
    searcher s(idx, bm25_params{});
    int self_at_rank1 = 0;
    for (const auto& [pid, text] : texts) {
      (void)text;
      auto list = s.query_by_passage(coll, pid, 20);
      REQUIRE(!list.entries.empty());
      if (list.entries[0].passage == pid) ++self_at_rank1;
    }
    MESSAGE("self-retrieved at rank 1: ", self_at_rank1, "/20");
    CHECK(self_at_rank1 == 20);
  }

  SUBCASE("token cap shortens the issued query") {
    auto coll = make_coll({{"a", "alpha beta"}, {"b", "alpha only here"}, {"c", "beta solo"}});
    auto idx = inverted_index::build(coll, cfg);
    searcher_options opts;
    opts.max_qbp_terms = 1;  // only "alpha" survives from seed "a"
    searcher capped(idx, bm25_params{}, opts);
    auto list = capped.query_by_passage(coll, "a", 10);
    for (const auto& e : list.entries) CHECK(e.passage != "c");
  }
}

TEST_CASE("index serialization round-trips and validates") {
  gen::engine eng(31337);
  std::map<std::string, std::string> texts;
  for (int d = 0; d < 25; ++d) {
    std::string text;
    for (std::size_t i = 0; i < gen::range(eng, 1, 15); ++i) {
      text += gen::token(eng, 1, 4);
      text.push_back(' ');
    }
    texts.emplace("doc" + std::to_string(d), text);
  }
  auto coll = make_coll(texts);
  auto idx = inverted_index::build(coll, tokenizer_config{true});

  std::ostringstream out;
  idx.save(out);
  std::istringstream in(out.str());
  auto loaded = inverted_index::load(in);

  CHECK(loaded.doc_count() == idx.doc_count());
  CHECK(loaded.total_tokens() == idx.total_tokens());
  CHECK(loaded.tokenizer().stem == idx.tokenizer().stem);
  CHECK(loaded.doc_ids() == idx.doc_ids());
  CHECK(loaded.doc_lengths() == idx.doc_lengths());

  // identical search behavior
  searcher s1(idx, bm25_params{});
  searcher s2(loaded, bm25_params{});
  for (int i = 0; i < 10; ++i) {
    std::string q = gen::token(eng, 1, 4) + " " + gen::token(eng, 1, 4);
    CHECK(s1.search(q, 25) == s2.search(q, 25));
  }

  SUBCASE("bad magic is rejected") {
    std::istringstream bad("not an index at all");
    CHECK_THROWS_WITH_AS(inverted_index::load(bad), doctest::Contains("magic"), data_error);
  }

  SUBCASE("version mismatch is rejected") {
    std::string bytes = out.str();
    bytes[8] = 99;  // version field follows the 8-byte magic
    std::istringstream bad(bytes);
    CHECK_THROWS_WITH_AS(inverted_index::load(bad), doctest::Contains("version"), data_error);
  }
}
