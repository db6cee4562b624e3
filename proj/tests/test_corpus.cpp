#include <doctest.h>

#include <numeric>
#include <random>
#include <sstream>

#include "infzsl/corpus.hpp"
#include "testutil.hpp"

using namespace infzsl;
using testutil::throws_code;

TEST_CASE("render_prompt fills the template verbatim") {
  GenerationConfig cfg{100, 3, 5};
  CHECK(render_prompt("zebra", "animals", cfg) ==
        "Please list 100 simple visual concepts to help a person identify the animals: zebra in "
        "images, with each concept not exceeding 3 words.");
  CHECK(render_prompt("giraffe", "animals", GenerationConfig{1, 1, 1}) ==
        "Please list 1 simple visual concepts to help a person identify the animals: giraffe in "
        "images, with each concept not exceeding 1 words.");
}

TEST_CASE("render_prompt rejects empty inputs") {
  GenerationConfig cfg;
  CHECK(throws_code([&] { render_prompt("", "animals", cfg); }, errc::invalid_argument));
  CHECK(throws_code([&] { render_prompt("zebra", "", cfg); }, errc::invalid_argument));
  CHECK(throws_code([&] { render_prompt("zebra", "animals", GenerationConfig{0, 3, 1}); },
                    errc::invalid_argument));
}

TEST_CASE("parse_response drops hallucinated over-length phrases") {
  GenerationConfig cfg{100, 3, 1};
  ParseResult parsed = parse_response(
      "1. Black-white stripes\n2. Mane\n3. plays a vital role in ecosystems", cfg);
  CHECK(parsed.phrases == std::vector<std::string>{"black-white stripes", "mane"});
  CHECK(parsed.dropped_overlength == 1);
}

TEST_CASE("parse_response strips markers and punctuation") {
  GenerationConfig cfg{100, 3, 1};
  CHECK(parse_response("- horn", cfg).phrases == std::vector<std::string>{"horn"});
  CHECK(parse_response("* Claw.", cfg).phrases == std::vector<std::string>{"claw"});
  CHECK(parse_response("3) Long Neck!", cfg).phrases == std::vector<std::string>{"long neck"});
  CHECK(parse_response("\xe2\x80\xa2 bushy tail", cfg).phrases ==
        std::vector<std::string>{"bushy tail"});
  CHECK(parse_response("12. whiskers,", cfg).phrases == std::vector<std::string>{"whiskers"});
  // a leading digit group only counts as a marker when followed by whitespace
  CHECK(parse_response("3-toed foot", cfg).phrases == std::vector<std::string>{"3-toed foot"});
}

TEST_CASE("parse_response keeps within-response duplicates") {
  ParseResult parsed = parse_response("1. furry\n2. furry\n3. Furry", GenerationConfig{3, 3, 1});
  CHECK(parsed.phrases == std::vector<std::string>{"furry", "furry", "furry"});
}

TEST_CASE("parse_response rejects responses with nothing usable") {
  GenerationConfig cfg{100, 2, 1};
  CHECK(throws_code([&] { parse_response("", cfg); }, errc::empty_response));
  CHECK(throws_code([&] { parse_response("  \n \n", cfg); }, errc::empty_response));
  CHECK(throws_code([&] { parse_response("1. one two three four", cfg); }, errc::empty_response));
}

TEST_CASE("parsing is idempotent on normalized lists") {
  GenerationConfig cfg{100, 3, 1};
  std::mt19937_64 rng(42);
  const std::vector<std::string> vocab = {"long",  "neck",   "furry", "striped",
                                          "sharp", "hooves", "tail",  "black-white"};
  std::uniform_int_distribution<int> words(1, 3);
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
  for (int trial = 0; trial < 50; ++trial) {
    std::ostringstream raw;
    for (int line = 0; line < 8; ++line) {
      raw << (line % 2 ? "- " : std::to_string(line) + ". ");
      int n = words(rng);
      for (int w = 0; w < n; ++w) raw << (w ? " " : "") << vocab[pick(rng)];
      raw << '\n';
    }
    std::vector<std::string> first = parse_response(raw.str(), cfg).phrases;
    std::string joined;
    for (const std::string& phrase : first) joined += phrase + "\n";
    CHECK(parse_response(joined, cfg).phrases == first);
  }
}

TEST_CASE("build_corpus conserves parsed phrase counts") {
  ClassCatalog catalog({{0, "a", Split::seen},
                        {1, "b", Split::seen},
                        {2, "c", Split::unseen},
                        {3, "d", Split::unseen}},
                       "things");
  std::map<int, std::vector<std::string>> responses;
  for (int y = 0; y < 4; ++y) responses[y] = {"1. red fur\n2. long tail\n3. big ears"};
  ConceptCorpus corpus = build_corpus(catalog, responses, GenerationConfig{3, 3, 1});
  CHECK(corpus.records.size() == 12);
  std::vector<int> counts = corpus.class_record_counts();
  CHECK(std::accumulate(counts.begin(), counts.end(), 0) == 12);
}

TEST_CASE("build_corpus reproduces the toy scenario") {
  ConceptCorpus corpus = testutil::toy_corpus();
  CHECK(corpus.records.size() == 10);
  CHECK(corpus.class_record_counts() == std::vector<int>{3, 3, 2, 2});
  for (const ConceptRecord& record : corpus.records) {
    CHECK(record.class_id >= 0);
    CHECK(record.class_id < corpus.catalog.size());
    CHECK(record.response_index == 0);
  }
  // grouped by response and ordered by ordinal within a class
  for (std::size_t i = 1; i < corpus.records.size(); ++i) {
    const ConceptRecord& prev = corpus.records[i - 1];
    const ConceptRecord& cur = corpus.records[i];
    if (prev.class_id == cur.class_id && prev.response_index == cur.response_index)
      CHECK(prev.ordinal < cur.ordinal);
  }
}

TEST_CASE("multiple responses per class carry provenance") {
  ClassCatalog catalog({{0, "a", Split::seen}}, "things");
  std::map<int, std::vector<std::string>> responses = {
      {0, {"1. red fur\n2. long tail", "1. long tail\n2. big ears"}}};
  ConceptCorpus corpus = build_corpus(catalog, responses, GenerationConfig{2, 3, 2});
  REQUIRE(corpus.records.size() == 4);
  CHECK(corpus.records[0].response_index == 0);
  CHECK(corpus.records[1].response_index == 0);
  CHECK(corpus.records[2].response_index == 1);
  CHECK(corpus.records[3].response_index == 1);
  CHECK(corpus.records[0].ordinal == 0);
  CHECK(corpus.records[1].ordinal == 1);
  CHECK(corpus.records[2].ordinal == 0);
  CHECK(corpus.records[3].ordinal == 1);
  // duplicates across responses are distinct records
  CHECK(corpus.records[1].phrase == corpus.records[2].phrase);
}

TEST_CASE("build_corpus rejects incomplete and empty classes") {
  ClassCatalog catalog({{0, "a", Split::seen}, {1, "b", Split::unseen}}, "things");
  GenerationConfig cfg{3, 3, 2};

  SUBCASE("missing class") {
    std::map<int, std::vector<std::string>> responses = {{0, {"1. x", "2. y"}}};
    CHECK(throws_code([&] { build_corpus(catalog, responses, cfg); }, errc::incomplete_corpus));
  }
  SUBCASE("wrong response count") {
    std::map<int, std::vector<std::string>> responses = {{0, {"1. x", "2. y"}}, {1, {"1. z"}}};
    CHECK(throws_code([&] { build_corpus(catalog, responses, cfg); }, errc::incomplete_corpus));
  }
  SUBCASE("class with every phrase dropped") {
    std::map<int, std::vector<std::string>> responses = {
        {0, {"1. x", "2. y"}},
        {1, {"1. far too many words in this phrase", "2. also way too many words here"}}};
    CHECK(throws_code([&] { build_corpus(catalog, responses, cfg); }, errc::empty_class));
  }
}

TEST_CASE("no record exceeds k_max words and warning tallies add up") {
  ClassCatalog catalog({{0, "a", Split::seen}}, "things");
  GenerationConfig cfg{4, 2, 1};
  std::map<int, std::vector<std::string>> responses = {
      {0, {"1. one\n2. one two\n3. one two three\n4. one two three four"}}};
  CorpusBuildStats stats;
  ConceptCorpus corpus = build_corpus(catalog, responses, cfg, &stats);
  CHECK(corpus.records.size() == 2);
  CHECK(stats.dropped_overlength == 2);
  for (const ConceptRecord& record : corpus.records) {
    std::istringstream words(record.phrase);
    std::string word;
    int n = 0;
    while (words >> word) ++n;
    CHECK(n <= cfg.k_max);
  }
}
