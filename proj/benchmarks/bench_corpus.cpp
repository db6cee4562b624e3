#include <benchmark/benchmark.h>

#include <random>
#include <sstream>

#include "infzsl/corpus.hpp"
#include "infzsl/word_vectors.hpp"

using namespace infzsl;

static void BM_ParseResponse(benchmark::State& state) {
  const int lines = static_cast<int>(state.range(0));
  std::ostringstream raw;
  for (int i = 0; i < lines; ++i)
    raw << i + 1 << ". " << (i % 3 == 0 ? "Long Neck" : i % 3 == 1 ? "black-white stripes"
                                                                   : "plays a vital role in ecosystems")
        << "\n";
  const std::string text = raw.str();
  GenerationConfig cfg{lines, 3, 1};
  for (auto _ : state) {
    ParseResult parsed = parse_response(text, cfg);
    benchmark::DoNotOptimize(parsed.phrases.data());
  }
  state.SetItemsProcessed(state.iterations() * lines);
}
BENCHMARK(BM_ParseResponse)->Arg(100)->Arg(1000);

static void BM_EmbedPhrase(benchmark::State& state) {
  const int vocab = static_cast<int>(state.range(0));
  std::mt19937_64 rng(23);
  std::normal_distribution<double> normal(0.0, 1.0);
  WordVectorTable table;
  table.dimension = 300;
  table.vectors.resize(vocab, 300);
  for (int i = 0; i < vocab; ++i) {
    table.index["w" + std::to_string(i)] = i;
    for (int d = 0; d < 300; ++d) table.vectors(i, d) = normal(rng);
  }
  const std::string phrase = "w1 w17 w23";
  for (auto _ : state) {
    PhraseEmbedding e = embed_phrase(phrase, table);
    benchmark::DoNotOptimize(e.vector.data());
  }
}
BENCHMARK(BM_EmbedPhrase)->Arg(10000)->Arg(100000);
