#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "infzsl/cess.hpp"
#include "testutil.hpp"

using namespace infzsl;
using testutil::make_model;
using testutil::oracle_stats;
using testutil::random_counts;
using testutil::throws_code;
using testutil::to_cooccurrence;
using testutil::toy_corpus;
using testutil::toy_model;

// Toy cluster ids: 0 sharp head, 1 furry, 2 claw, 3 horn, 4 long neck.
namespace {
constexpr int kSharpHead = 0, kFurry = 1, kClaw = 2, kHorn = 3, kLongNeck = 4;
}

TEST_CASE("cooccurrence fractions") {
  SUBCASE("single class, single cluster") {
    ClassCatalog catalog({{0, "a", Split::seen}}, "things");
    std::map<int, std::vector<std::string>> responses = {{0, {"1. thing"}}};
    ConceptCorpus corpus = build_corpus(catalog, responses, GenerationConfig{1, 2, 1});
    CooccurrenceMatrix co = cooccurrence(corpus, make_model({0}, 1));
    CHECK(co.o.rows() == 1);
    CHECK(co.o.cols() == 1);
    CHECK(co.o(0, 0) == 1.0);
  }
  SUBCASE("toy scenario hand counts") {
    CooccurrenceMatrix co = cooccurrence(toy_corpus(), toy_model());
    CHECK(co.o(1, kHorn) == doctest::Approx(1.0 / 3.0));
    CHECK(co.o(2, kLongNeck) == doctest::Approx(0.5));
    CHECK(co.o(0, kFurry) == doctest::Approx(1.0 / 3.0));
    for (int y = 0; y < co.o.rows(); ++y) CHECK(co.o.row(y).sum() == doctest::Approx(1.0));
  }
  SUBCASE("class without clustered records") {
    ConceptCorpus corpus = toy_corpus();
    // model that only covers the first three records (class fox)
    ClusterModel partial = make_model({0, 1, 2}, 3);
    CHECK(throws_code([&] { cooccurrence(corpus, partial); }, errc::degenerate_class));
  }
}

TEST_CASE("class_given_cluster is the per-column softmax") {
  SUBCASE("constant column is uniform") {
    CooccurrenceMatrix co{Eigen::MatrixXd::Zero(4, 1)};
    Eigen::MatrixXd p = class_given_cluster(co);
    for (int y = 0; y < 4; ++y) CHECK(p(y, 0) == doctest::Approx(0.25));
  }
  SUBCASE("two-class column (1,0)") {
    Eigen::MatrixXd o(2, 1);
    o << 1.0, 0.0;
    Eigen::MatrixXd p = class_given_cluster({o});
    CHECK(p(0, 0) == doctest::Approx(0.7310585786300049).epsilon(1e-12));
    CHECK(p(1, 0) == doctest::Approx(0.2689414213699951).epsilon(1e-12));
  }
  SUBCASE("toy furry column") {
    Eigen::MatrixXd p = class_given_cluster(cooccurrence(toy_corpus(), toy_model()));
    CHECK(p(0, kFurry) == doctest::Approx(0.22921475839160005).epsilon(1e-12));
    CHECK(p(1, kFurry) == doctest::Approx(0.22921475839160005).epsilon(1e-12));
    CHECK(p(2, kFurry) == doctest::Approx(0.27078524160839995).epsilon(1e-12));
    CHECK(p(3, kFurry) == doctest::Approx(0.27078524160839995).epsilon(1e-12));
    for (int q = 0; q < p.cols(); ++q) CHECK(p.col(q).sum() == doctest::Approx(1.0));
  }
}

TEST_CASE("concept entropy") {
  CHECK(concept_entropy(Eigen::VectorXd::Constant(4, 0.25)) ==
        doctest::Approx(1.3862943611198906).epsilon(1e-14));
  CHECK(concept_entropy(Eigen::VectorXd::Ones(1)) == 0.0);

  Eigen::VectorXd sharp_head(4);
  sharp_head << 0.3175012467253084, 0.2274995844248972, 0.2274995844248972, 0.2274995844248972;
  CHECK(concept_entropy(sharp_head) == doctest::Approx(1.3747731183881127).epsilon(1e-12));

  SUBCASE("zero probabilities contribute nothing") {
    Eigen::VectorXd p(3);
    p << 0.5, 0.5, 0.0;
    CHECK(concept_entropy(p) == doctest::Approx(std::log(2.0)));
  }
}

TEST_CASE("transferability normalization") {
  Eigen::VectorXd entropies(3);
  entropies << 1.0, 1.0, 2.0;
  Eigen::VectorXd tran = transferability(entropies);
  CHECK(tran(0) == doctest::Approx(0.25));
  CHECK(tran(1) == doctest::Approx(0.25));
  CHECK(tran(2) == doctest::Approx(0.5));

  Eigen::VectorXd equal = Eigen::VectorXd::Constant(7, 1.3);
  Eigen::VectorXd tran_equal = transferability(equal);
  for (int q = 0; q < 7; ++q) CHECK(tran_equal(q) == doctest::Approx(1.0 / 7.0));

  CHECK(throws_code([] { transferability(Eigen::VectorXd::Zero(4)); }, errc::degenerate_stats));
}

TEST_CASE("discriminability order statistic") {
  Eigen::VectorXd p(3);
  p << 0.5, 0.3, 0.2;
  CHECK(discriminability(p, 2) == 0.3);
  CHECK(discriminability(Eigen::VectorXd::Constant(4, 0.25), 3) == 0.25);
  CHECK(throws_code([&] { discriminability(p, 0); }, errc::invalid_argument));
  CHECK(throws_code([&] { discriminability(p, 4); }, errc::invalid_argument));

  Eigen::MatrixXd toy_p = class_given_cluster(cooccurrence(toy_corpus(), toy_model()));
  CHECK(discriminability(toy_p.col(kLongNeck), 2) ==
        doctest::Approx(0.2766693302332306).epsilon(1e-12));
}

TEST_CASE("harmonic importance") {
  CHECK(harmonic_importance(0.3, 0.3) == doctest::Approx(0.3));
  CHECK(harmonic_importance(0.2, 0.0) == 0.0);
  CHECK(harmonic_importance(0.0, 0.0) == 0.0);
}

TEST_CASE("toy importance ordering and selection") {
  ClusterStats stats = compute_cluster_stats(cooccurrence(toy_corpus(), toy_model()), 2);

  CHECK(stats.importance(kLongNeck) == doctest::Approx(0.231291493528).epsilon(1e-9));
  CHECK(stats.importance(kClaw) == doctest::Approx(0.231291493528).epsilon(1e-9));
  CHECK(stats.importance(kFurry) == doctest::Approx(0.231158609316).epsilon(1e-9));
  CHECK(stats.importance(kHorn) == doctest::Approx(0.213133388894).epsilon(1e-9));
  CHECK(stats.importance(kSharpHead) == doctest::Approx(0.213133388894).epsilon(1e-9));
  CHECK(stats.transferability(kFurry) == doctest::Approx(0.2016493089873419).epsilon(1e-12));
  CHECK(stats.transferability(kLongNeck) == doctest::Approx(0.1987015231692128).epsilon(1e-12));

  // {long neck, claw} > furry > {horn, sharp head}; the two pairs tie up to
  // one ulp of column-summation noise, so compare as sets
  std::vector<int> order = importance_order(stats);
  CHECK(std::set<int>(order.begin(), order.begin() + 2) == std::set<int>{kClaw, kLongNeck});
  CHECK(order[2] == kFurry);
  CHECK(std::set<int>(order.begin() + 3, order.end()) == std::set<int>{kSharpHead, kHorn});
  for (std::size_t i = 1; i < order.size(); ++i)
    CHECK(stats.importance(order[i - 1]) >= stats.importance(order[i]));

  std::vector<int> selected = importance_and_select(stats, {5, 2, 2});
  CHECK(std::set<int>(selected.begin(), selected.end()) == std::set<int>{kClaw, kLongNeck});

  CHECK(throws_code([&] { importance_and_select(stats, {5, 6, 2}); }, errc::invalid_argument));
}

TEST_CASE("statistics match the brute-force oracle on random instances") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> class_count(2, 12);
  std::uniform_int_distribution<int> cluster_count(1, 40);
  for (int trial = 0; trial < 30; ++trial) {
    int classes = class_count(rng);
    int clusters = cluster_count(rng);
    int k_top = 1 + static_cast<int>(rng() % static_cast<unsigned>(classes));
    auto counts = random_counts(rng, classes, clusters);

    ClusterStats stats = compute_cluster_stats(to_cooccurrence(counts), k_top);
    auto oracle = oracle_stats(counts, k_top);
    for (int q = 0; q < clusters; ++q) {
      CHECK(std::abs(stats.entropy(q) - oracle.entropy[q]) <= 1e-10);
      CHECK(std::abs(stats.transferability(q) - oracle.transferability[q]) <= 1e-10);
      CHECK(std::abs(stats.discriminability(q) - oracle.discriminability[q]) <= 1e-10);
      CHECK(std::abs(stats.importance(q) - oracle.importance[q]) <= 1e-10);
    }
  }
}

TEST_CASE("statistics invariants on random instances") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    int classes = 2 + static_cast<int>(rng() % 10);
    int clusters = 2 + static_cast<int>(rng() % 20);
    int k_top = 1 + static_cast<int>(rng() % static_cast<unsigned>(classes));
    ClusterStats stats = compute_cluster_stats(to_cooccurrence(random_counts(rng, classes, clusters)), k_top);

    const double log_classes = std::log(static_cast<double>(classes));
    for (int q = 0; q < clusters; ++q) {
      CHECK(stats.class_given_cluster.col(q).sum() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(stats.entropy(q) >= 0.0);
      CHECK(stats.entropy(q) <= log_classes + 1e-12);
      CHECK(stats.discriminability(q) <= 1.0 / k_top + 1e-12);
      double lo = std::min(stats.transferability(q), stats.discriminability(q));
      CHECK(stats.importance(q) >= lo - 1e-12);
      CHECK(stats.importance(q) <= 2.0 * lo + 1e-12);
    }
    CHECK(stats.transferability.sum() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("selection is monotone in k_select") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    int classes = 3 + static_cast<int>(rng() % 6);
    int clusters = 4 + static_cast<int>(rng() % 12);
    ClusterStats stats = compute_cluster_stats(to_cooccurrence(random_counts(rng, classes, clusters)), 2);
    std::vector<int> previous;
    for (int k = 1; k <= clusters; ++k) {
      std::vector<int> selected = importance_and_select(stats, {clusters, k, 2});
      std::set<int> now(selected.begin(), selected.end());
      for (int id : previous) CHECK(now.count(id) == 1);
      previous = selected;
    }
  }
}

TEST_CASE("permuting classes permutes rows but not cluster statistics") {
  std::mt19937_64 rng(43);
  auto counts = random_counts(rng, 6, 9);
  auto permuted = counts;
  std::vector<int> perm = {3, 0, 5, 1, 4, 2};
  for (std::size_t y = 0; y < counts.size(); ++y)
    permuted[static_cast<std::size_t>(perm[y])] = counts[y];

  ClusterStats a = compute_cluster_stats(to_cooccurrence(counts), 2);
  ClusterStats b = compute_cluster_stats(to_cooccurrence(permuted), 2);
  for (int q = 0; q < 9; ++q) {
    CHECK(a.entropy(q) == doctest::Approx(b.entropy(q)).epsilon(1e-12));
    CHECK(a.transferability(q) == doctest::Approx(b.transferability(q)).epsilon(1e-12));
    CHECK(a.discriminability(q) == doctest::Approx(b.discriminability(q)).epsilon(1e-12));
    CHECK(a.importance(q) == doctest::Approx(b.importance(q)).epsilon(1e-12));
    for (int y = 0; y < 6; ++y)
      CHECK(a.class_given_cluster(y, q) ==
            doctest::Approx(b.class_given_cluster(perm[static_cast<std::size_t>(y)], q)).epsilon(1e-12));
  }
}

TEST_CASE("score_selected normalizes each column by its class mean") {
  SUBCASE("counts (2,0) over two classes") {
    ClassCatalog catalog({{0, "a", Split::seen}, {1, "b", Split::unseen}}, "things");
    std::map<int, std::vector<std::string>> responses = {{0, {"1. fuzz\n2. fuzz"}},
                                                         {1, {"1. spot"}}};
    ConceptCorpus corpus = build_corpus(catalog, responses, GenerationConfig{2, 1, 1});
    // records: fuzz fuzz spot -> clusters 0 0 1
    ClusterModel model = make_model({0, 0, 1}, 2);
    SemanticEmbedding s = score_selected(corpus, model, {0});
    CHECK(s.values(0, 0) == doctest::Approx(2.0));
    CHECK(s.values(1, 0) == doctest::Approx(0.0));
    CHECK(s.values.col(0).mean() == doctest::Approx(1.0));
    CHECK(s.column_labels == std::vector<std::string>{"fuzz"});
    CHECK(s.column_sources == std::vector<ColumnSource>{ColumnSource::llm});
  }
  SUBCASE("equal counts give all-ones") {
    ConceptCorpus corpus = toy_corpus();
    ClusterModel model = toy_model();
    SemanticEmbedding s = score_selected(corpus, model, {kFurry});
    for (int y = 0; y < 4; ++y) CHECK(s.values(y, 0) == doctest::Approx(1.0));
  }
  SUBCASE("toy selected columns") {
    SemanticEmbedding s = score_selected(toy_corpus(), toy_model(), {kClaw, kLongNeck});
    Eigen::MatrixXd expected(4, 2);
    expected << 2, 0, 0, 2, 0, 2, 2, 0;
    CHECK(s.values.isApprox(expected));
    CHECK(s.column_labels == std::vector<std::string>{"claw", "long neck"});
  }
  SUBCASE("empty selection") {
    CHECK(throws_code([&] { score_selected(toy_corpus(), toy_model(), {}); },
                      errc::invalid_argument));
  }
  SUBCASE("selected cluster without records") {
    ConceptCorpus corpus = toy_corpus();
    ClusterModel model = make_model(testutil::toy_record_clusters(), 6);  // cluster 5 empty
    CHECK(throws_code([&] { score_selected(corpus, model, {5}); }, errc::degenerate_cluster));
  }
}

TEST_CASE("concat_embeddings") {
  auto make = [](int rows, int cols, ColumnSource source, const std::string& prefix) {
    SemanticEmbedding s;
    s.values = Eigen::MatrixXd::Random(rows, cols);
    for (int y = 0; y < rows; ++y) s.class_names.push_back("class" + std::to_string(y));
    for (int d = 0; d < cols; ++d) {
      s.column_labels.push_back(prefix + std::to_string(d));
      s.column_sources.push_back(source);
    }
    return s;
  };

  SUBCASE("4x3 human with 4x2 llm gives 4x5, human first") {
    SemanticEmbedding h = make(4, 3, ColumnSource::human, "h");
    SemanticEmbedding m = make(4, 2, ColumnSource::llm, "m");
    SemanticEmbedding s = concat_embeddings(h, m);
    CHECK(s.rows() == 4);
    CHECK(s.cols() == 5);
    CHECK(s.values.leftCols(3) == h.values);
    CHECK(s.values.rightCols(2) == m.values);
    CHECK(s.column_labels == std::vector<std::string>{"h0", "h1", "h2", "m0", "m1"});
    CHECK(s.column_sources[0] == ColumnSource::human);
    CHECK(s.column_sources[4] == ColumnSource::llm);
  }
  SUBCASE("empty llm side returns the human embedding unchanged") {
    SemanticEmbedding h = make(4, 3, ColumnSource::human, "h");
    SemanticEmbedding m = make(4, 0, ColumnSource::llm, "m");
    SemanticEmbedding s = concat_embeddings(h, m);
    CHECK(s.values == h.values);
    CHECK(s.column_labels == h.column_labels);
  }
  SUBCASE("row mismatch") {
    SemanticEmbedding h = make(4, 3, ColumnSource::human, "h");
    SemanticEmbedding m = make(5, 2, ColumnSource::llm, "m");
    CHECK(throws_code([&] { concat_embeddings(h, m); }, errc::shape_mismatch));
  }
  SUBCASE("colliding labels are disambiguated deterministically") {
    SemanticEmbedding h = make(2, 1, ColumnSource::human, "furry");
    SemanticEmbedding m = make(2, 1, ColumnSource::llm, "furry");
    SemanticEmbedding s = concat_embeddings(h, m);
    CHECK(s.column_labels == std::vector<std::string>{"furry0", "furry0#2"});
  }
}
