#pragma once

// Shared fixtures and brute-force oracles for the test suites.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "infzsl/cess.hpp"
#include "infzsl/corpus.hpp"
#include "infzsl/error.hpp"
#include "infzsl/io.hpp"
#include "infzsl/kmeans.hpp"

namespace testutil {

using namespace infzsl;

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> sequence{0};
    auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    dir_ = std::filesystem::temp_directory_path() /
           ("infzsl_" + tag + "_" + std::to_string(stamp) + "_" + std::to_string(sequence++));
    std::filesystem::create_directories(dir_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(dir_, ec);
  }
  const std::filesystem::path& path() const { return dir_; }

 private:
  std::filesystem::path dir_;
};

template <typename Fn>
bool throws_code(Fn&& fn, errc code) {
  try {
    fn();
  } catch (const Error& err) {
    return err.code() == code;
  } catch (...) {
    return false;
  }
  return false;
}

// --- the four-class / five-cluster toy scenario --------------------------

inline ClassCatalog toy_catalog() {
  return ClassCatalog({{0, "fox", Split::seen},
                       {1, "giraffe", Split::seen},
                       {2, "zebra", Split::unseen},
                       {3, "tiger", Split::unseen}},
                      "animals");
}

inline ConceptCorpus toy_corpus() {
  std::map<int, std::vector<std::string>> responses = {
      {0, {"1. Sharp head\n2. Furry\n3. Claw"}},
      {1, {"1. Horn\n2. Furry\n3. Long neck"}},
      {2, {"1. Furry\n2. Long neck"}},
      {3, {"1. Furry\n2. Claw"}}};
  return build_corpus(toy_catalog(), responses, GenerationConfig{3, 3, 1});
}

// Record -> cluster for the toy corpus, clusters numbered by first phrase
// occurrence: 0 sharp head, 1 furry, 2 claw, 3 horn, 4 long neck.
inline const std::vector<int>& toy_record_clusters() {
  static const std::vector<int> clusters = {0, 1, 2, 3, 1, 4, 1, 4, 1, 2};
  return clusters;
}

/// Cluster model with prescribed assignments; representatives are the first
/// record of each cluster. Centroids are placeholders.
inline ClusterModel make_model(const std::vector<int>& record_cluster, int k) {
  ClusterModel model;
  model.k = k;
  model.centroids = Eigen::MatrixXd::Zero(k, 1);
  model.representative.assign(static_cast<std::size_t>(k), -1);
  for (std::size_t i = 0; i < record_cluster.size(); ++i) {
    model.concept_index.push_back(static_cast<int>(i));
    model.assignment.push_back(record_cluster[i]);
    if (model.representative[static_cast<std::size_t>(record_cluster[i])] < 0)
      model.representative[static_cast<std::size_t>(record_cluster[i])] = static_cast<int>(i);
  }
  model.rebuild_lookup();
  return model;
}

inline ClusterModel toy_model() { return make_model(toy_record_clusters(), 5); }

// --- straight-line brute-force recomputation of the selection statistics --

template <typename T = double>
struct OracleStats {
  std::vector<std::vector<T>> p;
  std::vector<T> entropy;
  std::vector<T> transferability;
  std::vector<T> discriminability;
  std::vector<T> importance;
};

/// Independent of the library path on purpose: plain softmax without the
/// max shift, naive loops, sort-based order statistic.
template <typename T = double>
OracleStats<T> oracle_stats(const std::vector<std::vector<T>>& counts, int k_top) {
  const std::size_t classes = counts.size();
  const std::size_t clusters = counts[0].size();

  std::vector<std::vector<T>> o(classes, std::vector<T>(clusters, T(0)));
  for (std::size_t y = 0; y < classes; ++y) {
    T total = T(0);
    for (std::size_t q = 0; q < clusters; ++q) total += counts[y][q];
    for (std::size_t q = 0; q < clusters; ++q) o[y][q] = counts[y][q] / total;
  }

  OracleStats<T> stats;
  stats.p.assign(clusters, std::vector<T>(classes, T(0)));
  stats.entropy.assign(clusters, T(0));
  for (std::size_t q = 0; q < clusters; ++q) {
    T z = T(0);
    for (std::size_t y = 0; y < classes; ++y) z += std::exp(o[y][q]);
    for (std::size_t y = 0; y < classes; ++y) stats.p[q][y] = std::exp(o[y][q]) / z;
    for (std::size_t y = 0; y < classes; ++y)
      if (stats.p[q][y] > T(0)) stats.entropy[q] -= stats.p[q][y] * std::log(stats.p[q][y]);
  }

  T entropy_total = T(0);
  for (std::size_t q = 0; q < clusters; ++q) entropy_total += stats.entropy[q];
  stats.transferability.assign(clusters, T(0));
  for (std::size_t q = 0; q < clusters; ++q)
    stats.transferability[q] = stats.entropy[q] / entropy_total;

  stats.discriminability.assign(clusters, T(0));
  stats.importance.assign(clusters, T(0));
  for (std::size_t q = 0; q < clusters; ++q) {
    std::vector<T> sorted = stats.p[q];
    std::sort(sorted.begin(), sorted.end(), std::greater<T>());
    stats.discriminability[q] = sorted[static_cast<std::size_t>(k_top) - 1];
    T t = stats.transferability[q], d = stats.discriminability[q];
    stats.importance[q] = (t + d) > T(0) ? T(2) * t * d / (t + d) : T(0);
  }
  return stats;
}

/// Random non-degenerate count matrix (every class row has mass).
inline std::vector<std::vector<double>> random_counts(std::mt19937_64& rng, int classes,
                                                      int clusters) {
  std::uniform_int_distribution<int> count(0, 9);
  std::vector<std::vector<double>> counts(static_cast<std::size_t>(classes),
                                          std::vector<double>(static_cast<std::size_t>(clusters)));
  for (int y = 0; y < classes; ++y) {
    for (int q = 0; q < clusters; ++q)
      counts[static_cast<std::size_t>(y)][static_cast<std::size_t>(q)] = count(rng);
    counts[static_cast<std::size_t>(y)][static_cast<std::size_t>(y % clusters)] += 1;
  }
  return counts;
}

inline CooccurrenceMatrix to_cooccurrence(const std::vector<std::vector<double>>& counts) {
  Eigen::MatrixXd o(counts.size(), counts[0].size());
  for (std::size_t y = 0; y < counts.size(); ++y) {
    double total = 0;
    for (double c : counts[y]) total += c;
    for (std::size_t q = 0; q < counts[y].size(); ++q)
      o(static_cast<int>(y), static_cast<int>(q)) = counts[y][q] / total;
  }
  return {std::move(o)};
}

// --- on-disk toy fixture for pipeline and CLI tests -----------------------

/// Writes catalog, replay responses, vectors, features, splits, a human
/// embedding and config.json; returns the config path.
inline std::filesystem::path write_toy_fixture(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "responses" / "0");
  fs::create_directories(dir / "responses" / "1");
  fs::create_directories(dir / "responses" / "2");
  fs::create_directories(dir / "responses" / "3");

  write_text_file(dir / "catalog.tsv",
                  "0\tfox\tseen\n1\tgiraffe\tseen\n2\tzebra\tunseen\n3\ttiger\tunseen\n");
  write_text_file(dir / "responses/0/0.txt", "1. Sharp head\n2. Furry\n3. Claw\n");
  write_text_file(dir / "responses/1/0.txt", "1. Horn\n2. Furry\n3. Long neck\n");
  write_text_file(dir / "responses/2/0.txt", "1. Furry\n2. Long neck\n");
  write_text_file(dir / "responses/3/0.txt", "1. Furry\n2. Claw\n");
  write_text_file(dir / "vectors.txt",
                  "sharp 1 0 0 0 0 0 0\n"
                  "head 0 1 0 0 0 0 0\n"
                  "furry 0 0 1 0 0 0 0\n"
                  "claw 0 0 0 1 0 0 0\n"
                  "horn 0 0 0 0 1 0 0\n"
                  "long 0 0 0 0 0 1 0\n"
                  "neck 0 0 0 0 0 0 1\n");
  write_text_file(dir / "features.tsv",
                  "t0\t0\t1.0\t0.1\t0.0\n"
                  "t1\t0\t0.9\t0.0\t0.1\n"
                  "t2\t1\t0.1\t1.0\t0.0\n"
                  "t3\t1\t0.0\t0.9\t0.1\n"
                  "u0\t2\t0.1\t0.5\t1.0\n"
                  "u1\t2\t0.0\t0.6\t0.9\n"
                  "u2\t3\t0.8\t0.1\t0.7\n"
                  "u3\t3\t0.9\t0.0\t0.8\n"
                  "s0\t0\t1.0\t0.0\t0.05\n"
                  "s1\t1\t0.05\t1.0\t0.0\n");
  write_text_file(dir / "splits.tsv",
                  "t0\ttrain-seen\n"
                  "t1\ttrain-seen\n"
                  "t2\ttrain-seen\n"
                  "t3\ttrain-seen\n"
                  "u0\ttest-unseen\n"
                  "u1\ttest-unseen\n"
                  "u2\ttest-unseen\n"
                  "u3\ttest-unseen\n"
                  "s0\ttest-seen\n"
                  "s1\ttest-seen\n");
  write_text_file(dir / "s_h.tsv",
                  "#source\thuman\thuman\n"
                  "class\tspots\tstripes\n"
                  "fox\t0.2\t0.1\n"
                  "giraffe\t1.5\t0.3\n"
                  "zebra\t0.1\t1.8\n"
                  "tiger\t0.3\t1.2\n");
  write_text_file(dir / "config.json",
                  "{\n"
                  "  \"catalog\": \"catalog.tsv\",\n"
                  "  \"class_type\": \"animals\",\n"
                  "  \"llm\": \"responses\",\n"
                  "  \"vectors\": \"vectors.txt\",\n"
                  "  \"human_embedding\": \"s_h.tsv\",\n"
                  "  \"features\": \"features.tsv\",\n"
                  "  \"splits\": \"splits.tsv\",\n"
                  "  \"k_num\": 3, \"k_max\": 3, \"k_time\": 1,\n"
                  "  \"k_pre\": 5, \"k_select\": 2, \"k_top\": 2,\n"
                  "  \"seed\": 7, \"max_iter\": 50, \"ridge\": 0.1,\n"
                  "  \"out_dir\": \"out\"\n"
                  "}\n");
  return dir / "config.json";
}

}  // namespace testutil
