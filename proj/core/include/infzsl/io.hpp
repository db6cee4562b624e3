#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "infzsl/cess.hpp"
#include "infzsl/corpus.hpp"
#include "infzsl/kmeans.hpp"
#include "infzsl/zsl.hpp"

namespace infzsl {

/// Shortest decimal representation that round-trips the double exactly.
std::string format_double(double value);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

/// FNV-1a 64-bit fingerprint of the file bytes, as 16 hex digits.
std::string checksum_file(const std::filesystem::path& path);

// --- class catalog: class_id <tab> class_name <tab> seen|unseen ---
ClassCatalog load_catalog(const std::filesystem::path& path, const std::string& class_type);

// --- concept corpus: class_id, class_name, split, response_index, ordinal, phrase ---
void save_corpus(const ConceptCorpus& corpus, const std::filesystem::path& path);
/// Rebuilds the catalog from the record lines (class_type is not stored).
ConceptCorpus load_corpus(const std::filesystem::path& path, const GenerationConfig& cfg);

// --- phrase embeddings: concept_index, covered_words, v1..vD ---
void save_embeddings(const std::vector<PhraseEmbedding>& embeddings,
                     const std::filesystem::path& path);
std::vector<PhraseEmbedding> load_embeddings(const std::filesystem::path& path);

// --- cluster model: (concept_index, cluster_id) table + centroid matrix ---
void save_cluster_model(const ClusterModel& model,
                        const std::filesystem::path& assignments_path,
                        const std::filesystem::path& centroids_path);
ClusterModel load_cluster_model(const std::filesystem::path& assignments_path,
                                const std::filesystem::path& centroids_path,
                                const std::vector<PhraseEmbedding>& embeddings);

// --- cluster statistics, sorted by importance descending ---
struct StatsRow {
  int cluster_id = 0;
  std::string label;
  double entropy = 0.0;
  double transferability = 0.0;
  double discriminability = 0.0;
  double importance = 0.0;
  bool selected = false;
};

void save_stats(const ClusterStats& stats, const std::vector<std::string>& labels,
                const std::vector<int>& selected, const std::filesystem::path& path);
std::vector<StatsRow> load_stats(const std::filesystem::path& path);

// --- semantic embedding matrix: header of column labels, class_name column ---
void save_matrix(const SemanticEmbedding& s, const std::filesystem::path& path);
/// Files without a #source line take `default_source` for every column.
SemanticEmbedding load_matrix(const std::filesystem::path& path,
                              ColumnSource default_source = ColumnSource::llm);

// --- features: sample_id, label, f1..fF; splits: sample_id -> split tag ---
void save_features(const FeatureSet& features, const std::filesystem::path& features_path,
                   const std::filesystem::path& splits_path);
FeatureSet load_features(const std::filesystem::path& features_path,
                         const std::filesystem::path& splits_path);

}  // namespace infzsl
