#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "infzsl/word_vectors.hpp"

namespace infzsl {

struct KmeansOptions {
  int k = 1;
  std::uint64_t seed = 0;
  int max_iter = 100;
  /// L2-normalize rows before clustering so Euclidean k-means behaves like
  /// spherical clustering; disable for raw-coordinate geometry.
  bool normalize = true;
};

struct ClusterModel {
  int k = 0;
  Eigen::MatrixXd centroids;       // k x D, in the clustered space
  std::vector<int> concept_index;  // input order; row i belongs to this concept
  std::vector<int> assignment;     // row i -> cluster id in [0, k)
  std::vector<int> representative; // per cluster: concept_index nearest its centroid
  double inertia = 0.0;
  int iterations = 0;
  bool normalized = true;

  /// Cluster of a concept, or -1 when the concept was never clustered.
  int cluster_of(int concept_index_value) const;
  void rebuild_lookup();

 private:
  std::unordered_map<int, int> by_concept_;
};

/// Classical k-means: k-means++ seeding from a deterministic PRNG stream,
/// Lloyd iterations with squared Euclidean distance, stop on assignment
/// fixpoint or max_iter. Nearest-centroid ties go to the lowest cluster id;
/// empty clusters are re-seeded with the point farthest from its assigned
/// centroid. Identical inputs and seed reproduce the model bit for bit.
ClusterModel kmeans_fit(const std::vector<PhraseEmbedding>& embeddings,
                        const KmeansOptions& opts);

/// Representative phrase per cluster (the concept nearest each centroid).
std::vector<std::string> cluster_labels(const ClusterModel& model,
                                        const ConceptCorpus& corpus);

}  // namespace infzsl
