#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "infzsl/corpus.hpp"
#include "infzsl/kmeans.hpp"

namespace infzsl {

/// Class-cluster co-occurrence fractions: row y holds the share of class y's
/// clustered records landing in each cluster, so rows sum to 1.
struct CooccurrenceMatrix {
  Eigen::MatrixXd o;  // |Y| x k
};

CooccurrenceMatrix cooccurrence(const ConceptCorpus& corpus, const ClusterModel& model);

/// Softmax over classes per cluster column (max-subtracted); columns sum to 1.
Eigen::MatrixXd class_given_cluster(const CooccurrenceMatrix& co);

/// Shannon entropy in nats with the 0*ln(0) = 0 convention.
double concept_entropy(const Eigen::VectorXd& p);

/// Entropies normalized to sum to 1 across clusters.
/// Throws errc::degenerate_stats when every entropy is zero.
Eigen::VectorXd transferability(const Eigen::VectorXd& entropies);

/// The k_top-th largest probability (1-indexed) of the distribution.
double discriminability(const Eigen::VectorXd& p, int k_top);

/// Harmonic mean with the 0/0 case defined as 0.
double harmonic_importance(double tran, double dis);

struct SelectionConfig {
  int k_pre = 1;
  int k_select = 1;
  int k_top = 1;

  void validate(int class_count) const;
};

/// Per-cluster statistics for all k clusters of a model.
struct ClusterStats {
  Eigen::MatrixXd class_given_cluster;  // |Y| x k
  Eigen::VectorXd entropy;              // k
  Eigen::VectorXd transferability;      // k
  Eigen::VectorXd discriminability;     // k
  Eigen::VectorXd importance;           // k

  int cluster_count() const { return static_cast<int>(importance.size()); }
};

ClusterStats compute_cluster_stats(const CooccurrenceMatrix& co, int k_top);

/// All cluster ids ranked by importance descending, ties to the lower id.
std::vector<int> importance_order(const ClusterStats& stats);

/// First cfg.k_select ids of the importance ranking.
std::vector<int> importance_and_select(const ClusterStats& stats, const SelectionConfig& cfg);

enum class ColumnSource { human, llm };

const char* column_source_name(ColumnSource source);
ColumnSource parse_column_source(const std::string& text);

/// Class x concept-dimension score matrix with labeled, provenance-tagged
/// columns. Row order always matches the catalog.
struct SemanticEmbedding {
  Eigen::MatrixXd values;  // |Y| x D_sem
  std::vector<std::string> class_names;
  std::vector<std::string> column_labels;
  std::vector<ColumnSource> column_sources;

  int rows() const { return static_cast<int>(values.rows()); }
  int cols() const { return static_cast<int>(values.cols()); }
};

/// Occurrence counts of the selected clusters per class, each column divided
/// by its cross-class mean. Column order follows `selected`; labels are the
/// clusters' representative phrases.
SemanticEmbedding score_selected(const ConceptCorpus& corpus, const ClusterModel& model,
                                 const std::vector<int>& selected);

/// Column-wise concatenation, human columns first.
SemanticEmbedding concat_embeddings(const SemanticEmbedding& human,
                                    const SemanticEmbedding& llm);

}  // namespace infzsl
