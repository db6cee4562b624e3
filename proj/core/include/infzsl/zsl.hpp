#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "infzsl/catalog.hpp"
#include "infzsl/cess.hpp"

namespace infzsl {

enum class SampleSplit { train_seen, test_seen, test_unseen };

const char* sample_split_name(SampleSplit split);
SampleSplit parse_sample_split(const std::string& text);

struct FeatureSet {
  Eigen::MatrixXd x;  // n x F
  std::vector<int> labels;
  std::vector<SampleSplit> split;
  std::vector<std::string> sample_ids;

  int rows() const { return static_cast<int>(x.rows()); }
  FeatureSet subset(SampleSplit which) const;
};

struct LinearMap {
  Eigen::MatrixXd w;  // F x D_sem
  double ridge = 0.0;
};

/// Per-dimension z-scoring with statistics frozen at fit time. Constant
/// dimensions get unit scale so they map to zero.
struct FeatureScaler {
  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd scale;

  static FeatureScaler fit(const Eigen::MatrixXd& x);
  Eigen::MatrixXd transform(const Eigen::MatrixXd& x) const;
};

/// Ridge regression from features to the class-embedding targets of each
/// sample's label, solved via the normal equations (X'X + ridge*I) W = X'T.
/// A rank-deficient system with ridge == 0 raises errc::singular_system.
LinearMap fit_linear_map(const FeatureSet& train, const SemanticEmbedding& s, double ridge);

/// Cosine argmax of x*W against the candidate class embeddings; score ties
/// resolve to the smallest class id.
std::vector<int> predict_classes(const LinearMap& map, const Eigen::MatrixXd& x,
                                 const SemanticEmbedding& s,
                                 const std::vector<int>& candidates);

struct EvalReport {
  double t1 = 0.0;  // ZSL unseen top-1, percent
  double u = 0.0;   // GZSL unseen accuracy, percent
  double s = 0.0;   // GZSL seen accuracy, percent
  double h = 0.0;   // harmonic mean of u and s
};

/// Per-class (macro) top-1 accuracies: T1 restricts candidates to unseen
/// classes, U and S use the full candidate set.
EvalReport evaluate(const FeatureSet& test, const LinearMap& map,
                    const SemanticEmbedding& s, const ClassCatalog& catalog);

}  // namespace infzsl
