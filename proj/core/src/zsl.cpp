#include "infzsl/zsl.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/Dense>

#include "infzsl/error.hpp"

namespace infzsl {
namespace {

// Macro average: per-class accuracies first, then their mean, in percent.
double macro_accuracy(const std::vector<int>& labels, const std::vector<int>& predictions) {
  std::map<int, std::pair<int, int>> per_class;  // label -> (correct, total)
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto& [correct, total] = per_class[labels[i]];
    ++total;
    if (predictions[i] == labels[i]) ++correct;
  }
  if (per_class.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& [label, counts] : per_class)
    sum += static_cast<double>(counts.first) / static_cast<double>(counts.second);
  return 100.0 * sum / static_cast<double>(per_class.size());
}

}  // namespace

const char* sample_split_name(SampleSplit split) {
  switch (split) {
    case SampleSplit::train_seen: return "train-seen";
    case SampleSplit::test_seen: return "test-seen";
    case SampleSplit::test_unseen: return "test-unseen";
  }
  return "unknown";
}

SampleSplit parse_sample_split(const std::string& text) {
  if (text == "train-seen") return SampleSplit::train_seen;
  if (text == "test-seen") return SampleSplit::test_seen;
  if (text == "test-unseen") return SampleSplit::test_unseen;
  raise(errc::format_error, "unknown sample split '" + text + "'");
}

FeatureSet FeatureSet::subset(SampleSplit which) const {
  FeatureSet out;
  std::vector<int> keep;
  for (std::size_t i = 0; i < split.size(); ++i)
    if (split[i] == which) keep.push_back(static_cast<int>(i));
  out.x.resize(static_cast<int>(keep.size()), x.cols());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    out.x.row(static_cast<int>(i)) = x.row(keep[i]);
    out.labels.push_back(labels[static_cast<std::size_t>(keep[i])]);
    out.split.push_back(which);
    if (!sample_ids.empty()) out.sample_ids.push_back(sample_ids[static_cast<std::size_t>(keep[i])]);
  }
  return out;
}

FeatureScaler FeatureScaler::fit(const Eigen::MatrixXd& x) {
  if (x.rows() == 0) raise(errc::invalid_argument, "cannot fit a scaler on zero samples");
  FeatureScaler scaler;
  scaler.mean = x.colwise().mean();
  Eigen::MatrixXd centered = x.rowwise() - scaler.mean;
  scaler.scale = (centered.array().square().colwise().mean()).sqrt();
  for (int d = 0; d < scaler.scale.size(); ++d)
    if (scaler.scale(d) == 0.0) scaler.scale(d) = 1.0;
  return scaler;
}

Eigen::MatrixXd FeatureScaler::transform(const Eigen::MatrixXd& x) const {
  if (x.cols() != mean.size()) raise(errc::shape_mismatch, "feature dimension differs from fit");
  return (x.rowwise() - mean).array().rowwise() / scale.array();
}

LinearMap fit_linear_map(const FeatureSet& train, const SemanticEmbedding& s, double ridge) {
  if (ridge < 0.0) raise(errc::invalid_argument, "ridge must be >= 0");
  const int n = train.rows();
  if (n == 0) raise(errc::invalid_argument, "training set is empty");
  if (static_cast<int>(train.labels.size()) != n)
    raise(errc::shape_mismatch, "label count differs from feature rows");

  Eigen::MatrixXd targets(n, s.cols());
  for (int i = 0; i < n; ++i) {
    int label = train.labels[static_cast<std::size_t>(i)];
    if (label < 0 || label >= s.rows())
      raise(errc::shape_mismatch,
            "label " + std::to_string(label) + " has no row in the semantic embedding");
    targets.row(i) = s.values.row(label);
  }

  const int f = static_cast<int>(train.x.cols());
  if (ridge == 0.0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(train.x);
    if (qr.rank() < f)
      raise(errc::singular_system,
            "X'X is singular with ridge=0 (rank " + std::to_string(qr.rank()) + " < " +
                std::to_string(f) + "); use ridge > 0");
  }

  Eigen::MatrixXd gram = train.x.transpose() * train.x;
  gram.diagonal().array() += ridge;
  LinearMap map;
  map.ridge = ridge;
  map.w = gram.ldlt().solve(train.x.transpose() * targets);
  if (!map.w.allFinite()) raise(errc::singular_system, "normal equations produced non-finite weights");
  return map;
}

std::vector<int> predict_classes(const LinearMap& map, const Eigen::MatrixXd& x,
                                 const SemanticEmbedding& s,
                                 const std::vector<int>& candidates) {
  if (candidates.empty()) raise(errc::invalid_argument, "candidate set is empty");
  if (x.cols() != map.w.rows())
    raise(errc::shape_mismatch, "feature dimension " + std::to_string(x.cols()) +
                                    " does not match map rows " + std::to_string(map.w.rows()));

  std::vector<int> ordered = candidates;  // ascending ids make ties deterministic
  std::sort(ordered.begin(), ordered.end());
  std::vector<Eigen::RowVectorXd> unit_embeddings;
  unit_embeddings.reserve(ordered.size());
  for (int y : ordered) {
    if (y < 0 || y >= s.rows())
      raise(errc::invalid_argument, "candidate class " + std::to_string(y) + " out of range");
    double norm = s.values.row(y).norm();
    if (norm == 0.0)
      raise(errc::invalid_argument,
            "candidate class " + std::to_string(y) + " has a zero embedding");
    unit_embeddings.push_back(s.values.row(y) / norm);
  }

  Eigen::MatrixXd predicted = x * map.w;
  std::vector<int> out(static_cast<std::size_t>(x.rows()));
  for (int i = 0; i < predicted.rows(); ++i) {
    double norm = predicted.row(i).norm();
    if (norm == 0.0)
      raise(errc::undefined_cosine, "predicted embedding of sample " + std::to_string(i) +
                                        " has zero norm");
    Eigen::RowVectorXd unit = predicted.row(i) / norm;
    int best = ordered[0];
    double best_score = unit.dot(unit_embeddings[0]);
    for (std::size_t j = 1; j < ordered.size(); ++j) {
      double score = unit.dot(unit_embeddings[j]);
      if (score > best_score) {
        best_score = score;
        best = ordered[j];
      }
    }
    out[static_cast<std::size_t>(i)] = best;
  }
  return out;
}

EvalReport evaluate(const FeatureSet& test, const LinearMap& map, const SemanticEmbedding& s,
                    const ClassCatalog& catalog) {
  FeatureSet unseen = test.subset(SampleSplit::test_unseen);
  if (unseen.rows() == 0) raise(errc::invalid_argument, "test set has no unseen split");

  std::vector<int> unseen_ids = catalog.ids_with(Split::unseen);
  if (unseen_ids.empty()) raise(errc::invalid_argument, "catalog has no unseen classes");
  std::vector<int> all_ids(static_cast<std::size_t>(catalog.size()));
  for (int y = 0; y < catalog.size(); ++y) all_ids[static_cast<std::size_t>(y)] = y;

  EvalReport report;
  report.t1 = macro_accuracy(unseen.labels, predict_classes(map, unseen.x, s, unseen_ids));
  report.u = macro_accuracy(unseen.labels, predict_classes(map, unseen.x, s, all_ids));

  FeatureSet seen = test.subset(SampleSplit::test_seen);
  report.s =
      seen.rows() == 0 ? 0.0 : macro_accuracy(seen.labels, predict_classes(map, seen.x, s, all_ids));
  report.h = (report.s + report.u) > 0.0
                 ? 2.0 * report.s * report.u / (report.s + report.u)
                 : 0.0;
  return report;
}

}  // namespace infzsl
