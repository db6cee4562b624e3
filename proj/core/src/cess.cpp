#include "infzsl/cess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "infzsl/error.hpp"

namespace infzsl {
namespace {

// Occurrence counts of corpus records per (class, cluster). Records without
// an assignment (e.g. fully out-of-vocabulary concepts dropped upstream) do
// not contribute.
Eigen::MatrixXd count_occurrences(const ConceptCorpus& corpus, const ClusterModel& model) {
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(corpus.catalog.size(), model.k);
  for (std::size_t i = 0; i < corpus.records.size(); ++i) {
    int cluster = model.cluster_of(static_cast<int>(i));
    if (cluster < 0) continue;
    if (cluster >= model.k)
      raise(errc::invalid_argument, "assignment references cluster " + std::to_string(cluster));
    counts(corpus.records[i].class_id, cluster) += 1.0;
  }
  return counts;
}

void dedup_labels(std::vector<std::string>& labels) {
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    std::string candidate = labels[i];
    int suffix = 2;
    while (!seen.insert(candidate).second)
      candidate = labels[i] + "#" + std::to_string(suffix++);
    labels[i] = candidate;
  }
}

}  // namespace

CooccurrenceMatrix cooccurrence(const ConceptCorpus& corpus, const ClusterModel& model) {
  if (corpus.catalog.empty()) raise(errc::invalid_argument, "corpus has no classes");
  Eigen::MatrixXd counts = count_occurrences(corpus, model);
  for (int y = 0; y < counts.rows(); ++y) {
    double total = counts.row(y).sum();
    if (total <= 0.0)
      raise(errc::degenerate_class,
            "class '" + corpus.catalog.at(y).name + "' has no clustered records");
    counts.row(y) /= total;
  }
  return {std::move(counts)};
}

Eigen::MatrixXd class_given_cluster(const CooccurrenceMatrix& co) {
  Eigen::MatrixXd p(co.o.rows(), co.o.cols());
  for (int q = 0; q < co.o.cols(); ++q) {
    double shift = co.o.col(q).maxCoeff();
    Eigen::VectorXd e = (co.o.col(q).array() - shift).exp();
    p.col(q) = e / e.sum();
  }
  return p;
}

double concept_entropy(const Eigen::VectorXd& p) {
  double h = 0.0;
  for (int y = 0; y < p.size(); ++y)
    if (p(y) > 0.0) h -= p(y) * std::log(p(y));
  return h;
}

Eigen::VectorXd transferability(const Eigen::VectorXd& entropies) {
  double total = entropies.sum();
  if (total <= 0.0) raise(errc::degenerate_stats, "all concept entropies are zero");
  return entropies / total;
}

double discriminability(const Eigen::VectorXd& p, int k_top) {
  if (k_top < 1 || k_top > p.size())
    raise(errc::invalid_argument, "k_top=" + std::to_string(k_top) + " outside [1, " +
                                      std::to_string(p.size()) + "]");
  std::vector<double> sorted(p.data(), p.data() + p.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  return sorted[static_cast<std::size_t>(k_top) - 1];
}

double harmonic_importance(double tran, double dis) {
  double denom = tran + dis;
  if (denom <= 0.0) return 0.0;
  return 2.0 * tran * dis / denom;
}

void SelectionConfig::validate(int class_count) const {
  if (k_pre < 1) raise(errc::invalid_argument, "k_pre must be >= 1");
  if (k_select < 1 || k_select > k_pre)
    raise(errc::invalid_argument, "k_select must lie in [1, k_pre]");
  if (k_top < 1 || k_top > class_count)
    raise(errc::invalid_argument, "k_top must lie in [1, class count]");
}

ClusterStats compute_cluster_stats(const CooccurrenceMatrix& co, int k_top) {
  const int k = static_cast<int>(co.o.cols());
  ClusterStats stats;
  stats.class_given_cluster = class_given_cluster(co);
  stats.entropy.resize(k);
  stats.discriminability.resize(k);
  for (int q = 0; q < k; ++q) {
    stats.entropy(q) = concept_entropy(stats.class_given_cluster.col(q));
    stats.discriminability(q) = discriminability(stats.class_given_cluster.col(q), k_top);
  }
  stats.transferability = transferability(stats.entropy);
  stats.importance.resize(k);
  for (int q = 0; q < k; ++q)
    stats.importance(q) = harmonic_importance(stats.transferability(q), stats.discriminability(q));
  return stats;
}

std::vector<int> importance_order(const ClusterStats& stats) {
  std::vector<int> order(static_cast<std::size_t>(stats.cluster_count()));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (stats.importance(a) != stats.importance(b))
      return stats.importance(a) > stats.importance(b);
    return a < b;
  });
  return order;
}

std::vector<int> importance_and_select(const ClusterStats& stats, const SelectionConfig& cfg) {
  if (cfg.k_select > stats.cluster_count())
    raise(errc::invalid_argument, "k_select=" + std::to_string(cfg.k_select) + " exceeds " +
                                      std::to_string(stats.cluster_count()) + " clusters");
  if (cfg.k_select < 1) raise(errc::invalid_argument, "k_select must be >= 1");
  std::vector<int> order = importance_order(stats);
  order.resize(static_cast<std::size_t>(cfg.k_select));
  return order;
}

const char* column_source_name(ColumnSource source) {
  return source == ColumnSource::human ? "human" : "llm";
}

ColumnSource parse_column_source(const std::string& text) {
  if (text == "human") return ColumnSource::human;
  if (text == "llm") return ColumnSource::llm;
  raise(errc::format_error, "unknown column source '" + text + "'");
}

SemanticEmbedding score_selected(const ConceptCorpus& corpus, const ClusterModel& model,
                                 const std::vector<int>& selected) {
  if (selected.empty()) raise(errc::invalid_argument, "selection is empty");
  Eigen::MatrixXd counts = count_occurrences(corpus, model);

  SemanticEmbedding s;
  s.class_names = corpus.catalog.names();
  s.values.resize(corpus.catalog.size(), static_cast<int>(selected.size()));
  for (std::size_t j = 0; j < selected.size(); ++j) {
    int q = selected[j];
    if (q < 0 || q >= model.k)
      raise(errc::invalid_argument, "selected cluster " + std::to_string(q) + " out of range");
    double mean = counts.col(q).mean();
    if (mean <= 0.0)
      raise(errc::degenerate_cluster,
            "selected cluster " + std::to_string(q) + " has no records");
    s.values.col(static_cast<int>(j)) = counts.col(q) / mean;

    int rep = model.representative[static_cast<std::size_t>(q)];
    if (rep < 0 || rep >= static_cast<int>(corpus.records.size()))
      raise(errc::invalid_argument,
            "cluster " + std::to_string(q) + " has no representative concept");
    s.column_labels.push_back(corpus.records[static_cast<std::size_t>(rep)].phrase);
    s.column_sources.push_back(ColumnSource::llm);
  }
  dedup_labels(s.column_labels);
  return s;
}

SemanticEmbedding concat_embeddings(const SemanticEmbedding& human,
                                    const SemanticEmbedding& llm) {
  if (human.rows() != llm.rows())
    raise(errc::shape_mismatch, "row counts differ: " + std::to_string(human.rows()) + " vs " +
                                    std::to_string(llm.rows()));
  if (human.class_names != llm.class_names)
    raise(errc::shape_mismatch, "class row order differs between embeddings");
  if (llm.cols() == 0) return human;
  if (human.cols() == 0) return llm;

  SemanticEmbedding s;
  s.class_names = human.class_names;
  s.values.resize(human.rows(), human.cols() + llm.cols());
  s.values.leftCols(human.cols()) = human.values;
  s.values.rightCols(llm.cols()) = llm.values;
  s.column_labels = human.column_labels;
  s.column_labels.insert(s.column_labels.end(), llm.column_labels.begin(),
                         llm.column_labels.end());
  s.column_sources = human.column_sources;
  s.column_sources.insert(s.column_sources.end(), llm.column_sources.begin(),
                          llm.column_sources.end());
  dedup_labels(s.column_labels);
  return s;
}

}  // namespace infzsl
