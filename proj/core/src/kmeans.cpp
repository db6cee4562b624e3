#include "infzsl/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "infzsl/error.hpp"

namespace infzsl {
namespace {

// 53-bit uniform double in [0,1); bit-stable across platforms, unlike the
// std distribution adaptors.
double next_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int count_distinct_rows(const Eigen::MatrixXd& points) {
  std::vector<int> order(static_cast<std::size_t>(points.rows()));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    for (int d = 0; d < points.cols(); ++d) {
      if (points(a, d) != points(b, d)) return points(a, d) < points(b, d);
    }
    return false;
  });
  int distinct = points.rows() > 0 ? 1 : 0;
  for (std::size_t i = 1; i < order.size(); ++i)
    if (points.row(order[i]) != points.row(order[i - 1])) ++distinct;
  return distinct;
}

// Nearest centroid by squared distance, ties to the lowest cluster id.
int nearest(const Eigen::MatrixXd& points, int row, const Eigen::MatrixXd& centroids,
            double* dist2_out = nullptr) {
  int best = 0;
  double best_d = (points.row(row) - centroids.row(0)).squaredNorm();
  for (int c = 1; c < centroids.rows(); ++c) {
    double d = (points.row(row) - centroids.row(c)).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  if (dist2_out) *dist2_out = best_d;
  return best;
}

std::vector<int> assign_all(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids) {
  std::vector<int> assignment(static_cast<std::size_t>(points.rows()));
  for (int i = 0; i < points.rows(); ++i)
    assignment[static_cast<std::size_t>(i)] = nearest(points, i, centroids);
  return assignment;
}

// Re-seed every empty cluster with the point farthest from its assigned
// centroid; sole members stay put so the repair cannot create a new hole.
bool repair_empty(const Eigen::MatrixXd& points, Eigen::MatrixXd& centroids,
                  std::vector<int>& assignment) {
  const int k = static_cast<int>(centroids.rows());
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  for (int a : assignment) ++counts[static_cast<std::size_t>(a)];

  bool changed = false;
  for (int c = 0; c < k; ++c) {
    if (counts[static_cast<std::size_t>(c)] != 0) continue;
    int best = -1;
    double best_d = -1.0;
    for (int i = 0; i < points.rows(); ++i) {
      int home = assignment[static_cast<std::size_t>(i)];
      if (counts[static_cast<std::size_t>(home)] <= 1) continue;
      double d = (points.row(i) - centroids.row(home)).squaredNorm();
      if (d > best_d) {
        best_d = d;
        best = i;
      }
    }
    if (best < 0) raise(errc::degenerate_cluster, "cannot repair empty cluster " + std::to_string(c));
    --counts[static_cast<std::size_t>(assignment[static_cast<std::size_t>(best)])];
    assignment[static_cast<std::size_t>(best)] = c;
    counts[static_cast<std::size_t>(c)] = 1;
    centroids.row(c) = points.row(best);
    changed = true;
  }
  return changed;
}

Eigen::MatrixXd recompute_centroids(const Eigen::MatrixXd& points,
                                    const std::vector<int>& assignment, int k) {
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  for (int i = 0; i < points.rows(); ++i) {  // fixed ascending-index reduction order
    int c = assignment[static_cast<std::size_t>(i)];
    sums.row(c) += points.row(i);
    ++counts[static_cast<std::size_t>(c)];
  }
  for (int c = 0; c < k; ++c)
    if (counts[static_cast<std::size_t>(c)] > 0)
      sums.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
  return sums;
}

Eigen::MatrixXd init_plus_plus(const Eigen::MatrixXd& points, int k, std::uint64_t seed) {
  const int n = static_cast<int>(points.rows());
  std::mt19937_64 rng(seed);
  std::vector<int> chosen;
  chosen.reserve(static_cast<std::size_t>(k));

  int first = std::min(n - 1, static_cast<int>(next_unit(rng) * n));
  chosen.push_back(first);

  Eigen::VectorXd d2(n);
  for (int i = 0; i < n; ++i) d2(i) = (points.row(i) - points.row(first)).squaredNorm();

  while (static_cast<int>(chosen.size()) < k) {
    double total = d2.sum();
    int pick = -1;
    if (total > 0.0) {
      double r = next_unit(rng) * total;
      double cumulative = 0.0;
      for (int i = 0; i < n; ++i) {
        if (d2(i) <= 0.0) continue;
        cumulative += d2(i);
        if (cumulative >= r) {
          pick = i;
          break;
        }
      }
      if (pick < 0) {  // r landed past the last positive mass
        for (int i = n - 1; i >= 0; --i)
          if (d2(i) > 0.0) {
            pick = i;
            break;
          }
      }
    } else {
      for (int i = 0; i < n && pick < 0; ++i)
        if (std::find(chosen.begin(), chosen.end(), i) == chosen.end()) pick = i;
    }
    chosen.push_back(pick);
    for (int i = 0; i < n; ++i)
      d2(i) = std::min(d2(i), (points.row(i) - points.row(pick)).squaredNorm());
  }

  Eigen::MatrixXd centroids(k, points.cols());
  for (int c = 0; c < k; ++c) centroids.row(c) = points.row(chosen[static_cast<std::size_t>(c)]);
  return centroids;
}

}  // namespace

int ClusterModel::cluster_of(int concept_index_value) const {
  auto it = by_concept_.find(concept_index_value);
  return it == by_concept_.end() ? -1 : it->second;
}

void ClusterModel::rebuild_lookup() {
  by_concept_.clear();
  by_concept_.reserve(concept_index.size());
  for (std::size_t i = 0; i < concept_index.size(); ++i)
    by_concept_[concept_index[i]] = assignment[i];
}

ClusterModel kmeans_fit(const std::vector<PhraseEmbedding>& embeddings,
                        const KmeansOptions& opts) {
  const int n = static_cast<int>(embeddings.size());
  if (opts.k <= 0) raise(errc::invalid_argument, "k must be positive");
  if (opts.k > n)
    raise(errc::invalid_argument,
          "k=" + std::to_string(opts.k) + " exceeds " + std::to_string(n) + " points");
  if (opts.max_iter < 1) raise(errc::invalid_argument, "max_iter must be >= 1");

  const int dim = static_cast<int>(embeddings[0].vector.size());
  Eigen::MatrixXd points(n, dim);
  for (int i = 0; i < n; ++i) {
    if (embeddings[static_cast<std::size_t>(i)].vector.size() != dim)
      raise(errc::shape_mismatch, "embedding dimensions differ");
    points.row(i) = embeddings[static_cast<std::size_t>(i)].vector.transpose();
  }
  if (opts.normalize) {
    for (int i = 0; i < n; ++i) {
      double norm = points.row(i).norm();
      if (norm > 0.0) points.row(i) /= norm;
    }
  }
  if (count_distinct_rows(points) < opts.k)
    raise(errc::invalid_argument,
          "k=" + std::to_string(opts.k) + " exceeds the number of distinct points");

  Eigen::MatrixXd centroids = init_plus_plus(points, opts.k, opts.seed);

  std::vector<int> assignment;
  std::vector<int> previous;
  int iterations = 0;
  while (true) {
    assignment = assign_all(points, centroids);
    bool repaired = repair_empty(points, centroids, assignment);
    if (!repaired && assignment == previous) break;
    if (iterations >= opts.max_iter) break;
    previous = assignment;
    centroids = recompute_centroids(points, assignment, opts.k);
    ++iterations;
  }

  ClusterModel model;
  model.k = opts.k;
  model.centroids = std::move(centroids);
  model.assignment = std::move(assignment);
  model.iterations = iterations;
  model.normalized = opts.normalize;
  model.concept_index.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    model.concept_index[static_cast<std::size_t>(i)] = embeddings[static_cast<std::size_t>(i)].concept_index;

  model.inertia = 0.0;
  for (int i = 0; i < n; ++i)
    model.inertia +=
        (points.row(i) - model.centroids.row(model.assignment[static_cast<std::size_t>(i)]))
            .squaredNorm();

  model.representative.assign(static_cast<std::size_t>(opts.k), -1);
  Eigen::VectorXd best(opts.k);
  for (int i = 0; i < n; ++i) {
    int c = model.assignment[static_cast<std::size_t>(i)];
    double d = (points.row(i) - model.centroids.row(c)).squaredNorm();
    if (model.representative[static_cast<std::size_t>(c)] < 0 || d < best(c)) {
      best(c) = d;
      model.representative[static_cast<std::size_t>(c)] =
          model.concept_index[static_cast<std::size_t>(i)];
    }
  }

  model.rebuild_lookup();
  return model;
}

std::vector<std::string> cluster_labels(const ClusterModel& model, const ConceptCorpus& corpus) {
  std::vector<std::string> labels;
  labels.reserve(model.representative.size());
  for (int rep : model.representative) {
    if (rep < 0 || rep >= static_cast<int>(corpus.records.size()))
      raise(errc::invalid_argument,
            "representative concept " + std::to_string(rep) + " outside the corpus");
    labels.push_back(corpus.records[static_cast<std::size_t>(rep)].phrase);
  }
  return labels;
}

}  // namespace infzsl
