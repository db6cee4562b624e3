#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "infzsl/corpus.hpp"

namespace infzsl {

/// Pretrained word vectors loaded from a GloVe-style text table
/// ("token v1 v2 ... vD" per line). Immutable after load.
struct WordVectorTable {
  int dimension = 0;
  Eigen::MatrixXd vectors;                     // one row per token
  std::unordered_map<std::string, int> index;  // token -> row
  int duplicates_overwritten = 0;

  std::size_t size() const { return index.size(); }
  /// Row of the token, or -1 when out of vocabulary.
  int find(const std::string& token) const;
};

/// Dimension is inferred from the first line; later lines must match.
/// Duplicate tokens overwrite (last wins) and are tallied.
WordVectorTable load_vectors(const std::string& path);

struct PhraseEmbedding {
  int concept_index = -1;  // position in ConceptCorpus::records
  Eigen::VectorXd vector;
  int covered_words = 0;   // in-vocabulary tokens that contributed
};

/// Splits on whitespace and hyphens.
std::vector<std::string> tokenize_for_embedding(const std::string& phrase);

/// Mean of the in-vocabulary word vectors; a single covered word returns its
/// vector exactly. Throws errc::out_of_vocabulary when no token is covered.
PhraseEmbedding embed_phrase(const std::string& phrase, const WordVectorTable& table);

struct EmbedCorpusResult {
  std::vector<PhraseEmbedding> embeddings;  // corpus order, concept_index set
  int dropped_oov = 0;                      // fully out-of-vocabulary concepts
};

EmbedCorpusResult embed_corpus(const ConceptCorpus& corpus, const WordVectorTable& table);

}  // namespace infzsl
