#include "infzsl/word_vectors.hpp"

#include <charconv>
#include <fstream>

#include "infzsl/error.hpp"

namespace infzsl {
namespace {

bool parse_double(const std::string& text, double& out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

}  // namespace

int WordVectorTable::find(const std::string& token) const {
  auto it = index.find(token);
  return it == index.end() ? -1 : it->second;
}

WordVectorTable load_vectors(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(errc::io_error, "cannot open vector file '" + path + "'");

  WordVectorTable table;
  std::vector<double> buffer;  // row-major staging; rows unknown up front
  std::string line;
  long line_number = 0;
  int rows = 0;

  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields = split_ws(line);
    if (fields.size() < 2)
      raise(errc::format_error,
            "line " + std::to_string(line_number) + ": expected 'token v1 ... vD'");

    int dim = static_cast<int>(fields.size()) - 1;
    if (table.dimension == 0) {
      table.dimension = dim;
    } else if (dim != table.dimension) {
      raise(errc::format_error, "line " + std::to_string(line_number) + ": dimension " +
                                    std::to_string(dim) + " != established " +
                                    std::to_string(table.dimension));
    }

    std::vector<double> values(static_cast<std::size_t>(dim));
    for (int d = 0; d < dim; ++d) {
      if (!parse_double(fields[static_cast<std::size_t>(d) + 1], values[static_cast<std::size_t>(d)]))
        raise(errc::format_error, "line " + std::to_string(line_number) + ": unreadable float '" +
                                      fields[static_cast<std::size_t>(d) + 1] + "'");
    }

    auto [it, inserted] = table.index.try_emplace(fields[0], rows);
    if (inserted) {
      buffer.insert(buffer.end(), values.begin(), values.end());
      ++rows;
    } else {
      // last occurrence wins
      std::copy(values.begin(), values.end(),
                buffer.begin() + static_cast<std::ptrdiff_t>(it->second) * table.dimension);
      ++table.duplicates_overwritten;
    }
  }

  if (rows == 0) raise(errc::format_error, "vector file '" + path + "' contains no entries");

  table.vectors = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                 Eigen::RowMajor>>(buffer.data(), rows,
                                                                   table.dimension);
  return table;
}

std::vector<std::string> tokenize_for_embedding(const std::string& phrase) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : phrase) {
    if (c == ' ' || c == '\t' || c == '-') {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

PhraseEmbedding embed_phrase(const std::string& phrase, const WordVectorTable& table) {
  PhraseEmbedding result;
  result.vector = Eigen::VectorXd::Zero(table.dimension);
  for (const std::string& token : tokenize_for_embedding(phrase)) {
    int row = table.find(token);
    if (row < 0) continue;  // OOV tokens are skipped, not fatal
    result.vector += table.vectors.row(row).transpose();
    ++result.covered_words;
  }
  if (result.covered_words == 0)
    raise(errc::out_of_vocabulary, "no token of '" + phrase + "' is in the vocabulary");
  result.vector /= static_cast<double>(result.covered_words);
  return result;
}

EmbedCorpusResult embed_corpus(const ConceptCorpus& corpus, const WordVectorTable& table) {
  EmbedCorpusResult result;
  result.embeddings.reserve(corpus.records.size());
  for (std::size_t i = 0; i < corpus.records.size(); ++i) {
    try {
      PhraseEmbedding embedding = embed_phrase(corpus.records[i].phrase, table);
      embedding.concept_index = static_cast<int>(i);
      result.embeddings.push_back(std::move(embedding));
    } catch (const Error& err) {
      if (err.code() != errc::out_of_vocabulary) throw;
      ++result.dropped_oov;
    }
  }
  return result;
}

}  // namespace infzsl
