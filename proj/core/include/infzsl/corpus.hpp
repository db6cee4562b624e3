#pragma once

#include <map>
#include <string>
#include <vector>

#include "infzsl/catalog.hpp"

namespace infzsl {

struct ConceptRecord {
  int class_id = 0;
  std::string phrase;      // normalized: lowercase, trimmed, markers stripped
  int response_index = 0;  // which prompt round produced it, in [0, k_time)
  int ordinal = 0;         // position within that response
};

struct ConceptCorpus {
  ClassCatalog catalog;
  std::vector<ConceptRecord> records;
  GenerationConfig config;

  /// Record count per class id, catalog order.
  std::vector<int> class_record_counts() const;
};

/// Fills the generation prompt template with class name, class type, k_num
/// and k_max.
std::string render_prompt(const std::string& class_name,
                          const std::string& class_type,
                          const GenerationConfig& cfg);

struct ParseResult {
  std::vector<std::string> phrases;
  int dropped_overlength = 0;  // phrases exceeding k_max words
};

/// Parses one raw model response into normalized phrases: list markers
/// stripped, lowercased, terminal punctuation removed. Over-length phrases
/// are dropped, never truncated. Duplicates are kept; occurrence counts are
/// signal for scoring. Throws errc::empty_response when nothing survives.
ParseResult parse_response(const std::string& raw, const GenerationConfig& cfg);

struct CorpusBuildStats {
  int dropped_overlength = 0;
  int empty_responses = 0;
};

/// Assembles the per-class corpus from raw responses. Every class must have
/// exactly cfg.k_time responses (errc::incomplete_corpus otherwise); a class
/// whose phrases were all dropped raises errc::empty_class.
ConceptCorpus build_corpus(const ClassCatalog& catalog,
                           const std::map<int, std::vector<std::string>>& responses,
                           const GenerationConfig& cfg,
                           CorpusBuildStats* stats = nullptr);

}  // namespace infzsl
