#include "infzsl/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace infzsl {
namespace {

std::string trim(const std::string& s) {
  std::size_t begin = 0, end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

// "1. foo", "3) foo", "- foo", "* foo", "• foo" -> "foo". Markers are only
// stripped when followed by whitespace so phrases like "3-toed foot" survive.
std::string strip_list_marker(const std::string& s) {
  std::size_t i = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
  if (i > 0 && i < s.size() && (s[i] == '.' || s[i] == ')')) {
    std::size_t after = i + 1;
    if (after == s.size() || std::isspace(static_cast<unsigned char>(s[after])))
      return trim(s.substr(after));
  }
  if (!s.empty() && (s[0] == '-' || s[0] == '*')) {
    if (s.size() == 1 || std::isspace(static_cast<unsigned char>(s[1])))
      return trim(s.substr(1));
  }
  if (s.size() >= 3 && s.compare(0, 3, "\xe2\x80\xa2") == 0)  // U+2022 bullet
    return trim(s.substr(3));
  return s;
}

std::string strip_terminal_punctuation(std::string s) {
  static const std::string punct = ".,;:!?";
  while (!s.empty() && punct.find(s.back()) != std::string::npos) s.pop_back();
  return trim(s);
}

std::string to_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

int word_count(const std::string& phrase) {
  std::istringstream in(phrase);
  std::string word;
  int n = 0;
  while (in >> word) ++n;
  return n;
}

ParseResult parse_lines(const std::string& raw, const GenerationConfig& cfg) {
  ParseResult result;
  std::istringstream in(raw);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string phrase = strip_terminal_punctuation(to_lower(strip_list_marker(trim(line))));
    if (phrase.empty()) continue;
    if (word_count(phrase) > cfg.k_max) {
      ++result.dropped_overlength;
      continue;
    }
    result.phrases.push_back(std::move(phrase));
  }
  return result;
}

}  // namespace

std::vector<int> ConceptCorpus::class_record_counts() const {
  std::vector<int> counts(static_cast<std::size_t>(catalog.size()), 0);
  for (const ConceptRecord& record : records)
    ++counts[static_cast<std::size_t>(record.class_id)];
  return counts;
}

std::string render_prompt(const std::string& class_name, const std::string& class_type,
                          const GenerationConfig& cfg) {
  if (class_name.empty()) raise(errc::invalid_argument, "class_name is empty");
  if (class_type.empty()) raise(errc::invalid_argument, "class_type is empty");
  cfg.validate();
  std::ostringstream out;
  out << "Please list " << cfg.k_num << " simple visual concepts to help a person identify the "
      << class_type << ": " << class_name << " in images, with each concept not exceeding "
      << cfg.k_max << " words.";
  return out.str();
}

ParseResult parse_response(const std::string& raw, const GenerationConfig& cfg) {
  cfg.validate();
  ParseResult result = parse_lines(raw, cfg);
  if (result.phrases.empty())
    raise(errc::empty_response, "response yielded no valid phrases (" +
                                    std::to_string(result.dropped_overlength) +
                                    " dropped as over-length)");
  return result;
}

ConceptCorpus build_corpus(const ClassCatalog& catalog,
                           const std::map<int, std::vector<std::string>>& responses,
                           const GenerationConfig& cfg, CorpusBuildStats* stats) {
  cfg.validate();
  CorpusBuildStats local;
  ConceptCorpus corpus;
  corpus.catalog = catalog;
  corpus.config = cfg;

  for (const ClassEntry& entry : catalog.classes()) {
    auto it = responses.find(entry.id);
    if (it == responses.end() || it->second.empty())
      raise(errc::incomplete_corpus, "class '" + entry.name + "' has no responses");
    if (static_cast<int>(it->second.size()) != cfg.k_time)
      raise(errc::incomplete_corpus,
            "class '" + entry.name + "' has " + std::to_string(it->second.size()) +
                " responses, expected k_time=" + std::to_string(cfg.k_time));

    std::size_t before = corpus.records.size();
    for (int response_index = 0; response_index < cfg.k_time; ++response_index) {
      ParseResult parsed = parse_lines(it->second[static_cast<std::size_t>(response_index)], cfg);
      local.dropped_overlength += parsed.dropped_overlength;
      if (parsed.phrases.empty()) ++local.empty_responses;
      int ordinal = 0;
      for (std::string& phrase : parsed.phrases)
        corpus.records.push_back({entry.id, std::move(phrase), response_index, ordinal++});
    }
    if (corpus.records.size() == before)
      raise(errc::empty_class, "every phrase of class '" + entry.name + "' was dropped");
  }

  if (stats) *stats = local;
  return corpus;
}

}  // namespace infzsl
