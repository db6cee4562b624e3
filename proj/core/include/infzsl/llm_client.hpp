#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "infzsl/catalog.hpp"

namespace infzsl {

struct PromptRequest {
  int class_id = 0;
  int response_index = 0;
  std::string prompt;
};

/// Transport for prompt completion. Implementations decide where the text
/// comes from; the corpus layer only sees prompt in, text out.
class LlmClient {
 public:
  virtual ~LlmClient() = default;
  virtual std::string complete(const PromptRequest& request) = 0;
};

/// Replays archived responses from "<dir>/<class_id>/<response_index>.txt".
class ReplayLlmClient final : public LlmClient {
 public:
  explicit ReplayLlmClient(std::string directory);
  std::string complete(const PromptRequest& request) override;

 private:
  std::string directory_;
};

/// POSTs {"prompt": ...} to an HTTP endpoint and reads back {"text": ...}
/// (or the raw body when the response is not JSON). A bearer token is taken
/// from the INFZSL_LLM_TOKEN environment variable when set.
class HttpLlmClient final : public LlmClient {
 public:
  explicit HttpLlmClient(std::string endpoint_url);
  std::string complete(const PromptRequest& request) override;

 private:
  std::string endpoint_;
};

/// "http://..." or "https://..." selects the HTTP backend, anything else is
/// treated as a replay directory.
std::unique_ptr<LlmClient> make_llm_client(const std::string& replay_dir_or_url);

/// Issues k_time prompts per class and returns responses keyed by class id,
/// ordered by (class_id, response_index).
std::map<int, std::vector<std::string>> collect_responses(const ClassCatalog& catalog,
                                                          const GenerationConfig& cfg,
                                                          LlmClient& client);

/// Writes responses in the replay layout "<dir>/<class_id>/<response_index>.txt".
void archive_responses(const std::map<int, std::vector<std::string>>& responses,
                       const std::string& directory);

}  // namespace infzsl
