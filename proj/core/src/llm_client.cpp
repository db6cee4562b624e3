#include "infzsl/llm_client.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "infzsl/corpus.hpp"
#include "infzsl/error.hpp"

// keep httplib last: its socket headers leak an _res macro that clashes
// with Eigen internals
#include <httplib.h>
#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace infzsl {

ReplayLlmClient::ReplayLlmClient(std::string directory) : directory_(std::move(directory)) {
  if (!fs::is_directory(directory_))
    raise(errc::io_error, "replay directory '" + directory_ + "' does not exist");
}

std::string ReplayLlmClient::complete(const PromptRequest& request) {
  fs::path path = fs::path(directory_) / std::to_string(request.class_id) /
                  (std::to_string(request.response_index) + ".txt");
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(errc::io_error, "missing replay file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

HttpLlmClient::HttpLlmClient(std::string endpoint_url) : endpoint_(std::move(endpoint_url)) {}

std::string HttpLlmClient::complete(const PromptRequest& request) {
  // Split "http://host[:port]/path" into client target and request path.
  std::size_t scheme = endpoint_.find("://");
  if (scheme == std::string::npos)
    raise(errc::config_error, "endpoint URL '" + endpoint_ + "' has no scheme");
  std::size_t host_begin = scheme + 3;
  std::size_t path_begin = endpoint_.find('/', host_begin);
  std::string base = path_begin == std::string::npos ? endpoint_ : endpoint_.substr(0, path_begin);
  std::string path = path_begin == std::string::npos ? "/" : endpoint_.substr(path_begin);

  httplib::Client client(base);
  client.set_read_timeout(120, 0);
  httplib::Headers headers;
  if (const char* token = std::getenv("INFZSL_LLM_TOKEN"))
    headers.emplace("Authorization", std::string("Bearer ") + token);

  nlohmann::json body = {{"prompt", request.prompt}};
  auto res = client.Post(path, headers, body.dump(), "application/json");
  if (!res)
    raise(errc::io_error, "request to " + endpoint_ + " failed: " + httplib::to_string(res.error()));
  if (res->status != 200)
    raise(errc::io_error,
          "endpoint " + endpoint_ + " returned status " + std::to_string(res->status));

  auto parsed = nlohmann::json::parse(res->body, nullptr, false);
  if (parsed.is_object() && parsed.contains("text") && parsed["text"].is_string())
    return parsed["text"].get<std::string>();
  return res->body;
}

std::unique_ptr<LlmClient> make_llm_client(const std::string& replay_dir_or_url) {
  if (replay_dir_or_url.rfind("http://", 0) == 0 || replay_dir_or_url.rfind("https://", 0) == 0)
    return std::make_unique<HttpLlmClient>(replay_dir_or_url);
  return std::make_unique<ReplayLlmClient>(replay_dir_or_url);
}

std::map<int, std::vector<std::string>> collect_responses(const ClassCatalog& catalog,
                                                          const GenerationConfig& cfg,
                                                          LlmClient& client) {
  cfg.validate();
  std::map<int, std::vector<std::string>> responses;
  for (const ClassEntry& entry : catalog.classes()) {
    std::string prompt = render_prompt(entry.name, catalog.class_type(), cfg);
    std::vector<std::string>& slot = responses[entry.id];
    slot.reserve(static_cast<std::size_t>(cfg.k_time));
    for (int i = 0; i < cfg.k_time; ++i) slot.push_back(client.complete({entry.id, i, prompt}));
  }
  return responses;
}

void archive_responses(const std::map<int, std::vector<std::string>>& responses,
                       const std::string& directory) {
  for (const auto& [class_id, texts] : responses) {
    fs::path class_dir = fs::path(directory) / std::to_string(class_id);
    fs::create_directories(class_dir);
    for (std::size_t i = 0; i < texts.size(); ++i) {
      fs::path path = class_dir / (std::to_string(i) + ".txt");
      std::ofstream out(path, std::ios::binary);
      if (!out) raise(errc::io_error, "cannot write " + path.string());
      out << texts[i];
    }
  }
}

}  // namespace infzsl
