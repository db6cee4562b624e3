#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "infzsl/catalog.hpp"
#include "infzsl/cess.hpp"
#include "infzsl/zsl.hpp"

namespace infzsl {

struct PipelineConfig {
  std::filesystem::path catalog;
  std::string class_type;
  std::string llm;  // replay directory or http endpoint URL
  std::filesystem::path vectors;
  std::filesystem::path human_embedding;  // optional; empty skips concatenation
  std::filesystem::path features;
  std::filesystem::path splits;
  GenerationConfig gen;
  SelectionConfig sel;
  std::uint64_t seed = 0;
  int max_iter = 100;
  bool normalize = true;
  double ridge = 1.0;
  std::filesystem::path out_dir;

  /// Raises errc::config_error naming the offending field.
  void validate() const;
};

/// Reads a JSON config; relative paths resolve against the config file's
/// directory.
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

/// Hyper-parameter presets for the usual benchmark datasets
/// ("awa2", "cub", "sun").
struct DatasetPreset {
  GenerationConfig gen;
  SelectionConfig sel;
};
const std::map<std::string, DatasetPreset>& dataset_presets();

struct StageRecord {
  std::string name;
  double millis = 0.0;
  std::vector<std::pair<std::string, std::string>> outputs;  // file -> checksum
  std::vector<std::pair<std::string, long>> warnings;        // tally -> count
};

struct RunManifest {
  std::vector<StageRecord> stages;
  std::vector<std::string> selected_labels;  // importance order
  EvalReport report;

  /// Flattened output checksums across stages.
  std::map<std::string, std::string> checksums() const;
};

/// Runs ingest -> embed -> cluster -> select -> score -> concat -> eval ->
/// heatmap, persisting every stage artifact under cfg.out_dir. Stage errors
/// abort with the stage name prefixed to the underlying message. Reruns with
/// identical inputs and seed reproduce identical artifacts.
RunManifest run_pipeline(const PipelineConfig& cfg);

void save_manifest(const RunManifest& manifest, const std::filesystem::path& path);

}  // namespace infzsl
