#include "infzsl/pipeline.hpp"

#include <chrono>
#include <fstream>

#include <nlohmann/json.hpp>

#include "infzsl/heatmap.hpp"
#include "infzsl/io.hpp"
#include "infzsl/llm_client.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace infzsl {
namespace {

void require_file(const fs::path& path, const char* field) {
  if (path.empty()) raise(errc::config_error, std::string(field) + ": path not set");
  if (!fs::exists(path))
    raise(errc::config_error, std::string(field) + ": '" + path.string() + "' does not exist");
}

class StageTimer {
 public:
  explicit StageTimer(StageRecord& record)
      : record_(record), start_(std::chrono::steady_clock::now()) {}
  ~StageTimer() {
    auto elapsed = std::chrono::steady_clock::now() - start_;
    record_.millis = std::chrono::duration<double, std::milli>(elapsed).count();
  }

 private:
  StageRecord& record_;
  std::chrono::steady_clock::time_point start_;
};

// Runs one stage and rewrites any error with the stage name up front.
template <typename Fn>
void run_stage(std::vector<StageRecord>& stages, const std::string& name, Fn&& body) {
  StageRecord record;
  record.name = name;
  try {
    StageTimer timer(record);
    body(record);
  } catch (const Error& err) {
    throw Error(err.code(), "stage " + name + ": " + err.message());
  } catch (const std::exception& err) {
    raise(errc::io_error, "stage " + name + ": " + err.what());
  }
  stages.push_back(std::move(record));
}

void add_output(StageRecord& record, const fs::path& out_dir, const std::string& relative) {
  record.outputs.emplace_back(relative, checksum_file(out_dir / relative));
}

}  // namespace

void PipelineConfig::validate() const {
  require_file(catalog, "catalog");
  require_file(vectors, "vectors");
  if (llm.empty()) raise(errc::config_error, "llm: backend not set");
  if (llm.rfind("http://", 0) != 0 && llm.rfind("https://", 0) != 0)
    require_file(llm, "llm");
  if (!human_embedding.empty()) require_file(human_embedding, "human_embedding");
  require_file(features, "features");
  require_file(splits, "splits");
  if (out_dir.empty()) raise(errc::config_error, "out_dir: path not set");
  gen.validate();
  if (sel.k_pre < 1) raise(errc::config_error, "k_pre: must be >= 1");
  if (sel.k_select < 1 || sel.k_select > sel.k_pre)
    raise(errc::config_error, "k_select: must lie in [1, k_pre]");
  if (sel.k_top < 1) raise(errc::config_error, "k_top: must be >= 1");
  if (max_iter < 1) raise(errc::config_error, "max_iter: must be >= 1");
  if (ridge < 0.0) raise(errc::config_error, "ridge: must be >= 0");
}

PipelineConfig load_pipeline_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) raise(errc::config_error, "cannot open config '" + path.string() + "'");
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded())
    raise(errc::config_error, "config '" + path.string() + "' is not valid JSON");

  const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");
  auto resolve = [&](const std::string& key) -> fs::path {
    if (!doc.contains(key)) return {};
    std::string value = doc.at(key).get<std::string>();
    if (value.empty()) return {};
    fs::path p(value);
    return p.is_absolute() ? p : base / p;
  };
  auto number = [&](const char* key, auto fallback) {
    using T = decltype(fallback);
    return doc.contains(key) ? doc.at(key).get<T>() : fallback;
  };

  PipelineConfig cfg;
  cfg.catalog = resolve("catalog");
  cfg.class_type = doc.value("class_type", std::string{});
  if (doc.contains("llm")) {
    std::string llm = doc.at("llm").get<std::string>();
    cfg.llm = (llm.rfind("http://", 0) == 0 || llm.rfind("https://", 0) == 0)
                  ? llm
                  : (fs::path(llm).is_absolute() ? llm : (base / llm).string());
  }
  cfg.vectors = resolve("vectors");
  cfg.human_embedding = resolve("human_embedding");
  cfg.features = resolve("features");
  cfg.splits = resolve("splits");
  cfg.gen.k_num = number("k_num", cfg.gen.k_num);
  cfg.gen.k_max = number("k_max", cfg.gen.k_max);
  cfg.gen.k_time = number("k_time", cfg.gen.k_time);
  cfg.sel.k_pre = number("k_pre", cfg.sel.k_pre);
  cfg.sel.k_select = number("k_select", cfg.sel.k_select);
  cfg.sel.k_top = number("k_top", cfg.sel.k_top);
  cfg.seed = number("seed", cfg.seed);
  cfg.max_iter = number("max_iter", cfg.max_iter);
  cfg.normalize = number("normalize", cfg.normalize);
  cfg.ridge = number("ridge", cfg.ridge);
  cfg.out_dir = resolve("out_dir");
  return cfg;
}

const std::map<std::string, DatasetPreset>& dataset_presets() {
  static const std::map<std::string, DatasetPreset> presets = {
      {"awa2", {{100, 3, 5}, {200, 60, 3}}},
      {"cub", {{100, 3, 5}, {500, 200, 10}}},
      {"sun", {{100, 3, 1}, {200, 100, 10}}},
  };
  return presets;
}

std::map<std::string, std::string> RunManifest::checksums() const {
  std::map<std::string, std::string> out;
  for (const StageRecord& stage : stages)
    for (const auto& [file, checksum] : stage.outputs) out[file] = checksum;
  return out;
}

RunManifest run_pipeline(const PipelineConfig& cfg) {
  cfg.validate();
  fs::create_directories(cfg.out_dir);

  RunManifest manifest;
  ClassCatalog catalog;
  ConceptCorpus corpus;
  EmbedCorpusResult embedded;
  ClusterModel model;
  ClusterStats stats;
  std::vector<int> selected;
  SemanticEmbedding s_m;
  SemanticEmbedding s;

  run_stage(manifest.stages, "ingest", [&](StageRecord& record) {
    catalog = load_catalog(cfg.catalog, cfg.class_type);
    cfg.sel.validate(catalog.size());
    std::unique_ptr<LlmClient> client = make_llm_client(cfg.llm);
    auto responses = collect_responses(catalog, cfg.gen, *client);
    if (cfg.llm.rfind("http", 0) == 0) {
      archive_responses(responses, (cfg.out_dir / "responses").string());
    }
    CorpusBuildStats build_stats;
    corpus = build_corpus(catalog, responses, cfg.gen, &build_stats);
    save_corpus(corpus, cfg.out_dir / "corpus.tsv");
    add_output(record, cfg.out_dir, "corpus.tsv");
    record.warnings.emplace_back("dropped_overlength", build_stats.dropped_overlength);
    record.warnings.emplace_back("empty_responses", build_stats.empty_responses);
  });

  run_stage(manifest.stages, "embed", [&](StageRecord& record) {
    WordVectorTable table = load_vectors(cfg.vectors.string());
    embedded = embed_corpus(corpus, table);
    if (embedded.embeddings.empty())
      raise(errc::out_of_vocabulary, "no concept phrase has an in-vocabulary token");
    save_embeddings(embedded.embeddings, cfg.out_dir / "embeddings.tsv");
    add_output(record, cfg.out_dir, "embeddings.tsv");
    record.warnings.emplace_back("dropped_oov", embedded.dropped_oov);
    record.warnings.emplace_back("duplicate_vector_tokens", table.duplicates_overwritten);
  });

  run_stage(manifest.stages, "cluster", [&](StageRecord& record) {
    KmeansOptions opts;
    opts.k = cfg.sel.k_pre;
    opts.seed = cfg.seed;
    opts.max_iter = cfg.max_iter;
    opts.normalize = cfg.normalize;
    model = kmeans_fit(embedded.embeddings, opts);
    save_cluster_model(model, cfg.out_dir / "assignments.tsv", cfg.out_dir / "centroids.tsv");
    add_output(record, cfg.out_dir, "assignments.tsv");
    add_output(record, cfg.out_dir, "centroids.tsv");
  });

  run_stage(manifest.stages, "select", [&](StageRecord& record) {
    CooccurrenceMatrix co = cooccurrence(corpus, model);
    stats = compute_cluster_stats(co, cfg.sel.k_top);
    selected = importance_and_select(stats, cfg.sel);
    std::vector<std::string> labels = cluster_labels(model, corpus);
    for (int q : selected) manifest.selected_labels.push_back(labels[static_cast<std::size_t>(q)]);
    save_stats(stats, labels, selected, cfg.out_dir / "stats.tsv");
    add_output(record, cfg.out_dir, "stats.tsv");
  });

  run_stage(manifest.stages, "score", [&](StageRecord& record) {
    s_m = score_selected(corpus, model, selected);
    save_matrix(s_m, cfg.out_dir / "s_m.tsv");
    add_output(record, cfg.out_dir, "s_m.tsv");
  });

  run_stage(manifest.stages, "concat", [&](StageRecord& record) {
    s = cfg.human_embedding.empty()
            ? s_m
            : concat_embeddings(load_matrix(cfg.human_embedding, ColumnSource::human), s_m);
    save_matrix(s, cfg.out_dir / "s.tsv");
    add_output(record, cfg.out_dir, "s.tsv");
  });

  run_stage(manifest.stages, "eval", [&](StageRecord& record) {
    FeatureSet all = load_features(cfg.features, cfg.splits);
    FeatureSet train = all.subset(SampleSplit::train_seen);
    if (train.rows() == 0) raise(errc::invalid_argument, "no train-seen samples");
    FeatureScaler scaler = FeatureScaler::fit(train.x);
    train.x = scaler.transform(train.x);
    LinearMap map = fit_linear_map(train, s, cfg.ridge);
    FeatureSet test = all;
    test.x = scaler.transform(test.x);
    manifest.report = evaluate(test, map, s, catalog);

    json report = {{"T1", manifest.report.t1},
                   {"U", manifest.report.u},
                   {"S", manifest.report.s},
                   {"H", manifest.report.h}};
    write_text_file(cfg.out_dir / "report.json", report.dump(2) + "\n");
    add_output(record, cfg.out_dir, "report.json");
  });

  run_stage(manifest.stages, "heatmap", [&](StageRecord& record) {
    std::vector<double> importance;
    importance.reserve(selected.size());
    for (int q : selected) importance.push_back(stats.importance(q));
    export_heatmap(s_m, importance, cfg.out_dir / "heatmap.svg");
    add_output(record, cfg.out_dir, "heatmap.svg");
  });

  save_manifest(manifest, cfg.out_dir / "manifest.json");
  return manifest;
}

void save_manifest(const RunManifest& manifest, const fs::path& path) {
  json stages = json::array();
  for (const StageRecord& stage : manifest.stages) {
    json outputs = json::object();
    for (const auto& [file, checksum] : stage.outputs) outputs[file] = checksum;
    json warnings = json::object();
    for (const auto& [name, count] : stage.warnings) warnings[name] = count;
    stages.push_back({{"name", stage.name},
                      {"millis", stage.millis},
                      {"outputs", outputs},
                      {"warnings", warnings}});
  }
  json doc = {{"stages", stages},
              {"selected", manifest.selected_labels},
              {"report",
               {{"T1", manifest.report.t1},
                {"U", manifest.report.u},
                {"S", manifest.report.s},
                {"H", manifest.report.h}}}};
  write_text_file(path, doc.dump(2) + "\n");
}

}  // namespace infzsl
