#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "infzsl/cess.hpp"
#include "infzsl/corpus.hpp"
#include "infzsl/heatmap.hpp"
#include "infzsl/io.hpp"
#include "infzsl/kmeans.hpp"
#include "infzsl/llm_client.hpp"
#include "infzsl/pipeline.hpp"
#include "infzsl/word_vectors.hpp"
#include "infzsl/zsl.hpp"

namespace {

using namespace infzsl;

struct Options {
  std::string catalog;
  std::string class_type = "objects";
  std::string llm;
  std::string corpus;
  std::string vectors;
  std::string embeddings;
  std::string assignments;
  std::string centroids;
  std::string stats;
  std::string human;
  std::string llm_matrix;
  std::string embedding;
  std::string features;
  std::string splits;
  std::string config;
  std::string archive;
  std::string out;
  std::string mode = "gzsl";
  std::string preset;
  GenerationConfig gen;
  int k_pre = 1;
  int k_select = 1;
  int k_top = 1;
  std::uint64_t seed = 0;
  int max_iter = 100;
  bool raw_space = false;
  double ridge = 1.0;
};

void add_gen_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--k-num", o.gen.k_num, "concepts requested per prompt");
  cmd->add_option("--k-max", o.gen.k_max, "max words per concept");
  cmd->add_option("--k-time", o.gen.k_time, "prompts per class");
}

void cmd_prompts(const Options& o) {
  ClassCatalog catalog = load_catalog(o.catalog, o.class_type);
  std::ostringstream text;
  for (const ClassEntry& entry : catalog.classes())
    text << entry.id << '\t' << render_prompt(entry.name, catalog.class_type(), o.gen) << '\n';
  if (o.out.empty())
    std::cout << text.str();
  else
    write_text_file(o.out, text.str());
}

void cmd_ingest(const Options& o) {
  ClassCatalog catalog = load_catalog(o.catalog, o.class_type);
  std::unique_ptr<LlmClient> client = make_llm_client(o.llm);
  auto responses = collect_responses(catalog, o.gen, *client);
  if (!o.archive.empty()) archive_responses(responses, o.archive);
  CorpusBuildStats stats;
  ConceptCorpus corpus = build_corpus(catalog, responses, o.gen, &stats);
  save_corpus(corpus, o.out);
  std::cerr << "corpus: " << corpus.records.size() << " records ("
            << stats.dropped_overlength << " over-length phrases dropped)\n";
}

void cmd_embed(const Options& o) {
  ConceptCorpus corpus = load_corpus(o.corpus, o.gen);
  WordVectorTable table = load_vectors(o.vectors);
  EmbedCorpusResult result = embed_corpus(corpus, table);
  if (result.embeddings.empty())
    raise(errc::out_of_vocabulary, "no concept phrase has an in-vocabulary token");
  save_embeddings(result.embeddings, o.out);
  std::cerr << "embedded " << result.embeddings.size() << " concepts ("
            << result.dropped_oov << " dropped as out-of-vocabulary)\n";
}

void cmd_cluster(const Options& o) {
  std::vector<PhraseEmbedding> embeddings = load_embeddings(o.embeddings);
  KmeansOptions opts;
  opts.k = o.k_pre;
  opts.seed = o.seed;
  opts.max_iter = o.max_iter;
  opts.normalize = !o.raw_space;
  ClusterModel model = kmeans_fit(embeddings, opts);
  save_cluster_model(model, o.out, o.centroids);
  std::cerr << "k-means: k=" << model.k << " inertia=" << format_double(model.inertia)
            << " iterations=" << model.iterations << '\n';
}

void cmd_select(const Options& o) {
  ConceptCorpus corpus = load_corpus(o.corpus, o.gen);
  std::vector<PhraseEmbedding> embeddings = load_embeddings(o.embeddings);
  ClusterModel model = load_cluster_model(o.assignments, o.centroids, embeddings);
  SelectionConfig cfg{model.k, o.k_select, o.k_top};
  cfg.validate(corpus.catalog.size());
  CooccurrenceMatrix co = cooccurrence(corpus, model);
  ClusterStats stats = compute_cluster_stats(co, cfg.k_top);
  std::vector<int> selected = importance_and_select(stats, cfg);
  save_stats(stats, cluster_labels(model, corpus), selected, o.out);
  std::cerr << "selected " << selected.size() << " of " << model.k << " clusters\n";
}

std::vector<int> selected_ids_in_order(const std::vector<StatsRow>& rows) {
  std::vector<int> selected;
  for (const StatsRow& row : rows)
    if (row.selected) selected.push_back(row.cluster_id);
  if (selected.empty()) raise(errc::invalid_argument, "stats file marks no cluster selected");
  return selected;
}

void cmd_score(const Options& o) {
  ConceptCorpus corpus = load_corpus(o.corpus, o.gen);
  std::vector<PhraseEmbedding> embeddings = load_embeddings(o.embeddings);
  ClusterModel model = load_cluster_model(o.assignments, o.centroids, embeddings);
  std::vector<int> selected = selected_ids_in_order(load_stats(o.stats));
  save_matrix(score_selected(corpus, model, selected), o.out);
}

void cmd_concat(const Options& o) {
  SemanticEmbedding human = load_matrix(o.human, ColumnSource::human);
  SemanticEmbedding llm = load_matrix(o.llm_matrix, ColumnSource::llm);
  save_matrix(concat_embeddings(human, llm), o.out);
}

void cmd_eval(const Options& o) {
  ClassCatalog catalog = load_catalog(o.catalog, o.class_type);
  SemanticEmbedding s = load_matrix(o.embedding);
  FeatureSet all = load_features(o.features, o.splits);
  FeatureSet train = all.subset(SampleSplit::train_seen);
  if (train.rows() == 0) raise(errc::invalid_argument, "no train-seen samples");
  FeatureScaler scaler = FeatureScaler::fit(train.x);
  train.x = scaler.transform(train.x);
  LinearMap map = fit_linear_map(train, s, o.ridge);
  FeatureSet test = all;
  test.x = scaler.transform(test.x);
  EvalReport report = evaluate(test, map, s, catalog);
  if (o.mode == "zsl") {
    std::cout << "T1 " << format_double(report.t1) << '\n';
  } else {
    std::cout << "U " << format_double(report.u) << '\n'
              << "S " << format_double(report.s) << '\n'
              << "H " << format_double(report.h) << '\n';
  }
}

void cmd_heatmap(const Options& o) {
  SemanticEmbedding s = load_matrix(o.embedding);
  std::vector<double> importance;
  for (const StatsRow& row : load_stats(o.stats))
    if (row.selected) importance.push_back(row.importance);
  export_heatmap(s, importance, o.out);
}

void apply_preset(PipelineConfig& cfg, const std::string& name) {
  auto it = dataset_presets().find(name);
  if (it == dataset_presets().end())
    raise(errc::config_error, "unknown preset '" + name + "' (awa2, cub, sun)");
  cfg.gen = it->second.gen;
  cfg.sel = it->second.sel;
}

void cmd_run(const Options& o, CLI::App* cmd) {
  PipelineConfig cfg = load_pipeline_config(o.config);
  if (!o.preset.empty()) apply_preset(cfg, o.preset);
  if (cmd->count("--out")) cfg.out_dir = o.out;
  if (cmd->count("--seed")) cfg.seed = o.seed;
  if (cmd->count("--k-pre")) cfg.sel.k_pre = o.k_pre;
  if (cmd->count("--k-select")) cfg.sel.k_select = o.k_select;
  if (cmd->count("--k-top")) cfg.sel.k_top = o.k_top;
  if (cmd->count("--ridge")) cfg.ridge = o.ridge;
  if (cmd->count("--max-iter")) cfg.max_iter = o.max_iter;
  if (cmd->count("--vectors")) cfg.vectors = o.vectors;
  if (cmd->count("--llm")) cfg.llm = o.llm;

  RunManifest manifest = run_pipeline(cfg);
  for (const StageRecord& stage : manifest.stages) {
    std::cerr << stage.name << ": " << static_cast<long>(stage.millis) << " ms";
    for (const auto& [name, count] : stage.warnings)
      if (count > 0) std::cerr << "  " << name << "=" << count;
    std::cerr << '\n';
  }
  std::cout << "selected:";
  for (const std::string& label : manifest.selected_labels) std::cout << " '" << label << "'";
  std::cout << "\nT1 " << format_double(manifest.report.t1) << "  U "
            << format_double(manifest.report.u) << "  S " << format_double(manifest.report.s)
            << "  H " << format_double(manifest.report.h) << '\n';
  std::cout << "manifest: " << (cfg.out_dir / "manifest.json").string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"InfZSL: LLM class-concept generation, entropy-based selection and scoring,\n"
               "and zero-shot evaluation of the resulting semantic embeddings"};
  app.require_subcommand(1);
  Options o;

  CLI::App* prompts = app.add_subcommand("prompts", "Render the generation prompt per class");
  prompts->add_option("--catalog", o.catalog)->required();
  prompts->add_option("--class-type", o.class_type)->required();
  add_gen_flags(prompts, o);
  prompts->add_option("-o,--out", o.out, "write to a file instead of stdout");

  CLI::App* ingest = app.add_subcommand("ingest", "Collect responses and build the concept corpus");
  ingest->add_option("--catalog", o.catalog)->required();
  ingest->add_option("--class-type", o.class_type)->required();
  ingest->add_option("--llm", o.llm, "replay directory or http endpoint URL")->required();
  add_gen_flags(ingest, o);
  ingest->add_option("--archive", o.archive, "also write raw responses in replay layout");
  ingest->add_option("-o,--out", o.out, "corpus TSV")->required();

  CLI::App* embed = app.add_subcommand("embed", "Embed concept phrases as mean word vectors");
  embed->add_option("--corpus", o.corpus)->required();
  embed->add_option("--vectors", o.vectors, "GloVe-style wordvector text file")->required();
  embed->add_option("-o,--out", o.out, "embeddings TSV")->required();

  CLI::App* cluster = app.add_subcommand("cluster", "Partition phrase embeddings with k-means");
  cluster->add_option("--embeddings", o.embeddings)->required();
  cluster->add_option("--k-pre", o.k_pre, "number of clusters")->required();
  cluster->add_option("--seed", o.seed);
  cluster->add_option("--max-iter", o.max_iter);
  cluster->add_flag("--raw-space", o.raw_space, "skip L2 normalization before clustering");
  cluster->add_option("--centroids", o.centroids, "centroid matrix file")->required();
  cluster->add_option("-o,--out", o.out, "assignments TSV")->required();

  CLI::App* select = app.add_subcommand("select", "Rank clusters by concept entropy and select");
  select->add_option("--corpus", o.corpus)->required();
  select->add_option("--embeddings", o.embeddings)->required();
  select->add_option("--assignments", o.assignments)->required();
  select->add_option("--centroids", o.centroids)->required();
  select->add_option("--k-select", o.k_select)->required();
  select->add_option("--k-top", o.k_top)->required();
  select->add_option("-o,--out", o.out, "statistics TSV")->required();

  CLI::App* score = app.add_subcommand("score", "Score selected clusters into a class embedding");
  score->add_option("--corpus", o.corpus)->required();
  score->add_option("--embeddings", o.embeddings)->required();
  score->add_option("--assignments", o.assignments)->required();
  score->add_option("--centroids", o.centroids)->required();
  score->add_option("--stats", o.stats)->required();
  score->add_option("-o,--out", o.out, "embedding matrix TSV")->required();

  CLI::App* concat = app.add_subcommand("concat", "Concatenate human and LLM embeddings");
  concat->add_option("--human", o.human)->required();
  concat->add_option("--llm", o.llm_matrix)->required();
  concat->add_option("-o,--out", o.out)->required();

  CLI::App* eval = app.add_subcommand("eval", "Fit the linear evaluator and report accuracies");
  eval->add_option("--catalog", o.catalog)->required();
  eval->add_option("--class-type", o.class_type);
  eval->add_option("--embedding", o.embedding, "semantic embedding matrix")->required();
  eval->add_option("--features", o.features)->required();
  eval->add_option("--splits", o.splits)->required();
  eval->add_option("--ridge", o.ridge);
  eval->add_option("--mode", o.mode)->check(CLI::IsMember({"zsl", "gzsl"}));

  CLI::App* heatmap = app.add_subcommand("heatmap", "Export the embedding as an SVG heatmap");
  heatmap->add_option("--embedding", o.embedding)->required();
  heatmap->add_option("--stats", o.stats)->required();
  heatmap->add_option("-o,--out", o.out)->required();

  CLI::App* run = app.add_subcommand("run", "Run the full pipeline from a config file");
  run->add_option("--config", o.config)->required();
  run->add_option("--preset", o.preset, "hyper-parameter preset: awa2, cub or sun");
  run->add_option("--out", o.out);
  run->add_option("--seed", o.seed);
  run->add_option("--k-pre", o.k_pre);
  run->add_option("--k-select", o.k_select);
  run->add_option("--k-top", o.k_top);
  run->add_option("--ridge", o.ridge);
  run->add_option("--max-iter", o.max_iter);
  run->add_option("--vectors", o.vectors);
  run->add_option("--llm", o.llm);

  CLI11_PARSE(app, argc, argv);

  try {
    if (prompts->parsed()) cmd_prompts(o);
    if (ingest->parsed()) cmd_ingest(o);
    if (embed->parsed()) cmd_embed(o);
    if (cluster->parsed()) cmd_cluster(o);
    if (select->parsed()) cmd_select(o);
    if (score->parsed()) cmd_score(o);
    if (concat->parsed()) cmd_concat(o);
    if (eval->parsed()) cmd_eval(o);
    if (heatmap->parsed()) cmd_heatmap(o);
    if (run->parsed()) cmd_run(o, run);
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
  return 0;
}
