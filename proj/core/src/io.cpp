#include "infzsl/io.hpp"

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace fs = std::filesystem;

namespace infzsl {
namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

// Lines of a text file with CR stripped; keeps empty interior lines out.
std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(errc::io_error, "cannot open '" + path.string() + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

long parse_long(const std::string& text, const fs::path& path, long line_no) {
  long value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    raise(errc::format_error,
          path.string() + " line " + std::to_string(line_no) + ": bad integer '" + text + "'");
  return value;
}

double parse_real(const std::string& text, const fs::path& path, long line_no) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    raise(errc::format_error,
          path.string() + " line " + std::to_string(line_no) + ": bad float '" + text + "'");
  return value;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(errc::io_error, "cannot write '" + path.string() + "'");
  return out;
}

void expect_fields(const std::vector<std::string>& fields, std::size_t expected,
                   const fs::path& path, long line_no) {
  if (fields.size() != expected)
    raise(errc::format_error, path.string() + " line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(expected) + " fields, got " +
                                  std::to_string(fields.size()));
}

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) raise(errc::io_error, "double formatting failed");
  return std::string(buffer, ptr);
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(errc::io_error, "cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const fs::path& path, const std::string& content) {
  open_out(path) << content;
}

std::string checksum_file(const fs::path& path) {
  std::string bytes = read_text_file(path);
  std::uint64_t hash = 1469598103934665603ull;  // FNV-1a offset basis
  for (unsigned char byte : bytes) {
    hash ^= byte;
    hash *= 1099511628211ull;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

ClassCatalog load_catalog(const fs::path& path, const std::string& class_type) {
  std::vector<ClassEntry> entries;
  long line_no = 0;
  for (const std::string& line : read_lines(path)) {
    ++line_no;
    if (line[0] == '#') continue;
    std::vector<std::string> fields = split_tabs(line);
    expect_fields(fields, 3, path, line_no);
    entries.push_back({static_cast<int>(parse_long(fields[0], path, line_no)), fields[1],
                       parse_split(fields[2])});
  }
  if (entries.empty()) raise(errc::format_error, "catalog '" + path.string() + "' is empty");
  return ClassCatalog(std::move(entries), class_type);
}

void save_corpus(const ConceptCorpus& corpus, const fs::path& path) {
  std::ofstream out = open_out(path);
  for (const ConceptRecord& record : corpus.records) {
    const ClassEntry& entry = corpus.catalog.at(record.class_id);
    out << record.class_id << '\t' << entry.name << '\t' << split_name(entry.split) << '\t'
        << record.response_index << '\t' << record.ordinal << '\t' << record.phrase << '\n';
  }
}

ConceptCorpus load_corpus(const fs::path& path, const GenerationConfig& cfg) {
  ConceptCorpus corpus;
  corpus.config = cfg;
  std::unordered_map<int, ClassEntry> classes;
  long line_no = 0;
  for (const std::string& line : read_lines(path)) {
    ++line_no;
    std::vector<std::string> fields = split_tabs(line);
    expect_fields(fields, 6, path, line_no);
    int class_id = static_cast<int>(parse_long(fields[0], path, line_no));
    Split split = parse_split(fields[2]);
    auto [it, inserted] = classes.try_emplace(class_id, ClassEntry{class_id, fields[1], split});
    if (!inserted && (it->second.name != fields[1] || it->second.split != split))
      raise(errc::format_error, path.string() + " line " + std::to_string(line_no) +
                                    ": class " + std::to_string(class_id) +
                                    " redefined with different name or split");
    corpus.records.push_back({class_id, fields[5],
                              static_cast<int>(parse_long(fields[3], path, line_no)),
                              static_cast<int>(parse_long(fields[4], path, line_no))});
  }
  if (corpus.records.empty())
    raise(errc::format_error, "corpus '" + path.string() + "' contains no records");
  std::vector<ClassEntry> entries;
  entries.reserve(classes.size());
  for (auto& [id, entry] : classes) entries.push_back(std::move(entry));
  corpus.catalog = ClassCatalog(std::move(entries), "");
  return corpus;
}

void save_embeddings(const std::vector<PhraseEmbedding>& embeddings, const fs::path& path) {
  std::ofstream out = open_out(path);
  for (const PhraseEmbedding& embedding : embeddings) {
    out << embedding.concept_index << '\t' << embedding.covered_words;
    for (int d = 0; d < embedding.vector.size(); ++d)
      out << '\t' << format_double(embedding.vector(d));
    out << '\n';
  }
}

std::vector<PhraseEmbedding> load_embeddings(const fs::path& path) {
  std::vector<PhraseEmbedding> embeddings;
  long line_no = 0;
  std::size_t dim = 0;
  for (const std::string& line : read_lines(path)) {
    ++line_no;
    std::vector<std::string> fields = split_tabs(line);
    if (fields.size() < 3)
      raise(errc::format_error,
            path.string() + " line " + std::to_string(line_no) + ": too few fields");
    if (dim == 0)
      dim = fields.size() - 2;
    else if (fields.size() - 2 != dim)
      raise(errc::format_error,
            path.string() + " line " + std::to_string(line_no) + ": dimension mismatch");
    PhraseEmbedding embedding;
    embedding.concept_index = static_cast<int>(parse_long(fields[0], path, line_no));
    embedding.covered_words = static_cast<int>(parse_long(fields[1], path, line_no));
    embedding.vector.resize(static_cast<int>(dim));
    for (std::size_t d = 0; d < dim; ++d)
      embedding.vector(static_cast<int>(d)) = parse_real(fields[d + 2], path, line_no);
    embeddings.push_back(std::move(embedding));
  }
  if (embeddings.empty())
    raise(errc::format_error, "embedding file '" + path.string() + "' is empty");
  return embeddings;
}

void save_cluster_model(const ClusterModel& model, const fs::path& assignments_path,
                        const fs::path& centroids_path) {
  std::ofstream assignments = open_out(assignments_path);
  for (std::size_t i = 0; i < model.concept_index.size(); ++i)
    assignments << model.concept_index[i] << '\t' << model.assignment[i] << '\n';

  std::ofstream centroids = open_out(centroids_path);
  centroids << "# k=" << model.k << " space=" << (model.normalized ? "l2" : "raw")
            << " iterations=" << model.iterations << '\n';
  for (int c = 0; c < model.centroids.rows(); ++c) {
    for (int d = 0; d < model.centroids.cols(); ++d) {
      if (d) centroids << '\t';
      centroids << format_double(model.centroids(c, d));
    }
    centroids << '\n';
  }
}

ClusterModel load_cluster_model(const fs::path& assignments_path, const fs::path& centroids_path,
                                const std::vector<PhraseEmbedding>& embeddings) {
  ClusterModel model;

  std::vector<std::string> centroid_lines = read_lines(centroids_path);
  if (centroid_lines.empty())
    raise(errc::format_error, "centroid file '" + centroids_path.string() + "' is empty");
  std::size_t first_row = 0;
  if (centroid_lines[0][0] == '#') {
    std::istringstream header(centroid_lines[0].substr(1));
    std::string token;
    while (header >> token) {
      if (token.rfind("space=", 0) == 0) model.normalized = token.substr(6) == "l2";
      if (token.rfind("iterations=", 0) == 0) model.iterations = std::stoi(token.substr(11));
    }
    first_row = 1;
  }
  const int k = static_cast<int>(centroid_lines.size() - first_row);
  if (k == 0) raise(errc::format_error, "centroid file has no rows");
  std::vector<std::string> first = split_tabs(centroid_lines[first_row]);
  model.centroids.resize(k, static_cast<int>(first.size()));
  for (int c = 0; c < k; ++c) {
    std::vector<std::string> fields = split_tabs(centroid_lines[first_row + static_cast<std::size_t>(c)]);
    expect_fields(fields, first.size(), centroids_path, static_cast<long>(first_row) + c + 1);
    for (std::size_t d = 0; d < fields.size(); ++d)
      model.centroids(c, static_cast<int>(d)) =
          parse_real(fields[d], centroids_path, static_cast<long>(first_row) + c + 1);
  }
  model.k = k;

  long line_no = 0;
  for (const std::string& line : read_lines(assignments_path)) {
    ++line_no;
    std::vector<std::string> fields = split_tabs(line);
    expect_fields(fields, 2, assignments_path, line_no);
    model.concept_index.push_back(static_cast<int>(parse_long(fields[0], assignments_path, line_no)));
    int cluster = static_cast<int>(parse_long(fields[1], assignments_path, line_no));
    if (cluster < 0 || cluster >= k)
      raise(errc::format_error, assignments_path.string() + " line " + std::to_string(line_no) +
                                    ": cluster id " + std::to_string(cluster) + " out of range");
    model.assignment.push_back(cluster);
  }
  if (model.assignment.empty())
    raise(errc::format_error, "assignment file '" + assignments_path.string() + "' is empty");

  // Rebuild representatives and inertia in the clustered space.
  std::unordered_map<int, const PhraseEmbedding*> by_concept;
  for (const PhraseEmbedding& embedding : embeddings)
    by_concept[embedding.concept_index] = &embedding;
  model.representative.assign(static_cast<std::size_t>(k), -1);
  std::vector<double> best(static_cast<std::size_t>(k), 0.0);
  model.inertia = 0.0;
  for (std::size_t i = 0; i < model.concept_index.size(); ++i) {
    auto it = by_concept.find(model.concept_index[i]);
    if (it == by_concept.end())
      raise(errc::format_error, "assignment references concept " +
                                    std::to_string(model.concept_index[i]) +
                                    " missing from the embeddings");
    Eigen::VectorXd point = it->second->vector;
    if (model.normalized) {
      double norm = point.norm();
      if (norm > 0.0) point /= norm;
    }
    int c = model.assignment[i];
    double d = (point.transpose() - model.centroids.row(c)).squaredNorm();
    model.inertia += d;
    if (model.representative[static_cast<std::size_t>(c)] < 0 ||
        d < best[static_cast<std::size_t>(c)]) {
      best[static_cast<std::size_t>(c)] = d;
      model.representative[static_cast<std::size_t>(c)] = model.concept_index[i];
    }
  }
  model.rebuild_lookup();
  return model;
}

void save_stats(const ClusterStats& stats, const std::vector<std::string>& labels,
                const std::vector<int>& selected, const fs::path& path) {
  if (static_cast<int>(labels.size()) != stats.cluster_count())
    raise(errc::shape_mismatch, "label count differs from cluster count");
  std::vector<bool> selected_flag(labels.size(), false);
  for (int q : selected) selected_flag.at(static_cast<std::size_t>(q)) = true;

  std::ofstream out = open_out(path);
  out << "cluster_id\tlabel\tr_ce\tr_tran\tr_dis\tr_q\tselected\n";
  for (int q : importance_order(stats)) {
    out << q << '\t' << labels[static_cast<std::size_t>(q)] << '\t'
        << format_double(stats.entropy(q)) << '\t' << format_double(stats.transferability(q))
        << '\t' << format_double(stats.discriminability(q)) << '\t'
        << format_double(stats.importance(q)) << '\t'
        << (selected_flag[static_cast<std::size_t>(q)] ? 1 : 0) << '\n';
  }
}

std::vector<StatsRow> load_stats(const fs::path& path) {
  std::vector<StatsRow> rows;
  long line_no = 0;
  for (const std::string& line : read_lines(path)) {
    ++line_no;
    if (line.rfind("cluster_id\t", 0) == 0) continue;
    std::vector<std::string> fields = split_tabs(line);
    expect_fields(fields, 7, path, line_no);
    StatsRow row;
    row.cluster_id = static_cast<int>(parse_long(fields[0], path, line_no));
    row.label = fields[1];
    row.entropy = parse_real(fields[2], path, line_no);
    row.transferability = parse_real(fields[3], path, line_no);
    row.discriminability = parse_real(fields[4], path, line_no);
    row.importance = parse_real(fields[5], path, line_no);
    row.selected = parse_long(fields[6], path, line_no) != 0;
    rows.push_back(std::move(row));
  }
  if (rows.empty()) raise(errc::format_error, "stats file '" + path.string() + "' is empty");
  return rows;
}

void save_matrix(const SemanticEmbedding& s, const fs::path& path) {
  std::ofstream out = open_out(path);
  out << "#source";
  for (ColumnSource source : s.column_sources) out << '\t' << column_source_name(source);
  out << "\nclass";
  for (const std::string& label : s.column_labels) out << '\t' << label;
  out << '\n';
  for (int y = 0; y < s.rows(); ++y) {
    out << s.class_names[static_cast<std::size_t>(y)];
    for (int d = 0; d < s.cols(); ++d) out << '\t' << format_double(s.values(y, d));
    out << '\n';
  }
}

SemanticEmbedding load_matrix(const fs::path& path, ColumnSource default_source) {
  std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) raise(errc::format_error, "matrix file '" + path.string() + "' is empty");

  SemanticEmbedding s;
  std::size_t header_index = 0;
  if (lines[0].rfind("#source", 0) == 0) {
    std::vector<std::string> fields = split_tabs(lines[0]);
    for (std::size_t i = 1; i < fields.size(); ++i)
      s.column_sources.push_back(parse_column_source(fields[i]));
    header_index = 1;
  }
  if (header_index >= lines.size())
    raise(errc::format_error, "matrix file '" + path.string() + "' has no header");
  std::vector<std::string> header = split_tabs(lines[header_index]);
  if (header.empty() || header[0] != "class")
    raise(errc::format_error, "matrix header must start with 'class'");
  s.column_labels.assign(header.begin() + 1, header.end());
  if (s.column_sources.empty())
    s.column_sources.assign(s.column_labels.size(), default_source);
  if (s.column_sources.size() != s.column_labels.size())
    raise(errc::format_error, "matrix source row and header disagree on column count");

  const std::size_t row_count = lines.size() - header_index - 1;
  s.values.resize(static_cast<int>(row_count), static_cast<int>(s.column_labels.size()));
  for (std::size_t r = 0; r < row_count; ++r) {
    long line_no = static_cast<long>(header_index + 2 + r);
    std::vector<std::string> fields = split_tabs(lines[header_index + 1 + r]);
    expect_fields(fields, s.column_labels.size() + 1, path, line_no);
    s.class_names.push_back(fields[0]);
    for (std::size_t d = 0; d < s.column_labels.size(); ++d)
      s.values(static_cast<int>(r), static_cast<int>(d)) = parse_real(fields[d + 1], path, line_no);
  }
  return s;
}

void save_features(const FeatureSet& features, const fs::path& features_path,
                   const fs::path& splits_path) {
  std::ofstream out = open_out(features_path);
  std::ofstream splits = open_out(splits_path);
  for (int i = 0; i < features.rows(); ++i) {
    const std::string sample_id = features.sample_ids.empty()
                                      ? "s" + std::to_string(i)
                                      : features.sample_ids[static_cast<std::size_t>(i)];
    out << sample_id << '\t' << features.labels[static_cast<std::size_t>(i)];
    for (int d = 0; d < features.x.cols(); ++d) out << '\t' << format_double(features.x(i, d));
    out << '\n';
    splits << sample_id << '\t' << sample_split_name(features.split[static_cast<std::size_t>(i)])
           << '\n';
  }
}

FeatureSet load_features(const fs::path& features_path, const fs::path& splits_path) {
  std::unordered_map<std::string, SampleSplit> split_of;
  long line_no = 0;
  for (const std::string& line : read_lines(splits_path)) {
    ++line_no;
    std::vector<std::string> fields = split_tabs(line);
    expect_fields(fields, 2, splits_path, line_no);
    split_of[fields[0]] = parse_sample_split(fields[1]);
  }

  FeatureSet features;
  std::vector<std::vector<double>> rows;
  line_no = 0;
  for (const std::string& line : read_lines(features_path)) {
    ++line_no;
    std::vector<std::string> fields = split_tabs(line);
    if (fields.size() < 3)
      raise(errc::format_error,
            features_path.string() + " line " + std::to_string(line_no) + ": too few fields");
    auto it = split_of.find(fields[0]);
    if (it == split_of.end())
      raise(errc::format_error, "sample '" + fields[0] + "' has no split tag");
    features.sample_ids.push_back(fields[0]);
    features.labels.push_back(static_cast<int>(parse_long(fields[1], features_path, line_no)));
    features.split.push_back(it->second);
    std::vector<double> row;
    for (std::size_t d = 2; d < fields.size(); ++d)
      row.push_back(parse_real(fields[d], features_path, line_no));
    if (!rows.empty() && rows.front().size() != row.size())
      raise(errc::format_error, features_path.string() + " line " + std::to_string(line_no) +
                                    ": feature dimension mismatch");
    rows.push_back(std::move(row));
  }
  if (rows.empty())
    raise(errc::format_error, "feature file '" + features_path.string() + "' is empty");
  features.x.resize(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t d = 0; d < rows[i].size(); ++d)
      features.x(static_cast<int>(i), static_cast<int>(d)) = rows[i][d];
  return features;
}

}  // namespace infzsl
