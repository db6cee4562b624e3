#include "infzsl/catalog.hpp"

#include <algorithm>
#include <unordered_set>

namespace infzsl {

const char* split_name(Split split) {
  return split == Split::seen ? "seen" : "unseen";
}

Split parse_split(const std::string& text) {
  if (text == "seen") return Split::seen;
  if (text == "unseen") return Split::unseen;
  raise(errc::format_error, "unknown split label '" + text + "'");
}

ClassCatalog::ClassCatalog(std::vector<ClassEntry> classes, std::string class_type)
    : classes_(std::move(classes)), class_type_(std::move(class_type)) {
  std::sort(classes_.begin(), classes_.end(),
            [](const ClassEntry& a, const ClassEntry& b) { return a.id < b.id; });
  std::unordered_set<std::string> names;
  for (int i = 0; i < static_cast<int>(classes_.size()); ++i) {
    if (classes_[i].id != i)
      raise(errc::invalid_argument,
            "class ids must be contiguous 0..N-1; got id " + std::to_string(classes_[i].id) +
                " at position " + std::to_string(i));
    if (classes_[i].name.empty())
      raise(errc::invalid_argument, "class " + std::to_string(i) + " has an empty name");
    if (!names.insert(classes_[i].name).second)
      raise(errc::invalid_argument, "duplicate class name '" + classes_[i].name + "'");
  }
}

const ClassEntry& ClassCatalog::at(int class_id) const {
  if (class_id < 0 || class_id >= size())
    raise(errc::invalid_argument, "class id " + std::to_string(class_id) + " out of range");
  return classes_[static_cast<std::size_t>(class_id)];
}

std::vector<int> ClassCatalog::ids_with(Split split) const {
  std::vector<int> ids;
  for (const ClassEntry& entry : classes_)
    if (entry.split == split) ids.push_back(entry.id);
  return ids;
}

std::vector<std::string> ClassCatalog::names() const {
  std::vector<std::string> out;
  out.reserve(classes_.size());
  for (const ClassEntry& entry : classes_) out.push_back(entry.name);
  return out;
}

void GenerationConfig::validate() const {
  if (k_num < 1) raise(errc::invalid_argument, "k_num must be >= 1");
  if (k_max < 1) raise(errc::invalid_argument, "k_max must be >= 1");
  if (k_time < 1) raise(errc::invalid_argument, "k_time must be >= 1");
}

}  // namespace infzsl
