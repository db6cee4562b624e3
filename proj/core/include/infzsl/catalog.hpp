#pragma once

#include <string>
#include <vector>

#include "infzsl/error.hpp"

namespace infzsl {

enum class Split { seen, unseen };

const char* split_name(Split split);
Split parse_split(const std::string& text);

struct ClassEntry {
  int id = 0;
  std::string name;
  Split split = Split::seen;
};

/// Ordered class registry. Ids are contiguous 0..N-1 and double as row
/// indices into every class-indexed matrix downstream.
class ClassCatalog {
 public:
  ClassCatalog() = default;
  ClassCatalog(std::vector<ClassEntry> classes, std::string class_type);

  const std::vector<ClassEntry>& classes() const { return classes_; }
  const std::string& class_type() const { return class_type_; }
  int size() const { return static_cast<int>(classes_.size()); }
  bool empty() const { return classes_.empty(); }

  const ClassEntry& at(int class_id) const;
  std::vector<int> ids_with(Split split) const;
  std::vector<std::string> names() const;

 private:
  std::vector<ClassEntry> classes_;
  std::string class_type_;
};

struct GenerationConfig {
  int k_num = 100;  // concepts requested per prompt
  int k_max = 3;    // max words per concept
  int k_time = 1;   // prompts issued per class

  int k_con() const { return k_num * k_time; }
  void validate() const;
};

}  // namespace infzsl
