#pragma once

#include <stdexcept>
#include <string>

namespace infzsl {

enum class errc {
  invalid_argument,
  empty_response,
  incomplete_corpus,
  empty_class,
  format_error,
  out_of_vocabulary,
  degenerate_class,
  degenerate_stats,
  degenerate_cluster,
  shape_mismatch,
  singular_system,
  undefined_cosine,
  io_error,
  config_error,
};

const char* errc_name(errc code);

/// Library-wide exception; carries a stable error code for programmatic checks.
class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message);
  errc code() const noexcept { return code_; }
  /// The message without the "<code>: " prefix that what() carries.
  const std::string& message() const noexcept { return message_; }

 private:
  errc code_;
  std::string message_;
};

[[noreturn]] void raise(errc code, const std::string& message);

}  // namespace infzsl
