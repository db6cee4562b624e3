#include "infzsl/error.hpp"

namespace infzsl {

const char* errc_name(errc code) {
  switch (code) {
    case errc::invalid_argument: return "invalid-argument";
    case errc::empty_response: return "empty-response";
    case errc::incomplete_corpus: return "incomplete-corpus";
    case errc::empty_class: return "empty-class";
    case errc::format_error: return "format";
    case errc::out_of_vocabulary: return "out-of-vocabulary";
    case errc::degenerate_class: return "degenerate-class";
    case errc::degenerate_stats: return "degenerate-stats";
    case errc::degenerate_cluster: return "degenerate-cluster";
    case errc::shape_mismatch: return "shape";
    case errc::singular_system: return "singular-system";
    case errc::undefined_cosine: return "undefined-cosine";
    case errc::io_error: return "io";
    case errc::config_error: return "config";
  }
  return "unknown";
}

Error::Error(errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message),
      code_(code),
      message_(message) {}

void raise(errc code, const std::string& message) { throw Error(code, message); }

}  // namespace infzsl
