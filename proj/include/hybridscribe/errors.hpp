#pragma once

#include <stdexcept>
#include <string>

namespace hybridscribe {

// Dimension disagreement between containers (vector lengths, matrix shapes).
struct dim_error : std::runtime_error {
  explicit dim_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input bytes or text. byte_offset is -1 when not applicable.
struct parse_error : std::runtime_error {
  explicit parse_error(const std::string& msg, long long offset = -1)
      : std::runtime_error(offset >= 0 ? msg + " (byte offset " + std::to_string(offset) + ")"
                                       : msg),
        byte_offset(offset) {}
  long long byte_offset;
};

// Input format recognized but not supported (e.g. compressed WAV).
struct unsupported_format_error : parse_error {
  explicit unsupported_format_error(const std::string& msg, long long offset = -1)
      : parse_error(msg, offset) {}
};

// Missing files, empty datasets, malformed manifests.
struct data_error : std::runtime_error {
  explicit data_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid flags or configuration values.
struct config_error : std::runtime_error {
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Numeric failure at runtime (loss divergence, non-finite values).
struct numeric_error : std::runtime_error {
  explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace hybridscribe
