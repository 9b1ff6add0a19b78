#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>

#include "topics/errors.hpp"

namespace topics {

// Shortest round-trip decimal representation, deterministic across runs.
inline std::string format_double(double value) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

// Quotes a field only when it contains a comma, quote or newline.
inline std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') {
      quoted += '"';
    }
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path)
      : out_(path, std::ios::binary) {
    if (!out_) {
      throw InputError("cannot write file: " + path.string());
    }
  }

  CsvWriter& field(std::string_view value) {
    separate();
    out_ << csv_escape(value);
    return *this;
  }
  CsvWriter& field(double value) {
    separate();
    out_ << format_double(value);
    return *this;
  }
  CsvWriter& field(std::int64_t value) {
    separate();
    out_ << value;
    return *this;
  }
  CsvWriter& field(int value) { return field(static_cast<std::int64_t>(value)); }

  void end_row() {
    out_ << '\n';
    first_ = true;
  }

 private:
  void separate() {
    if (!first_) {
      out_ << ',';
    }
    first_ = false;
  }

  std::ofstream out_;
  bool first_ = true;
};

}  // namespace topics
