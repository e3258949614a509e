// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace plctdr {

inline constexpr const char* toolkit_version = "0.1.0";

// Formats with 12 significant digits, the precision used by every emitted
// file.
std::string format_g12(double v);

std::uint64_t fnv1a(std::string_view s);

// Flat key/value document: one "key = value" line per entry, '#' comments.
class kv_document {
 public:
  void set(std::string key, std::string value);
  void set(std::string key, double value);
  void set(std::string key, std::int64_t value);
  void set(std::string key, std::uint64_t value);

  bool has(std::string_view key) const;
  const std::string& get(std::string_view key) const;  // throws spec_error
  double get_double(std::string_view key) const;
  std::int64_t get_int(std::string_view key) const;

  const std::vector<std::pair<std::string, std::string>>& items() const {
    return items_;
  }

  void write(const std::string& path,
             const std::vector<std::string>& comments = {}) const;
  // Same content as a two-column CSV (key,value).
  void write_csv(const std::string& path,
                 const std::vector<std::string>& comments = {}) const;
  static kv_document load(const std::string& path);

 private:
  std::vector<std::pair<std::string, std::string>> items_;
};

// CSV with '#'-prefixed metadata lines, a column-name line, then numeric rows
// at 12 significant digits.
void write_csv(const std::string& path,
               const std::vector<std::string>& comments,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

// Standard metadata lines: toolkit version, seed and input hash.
std::vector<std::string> output_header(std::uint64_t seed,
                                       std::string_view input_desc);

}  // namespace plctdr
