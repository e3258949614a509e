// SPDX-License-Identifier: Apache-2.0
#include "plctdr/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "plctdr/errors.hpp"

namespace plctdr {

std::string format_g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void kv_document::set(std::string key, std::string value) {
  items_.emplace_back(std::move(key), std::move(value));
}

void kv_document::set(std::string key, double value) {
  set(std::move(key), format_g12(value));
}

void kv_document::set(std::string key, std::int64_t value) {
  set(std::move(key), std::to_string(value));
}

void kv_document::set(std::string key, std::uint64_t value) {
  set(std::move(key), std::to_string(value));
}

bool kv_document::has(std::string_view key) const {
  for (const auto& [k, v] : items_)
    if (k == key) return true;
  return false;
}

const std::string& kv_document::get(std::string_view key) const {
  for (const auto& [k, v] : items_)
    if (k == key) return v;
  throw spec_error("missing key: " + std::string(key));
}

double kv_document::get_double(std::string_view key) const {
  const std::string& v = get(key);
  try {
    return std::stod(v);
  } catch (const std::exception&) {
    throw spec_error("key '" + std::string(key) + "' is not numeric: " + v);
  }
}

std::int64_t kv_document::get_int(std::string_view key) const {
  const std::string& v = get(key);
  try {
    return std::stoll(v);
  } catch (const std::exception&) {
    throw spec_error("key '" + std::string(key) + "' is not an integer: " + v);
  }
}

void kv_document::write(const std::string& path,
                        const std::vector<std::string>& comments) const {
  std::ofstream out(path);
  if (!out) throw spec_error("cannot open for writing: " + path);
  for (const auto& c : comments) out << "# " << c << "\n";
  for (const auto& [k, v] : items_) out << k << " = " << v << "\n";
}

void kv_document::write_csv(const std::string& path,
                            const std::vector<std::string>& comments) const {
  std::ofstream out(path);
  if (!out) throw spec_error("cannot open for writing: " + path);
  for (const auto& c : comments) out << "# " << c << "\n";
  out << "key,value\n";
  for (const auto& [k, v] : items_) out << k << "," << v << "\n";
}

kv_document kv_document::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw spec_error("cannot open: " + path);
  kv_document doc;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw spec_error(path + ":" + std::to_string(lineno) +
                       ": expected 'key = value'");
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    doc.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return doc;
}

void write_csv(const std::string& path,
               const std::vector<std::string>& comments,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw spec_error("cannot open for writing: " + path);
  for (const auto& c : comments) out << "# " << c << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i)
    out << (i ? "," : "") << columns[i];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_g12(row[i]);
    out << "\n";
  }
}

std::vector<std::string> output_header(std::uint64_t seed,
                                       std::string_view input_desc) {
  std::ostringstream hash;
  hash << std::hex << fnv1a(input_desc);
  return {
      std::string("plc-tdr-toolkit v") + toolkit_version,
      "seed = " + std::to_string(seed),
      "input_hash = " + hash.str(),
  };
}

}  // namespace plctdr
