// Copyright 2026 The Matforge Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "matforge/toml.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace matforge {

namespace {

std::string trim(const std::string& s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

// Cuts an unquoted `#` comment off the line.
std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (in_string && c == '\\') {
      ++i;
      continue;
    }
    if (c == '"') in_string = !in_string;
    if (c == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

bool valid_key(const std::string& key) {
  if (key.empty()) return false;
  for (char c : key) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return false;
  }
  return true;
}

std::string parse_string_value(const std::string& text, int line_no) {
  if (text.size() < 2 || text.back() != '"') throw TomlError(line_no, "unterminated string");
  std::string out;
  for (std::size_t i = 1; i + 1 < text.size(); ++i) {
    char c = text[i];
    if (c != '\\') {
      out.push_back(c);
      continue;
    }
    if (i + 2 >= text.size()) throw TomlError(line_no, "dangling escape in string");
    char esc = text[++i];
    switch (esc) {
      case '"': out.push_back('"'); break;
      case '\\': out.push_back('\\'); break;
      case 'n': out.push_back('\n'); break;
      case 't': out.push_back('\t'); break;
      default: throw TomlError(line_no, std::string("unsupported escape \\") + esc);
    }
  }
  return out;
}

TomlTable::Value parse_value(const std::string& text, int line_no) {
  if (text.empty()) throw TomlError(line_no, "missing value");
  if (text.front() == '"') return parse_string_value(text, line_no);
  if (text == "true") return true;
  if (text == "false") return false;

  const char* begin = text.data();
  const char* end = begin + text.size();
  if (text.find_first_of(".eE") == std::string::npos) {
    long long i = 0;
    auto [ptr, ec] = std::from_chars(begin, end, i);
    if (ec == std::errc() && ptr == end) return i;
  }
  double d = 0.0;
  auto [ptr, ec] = std::from_chars(begin, end, d);
  if (ec == std::errc() && ptr == end) return d;
  throw TomlError(line_no, "malformed value: " + text);
}

}  // namespace

std::optional<std::string> TomlTable::get_string(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  if (const auto* s = std::get_if<std::string>(&it->second)) return *s;
  throw TomlError(0, "key '" + key + "' is not a string");
}

std::optional<long long> TomlTable::get_int(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  if (const auto* i = std::get_if<long long>(&it->second)) return *i;
  throw TomlError(0, "key '" + key + "' is not an integer");
}

std::optional<double> TomlTable::get_float(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  if (const auto* d = std::get_if<double>(&it->second)) return *d;
  if (const auto* i = std::get_if<long long>(&it->second)) return static_cast<double>(*i);
  throw TomlError(0, "key '" + key + "' is not a number");
}

std::optional<bool> TomlTable::get_bool(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  if (const auto* b = std::get_if<bool>(&it->second)) return *b;
  throw TomlError(0, "key '" + key + "' is not a boolean");
}

TomlTable parse_toml(const std::string& text) {
  TomlTable table;
  std::istringstream stream(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw TomlError(line_no, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!valid_key(section)) throw TomlError(line_no, "malformed section name");
      continue;
    }

    std::size_t eq = std::string::npos;
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') in_string = !in_string;
      if (line[i] == '=' && !in_string) {
        eq = i;
        break;
      }
    }
    if (eq == std::string::npos) throw TomlError(line_no, "expected key = value");

    std::string key = trim(line.substr(0, eq));
    if (!valid_key(key)) throw TomlError(line_no, "malformed key: " + key);
    std::string full_key = section.empty() ? key : section + "." + key;
    if (table.contains(full_key)) throw TomlError(line_no, "duplicate key: " + full_key);
    table.set(full_key, parse_value(trim(line.substr(eq + 1)), line_no));
  }
  return table;
}

TomlTable parse_toml_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TomlError(0, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_toml(buffer.str());
}

}  // namespace matforge
