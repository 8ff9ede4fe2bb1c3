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

#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

namespace matforge {

// Reader for the TOML subset the config files use: `[section]` headers,
// `key = value` pairs, `#` comments, and scalar values (basic "strings",
// integers, floats, booleans). No arrays, tables-in-tables, or dates;
// experiment configs have never needed them.

class TomlError : public std::runtime_error {
 public:
  TomlError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

class TomlTable {
 public:
  using Value = std::variant<std::string, long long, double, bool>;

  bool contains(const std::string& key) const { return entries_.count(key) != 0; }

  // Typed lookups by dotted key ("section.key"; bare keys for the top
  // level). Missing keys yield nullopt; present keys of the wrong type
  // throw TomlError. get_float accepts integer values.
  std::optional<std::string> get_string(const std::string& key) const;
  std::optional<long long> get_int(const std::string& key) const;
  std::optional<double> get_float(const std::string& key) const;
  std::optional<bool> get_bool(const std::string& key) const;

  const std::map<std::string, Value>& entries() const { return entries_; }

  void set(const std::string& key, Value value) { entries_[key] = std::move(value); }

 private:
  std::map<std::string, Value> entries_;
};

TomlTable parse_toml(const std::string& text);
TomlTable parse_toml_file(const std::string& path);

}  // namespace matforge
