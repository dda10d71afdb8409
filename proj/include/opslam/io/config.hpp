/******************************************************************************
 * Copyright 2026 The opslam Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/
#ifndef OPSLAM_IO_CONFIG_HPP_
#define OPSLAM_IO_CONFIG_HPP_

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace opslam {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& m) : std::runtime_error(m) {}
};

namespace io {

/// One parsed config value. Numbers are stored as double (the schema has no
/// integer wide enough to need exact 64-bit).
struct ConfigValue {
  enum class Kind { Number, Bool, String, Array };
  Kind kind = Kind::Number;
  double number = 0.0;
  bool boolean = false;
  std::string str;
  std::vector<double> array;
};

/// Flat key-value view of a TOML-style file: `[section]` prefixes keys,
/// `[[name]]` appends a running index (`name.0.`, `name.1.`, ...). Values are
/// numbers, booleans, quoted strings, or arrays of numbers. `#` starts a
/// comment.
class Config {
 public:
  static Config parse_string(const std::string& text,
                             const std::string& origin = "<string>") {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    std::string prefix;
    std::map<std::string, int> table_counts;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const std::string s = strip(strip_comment(line));
      if (s.empty()) continue;
      const std::string where = origin + ":" + std::to_string(lineno);
      if (s.size() >= 4 && s.front() == '[' && s[1] == '[') {
        if (s.substr(s.size() - 2) != "]]")
          throw ConfigError(where + ": malformed table array header");
        const std::string name = strip(s.substr(2, s.size() - 4));
        if (name.empty()) throw ConfigError(where + ": empty table name");
        const int idx = table_counts[name]++;
        prefix = name + "." + std::to_string(idx) + ".";
      } else if (s.front() == '[') {
        if (s.back() != ']')
          throw ConfigError(where + ": malformed section header");
        const std::string name = strip(s.substr(1, s.size() - 2));
        if (name.empty()) throw ConfigError(where + ": empty section name");
        prefix = name + ".";
      } else {
        const size_t eq = s.find('=');
        if (eq == std::string::npos)
          throw ConfigError(where + ": expected `key = value`");
        const std::string key = strip(s.substr(0, eq));
        const std::string val = strip(s.substr(eq + 1));
        if (key.empty()) throw ConfigError(where + ": empty key");
        if (val.empty()) throw ConfigError(where + ": empty value");
        cfg.values_[prefix + key] = parse_value(val, where);
      }
    }
    return cfg;
  }

  static Config parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str(), path);
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  double get_number(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    require_kind(it, ConfigValue::Kind::Number, "number");
    return it->second.number;
  }

  int get_int(const std::string& key, int fallback) const {
    const double v = get_number(key, double(fallback));
    const double r = std::round(v);
    if (std::abs(v - r) > 1e-9)
      throw ConfigError("config key `" + key + "` must be an integer");
    return int(r);
  }

  bool get_bool(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    require_kind(it, ConfigValue::Kind::Bool, "boolean");
    return it->second.boolean;
  }

  std::string get_string(const std::string& key,
                         const std::string& fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    require_kind(it, ConfigValue::Kind::String, "string");
    return it->second.str;
  }

  std::vector<double> get_array(const std::string& key,
                                const std::vector<double>& fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    require_kind(it, ConfigValue::Kind::Array, "array");
    return it->second.array;
  }

  /// Number of `[[name]]` tables seen (max index + 1, 0 when absent).
  int table_count(const std::string& name) const {
    int count = 0;
    const std::string prefix = name + ".";
    for (const auto& [key, value] : values_) {
      if (key.rfind(prefix, 0) != 0) continue;
      const size_t dot = key.find('.', prefix.size());
      if (dot == std::string::npos) continue;
      try {
        const int idx = std::stoi(key.substr(prefix.size(), dot - prefix.size()));
        count = std::max(count, idx + 1);
      } catch (const std::exception&) {
      }
    }
    return count;
  }

  /// Canonical serialization: sorted `key = value` lines. Stable input for
  /// the config hash and a human-readable echo of the effective config.
  std::string canonical() const {
    std::ostringstream out;
    char buf[64];
    for (const auto& [key, v] : values_) {
      out << key << " = ";
      switch (v.kind) {
        case ConfigValue::Kind::Number:
          std::snprintf(buf, sizeof(buf), "%.17g", v.number);
          out << buf;
          break;
        case ConfigValue::Kind::Bool:
          out << (v.boolean ? "true" : "false");
          break;
        case ConfigValue::Kind::String:
          out << '"' << v.str << '"';
          break;
        case ConfigValue::Kind::Array:
          out << '[';
          for (size_t i = 0; i < v.array.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g", v.array[i]);
            out << (i ? ", " : "") << buf;
          }
          out << ']';
          break;
      }
      out << '\n';
    }
    return out.str();
  }

  /// FNV-1a 64-bit over the canonical serialization, as fixed-width hex.
  std::string hash() const {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : canonical()) {
      h ^= c;
      h *= 1099511628211ull;
    }
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)h);
    return buf;
  }

 private:
  static std::string strip(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  }

  /// Removes a trailing comment; `#` inside a quoted string is kept.
  static std::string strip_comment(const std::string& s) {
    bool in_string = false;
    for (size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) in_string = !in_string;
      if (s[i] == '#' && !in_string) return s.substr(0, i);
    }
    return s;
  }

  static ConfigValue parse_value(const std::string& s,
                                 const std::string& where) {
    ConfigValue v;
    if (s.front() == '"') {
      if (s.size() < 2 || s.back() != '"')
        throw ConfigError(where + ": unterminated string");
      v.kind = ConfigValue::Kind::String;
      v.str = s.substr(1, s.size() - 2);
      return v;
    }
    if (s == "true" || s == "false") {
      v.kind = ConfigValue::Kind::Bool;
      v.boolean = (s == "true");
      return v;
    }
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(where + ": unterminated array");
      v.kind = ConfigValue::Kind::Array;
      std::string inner = s.substr(1, s.size() - 2);
      std::istringstream ss(inner);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        const std::string t = strip(tok);
        if (t.empty()) {
          if (ss.eof() && v.array.empty()) break;  // "[]"
          throw ConfigError(where + ": empty array element");
        }
        v.array.push_back(parse_number(t, where));
      }
      return v;
    }
    v.kind = ConfigValue::Kind::Number;
    v.number = parse_number(s, where);
    return v;
  }

  static double parse_number(const std::string& s, const std::string& where) {
    try {
      size_t used = 0;
      const double d = std::stod(s, &used);
      if (used != s.size())
        throw ConfigError(where + ": trailing characters after number `" + s +
                          "`");
      return d;
    } catch (const std::invalid_argument&) {
      throw ConfigError(where + ": not a number: `" + s + "`");
    } catch (const std::out_of_range&) {
      throw ConfigError(where + ": number out of range: `" + s + "`");
    }
  }

  static void require_kind(std::map<std::string, ConfigValue>::const_iterator
                               it,
                           ConfigValue::Kind kind, const char* what) {
    if (it->second.kind != kind)
      throw ConfigError("config key `" + it->first + "` must be a " +
                        std::string(what));
  }

  std::map<std::string, ConfigValue> values_;
};

}  // namespace io
}  // namespace opslam

#endif  // OPSLAM_IO_CONFIG_HPP_
