#pragma once

#include <map>
#include <string>
#include <vector>

namespace thermokin {

// Minimal TOML reader covering what the config files use: comments, [table]
// headers, bare keys, strings, booleans, integers, floats, one-line arrays
// (nesting allowed) and one-line inline tables.  Inline tables and section
// headers are flattened into dotted keys ("sim.eps", "kernel.kind", ...).
struct TomlValue {
  enum class Kind { String, Bool, Int, Float, Array };
  Kind kind = Kind::Int;
  std::string str;
  bool b = false;
  long long i = 0;
  double f = 0.0;
  std::vector<TomlValue> items;

  bool is_number() const { return kind == Kind::Int || kind == Kind::Float; }
  double number() const; // Int or Float, throws otherwise
};

struct TomlDoc {
  std::map<std::string, TomlValue> values;

  bool has(const std::string& key) const { return values.count(key) != 0; }
  const TomlValue* find(const std::string& key) const;
  const TomlValue& at(const std::string& key) const; // throws if missing

  double get_number(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  std::vector<double> get_number_array(const std::string& key,
                                       const std::vector<double>& fallback) const;
};

TomlDoc parse_toml(const std::string& text);
TomlDoc parse_toml_file(const std::string& path);

} // namespace thermokin
