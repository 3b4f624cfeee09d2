#include "thermokin/toml.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace thermokin {

namespace {

[[noreturn]] void fail(int line, const std::string& what) {
  throw std::runtime_error("toml: line " + std::to_string(line) + ": " + what);
}

bool is_bare_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

void skip_ws(const std::string& s, size_t& i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
}

// strips a trailing comment, respecting basic strings
std::string strip_comment(const std::string& raw, int line) {
  std::string out;
  bool in_str = false;
  for (size_t i = 0; i < raw.size(); ++i) {
    const char c = raw[i];
    if (in_str) {
      if (c == '\\' && i + 1 < raw.size()) {
        out += c;
        out += raw[++i];
        continue;
      }
      if (c == '"') in_str = false;
      out += c;
      continue;
    }
    if (c == '"') {
      in_str = true;
      out += c;
      continue;
    }
    if (c == '#') break;
    out += c;
  }
  if (in_str) fail(line, "unterminated string");
  return out;
}

std::string parse_bare_key(const std::string& s, size_t& i, int line) {
  skip_ws(s, i);
  const size_t start = i;
  while (i < s.size() && is_bare_char(s[i])) ++i;
  if (i == start) fail(line, "expected a key");
  std::string key = s.substr(start, i - start);
  // dotted bare keys
  skip_ws(s, i);
  while (i < s.size() && s[i] == '.') {
    ++i;
    skip_ws(s, i);
    const size_t p = i;
    while (i < s.size() && is_bare_char(s[i])) ++i;
    if (i == p) fail(line, "expected a key after '.'");
    key += '.';
    key += s.substr(p, i - p);
    skip_ws(s, i);
  }
  return key;
}

TomlValue parse_value(const std::string& s, size_t& i, int line);

TomlValue parse_string(const std::string& s, size_t& i, int line) {
  TomlValue v;
  v.kind = TomlValue::Kind::String;
  ++i; // opening quote
  while (i < s.size() && s[i] != '"') {
    if (s[i] == '\\') {
      if (i + 1 >= s.size()) fail(line, "dangling escape");
      const char e = s[++i];
      switch (e) {
        case 'n': v.str += '\n'; break;
        case 't': v.str += '\t'; break;
        case '"': v.str += '"'; break;
        case '\\': v.str += '\\'; break;
        default: fail(line, std::string("unsupported escape \\") + e);
      }
      ++i;
      continue;
    }
    v.str += s[i++];
  }
  if (i >= s.size()) fail(line, "unterminated string");
  ++i; // closing quote
  return v;
}

TomlValue parse_number(const std::string& s, size_t& i, int line) {
  const size_t start = i;
  while (i < s.size() && s[i] != ',' && s[i] != ']' && s[i] != '}' &&
         s[i] != ' ' && s[i] != '\t')
    ++i;
  std::string tok = s.substr(start, i - start);
  std::string clean;
  for (char c : tok)
    if (c != '_') clean += c;
  if (clean.empty()) fail(line, "expected a value");
  const bool floaty = clean.find_first_of(".eE") != std::string::npos ||
                      clean.find("inf") != std::string::npos ||
                      clean.find("nan") != std::string::npos;
  TomlValue v;
  try {
    if (floaty) {
      v.kind = TomlValue::Kind::Float;
      size_t used = 0;
      v.f = std::stod(clean, &used);
      if (used != clean.size()) fail(line, "bad number '" + tok + "'");
    } else {
      v.kind = TomlValue::Kind::Int;
      size_t used = 0;
      v.i = std::stoll(clean, &used);
      if (used != clean.size()) fail(line, "bad integer '" + tok + "'");
    }
  } catch (const std::logic_error&) {
    fail(line, "bad number '" + tok + "'");
  }
  return v;
}

TomlValue parse_array(const std::string& s, size_t& i, int line) {
  TomlValue v;
  v.kind = TomlValue::Kind::Array;
  ++i; // '['
  skip_ws(s, i);
  if (i < s.size() && s[i] == ']') {
    ++i;
    return v;
  }
  while (true) {
    v.items.push_back(parse_value(s, i, line));
    skip_ws(s, i);
    if (i >= s.size()) fail(line, "unterminated array");
    if (s[i] == ',') {
      ++i;
      skip_ws(s, i);
      if (i < s.size() && s[i] == ']') { // trailing comma
        ++i;
        return v;
      }
      continue;
    }
    if (s[i] == ']') {
      ++i;
      return v;
    }
    fail(line, "expected ',' or ']' in array");
  }
}

TomlValue parse_value(const std::string& s, size_t& i, int line) {
  skip_ws(s, i);
  if (i >= s.size()) fail(line, "expected a value");
  const char c = s[i];
  if (c == '"') return parse_string(s, i, line);
  if (c == '[') return parse_array(s, i, line);
  if (s.compare(i, 4, "true") == 0 &&
      (i + 4 == s.size() || !is_bare_char(s[i + 4]))) {
    i += 4;
    TomlValue v;
    v.kind = TomlValue::Kind::Bool;
    v.b = true;
    return v;
  }
  if (s.compare(i, 5, "false") == 0 &&
      (i + 5 == s.size() || !is_bare_char(s[i + 5]))) {
    i += 5;
    TomlValue v;
    v.kind = TomlValue::Kind::Bool;
    v.b = false;
    return v;
  }
  return parse_number(s, i, line);
}

void insert_value(TomlDoc& doc, const std::string& key, TomlValue v, int line) {
  if (doc.values.count(key)) fail(line, "duplicate key '" + key + "'");
  doc.values.emplace(key, std::move(v));
}

// { k = v, k = v } flattened under prefix
void parse_inline_table(TomlDoc& doc, const std::string& prefix,
                        const std::string& s, size_t& i, int line) {
  ++i; // '{'
  skip_ws(s, i);
  if (i < s.size() && s[i] == '}') {
    ++i;
    return;
  }
  while (true) {
    const std::string key = parse_bare_key(s, i, line);
    skip_ws(s, i);
    if (i >= s.size() || s[i] != '=') fail(line, "expected '=' in inline table");
    ++i;
    skip_ws(s, i);
    if (i < s.size() && s[i] == '{')
      parse_inline_table(doc, prefix + key + ".", s, i, line);
    else
      insert_value(doc, prefix + key, parse_value(s, i, line), line);
    skip_ws(s, i);
    if (i >= s.size()) fail(line, "unterminated inline table");
    if (s[i] == ',') {
      ++i;
      continue;
    }
    if (s[i] == '}') {
      ++i;
      return;
    }
    fail(line, "expected ',' or '}' in inline table");
  }
}

} // namespace

double TomlValue::number() const {
  if (kind == Kind::Int) return static_cast<double>(i);
  if (kind == Kind::Float) return f;
  throw std::runtime_error("toml: value is not a number");
}

const TomlValue* TomlDoc::find(const std::string& key) const {
  auto it = values.find(key);
  return it == values.end() ? nullptr : &it->second;
}

const TomlValue& TomlDoc::at(const std::string& key) const {
  const TomlValue* v = find(key);
  if (!v) throw std::runtime_error("toml: missing key '" + key + "'");
  return *v;
}

double TomlDoc::get_number(const std::string& key, double fallback) const {
  const TomlValue* v = find(key);
  if (!v) return fallback;
  if (!v->is_number())
    throw std::runtime_error("toml: key '" + key + "' is not a number");
  return v->number();
}

long long TomlDoc::get_int(const std::string& key, long long fallback) const {
  const TomlValue* v = find(key);
  if (!v) return fallback;
  if (v->kind != TomlValue::Kind::Int)
    throw std::runtime_error("toml: key '" + key + "' is not an integer");
  return v->i;
}

bool TomlDoc::get_bool(const std::string& key, bool fallback) const {
  const TomlValue* v = find(key);
  if (!v) return fallback;
  if (v->kind != TomlValue::Kind::Bool)
    throw std::runtime_error("toml: key '" + key + "' is not a boolean");
  return v->b;
}

std::string TomlDoc::get_string(const std::string& key,
                                const std::string& fallback) const {
  const TomlValue* v = find(key);
  if (!v) return fallback;
  if (v->kind != TomlValue::Kind::String)
    throw std::runtime_error("toml: key '" + key + "' is not a string");
  return v->str;
}

std::vector<double> TomlDoc::get_number_array(
    const std::string& key, const std::vector<double>& fallback) const {
  const TomlValue* v = find(key);
  if (!v) return fallback;
  if (v->kind != TomlValue::Kind::Array)
    throw std::runtime_error("toml: key '" + key + "' is not an array");
  std::vector<double> out;
  for (const auto& item : v->items) {
    if (!item.is_number())
      throw std::runtime_error("toml: key '" + key +
                               "' has a non-numeric element");
    out.push_back(item.number());
  }
  return out;
}

TomlDoc parse_toml(const std::string& text) {
  TomlDoc doc;
  std::istringstream in(text);
  std::string raw;
  std::string prefix;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::string s = strip_comment(raw, line);
    size_t i = 0;
    skip_ws(s, i);
    if (i >= s.size()) continue;
    if (s[i] == '[') {
      ++i;
      const std::string name = parse_bare_key(s, i, line);
      skip_ws(s, i);
      if (i >= s.size() || s[i] != ']') fail(line, "expected ']'");
      ++i;
      skip_ws(s, i);
      if (i < s.size()) fail(line, "unexpected text after section header");
      prefix = name + ".";
      continue;
    }
    const std::string key = parse_bare_key(s, i, line);
    skip_ws(s, i);
    if (i >= s.size() || s[i] != '=') fail(line, "expected '=' after key");
    ++i;
    skip_ws(s, i);
    if (i < s.size() && s[i] == '{') {
      parse_inline_table(doc, prefix + key + ".", s, i, line);
    } else {
      insert_value(doc, prefix + key, parse_value(s, i, line), line);
    }
    skip_ws(s, i);
    if (i < s.size()) fail(line, "unexpected text after value");
  }
  return doc;
}

TomlDoc parse_toml_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_toml(buf.str());
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

} // namespace thermokin
