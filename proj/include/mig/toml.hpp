#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace mig::toml {

// Minimal TOML subset: one level of [table] headers, key = value lines,
// # comments, values limited to strings, integers, floats, booleans and flat
// arrays. Covers the experiment config files; nothing more.
struct Value {
  std::variant<bool, long long, double, std::string, std::vector<Value>> v;

  bool is_bool() const { return std::holds_alternative<bool>(v); }
  bool is_int() const { return std::holds_alternative<long long>(v); }
  bool is_number() const { return is_int() || std::holds_alternative<double>(v); }
  bool is_string() const { return std::holds_alternative<std::string>(v); }
  bool is_array() const { return std::holds_alternative<std::vector<Value>>(v); }

  bool as_bool() const;
  long long as_int() const;
  double as_double() const;
  const std::string& as_string() const;
  const std::vector<Value>& as_array() const;
};

using Table = std::map<std::string, Value>;

// Top-level keys live in the "" table.
using Document = std::map<std::string, Table>;

Document parse(const std::string& text);
Document parse_file(const std::string& path);

}  // namespace mig::toml
