#include "mig/toml.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mig::toml {

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
  throw std::runtime_error("config line " + std::to_string(line) + ": " + msg);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace((unsigned char)s.front())) s.remove_prefix(1);
  while (!s.empty() && std::isspace((unsigned char)s.back())) s.remove_suffix(1);
  return s;
}

// Strips a trailing comment, respecting quoted strings.
std::string_view strip_comment(std::string_view s) {
  bool in_str = false;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') in_str = !in_str;
    if (s[i] == '#' && !in_str) return s.substr(0, i);
  }
  return s;
}

Value parse_scalar(std::string_view tok, int line) {
  tok = trim(tok);
  if (tok.empty()) fail(line, "empty value");
  if (tok.front() == '"') {
    if (tok.size() < 2 || tok.back() != '"') fail(line, "unterminated string");
    std::string out;
    for (size_t i = 1; i + 1 < tok.size(); ++i) {
      if (tok[i] == '\\' && i + 2 < tok.size()) {
        ++i;
        switch (tok[i]) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: fail(line, "unsupported escape in string");
        }
      } else {
        out += tok[i];
      }
    }
    return Value{out};
  }
  if (tok == "true") return Value{true};
  if (tok == "false") return Value{false};

  const std::string txt(tok);
  if (tok.find_first_of(".eE") == std::string_view::npos ||
      (tok.size() > 1 && (tok.substr(0, 2) == "0x" || tok.substr(0, 2) == "0X"))) {
    char* end = nullptr;
    long long i = std::strtoll(txt.c_str(), &end, 0);
    if (end && *end == '\0') return Value{i};
  }
  char* end = nullptr;
  double d = std::strtod(txt.c_str(), &end);
  if (end && *end == '\0') return Value{d};
  fail(line, "cannot parse value '" + txt + "'");
}

Value parse_value(std::string_view tok, int line) {
  tok = trim(tok);
  if (!tok.empty() && tok.front() == '[') {
    if (tok.back() != ']') fail(line, "unterminated array");
    std::string_view body = tok.substr(1, tok.size() - 2);
    std::vector<Value> items;
    size_t start = 0;
    bool in_str = false;
    for (size_t i = 0; i <= body.size(); ++i) {
      if (i < body.size() && body[i] == '"') in_str = !in_str;
      if (i == body.size() || (body[i] == ',' && !in_str)) {
        std::string_view piece = trim(body.substr(start, i - start));
        if (!piece.empty()) items.push_back(parse_scalar(piece, line));
        start = i + 1;
      }
    }
    return Value{items};
  }
  return parse_scalar(tok, line);
}

}  // namespace

bool Value::as_bool() const {
  if (!is_bool()) throw std::runtime_error("config value is not a boolean");
  return std::get<bool>(v);
}

long long Value::as_int() const {
  if (is_int()) return std::get<long long>(v);
  throw std::runtime_error("config value is not an integer");
}

double Value::as_double() const {
  if (is_int()) return double(std::get<long long>(v));
  if (std::holds_alternative<double>(v)) return std::get<double>(v);
  throw std::runtime_error("config value is not a number");
}

const std::string& Value::as_string() const {
  if (!is_string()) throw std::runtime_error("config value is not a string");
  return std::get<std::string>(v);
}

const std::vector<Value>& Value::as_array() const {
  if (!is_array()) throw std::runtime_error("config value is not an array");
  return std::get<std::vector<Value>>(v);
}

Document parse(const std::string& text) {
  Document doc;
  std::string table;
  std::istringstream ss(text);
  std::string raw;
  int line = 0;
  while (std::getline(ss, raw)) {
    ++line;
    std::string_view s = trim(strip_comment(raw));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "unterminated table header");
      std::string_view name = trim(s.substr(1, s.size() - 2));
      if (name.empty() || name.find('[') != std::string_view::npos)
        fail(line, "bad table name");
      table = std::string(name);
      doc[table];  // a header alone creates the table
      continue;
    }
    const size_t eq = s.find('=');
    if (eq == std::string_view::npos) fail(line, "expected key = value");
    std::string key(trim(s.substr(0, eq)));
    if (key.empty()) fail(line, "empty key");
    Value val = parse_value(s.substr(eq + 1), line);
    auto [it, inserted] = doc[table].emplace(key, std::move(val));
    if (!inserted) fail(line, "duplicate key '" + key + "'");
  }
  return doc;
}

Document parse_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse(buf.str());
}

}  // namespace mig::toml
