#include "sesc/toml_lite.hpp"

#include <cctype>
#include <cstdlib>

#include "sesc/errors.hpp"

namespace sesc::toml {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') {
      in_string = !in_string;
    } else if (line[i] == '#' && !in_string) {
      return line.substr(0, i);
    }
  }
  return line;
}

bool valid_key(const std::string& key) {
  if (key.empty()) return false;
  for (char ch : key) {
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_') {
      return false;
    }
  }
  return true;
}

bool parse_number(const std::string& text, double* out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size()) return false;
  *out = v;
  return true;
}

// Splits "a, b, c" at top-level commas (commas inside brackets stay).
std::vector<std::string> split_items(const std::string& body) {
  std::vector<std::string> items;
  int depth = 0;
  std::string cur;
  for (char ch : body) {
    if (ch == '[') ++depth;
    if (ch == ']') --depth;
    if (ch == ',' && depth == 0) {
      items.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!trim(cur).empty()) {
    items.push_back(cur);
  }
  return items;
}

}  // namespace

Table parse(const std::string& text) {
  Table table;
  std::vector<std::string> errors;
  std::string section;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string raw =
        text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
    pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        errors.push_back("line " + std::to_string(line_no) +
                         ": unterminated section header");
        continue;
      }
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (!valid_key(name)) {
        errors.push_back("line " + std::to_string(line_no) +
                         ": bad section name '" + name + "'");
        continue;
      }
      section = name;
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(line_no) +
                       ": expected 'key = value'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value_text = trim(line.substr(eq + 1));
    if (!valid_key(key)) {
      errors.push_back("line " + std::to_string(line_no) + ": bad key '" +
                       key + "'");
      continue;
    }
    const std::string path = section.empty() ? key : section + "." + key;
    if (table.count(path) != 0) {
      errors.push_back("line " + std::to_string(line_no) + ": duplicate key '" +
                       path + "'");
      continue;
    }

    Value value;
    value.line = line_no;
    if (value_text.empty()) {
      errors.push_back("line " + std::to_string(line_no) + ": missing value");
      continue;
    }

    if (value_text.front() == '"') {
      if (value_text.size() < 2 || value_text.back() != '"') {
        errors.push_back("line " + std::to_string(line_no) +
                         ": unterminated string");
        continue;
      }
      value.kind = Value::Kind::String;
      value.string = value_text.substr(1, value_text.size() - 2);
    } else if (value_text.front() == '[') {
      if (value_text.back() != ']') {
        errors.push_back("line " + std::to_string(line_no) +
                         ": unterminated array");
        continue;
      }
      const std::string body = value_text.substr(1, value_text.size() - 2);
      const auto items = split_items(body);
      const bool nested = !items.empty() && trim(items.front()).front() == '[';
      bool ok = true;
      if (nested) {
        value.kind = Value::Kind::NumberMatrix;
        for (const auto& item : items) {
          const std::string row_text = trim(item);
          if (row_text.size() < 2 || row_text.front() != '[' ||
              row_text.back() != ']') {
            ok = false;
            break;
          }
          std::vector<double> row;
          for (const auto& cell :
               split_items(row_text.substr(1, row_text.size() - 2))) {
            double v = 0.0;
            if (!parse_number(cell, &v)) {
              ok = false;
              break;
            }
            row.push_back(v);
          }
          if (!ok) break;
          value.matrix.push_back(std::move(row));
        }
      } else {
        value.kind = Value::Kind::NumberArray;
        for (const auto& item : items) {
          double v = 0.0;
          if (!parse_number(item, &v)) {
            ok = false;
            break;
          }
          value.array.push_back(v);
        }
      }
      if (!ok) {
        errors.push_back("line " + std::to_string(line_no) +
                         ": malformed array value for '" + path + "'");
        continue;
      }
    } else {
      if (!parse_number(value_text, &value.number)) {
        errors.push_back("line " + std::to_string(line_no) +
                         ": expected number, string, or array for '" + path +
                         "'");
        continue;
      }
      value.kind = Value::Kind::Number;
    }
    table.emplace(path, std::move(value));
  }

  if (!errors.empty()) {
    throw ConfigError(std::move(errors));
  }
  return table;
}

}  // namespace sesc::toml
