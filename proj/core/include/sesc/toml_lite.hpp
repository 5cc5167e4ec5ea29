#pragma once

#include <map>
#include <string>
#include <vector>

namespace sesc::toml {

// Just enough TOML for scenario files: [section] headers, key = value lines,
// numbers, quoted strings, number arrays and one level of nesting for
// matrices.  Values keep their source line for error reporting.
struct Value {
  enum class Kind { Number, String, NumberArray, NumberMatrix };
  Kind kind = Kind::Number;
  double number = 0.0;
  std::string string;
  std::vector<double> array;
  std::vector<std::vector<double>> matrix;
  int line = 0;
};

// Keys are "section.name"; top-level keys have no dot.
using Table = std::map<std::string, Value>;

// Throws ConfigError listing every syntax problem found.
Table parse(const std::string& text);

}  // namespace sesc::toml
