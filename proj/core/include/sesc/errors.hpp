#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sesc {

// Config loading collects every violated invariant before failing, so a bad
// file is reported in one pass with field paths ("dither.a: ...").
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> errors)
      : std::runtime_error(join(errors)), errors_(std::move(errors)) {}

  const std::vector<std::string>& errors() const { return errors_; }

 private:
  static std::string join(const std::vector<std::string>& errors) {
    std::string out = "invalid configuration:";
    for (const auto& e : errors) {
      out += "\n  - " + e;
    }
    return out;
  }

  std::vector<std::string> errors_;
};

}  // namespace sesc
