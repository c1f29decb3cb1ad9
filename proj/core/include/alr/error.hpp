#pragma once

#include <stdexcept>
#include <string>

namespace alr {

// Categorized runtime failures. The category string ends up in CLI error
// output and drives the process exit code.
class Error : public std::runtime_error {
 public:
  Error(std::string category, const std::string& message)
      : std::runtime_error(category + ": " + message),
        category_(std::move(category)) {}

  const std::string& category() const { return category_; }

 private:
  std::string category_;
};

inline Error io_error(const std::string& msg) { return Error("io", msg); }
inline Error parse_error(const std::string& msg) { return Error("parse", msg); }
inline Error config_error(const std::string& msg) { return Error("config", msg); }
inline Error numeric_error(const std::string& msg) { return Error("numeric", msg); }
inline Error invalid_argument_error(const std::string& msg) {
  return Error("invalid_argument", msg);
}

}  // namespace alr
