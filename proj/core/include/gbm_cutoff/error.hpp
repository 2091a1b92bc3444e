#pragma once

#include <stdexcept>
#include <string>

namespace gbm {

// Every module failure carries a short machine-readable code ("dim_mismatch",
// "not_stable", ...) next to the human-readable message. The CLI prints the
// code verbatim.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message);

  const std::string& code() const noexcept { return code_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string code_;
  std::string message_;
};

[[noreturn]] void fail(const std::string& code, const std::string& message);

}  // namespace gbm
