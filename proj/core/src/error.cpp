#include "gbm_cutoff/error.hpp"

#include <utility>

namespace gbm {

Error::Error(std::string code, const std::string& message)
    : std::runtime_error(code + ": " + message), code_(std::move(code)), message_(message) {}

void fail(const std::string& code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace gbm
