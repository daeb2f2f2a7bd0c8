#pragma once

#include <stdexcept>
#include <string>

namespace coinfeed {

// Carries a stable machine-readable code ("game-not-finished", "wrong-K", ...)
// next to the human-readable message. CLI maps codes to exit statuses.
class GameError : public std::runtime_error {
 public:
  GameError(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& message) {
  throw GameError(code, message);
}

}  // namespace coinfeed
