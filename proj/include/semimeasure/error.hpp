#pragma once

#include <stdexcept>
#include <string>

namespace semimeasure {

// Domain errors carry a stable machine-readable code ("NotInjective",
// "TagMismatch", ...) next to the human-readable message.  The CLI maps
// any DomainError to exit code 1.
class DomainError : public std::runtime_error {
public:
    DomainError(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& what) {
    throw DomainError(code, what);
}

inline void require(bool cond, const std::string& code, const std::string& what) {
    if (!cond) fail(code, what);
}

} // namespace semimeasure
