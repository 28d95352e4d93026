#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace fundus {

// Toolkit-wide exception. `code()` is a stable kebab-case identifier
// (e.g. "dimension-mismatch") that tests and the CLI exit mapping key on;
// the human-readable detail goes into what().
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& detail)
        : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(std::string code, const std::string& detail) {
    throw Error(std::move(code), detail);
}

inline void require(bool ok, const char* code, const std::string& detail) {
    if (!ok) fail(code, detail);
}

} // namespace fundus
