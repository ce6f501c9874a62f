#pragma once

#include <stdexcept>
#include <string>

namespace besovlab {

/// Error raised by library operations. `code()` is a stable, machine-readable
/// tag such as "outside-domain" or "grid-too-large"; `what()` carries the
/// tag followed by a human-readable detail.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& detail)
        : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

}  // namespace besovlab
