#pragma once

#include <stdexcept>
#include <string>

namespace nlab {

/// Bad input: malformed words, schema violations, precondition failures.
/// CLI exit code 2.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// A configured cap would be exceeded (word length, repetition search, ...).
/// CLI exit code 3.
struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

/// Internal invariant violation; should be unreachable. CLI exit code 4.
struct InternalError : std::runtime_error {
    explicit InternalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace nlab
