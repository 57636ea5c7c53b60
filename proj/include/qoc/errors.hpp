#ifndef QOC_ERRORS_HPP
#define QOC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qoc {

// Raised for malformed or inconsistent run configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when the iteration itself breaks down: a committed cost decrease
// beyond tolerance or an update equation without a real solution
// (CLI exit code 3).
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qoc

#endif
