#pragma once

#include <stdexcept>
#include <string>

namespace calmet {

// Malformed input data (files, rows, headers). CLI exit code 2.
class parse_error : public std::runtime_error {
public:
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

// Violated operation precondition or type invariant. CLI exit code 3.
class precondition_error : public std::invalid_argument {
public:
    explicit precondition_error(const std::string& what) : std::invalid_argument(what) {}
};

// Degenerate numerics detected at runtime (e.g. all kernel weights vanished). CLI exit code 4.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace calmet
