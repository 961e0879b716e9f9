#pragma once

#include <stdexcept>
#include <string>

namespace mdagkit {

// Malformed graph-file input.  line/col are 1-based; col points at the
// offending token.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, int col, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ", col " +
                             std::to_string(col) + ": " + what),
          line_(line), col_(col) {}
    int line() const { return line_; }
    int col() const { return col_; }
private:
    int line_;
    int col_;
};

// Violated operation precondition or graph-level constraint (unknown vertex,
// unfixable vertex, size cap exceeded, ...).
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mdagkit
