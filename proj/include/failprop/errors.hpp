#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace failprop {

// Location of a construct in .fprop source text. line and column are
// 1-based; a default-constructed span means "no source location"
// (programmatically built models).
struct SourceSpan {
    std::string file;
    int line = 0;
    int column = 0;
    int length = 0;

    bool valid() const { return line >= 1 && column >= 1; }
    std::string to_string() const;
};

// One structural-rule violation reported by validate_structure.
struct Violation {
    std::string rule;     // stable rule id, e.g. "flow-source-output"
    std::string element;  // offending port/flow/function
    std::string message;
    SourceSpan span;
};

class Error : public std::runtime_error {
public:
    explicit Error(const std::string &message, SourceSpan span = {});
    const SourceSpan &span() const { return span_; }

private:
    SourceSpan span_;
};

// Lexical or syntactic error in .fprop text.
class ParseError : public Error {
public:
    ParseError(const std::string &message, SourceSpan span, std::string expected = "");
    const std::string &expected() const { return expected_; }

private:
    std::string expected_;
};

// Name-resolution, typing or structural error while building a model.
class SemanticError : public Error {
public:
    using Error::Error;
    SemanticError(const std::string &message, SourceSpan span, std::vector<Violation> violations);
    const std::vector<Violation> &violations() const { return violations_; }

private:
    std::vector<Violation> violations_;
};

} // namespace failprop
