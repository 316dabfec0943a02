#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "obfkit/lang/token.hpp"

namespace obfkit::lang {

enum class DiagCategory { Syntax, Undeclared, Type, UnsupportedConstruct };

struct Diagnostic {
    Span span;
    std::string message;
    DiagCategory category = DiagCategory::Syntax;

    std::string to_string() const;
};

struct CheckReport {
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return diagnostics.empty(); }
    std::string summary() const;
};

// Thrown by the lexer and parser; carries the offending location.
class ParseError : public std::runtime_error {
public:
    ParseError(Diagnostic diag, const std::string& what)
        : std::runtime_error(what), diag_(std::move(diag)) {}

    const Diagnostic& diagnostic() const { return diag_; }

private:
    Diagnostic diag_;
};

const char* diag_category_name(DiagCategory c);

}  // namespace obfkit::lang
