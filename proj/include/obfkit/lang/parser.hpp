#pragma once

#include "obfkit/lang/ast.hpp"
#include "obfkit/lang/diagnostics.hpp"
#include "obfkit/lang/lexer.hpp"

namespace obfkit::lang {

// Recursive-descent parser for the Java subset (see docs/grammar.md).
// Throws ParseError with category Syntax or UnsupportedConstruct.
Ast parse(const TokenStream& tokens);

// tokenize + parse in one step.
Ast parse_source(std::string_view source);

// Binary operator precedence, shared by parser and printer. Higher binds
// tighter; 0 for non-binary tokens.
int binary_precedence(std::string_view op);

}  // namespace obfkit::lang
