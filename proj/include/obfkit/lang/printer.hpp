#pragma once

#include <string>

#include "obfkit/lang/ast.hpp"

namespace obfkit::lang {

// Canonical deterministic source form: 4-space indent, one statement per
// line, always-braced bodies, fixed spacing. print(parse(print(a))) is a
// fixpoint of print(a).
std::string print_source(const Ast& ast);

// Escapes raw bytes into a Java string literal (with quotes).
std::string escape_string_literal(std::string_view bytes);

}  // namespace obfkit::lang
