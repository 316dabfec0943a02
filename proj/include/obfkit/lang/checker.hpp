#pragma once

#include <optional>
#include <string_view>

#include "obfkit/lang/ast.hpp"
#include "obfkit/lang/diagnostics.hpp"

namespace obfkit::lang {

struct CheckOptions {
    bool require_main = true;
};

// Resolves names to declarations and frame slots, types every expression,
// resolves built-in calls, and reports diagnostics. Annotates the AST in
// place; the AST is safe to interpret only when the report is ok().
CheckReport check(Ast& ast, const CheckOptions& options = {});

struct CheckedProgram {
    std::optional<Ast> ast;  // present iff parsing succeeded
    CheckReport report;

    bool ok() const { return ast.has_value() && report.ok(); }
};

// Parse + check in one step; parse errors become a one-entry report.
CheckedProgram analyze(std::string_view source, const CheckOptions& options = {});

}  // namespace obfkit::lang
