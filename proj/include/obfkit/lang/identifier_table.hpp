#pragma once

#include <string>
#include <vector>

#include "obfkit/lang/ast.hpp"

namespace obfkit::lang {

enum class IdentKind { Param, Local, Method };

struct IdentifierInfo {
    std::string name;
    IdentKind kind = IdentKind::Local;
    int decl_id = -1;      // node id of the Param / VarDeclItem / Method
    int method_index = -1; // owning method (the method's own index for Method kind)
    std::vector<Span> uses;  // use sites, excluding the declaration itself

    int use_count() const { return static_cast<int>(uses.size()); }
};

// The table of renameable identifiers: user method names (never `main`),
// then per method its params followed by locals in source order. Requires a
// checked AST (decl ids resolved on NameRef nodes).
std::vector<IdentifierInfo> collect_identifiers(const Ast& ast);

// Just the renameable ones (params and locals), declaration order.
std::vector<IdentifierInfo> collect_variables(const Ast& ast);

}  // namespace obfkit::lang
