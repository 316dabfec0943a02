#include "obfkit/lang/identifier_table.hpp"

#include <unordered_map>

#include "obfkit/lang/walk.hpp"

namespace obfkit::lang {

std::vector<IdentifierInfo> collect_identifiers(const Ast& ast) {
    std::vector<IdentifierInfo> out;
    std::unordered_map<int, size_t> by_decl;          // decl_id -> index in out
    std::unordered_map<int, size_t> method_by_index;  // method index -> index in out

    for (size_t mi = 0; mi < ast.unit.methods.size(); ++mi) {
        const Method& m = ast.unit.methods[mi];
        if (m.name == "main") continue;
        method_by_index[static_cast<int>(mi)] = out.size();
        out.push_back({m.name, IdentKind::Method, m.id, static_cast<int>(mi), {}});
    }
    for (size_t mi = 0; mi < ast.unit.methods.size(); ++mi) {
        const Method& m = ast.unit.methods[mi];
        // main's signature is fixed by the judge, so its parameter stays.
        if (m.name != "main") {
            for (const auto& p : m.params) {
                by_decl[p.id] = out.size();
                out.push_back({p.name, IdentKind::Param, p.id, static_cast<int>(mi), {}});
            }
        }
        walk_stmts(*m.body, [&](const Stmt& s) {
            if (const auto* decl = s.as<VarDeclStmt>()) {
                for (const auto& item : decl->items) {
                    by_decl[item.id] = out.size();
                    out.push_back(
                        {item.name, IdentKind::Local, item.id, static_cast<int>(mi), {}});
                }
            }
        });
    }
    for (const auto& m : ast.unit.methods) {
        walk_stmt_exprs(*m.body, [&](const Expr& e) {
            if (const auto* ref = e.as<NameRef>()) {
                auto it = by_decl.find(ref->decl_id);
                if (it != by_decl.end()) out[it->second].uses.push_back(e.span);
            } else if (const auto* call = e.as<CallExpr>()) {
                auto it = method_by_index.find(call->method_index);
                if (it != method_by_index.end()) out[it->second].uses.push_back(e.span);
            }
        });
    }
    return out;
}

std::vector<IdentifierInfo> collect_variables(const Ast& ast) {
    std::vector<IdentifierInfo> out;
    for (auto& info : collect_identifiers(ast))
        if (info.kind != IdentKind::Method) out.push_back(std::move(info));
    return out;
}

}  // namespace obfkit::lang
