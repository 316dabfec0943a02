#include "obfkit/lang/ast.hpp"

namespace obfkit::lang {

namespace {

template <typename T>
std::vector<ExprPtr> clone_exprs(const std::vector<T>& v) {
    std::vector<ExprPtr> out;
    out.reserve(v.size());
    for (const auto& e : v) out.push_back(e ? clone_expr(*e) : nullptr);
    return out;
}

}  // namespace

std::string Type::to_string() const {
    const char* name = "?";
    switch (base) {
        case BaseType::Int: name = "int"; break;
        case BaseType::Long: name = "long"; break;
        case BaseType::Double: name = "double"; break;
        case BaseType::Boolean: name = "boolean"; break;
        case BaseType::Char: name = "char"; break;
        case BaseType::String: name = "String"; break;
        case BaseType::Scanner: name = "Scanner"; break;
        case BaseType::Void: name = "void"; break;
    }
    return is_array ? std::string(name) + "[]" : std::string(name);
}

ExprPtr clone_expr(const Expr& e) {
    auto out = std::make_unique<Expr>();
    out->span = e.span;
    out->id = e.id;
    out->type = e.type;
    out->node = std::visit(
        [](const auto& n) -> Expr::Node {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, UnaryExpr>) {
                UnaryExpr c;
                c.op = n.op;
                c.prefix = n.prefix;
                c.operand = clone_expr(*n.operand);
                return c;
            } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                BinaryExpr c;
                c.op = n.op;
                c.lhs = clone_expr(*n.lhs);
                c.rhs = clone_expr(*n.rhs);
                return c;
            } else if constexpr (std::is_same_v<T, AssignExpr>) {
                AssignExpr c;
                c.op = n.op;
                c.target = clone_expr(*n.target);
                c.value = clone_expr(*n.value);
                return c;
            } else if constexpr (std::is_same_v<T, TernaryExpr>) {
                TernaryExpr c;
                c.cond = clone_expr(*n.cond);
                c.then_branch = clone_expr(*n.then_branch);
                c.else_branch = clone_expr(*n.else_branch);
                return c;
            } else if constexpr (std::is_same_v<T, CastExpr>) {
                CastExpr c;
                c.type = n.type;
                c.operand = clone_expr(*n.operand);
                return c;
            } else if constexpr (std::is_same_v<T, IndexExpr>) {
                IndexExpr c;
                c.array = clone_expr(*n.array);
                c.index = clone_expr(*n.index);
                return c;
            } else if constexpr (std::is_same_v<T, NewArrayExpr>) {
                NewArrayExpr c;
                c.elem_type = n.elem_type;
                c.size = clone_expr(*n.size);
                return c;
            } else if constexpr (std::is_same_v<T, ArrayInitExpr>) {
                ArrayInitExpr c;
                c.elements = clone_exprs(n.elements);
                return c;
            } else if constexpr (std::is_same_v<T, CallExpr>) {
                CallExpr c;
                c.callee = n.callee;
                c.method_index = n.method_index;
                c.args = clone_exprs(n.args);
                return c;
            } else if constexpr (std::is_same_v<T, MethodCallExpr>) {
                MethodCallExpr c;
                c.receiver = clone_expr(*n.receiver);
                c.method = n.method;
                c.builtin = n.builtin;
                c.args = clone_exprs(n.args);
                return c;
            } else if constexpr (std::is_same_v<T, StaticCallExpr>) {
                StaticCallExpr c;
                c.cls = n.cls;
                c.method = n.method;
                c.builtin = n.builtin;
                c.args = clone_exprs(n.args);
                return c;
            } else if constexpr (std::is_same_v<T, FieldAccessExpr>) {
                FieldAccessExpr c;
                c.receiver = clone_expr(*n.receiver);
                c.field = n.field;
                c.builtin = n.builtin;
                return c;
            } else {
                return n;  // literal / NameRef / NewScannerExpr: trivially copyable
            }
        },
        e.node);
    return out;
}

StmtPtr clone_stmt(const Stmt& s) {
    auto out = std::make_unique<Stmt>();
    out->span = s.span;
    out->id = s.id;
    out->leading_comments = s.leading_comments;
    out->node = std::visit(
        [](const auto& n) -> Stmt::Node {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, VarDeclStmt>) {
                VarDeclStmt c;
                c.type = n.type;
                for (const auto& item : n.items) {
                    VarDeclItem ci;
                    ci.name = item.name;
                    ci.init = item.init ? clone_expr(*item.init) : nullptr;
                    ci.name_span = item.name_span;
                    ci.id = item.id;
                    ci.slot = item.slot;
                    c.items.push_back(std::move(ci));
                }
                return c;
            } else if constexpr (std::is_same_v<T, ExprStmt>) {
                ExprStmt c;
                c.expr = clone_expr(*n.expr);
                return c;
            } else if constexpr (std::is_same_v<T, BlockStmt>) {
                BlockStmt c;
                c.trailing_comments = n.trailing_comments;
                for (const auto& st : n.statements) c.statements.push_back(clone_stmt(*st));
                return c;
            } else if constexpr (std::is_same_v<T, IfStmt>) {
                IfStmt c;
                c.cond = clone_expr(*n.cond);
                c.then_branch = clone_stmt(*n.then_branch);
                c.else_branch = n.else_branch ? clone_stmt(*n.else_branch) : nullptr;
                return c;
            } else if constexpr (std::is_same_v<T, WhileStmt>) {
                WhileStmt c;
                c.cond = clone_expr(*n.cond);
                c.body = clone_stmt(*n.body);
                return c;
            } else if constexpr (std::is_same_v<T, ForStmt>) {
                ForStmt c;
                c.init = n.init ? clone_stmt(*n.init) : nullptr;
                c.init_exprs = clone_exprs(n.init_exprs);
                c.cond = n.cond ? clone_expr(*n.cond) : nullptr;
                c.update = clone_exprs(n.update);
                c.body = clone_stmt(*n.body);
                return c;
            } else if constexpr (std::is_same_v<T, ReturnStmt>) {
                ReturnStmt c;
                c.value = n.value ? clone_expr(*n.value) : nullptr;
                return c;
            } else {
                return n;  // Break/Continue/Empty
            }
        },
        s.node);
    return out;
}

Ast Ast::clone() const {
    Ast out;
    out.next_id = next_id;
    out.unit.imports = unit.imports;
    out.unit.class_name = unit.class_name;
    out.unit.leading_comments = unit.leading_comments;
    out.unit.trailing_comments = unit.trailing_comments;
    for (const auto& m : unit.methods) {
        Method c;
        c.is_public = m.is_public;
        c.return_type = m.return_type;
        c.name = m.name;
        c.params = m.params;
        c.body = clone_stmt(*m.body);
        c.name_span = m.name_span;
        c.id = m.id;
        c.frame_slots = m.frame_slots;
        c.leading_comments = m.leading_comments;
        out.unit.methods.push_back(std::move(c));
    }
    return out;
}

const Method* Ast::find_method(const std::string& name) const {
    for (const auto& m : unit.methods)
        if (m.name == name) return &m;
    return nullptr;
}

}  // namespace obfkit::lang
