#pragma once

#include <type_traits>

#include "obfkit/lang/ast.hpp"

// Pre-order traversals over AST subtrees. StmtT/ExprT may be const or
// non-const; the callback receives matching constness.

namespace obfkit::lang {

template <typename ExprT, typename Fn>
void walk_exprs(ExprT& e, Fn&& fn) {
    fn(e);
    std::visit(
        [&](auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, UnaryExpr>) {
                walk_exprs(*n.operand, fn);
            } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                walk_exprs(*n.lhs, fn);
                walk_exprs(*n.rhs, fn);
            } else if constexpr (std::is_same_v<T, AssignExpr>) {
                walk_exprs(*n.target, fn);
                walk_exprs(*n.value, fn);
            } else if constexpr (std::is_same_v<T, TernaryExpr>) {
                walk_exprs(*n.cond, fn);
                walk_exprs(*n.then_branch, fn);
                walk_exprs(*n.else_branch, fn);
            } else if constexpr (std::is_same_v<T, CastExpr>) {
                walk_exprs(*n.operand, fn);
            } else if constexpr (std::is_same_v<T, IndexExpr>) {
                walk_exprs(*n.array, fn);
                walk_exprs(*n.index, fn);
            } else if constexpr (std::is_same_v<T, NewArrayExpr>) {
                walk_exprs(*n.size, fn);
            } else if constexpr (std::is_same_v<T, ArrayInitExpr>) {
                for (auto& el : n.elements) walk_exprs(*el, fn);
            } else if constexpr (std::is_same_v<T, CallExpr>) {
                for (auto& a : n.args) walk_exprs(*a, fn);
            } else if constexpr (std::is_same_v<T, MethodCallExpr>) {
                walk_exprs(*n.receiver, fn);
                for (auto& a : n.args) walk_exprs(*a, fn);
            } else if constexpr (std::is_same_v<T, StaticCallExpr>) {
                for (auto& a : n.args) walk_exprs(*a, fn);
            } else if constexpr (std::is_same_v<T, FieldAccessExpr>) {
                walk_exprs(*n.receiver, fn);
            }
        },
        e.node);
}

template <typename StmtT, typename Fn>
void walk_stmts(StmtT& s, Fn&& fn) {
    fn(s);
    std::visit(
        [&](auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, BlockStmt>) {
                for (auto& st : n.statements) walk_stmts(*st, fn);
            } else if constexpr (std::is_same_v<T, IfStmt>) {
                walk_stmts(*n.then_branch, fn);
                if (n.else_branch) walk_stmts(*n.else_branch, fn);
            } else if constexpr (std::is_same_v<T, WhileStmt>) {
                walk_stmts(*n.body, fn);
            } else if constexpr (std::is_same_v<T, ForStmt>) {
                if (n.init) walk_stmts(*n.init, fn);
                walk_stmts(*n.body, fn);
            }
        },
        s.node);
}

// Every expression under a statement subtree (loop/if bodies included).
template <typename StmtT, typename Fn>
void walk_stmt_exprs(StmtT& root, Fn&& fn) {
    walk_stmts(root, [&](auto& s) {
        std::visit(
            [&](auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, VarDeclStmt>) {
                    for (auto& item : n.items)
                        if (item.init) walk_exprs(*item.init, fn);
                } else if constexpr (std::is_same_v<T, ExprStmt>) {
                    walk_exprs(*n.expr, fn);
                } else if constexpr (std::is_same_v<T, IfStmt>) {
                    walk_exprs(*n.cond, fn);
                } else if constexpr (std::is_same_v<T, WhileStmt>) {
                    walk_exprs(*n.cond, fn);
                } else if constexpr (std::is_same_v<T, ForStmt>) {
                    for (auto& e : n.init_exprs) walk_exprs(*e, fn);
                    if (n.cond) walk_exprs(*n.cond, fn);
                    for (auto& e : n.update) walk_exprs(*e, fn);
                } else if constexpr (std::is_same_v<T, ReturnStmt>) {
                    if (n.value) walk_exprs(*n.value, fn);
                }
            },
            s.node);
    });
}

template <typename AstT, typename Fn>
void walk_ast_exprs(AstT& ast, Fn&& fn) {
    for (auto& m : ast.unit.methods) walk_stmt_exprs(*m.body, fn);
}

}  // namespace obfkit::lang
