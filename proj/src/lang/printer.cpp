#include "obfkit/lang/printer.hpp"

#include <cstdio>
#include <sstream>

#include "obfkit/lang/parser.hpp"

namespace obfkit::lang {

namespace {

constexpr int kIndentWidth = 4;

class Printer {
public:
    std::string run(const Ast& ast) {
        const auto& u = ast.unit;
        for (const auto& imp : u.imports) line(0, imp.text);
        if (!u.imports.empty()) out_ << "\n";
        for (const auto& c : u.leading_comments) comment(0, c);
        line(0, "public class " + u.class_name + " {");
        bool first = true;
        for (const auto& m : u.methods) {
            if (!first) out_ << "\n";
            first = false;
            print_method(m);
        }
        for (const auto& c : u.trailing_comments) comment(1, c);
        line(0, "}");
        return out_.str();
    }

private:
    std::ostringstream out_;

    void indent(int level) { out_ << std::string(level * kIndentWidth, ' '); }

    void line(int level, const std::string& text) {
        indent(level);
        out_ << text << "\n";
    }

    void comment(int level, const std::string& text) {
        indent(level);
        out_ << text << "\n";
    }

    void print_method(const Method& m) {
        for (const auto& c : m.leading_comments) comment(1, c);
        indent(1);
        if (m.is_public) out_ << "public ";
        out_ << "static " << m.return_type.to_string() << " " << m.name << "(";
        for (size_t i = 0; i < m.params.size(); ++i) {
            if (i) out_ << ", ";
            out_ << m.params[i].type.to_string() << " " << m.params[i].name;
        }
        out_ << ") ";
        print_block_body(*m.body->as<BlockStmt>(), 1);
        out_ << "\n";
    }

    // Prints "{...}" starting at the current output position; caller adds
    // the trailing newline.
    void print_block_body(const BlockStmt& block, int level) {
        if (block.statements.empty() && block.trailing_comments.empty()) {
            out_ << "{}";
            return;
        }
        out_ << "{\n";
        for (const auto& s : block.statements) print_stmt(*s, level + 1);
        for (const auto& c : block.trailing_comments) comment(level + 1, c);
        indent(level);
        out_ << "}";
    }

    // Any statement used as a loop/if body prints as a braced block.
    // Comments attached to a block statement move inside the braces.
    void print_body(const Stmt& s, int level) {
        if (const auto* b = s.as<BlockStmt>()) {
            if (b->statements.empty() && b->trailing_comments.empty() &&
                s.leading_comments.empty()) {
                out_ << "{}";
                return;
            }
            out_ << "{\n";
            for (const auto& c : s.leading_comments) comment(level + 1, c);
            for (const auto& st : b->statements) print_stmt(*st, level + 1);
            for (const auto& c : b->trailing_comments) comment(level + 1, c);
            indent(level);
            out_ << "}";
            return;
        }
        out_ << "{\n";
        print_stmt(s, level + 1);
        indent(level);
        out_ << "}";
    }

    void print_stmt(const Stmt& s, int level) {
        for (const auto& c : s.leading_comments) comment(level, c);
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, VarDeclStmt>) {
                    indent(level);
                    out_ << n.type.to_string() << " ";
                    for (size_t i = 0; i < n.items.size(); ++i) {
                        if (i) out_ << ", ";
                        out_ << n.items[i].name;
                        if (n.items[i].init) {
                            out_ << " = ";
                            print_expr(*n.items[i].init, 0);
                        }
                    }
                    out_ << ";\n";
                } else if constexpr (std::is_same_v<T, ExprStmt>) {
                    indent(level);
                    print_expr(*n.expr, 0);
                    out_ << ";\n";
                } else if constexpr (std::is_same_v<T, BlockStmt>) {
                    indent(level);
                    print_block_body(n, level);
                    out_ << "\n";
                } else if constexpr (std::is_same_v<T, IfStmt>) {
                    indent(level);
                    print_if_chain(n, level);
                    out_ << "\n";
                } else if constexpr (std::is_same_v<T, WhileStmt>) {
                    indent(level);
                    out_ << "while (";
                    print_expr(*n.cond, 0);
                    out_ << ") ";
                    print_body(*n.body, level);
                    out_ << "\n";
                } else if constexpr (std::is_same_v<T, ForStmt>) {
                    indent(level);
                    out_ << "for (";
                    if (n.init) {
                        if (const auto* decl = n.init->template as<VarDeclStmt>()) {
                            out_ << decl->type.to_string() << " ";
                            for (size_t i = 0; i < decl->items.size(); ++i) {
                                if (i) out_ << ", ";
                                out_ << decl->items[i].name;
                                if (decl->items[i].init) {
                                    out_ << " = ";
                                    print_expr(*decl->items[i].init, 0);
                                }
                            }
                        } else if (const auto* es = n.init->template as<ExprStmt>()) {
                            print_expr(*es->expr, 0);
                            for (const auto& e : n.init_exprs) {
                                out_ << ", ";
                                print_expr(*e, 0);
                            }
                        }
                    }
                    out_ << "; ";
                    if (n.cond) print_expr(*n.cond, 0);
                    out_ << "; ";
                    for (size_t i = 0; i < n.update.size(); ++i) {
                        if (i) out_ << ", ";
                        print_expr(*n.update[i], 0);
                    }
                    out_ << ") ";
                    print_body(*n.body, level);
                    out_ << "\n";
                } else if constexpr (std::is_same_v<T, ReturnStmt>) {
                    indent(level);
                    out_ << "return";
                    if (n.value) {
                        out_ << " ";
                        print_expr(*n.value, 0);
                    }
                    out_ << ";\n";
                } else if constexpr (std::is_same_v<T, BreakStmt>) {
                    line(level, "break;");
                } else if constexpr (std::is_same_v<T, ContinueStmt>) {
                    line(level, "continue;");
                } else if constexpr (std::is_same_v<T, EmptyStmt>) {
                    line(level, ";");
                }
            },
            s.node);
    }

    void print_if_chain(const IfStmt& s, int level) {
        out_ << "if (";
        print_expr(*s.cond, 0);
        out_ << ") ";
        print_body(*s.then_branch, level);
        if (s.else_branch) {
            out_ << " else ";
            if (const auto* elif = s.else_branch->as<IfStmt>()) {
                print_if_chain(*elif, level);
            } else {
                print_body(*s.else_branch, level);
            }
        }
    }

    // -- expressions -----------------------------------------------------

    static int precedence(const Expr& e) {
        return std::visit(
            [](const auto& n) -> int {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, AssignExpr>) return 1;
                else if constexpr (std::is_same_v<T, TernaryExpr>) return 2;
                else if constexpr (std::is_same_v<T, BinaryExpr>) return binary_precedence(n.op);
                else if constexpr (std::is_same_v<T, UnaryExpr>) return n.prefix ? 13 : 14;
                else if constexpr (std::is_same_v<T, CastExpr>) return 13;
                else if constexpr (std::is_same_v<T, IndexExpr> ||
                                   std::is_same_v<T, MethodCallExpr> ||
                                   std::is_same_v<T, FieldAccessExpr>) return 14;
                else return 15;
            },
            e.node);
    }

    void print_expr(const Expr& e, int min_prec) {
        int prec = precedence(e);
        bool wrap = prec < min_prec;
        if (wrap) out_ << "(";
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, IntLit> || std::is_same_v<T, DoubleLit> ||
                              std::is_same_v<T, StringLit> || std::is_same_v<T, CharLit>) {
                    out_ << n.text;
                } else if constexpr (std::is_same_v<T, BoolLit>) {
                    out_ << (n.value ? "true" : "false");
                } else if constexpr (std::is_same_v<T, NameRef>) {
                    out_ << n.name;
                } else if constexpr (std::is_same_v<T, UnaryExpr>) {
                    if (n.prefix) {
                        out_ << n.op;
                        bool force_paren = false;
                        if (const auto* inner = n.operand->template as<UnaryExpr>()) {
                            if (inner->prefix && !n.op.empty() && !inner->op.empty() &&
                                n.op.back() == inner->op.front())
                                force_paren = true;
                        }
                        if (force_paren) {
                            out_ << "(";
                            print_expr(*n.operand, 0);
                            out_ << ")";
                        } else {
                            print_expr(*n.operand, 13);
                        }
                    } else {
                        print_expr(*n.operand, 14);
                        out_ << n.op;
                    }
                } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                    print_expr(*n.lhs, prec);
                    out_ << " " << n.op << " ";
                    print_expr(*n.rhs, prec + 1);
                } else if constexpr (std::is_same_v<T, AssignExpr>) {
                    print_expr(*n.target, 2);
                    out_ << " " << n.op << " ";
                    print_expr(*n.value, 1);
                } else if constexpr (std::is_same_v<T, TernaryExpr>) {
                    print_expr(*n.cond, 3);
                    out_ << " ? ";
                    print_expr(*n.then_branch, 1);
                    out_ << " : ";
                    print_expr(*n.else_branch, 2);
                } else if constexpr (std::is_same_v<T, CastExpr>) {
                    out_ << "(" << n.type.to_string() << ") ";
                    print_expr(*n.operand, 13);
                } else if constexpr (std::is_same_v<T, IndexExpr>) {
                    print_expr(*n.array, 14);
                    out_ << "[";
                    print_expr(*n.index, 0);
                    out_ << "]";
                } else if constexpr (std::is_same_v<T, NewArrayExpr>) {
                    out_ << "new " << n.elem_type.to_string() << "[";
                    print_expr(*n.size, 0);
                    out_ << "]";
                } else if constexpr (std::is_same_v<T, ArrayInitExpr>) {
                    out_ << "{";
                    for (size_t i = 0; i < n.elements.size(); ++i) {
                        if (i) out_ << ", ";
                        print_expr(*n.elements[i], 0);
                    }
                    out_ << "}";
                } else if constexpr (std::is_same_v<T, NewScannerExpr>) {
                    out_ << "new Scanner(System.in)";
                } else if constexpr (std::is_same_v<T, CallExpr>) {
                    out_ << n.callee;
                    print_args(n.args);
                } else if constexpr (std::is_same_v<T, MethodCallExpr>) {
                    print_expr(*n.receiver, 14);
                    out_ << "." << n.method;
                    print_args(n.args);
                } else if constexpr (std::is_same_v<T, StaticCallExpr>) {
                    out_ << n.cls << "." << n.method;
                    print_args(n.args);
                } else if constexpr (std::is_same_v<T, FieldAccessExpr>) {
                    print_expr(*n.receiver, 14);
                    out_ << "." << n.field;
                }
            },
            e.node);
        if (wrap) out_ << ")";
    }

    void print_args(const std::vector<ExprPtr>& args) {
        out_ << "(";
        for (size_t i = 0; i < args.size(); ++i) {
            if (i) out_ << ", ";
            print_expr(*args[i], 0);
        }
        out_ << ")";
    }
};

}  // namespace

std::string print_source(const Ast& ast) { return Printer().run(ast); }

std::string escape_string_literal(std::string_view bytes) {
    std::string out = "\"";
    for (unsigned char c : bytes) {
        switch (c) {
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            case '\b': out += "\\b"; break;
            case '\f': out += "\\f"; break;
            case '\\': out += "\\\\"; break;
            case '"': out += "\\\""; break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += static_cast<char>(c);
                }
        }
    }
    out += "\"";
    return out;
}

}  // namespace obfkit::lang
