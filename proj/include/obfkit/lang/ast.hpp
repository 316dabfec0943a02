#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "obfkit/lang/token.hpp"

namespace obfkit::lang {

enum class BaseType { Int, Long, Double, Boolean, Char, String, Scanner, Void };

struct Type {
    BaseType base = BaseType::Void;
    bool is_array = false;

    bool operator==(const Type&) const = default;
    std::string to_string() const;
};

inline Type make_type(BaseType b, bool arr = false) { return Type{b, arr}; }

struct Expr;
struct Stmt;
using ExprPtr = std::unique_ptr<Expr>;
using StmtPtr = std::unique_ptr<Stmt>;

// ---- expressions ------------------------------------------------------

struct IntLit {
    int64_t value = 0;
    bool is_long = false;
    std::string text;  // original spelling, printed verbatim
};

struct DoubleLit {
    double value = 0;
    std::string text;
};

struct StringLit {
    std::string value;  // decoded bytes
    std::string text;   // source spelling with quotes/escapes
};

struct CharLit {
    uint8_t value = 0;
    std::string text;
};

struct BoolLit {
    bool value = false;
};

struct NameRef {
    std::string name;
    int decl_id = -1;  // node id of the declaring VarDeclItem/Param; set by checker
    int slot = -1;     // frame slot; set by checker
};

struct UnaryExpr {
    std::string op;  // + - ! ~ ++ --
    bool prefix = true;
    ExprPtr operand;
};

struct BinaryExpr {
    std::string op;
    ExprPtr lhs, rhs;
};

struct AssignExpr {
    std::string op;  // = += -= *= /= %= &= |= ^= <<= >>=
    ExprPtr target;  // NameRef or IndexExpr
    ExprPtr value;
};

struct TernaryExpr {
    ExprPtr cond, then_branch, else_branch;
};

struct CastExpr {
    Type type;
    ExprPtr operand;
};

struct IndexExpr {
    ExprPtr array, index;
};

struct NewArrayExpr {
    Type elem_type;  // element type (is_array false)
    ExprPtr size;
};

struct ArrayInitExpr {
    std::vector<ExprPtr> elements;  // only as a declaration initializer
};

struct NewScannerExpr {};  // new Scanner(System.in)

// Unqualified call to a user static method: helper(a, b)
struct CallExpr {
    std::string callee;
    std::vector<ExprPtr> args;
    int method_index = -1;  // set by checker
};

// receiver.method(args): Scanner/String instance methods, System.out.println
struct MethodCallExpr {
    ExprPtr receiver;
    std::string method;
    std::vector<ExprPtr> args;
    int builtin = -1;  // BuiltinOp; set by checker
};

// Class.method(args): Math.abs, Integer.parseInt, String.valueOf, ...
struct StaticCallExpr {
    std::string cls;
    std::string method;
    std::vector<ExprPtr> args;
    int builtin = -1;
};

// receiver.field: array .length, System.out (as println receiver),
// Integer.MAX_VALUE and friends.
struct FieldAccessExpr {
    ExprPtr receiver;
    std::string field;
    int builtin = -1;
};

struct Expr {
    using Node = std::variant<IntLit, DoubleLit, StringLit, CharLit, BoolLit, NameRef,
                              UnaryExpr, BinaryExpr, AssignExpr, TernaryExpr, CastExpr,
                              IndexExpr, NewArrayExpr, ArrayInitExpr, NewScannerExpr,
                              CallExpr, MethodCallExpr, StaticCallExpr, FieldAccessExpr>;
    Node node;
    Span span;
    int id = -1;
    Type type;  // set by checker

    template <typename T>
    T* as() { return std::get_if<T>(&node); }
    template <typename T>
    const T* as() const { return std::get_if<T>(&node); }
};

// ---- statements -------------------------------------------------------

struct VarDeclItem {
    std::string name;
    ExprPtr init;  // may be null
    Span name_span;
    int id = -1;    // declaration node id
    int slot = -1;  // set by checker
};

struct VarDeclStmt {
    Type type;
    std::vector<VarDeclItem> items;
};

struct ExprStmt {
    ExprPtr expr;
};

struct BlockStmt {
    std::vector<StmtPtr> statements;
    std::vector<std::string> trailing_comments;  // comments before the closing brace
};

struct IfStmt {
    ExprPtr cond;
    StmtPtr then_branch;
    StmtPtr else_branch;  // may be null
};

struct WhileStmt {
    ExprPtr cond;
    StmtPtr body;
};

struct ForStmt {
    StmtPtr init;                 // VarDeclStmt or ExprStmt list; may be null
    std::vector<ExprPtr> init_exprs;  // used when init is expression list
    ExprPtr cond;                 // may be null
    std::vector<ExprPtr> update;
    StmtPtr body;
};

struct ReturnStmt {
    ExprPtr value;  // may be null
};

struct BreakStmt {};
struct ContinueStmt {};
struct EmptyStmt {};

struct Stmt {
    using Node = std::variant<VarDeclStmt, ExprStmt, BlockStmt, IfStmt, WhileStmt, ForStmt,
                              ReturnStmt, BreakStmt, ContinueStmt, EmptyStmt>;
    Node node;
    Span span;
    int id = -1;
    std::vector<std::string> leading_comments;

    template <typename T>
    T* as() { return std::get_if<T>(&node); }
    template <typename T>
    const T* as() const { return std::get_if<T>(&node); }
};

// ---- declarations -----------------------------------------------------

struct Param {
    Type type;
    std::string name;
    Span name_span;
    int id = -1;
    int slot = -1;
};

struct Method {
    bool is_public = false;
    Type return_type;
    std::string name;
    std::vector<Param> params;
    StmtPtr body;  // always a BlockStmt
    Span name_span;
    int id = -1;
    int frame_slots = 0;  // set by checker
    std::vector<std::string> leading_comments;
};

struct ImportDecl {
    std::string text;  // canonical single-line form, e.g. "import java.util.Scanner;"
};

struct CompilationUnit {
    std::vector<ImportDecl> imports;
    std::string class_name;
    std::vector<Method> methods;
    std::vector<std::string> leading_comments;   // before the class
    std::vector<std::string> trailing_comments;  // before the class closing brace / EOF
};

struct Ast {
    CompilationUnit unit;
    int next_id = 0;

    int fresh_id() { return next_id++; }

    Ast clone() const;
    const Method* find_method(const std::string& name) const;
};

// Deep copies; node ids are preserved.
ExprPtr clone_expr(const Expr& e);
StmtPtr clone_stmt(const Stmt& s);

}  // namespace obfkit::lang
