#include "obfkit/lang/checker.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "obfkit/lang/builtins.hpp"
#include "obfkit/lang/parser.hpp"

namespace obfkit::lang {

namespace {

const Type kInt = make_type(BaseType::Int);
const Type kLong = make_type(BaseType::Long);
const Type kDouble = make_type(BaseType::Double);
const Type kBool = make_type(BaseType::Boolean);
const Type kChar = make_type(BaseType::Char);
const Type kString = make_type(BaseType::String);
const Type kVoid = make_type(BaseType::Void);

bool is_numeric(const Type& t) {
    if (t.is_array) return false;
    switch (t.base) {
        case BaseType::Int:
        case BaseType::Long:
        case BaseType::Double:
        case BaseType::Char: return true;
        default: return false;
    }
}

bool is_integral(const Type& t) {
    return !t.is_array &&
           (t.base == BaseType::Int || t.base == BaseType::Long || t.base == BaseType::Char);
}

bool is_scalar(const Type& t) {
    return !t.is_array &&
           (is_numeric(t) || t.base == BaseType::Boolean || t.base == BaseType::String);
}

// Binary numeric promotion (char counts as int).
Type promote(const Type& a, const Type& b) {
    if (a.base == BaseType::Double || b.base == BaseType::Double) return kDouble;
    if (a.base == BaseType::Long || b.base == BaseType::Long) return kLong;
    return kInt;
}

Type promote_unary(const Type& a) {
    if (a.base == BaseType::Char || a.base == BaseType::Int) return kInt;
    return a;
}

bool widens_to(const Type& from, const Type& to) {
    if (from.is_array || to.is_array) return false;
    switch (from.base) {
        case BaseType::Int:
            return to.base == BaseType::Long || to.base == BaseType::Double;
        case BaseType::Long: return to.base == BaseType::Double;
        case BaseType::Char:
            return to.base == BaseType::Int || to.base == BaseType::Long ||
                   to.base == BaseType::Double;
        default: return false;
    }
}

const std::unordered_set<std::string> kReservedClassNames = {
    "Math", "Integer", "Long", "Double", "Character", "System", "Scanner", "String"};

struct VarInfo {
    int decl_id = -1;
    int slot = -1;
    Type type;
};

class Checker {
public:
    Checker(Ast& ast, const CheckOptions& opts) : ast_(ast), opts_(opts) {}

    CheckReport run() {
        collect_methods();
        for (size_t i = 0; i < ast_.unit.methods.size(); ++i) check_method(ast_.unit.methods[i]);
        if (opts_.require_main) check_main();
        return std::move(rep_);
    }

private:
    Ast& ast_;
    CheckOptions opts_;
    CheckReport rep_;
    std::unordered_map<std::string, int> method_index_;
    Method* method_ = nullptr;
    std::vector<std::unordered_map<std::string, VarInfo>> scopes_;
    int next_slot_ = 0;
    int loop_depth_ = 0;

    void diag(DiagCategory cat, const Span& span, std::string msg) {
        rep_.diagnostics.push_back({span, std::move(msg), cat});
    }

    // -- declarations ----------------------------------------------------

    void collect_methods() {
        for (size_t i = 0; i < ast_.unit.methods.size(); ++i) {
            const auto& m = ast_.unit.methods[i];
            auto [it, inserted] = method_index_.emplace(m.name, static_cast<int>(i));
            if (!inserted)
                diag(DiagCategory::UnsupportedConstruct, m.name_span,
                     "duplicate method '" + m.name + "' (overloading is not supported)");
        }
    }

    void check_main() {
        auto it = method_index_.find("main");
        if (it == method_index_.end()) {
            diag(DiagCategory::Type, Span{1, 1, 0, 0},
                 "missing entry point: public static void main(String[] args)");
            return;
        }
        const auto& m = ast_.unit.methods[static_cast<size_t>(it->second)];
        bool sig_ok = m.return_type == kVoid && m.params.size() == 1 &&
                      m.params[0].type == make_type(BaseType::String, true);
        if (!sig_ok)
            diag(DiagCategory::Type, m.name_span,
                 "main must be declared as public static void main(String[] args)");
    }

    void check_method(Method& m) {
        method_ = &m;
        next_slot_ = 0;
        scopes_.clear();
        scopes_.emplace_back();
        for (auto& p : m.params) {
            declare(p.name, p.id, p.type, p.name_span);
            p.slot = lookup(p.name) ? lookup(p.name)->slot : -1;
        }
        loop_depth_ = 0;
        check_stmt(*m.body);
        scopes_.pop_back();
        m.frame_slots = next_slot_;
    }

    void declare(const std::string& name, int decl_id, const Type& type, const Span& span) {
        if (kReservedClassNames.count(name)) {
            diag(DiagCategory::UnsupportedConstruct, span,
                 "cannot declare a variable named '" + name + "' (built-in class name)");
        }
        if (scopes_.back().count(name)) {
            diag(DiagCategory::Type, span,
                 "variable '" + name + "' is already declared in this scope");
            return;
        }
        scopes_.back()[name] = VarInfo{decl_id, next_slot_++, type};
    }

    const VarInfo* lookup(const std::string& name) const {
        for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
            auto f = it->find(name);
            if (f != it->end()) return &f->second;
        }
        return nullptr;
    }

    // -- statements ------------------------------------------------------

    void check_stmt(Stmt& s) {
        std::visit(
            [&](auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, VarDeclStmt>) {
                    check_var_decl(n, s.span);
                } else if constexpr (std::is_same_v<T, ExprStmt>) {
                    check_expr(*n.expr);
                    require_statement_expr(*n.expr);
                } else if constexpr (std::is_same_v<T, BlockStmt>) {
                    scopes_.emplace_back();
                    for (auto& st : n.statements) check_stmt(*st);
                    scopes_.pop_back();
                } else if constexpr (std::is_same_v<T, IfStmt>) {
                    require_bool(check_expr(*n.cond), n.cond->span, "if condition");
                    check_stmt(*n.then_branch);
                    if (n.else_branch) check_stmt(*n.else_branch);
                } else if constexpr (std::is_same_v<T, WhileStmt>) {
                    require_bool(check_expr(*n.cond), n.cond->span, "while condition");
                    ++loop_depth_;
                    check_stmt(*n.body);
                    --loop_depth_;
                } else if constexpr (std::is_same_v<T, ForStmt>) {
                    scopes_.emplace_back();
                    if (n.init) {
                        if (auto* decl = n.init->template as<VarDeclStmt>()) {
                            check_var_decl(*decl, n.init->span);
                        } else if (auto* es = n.init->template as<ExprStmt>()) {
                            check_expr(*es->expr);
                            require_statement_expr(*es->expr);
                        }
                    }
                    for (auto& e : n.init_exprs) {
                        check_expr(*e);
                        require_statement_expr(*e);
                    }
                    if (n.cond) require_bool(check_expr(*n.cond), n.cond->span, "for condition");
                    for (auto& e : n.update) {
                        check_expr(*e);
                        require_statement_expr(*e);
                    }
                    ++loop_depth_;
                    check_stmt(*n.body);
                    --loop_depth_;
                    scopes_.pop_back();
                } else if constexpr (std::is_same_v<T, ReturnStmt>) {
                    check_return(n, s.span);
                } else if constexpr (std::is_same_v<T, BreakStmt>) {
                    if (loop_depth_ == 0)
                        diag(DiagCategory::Type, s.span, "break outside of a loop");
                } else if constexpr (std::is_same_v<T, ContinueStmt>) {
                    if (loop_depth_ == 0)
                        diag(DiagCategory::Type, s.span, "continue outside of a loop");
                } else if constexpr (std::is_same_v<T, EmptyStmt>) {
                    // nothing
                }
            },
            s.node);
    }

    void check_var_decl(VarDeclStmt& n, const Span& span) {
        if (n.type == kVoid || (n.type.base == BaseType::Void))
            diag(DiagCategory::Type, span, "variables cannot have type void");
        for (auto& item : n.items) {
            if (item.init) {
                Type vt = check_expr(*item.init);
                if (auto* arr = item.init->as<ArrayInitExpr>()) {
                    if (!n.type.is_array) {
                        diag(DiagCategory::Type, item.init->span,
                             "array initializer requires an array type");
                    } else {
                        Type elem = make_type(n.type.base);
                        for (auto& el : arr->elements)
                            require_assignable(el->type, elem, *el, "array element");
                        item.init->type = n.type;
                    }
                } else {
                    require_assignable(vt, n.type, *item.init,
                                       "initializer for '" + item.name + "'");
                }
            }
            declare(item.name, item.id, n.type, item.name_span);
            if (const auto* info = lookup(item.name)) item.slot = info->slot;
        }
    }

    void check_return(ReturnStmt& n, const Span& span) {
        const Type& want = method_->return_type;
        if (!n.value) {
            if (!(want == kVoid))
                diag(DiagCategory::Type, span,
                     "missing return value in method '" + method_->name + "'");
            return;
        }
        Type got = check_expr(*n.value);
        if (want == kVoid) {
            diag(DiagCategory::Type, span,
                 "void method '" + method_->name + "' cannot return a value");
        } else {
            require_assignable(got, want, *n.value, "return value");
        }
    }

    void require_statement_expr(const Expr& e) {
        bool ok = std::holds_alternative<AssignExpr>(e.node) ||
                  std::holds_alternative<CallExpr>(e.node) ||
                  std::holds_alternative<MethodCallExpr>(e.node) ||
                  std::holds_alternative<StaticCallExpr>(e.node) ||
                  std::holds_alternative<NewScannerExpr>(e.node);
        if (const auto* u = e.as<UnaryExpr>())
            ok = (u->op == "++" || u->op == "--");
        if (!ok)
            diag(DiagCategory::Type, e.span, "not a statement");
    }

    void require_bool(const Type& t, const Span& span, const char* what) {
        if (!(t == kBool))
            diag(DiagCategory::Type, span,
                 std::string(what) + " must be boolean, found " + t.to_string());
    }

    // Allows widening, identical types, and constant int -> char narrowing.
    void require_assignable(const Type& from, const Type& to, const Expr& value,
                            const std::string& what) {
        if (from == to || widens_to(from, to)) return;
        if (to.base == BaseType::Char && !to.is_array) {
            if (const auto* lit = value.as<IntLit>()) {
                if (!lit->is_long && lit->value >= 0 && lit->value <= 255) return;
                diag(DiagCategory::Type, value.span,
                     "constant " + lit->text + " does not fit in char (0..255)");
                return;
            }
        }
        if (from == kVoid) {
            diag(DiagCategory::Type, value.span, what + " has no value (void expression)");
            return;
        }
        diag(DiagCategory::Type, value.span,
             "cannot assign " + from.to_string() + " to " + to.to_string() + " in " + what +
                 (is_numeric(from) && is_numeric(to) ? " (add an explicit cast)" : ""));
    }

    // -- expressions -------------------------------------------------------

    Type check_expr(Expr& e) {
        Type t = std::visit(
            [&](auto& n) -> Type {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, IntLit>) {
                    if (!n.is_long && (n.value > 2147483648LL))
                        diag(DiagCategory::Type, e.span,
                             "integer literal " + n.text + " is too large for int (add L)");
                    return n.is_long ? kLong : kInt;
                } else if constexpr (std::is_same_v<T, DoubleLit>) {
                    return kDouble;
                } else if constexpr (std::is_same_v<T, StringLit>) {
                    return kString;
                } else if constexpr (std::is_same_v<T, CharLit>) {
                    return kChar;
                } else if constexpr (std::is_same_v<T, BoolLit>) {
                    return kBool;
                } else if constexpr (std::is_same_v<T, NameRef>) {
                    return check_name(n, e.span);
                } else if constexpr (std::is_same_v<T, UnaryExpr>) {
                    return check_unary(n, e.span);
                } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                    return check_binary(n, e.span);
                } else if constexpr (std::is_same_v<T, AssignExpr>) {
                    return check_assign(n, e.span);
                } else if constexpr (std::is_same_v<T, TernaryExpr>) {
                    return check_ternary(n, e.span);
                } else if constexpr (std::is_same_v<T, CastExpr>) {
                    return check_cast(n, e.span);
                } else if constexpr (std::is_same_v<T, IndexExpr>) {
                    return check_index(n, e.span);
                } else if constexpr (std::is_same_v<T, NewArrayExpr>) {
                    Type sz = check_expr(*n.size);
                    if (!is_integral(sz) || sz.base == BaseType::Long)
                        diag(DiagCategory::Type, n.size->span,
                             "array size must be int, found " + sz.to_string());
                    return make_type(n.elem_type.base, true);
                } else if constexpr (std::is_same_v<T, ArrayInitExpr>) {
                    for (auto& el : n.elements) check_expr(*el);
                    return kVoid;  // refined by check_var_decl
                } else if constexpr (std::is_same_v<T, NewScannerExpr>) {
                    return make_type(BaseType::Scanner);
                } else if constexpr (std::is_same_v<T, CallExpr>) {
                    return check_call(n, e.span);
                } else if constexpr (std::is_same_v<T, MethodCallExpr>) {
                    return check_method_call(n, e.span);
                } else if constexpr (std::is_same_v<T, StaticCallExpr>) {
                    return check_static_call(n, e.span);
                } else if constexpr (std::is_same_v<T, FieldAccessExpr>) {
                    return check_field(n, e.span);
                } else {
                    return kVoid;
                }
            },
            e.node);
        e.type = t;
        return t;
    }

    Type check_name(NameRef& n, const Span& span) {
        if (const auto* info = lookup(n.name)) {
            n.decl_id = info->decl_id;
            n.slot = info->slot;
            return info->type;
        }
        if (n.name == "String") return kVoid;  // receiver of String.valueOf
        if (kReservedClassNames.count(n.name)) return kVoid;  // receiver position
        diag(DiagCategory::Undeclared, span, "undeclared variable '" + n.name + "'");
        return kInt;  // recover
    }

    bool is_lvalue(const Expr& e) {
        return std::holds_alternative<NameRef>(e.node) ||
               std::holds_alternative<IndexExpr>(e.node);
    }

    Type check_unary(UnaryExpr& n, const Span& span) {
        Type ot = check_expr(*n.operand);
        if (n.op == "!") {
            if (!(ot == kBool))
                diag(DiagCategory::Type, span, "operator ! requires boolean, found " +
                                                   ot.to_string());
            return kBool;
        }
        if (n.op == "~") {
            if (!is_integral(ot))
                diag(DiagCategory::Type, span,
                     "operator ~ requires an integral type, found " + ot.to_string());
            return promote_unary(ot);
        }
        if (n.op == "++" || n.op == "--") {
            if (!is_lvalue(*n.operand))
                diag(DiagCategory::Type, span, "operand of " + n.op + " must be a variable");
            if (!is_numeric(ot))
                diag(DiagCategory::Type, span,
                     "operator " + n.op + " requires a numeric type, found " + ot.to_string());
            return ot;
        }
        // + -
        if (!is_numeric(ot))
            diag(DiagCategory::Type, span,
                 "operator " + n.op + " requires a numeric type, found " + ot.to_string());
        return promote_unary(ot);
    }

    Type check_binary(BinaryExpr& n, const Span& span) {
        Type lt = check_expr(*n.lhs);
        Type rt = check_expr(*n.rhs);
        const std::string& op = n.op;

        auto bad = [&]() -> Type {
            diag(DiagCategory::Type, span, "operator " + op + " cannot be applied to " +
                                               lt.to_string() + " and " + rt.to_string());
            return op == "<" || op == ">" || op == "<=" || op == ">=" || op == "==" ||
                           op == "!=" || op == "&&" || op == "||"
                       ? kBool
                       : kInt;
        };

        if (op == "+") {
            if (lt == kString || rt == kString) {
                const Type& other = lt == kString ? rt : lt;
                if (!is_scalar(other) && !(other == kString)) return bad();
                return kString;
            }
            if (is_numeric(lt) && is_numeric(rt)) return promote(lt, rt);
            return bad();
        }
        if (op == "-" || op == "*" || op == "/" || op == "%") {
            if (is_numeric(lt) && is_numeric(rt)) return promote(lt, rt);
            return bad();
        }
        if (op == "<<" || op == ">>" || op == ">>>") {
            if (is_integral(lt) && is_integral(rt)) return promote_unary(lt);
            return bad();
        }
        if (op == "&" || op == "|" || op == "^") {
            if (lt == kBool && rt == kBool) return kBool;
            if (is_integral(lt) && is_integral(rt)) return promote(lt, rt);
            return bad();
        }
        if (op == "<" || op == "<=" || op == ">" || op == ">=") {
            if (is_numeric(lt) && is_numeric(rt)) return kBool;
            return bad();
        }
        if (op == "==" || op == "!=") {
            if (is_numeric(lt) && is_numeric(rt)) return kBool;
            if (lt == kBool && rt == kBool) return kBool;
            if (lt == kString && rt == kString) {
                diag(DiagCategory::UnsupportedConstruct, span,
                     "comparing strings with " + op + " is not supported; use equals()");
                return kBool;
            }
            return bad();
        }
        if (op == "&&" || op == "||") {
            if (lt == kBool && rt == kBool) return kBool;
            return bad();
        }
        diag(DiagCategory::UnsupportedConstruct, span, "unsupported operator " + op);
        return kInt;
    }

    Type check_assign(AssignExpr& n, const Span& span) {
        Type tt = check_expr(*n.target);
        Type vt = check_expr(*n.value);
        if (!is_lvalue(*n.target)) {
            diag(DiagCategory::Type, n.target->span, "assignment target must be a variable "
                                                     "or array element");
            return tt;
        }
        if (n.op == "=") {
            if (tt.base == BaseType::Scanner) {
                if (!(vt == tt))
                    diag(DiagCategory::Type, span, "cannot assign " + vt.to_string() +
                                                       " to Scanner");
                return tt;
            }
            if (tt.is_array) {
                if (!(vt == tt))
                    diag(DiagCategory::Type, span, "cannot assign " + vt.to_string() + " to " +
                                                       tt.to_string());
                return tt;
            }
            require_assignable(vt, tt, *n.value, "assignment");
            return tt;
        }
        // compound assignment: implicit narrowing back to the target type
        if (n.op == "+=" && tt == kString) {
            if (!is_scalar(vt))
                diag(DiagCategory::Type, span,
                     "cannot append " + vt.to_string() + " to String");
            return tt;
        }
        std::string base_op = n.op.substr(0, n.op.size() - 1);
        if (base_op == "<<" || base_op == ">>" || base_op == ">>>") {
            if (!is_integral(tt) || !is_integral(vt))
                diag(DiagCategory::Type, span, "operator " + n.op + " cannot be applied to " +
                                                   tt.to_string() + " and " + vt.to_string());
            return tt;
        }
        if (base_op == "&" || base_op == "|" || base_op == "^") {
            bool ok = (tt == kBool && vt == kBool) || (is_integral(tt) && is_integral(vt));
            if (!ok)
                diag(DiagCategory::Type, span, "operator " + n.op + " cannot be applied to " +
                                                   tt.to_string() + " and " + vt.to_string());
            return tt;
        }
        if (!is_numeric(tt) || !is_numeric(vt))
            diag(DiagCategory::Type, span, "operator " + n.op + " cannot be applied to " +
                                               tt.to_string() + " and " + vt.to_string());
        return tt;
    }

    Type check_ternary(TernaryExpr& n, const Span& span) {
        require_bool(check_expr(*n.cond), n.cond->span, "ternary condition");
        Type a = check_expr(*n.then_branch);
        Type b = check_expr(*n.else_branch);
        if (a == b) return a;
        if (is_numeric(a) && is_numeric(b)) return promote(a, b);
        diag(DiagCategory::Type, span, "incompatible ternary branches: " + a.to_string() +
                                           " and " + b.to_string());
        return a;
    }

    Type check_cast(CastExpr& n, const Span& span) {
        Type ot = check_expr(*n.operand);
        const Type& to = n.type;
        if (to == ot) return to;
        if (!to.is_array && !ot.is_array) {
            bool to_num = is_numeric(to);
            bool from_num = is_numeric(ot);
            if (to_num && from_num) return to;
        }
        diag(DiagCategory::Type, span,
             "cannot cast " + ot.to_string() + " to " + to.to_string());
        return to;
    }

    Type check_index(IndexExpr& n, const Span& span) {
        Type at = check_expr(*n.array);
        Type it = check_expr(*n.index);
        if (!is_integral(it) || it.base == BaseType::Long)
            diag(DiagCategory::Type, n.index->span,
                 "array index must be int, found " + it.to_string());
        if (!at.is_array) {
            if (at == kString)
                diag(DiagCategory::Type, span, "strings are not indexable; use charAt()");
            else
                diag(DiagCategory::Type, span, at.to_string() + " is not an array");
            return kInt;
        }
        return make_type(at.base);
    }

    Type check_call(CallExpr& n, const Span& span) {
        auto it = method_index_.find(n.callee);
        if (it == method_index_.end()) {
            diag(DiagCategory::Undeclared, span, "unknown method '" + n.callee + "'");
            for (auto& a : n.args) check_expr(*a);
            return kInt;
        }
        n.method_index = it->second;
        const Method& m = ast_.unit.methods[static_cast<size_t>(it->second)];
        if (n.args.size() != m.params.size()) {
            diag(DiagCategory::Type, span,
                 "method '" + n.callee + "' expects " + std::to_string(m.params.size()) +
                     " argument(s), got " + std::to_string(n.args.size()));
            for (auto& a : n.args) check_expr(*a);
            return m.return_type;
        }
        for (size_t i = 0; i < n.args.size(); ++i) {
            Type at = check_expr(*n.args[i]);
            require_assignable(at, m.params[i].type, *n.args[i],
                               "argument " + std::to_string(i + 1) + " of '" + n.callee + "'");
        }
        return m.return_type;
    }

    bool expect_args(const std::string& what, const std::vector<ExprPtr>& args, size_t want,
                     const Span& span) {
        if (args.size() == want) return true;
        diag(DiagCategory::Type, span,
             what + " expects " + std::to_string(want) + " argument(s), got " +
                 std::to_string(args.size()));
        return false;
    }

    void require_numeric_arg(const Expr& a, const std::string& what) {
        if (!is_numeric(a.type))
            diag(DiagCategory::Type, a.span,
                 what + " requires a numeric argument, found " + a.type.to_string());
    }

    void require_type_arg(const Expr& a, const Type& t, const std::string& what) {
        if (!(a.type == t) && !widens_to(a.type, t))
            diag(DiagCategory::Type, a.span, what + " requires " + t.to_string() + ", found " +
                                                 a.type.to_string());
    }

    Type check_method_call(MethodCallExpr& n, const Span& span) {
        // System.out.println / print
        if (const auto* fa = n.receiver->as<FieldAccessExpr>()) {
            const auto* base = fa->receiver->as<NameRef>();
            if (base && base->name == "System" && fa->field == "out" && !lookup("System")) {
                check_expr(*n.receiver);  // marks SystemOut
                if (n.method == "println" || n.method == "print") {
                    bool newline = n.method == "println";
                    if (newline && n.args.empty()) {
                        n.builtin = static_cast<int>(BuiltinOp::Println);
                        return kVoid;
                    }
                    if (!expect_args("System.out." + n.method, n.args, 1, span)) return kVoid;
                    Type at = check_expr(*n.args[0]);
                    if (!is_scalar(at))
                        diag(DiagCategory::Type, n.args[0]->span,
                             "cannot print a value of type " + at.to_string());
                    n.builtin =
                        static_cast<int>(newline ? BuiltinOp::Println : BuiltinOp::Print);
                    return kVoid;
                }
                diag(DiagCategory::UnsupportedConstruct, span,
                     "unsupported System.out method '" + n.method + "'");
                for (auto& a : n.args) check_expr(*a);
                return kVoid;
            }
        }

        Type rt = check_expr(*n.receiver);
        for (auto& a : n.args) check_expr(*a);

        if (rt.base == BaseType::Scanner && !rt.is_array) return check_scanner_call(n, span);
        if (rt == kString) return check_string_call(n, span);

        diag(DiagCategory::UnsupportedConstruct, span,
             "cannot call method '" + n.method + "' on " + rt.to_string());
        return kInt;
    }

    Type check_scanner_call(MethodCallExpr& n, const Span& span) {
        struct Entry {
            BuiltinOp op;
            Type result;
        };
        static const std::unordered_map<std::string, Entry> table = {
            {"nextInt", {BuiltinOp::ScannerNextInt, kInt}},
            {"nextLong", {BuiltinOp::ScannerNextLong, kLong}},
            {"nextDouble", {BuiltinOp::ScannerNextDouble, kDouble}},
            {"next", {BuiltinOp::ScannerNext, kString}},
            {"nextLine", {BuiltinOp::ScannerNextLine, kString}},
            {"nextBoolean", {BuiltinOp::ScannerNextBoolean, kBool}},
            {"hasNext", {BuiltinOp::ScannerHasNext, kBool}},
            {"hasNextInt", {BuiltinOp::ScannerHasNextInt, kBool}},
            {"hasNextLong", {BuiltinOp::ScannerHasNextLong, kBool}},
            {"hasNextDouble", {BuiltinOp::ScannerHasNextDouble, kBool}},
            {"hasNextLine", {BuiltinOp::ScannerHasNextLine, kBool}},
            {"close", {BuiltinOp::ScannerClose, kVoid}},
        };
        auto it = table.find(n.method);
        if (it == table.end()) {
            diag(DiagCategory::UnsupportedConstruct, span,
                 "unsupported Scanner method '" + n.method + "'");
            return kInt;
        }
        expect_args("Scanner." + n.method, n.args, 0, span);
        n.builtin = static_cast<int>(it->second.op);
        return it->second.result;
    }

    Type check_string_call(MethodCallExpr& n, const Span& span) {
        const std::string& m = n.method;
        auto arg = [&](size_t i) -> Expr& { return *n.args[i]; };

        if (m == "length") {
            expect_args("String.length", n.args, 0, span);
            n.builtin = static_cast<int>(BuiltinOp::StrLength);
            return kInt;
        }
        if (m == "charAt") {
            if (expect_args("String.charAt", n.args, 1, span))
                require_type_arg(arg(0), kInt, "String.charAt");
            n.builtin = static_cast<int>(BuiltinOp::StrCharAt);
            return kChar;
        }
        if (m == "substring") {
            if (n.args.size() == 1) {
                require_type_arg(arg(0), kInt, "String.substring");
                n.builtin = static_cast<int>(BuiltinOp::StrSubstring1);
            } else if (n.args.size() == 2) {
                require_type_arg(arg(0), kInt, "String.substring");
                require_type_arg(arg(1), kInt, "String.substring");
                n.builtin = static_cast<int>(BuiltinOp::StrSubstring2);
            } else {
                diag(DiagCategory::Type, span, "String.substring expects 1 or 2 arguments");
            }
            return kString;
        }
        if (m == "indexOf") {
            if (n.args.size() == 1 && arg(0).type == kChar) {
                n.builtin = static_cast<int>(BuiltinOp::StrIndexOfChar);
            } else if (n.args.size() == 1) {
                require_type_arg(arg(0), kString, "String.indexOf");
                n.builtin = static_cast<int>(BuiltinOp::StrIndexOfStr);
            } else if (n.args.size() == 2) {
                require_type_arg(arg(0), kString, "String.indexOf");
                require_type_arg(arg(1), kInt, "String.indexOf");
                n.builtin = static_cast<int>(BuiltinOp::StrIndexOfStrFrom);
            } else {
                diag(DiagCategory::Type, span, "String.indexOf expects 1 or 2 arguments");
            }
            return kInt;
        }
        if (m == "contains" || m == "equals" || m == "equalsIgnoreCase" || m == "startsWith" ||
            m == "endsWith") {
            if (expect_args("String." + m, n.args, 1, span))
                require_type_arg(arg(0), kString, "String." + m);
            n.builtin = static_cast<int>(
                m == "contains" ? BuiltinOp::StrContains
                : m == "equals" ? BuiltinOp::StrEquals
                : m == "equalsIgnoreCase" ? BuiltinOp::StrEqualsIgnoreCase
                : m == "startsWith" ? BuiltinOp::StrStartsWith
                                    : BuiltinOp::StrEndsWith);
            return kBool;
        }
        if (m == "compareTo") {
            if (expect_args("String.compareTo", n.args, 1, span))
                require_type_arg(arg(0), kString, "String.compareTo");
            n.builtin = static_cast<int>(BuiltinOp::StrCompareTo);
            return kInt;
        }
        if (m == "isEmpty") {
            expect_args("String.isEmpty", n.args, 0, span);
            n.builtin = static_cast<int>(BuiltinOp::StrIsEmpty);
            return kBool;
        }
        if (m == "toUpperCase" || m == "toLowerCase" || m == "trim") {
            expect_args("String." + m, n.args, 0, span);
            n.builtin = static_cast<int>(m == "toUpperCase" ? BuiltinOp::StrToUpper
                                         : m == "toLowerCase" ? BuiltinOp::StrToLower
                                                              : BuiltinOp::StrTrim);
            return kString;
        }
        if (m == "replace") {
            if (expect_args("String.replace", n.args, 2, span)) {
                if (arg(0).type == kChar && arg(1).type == kChar) {
                    n.builtin = static_cast<int>(BuiltinOp::StrReplaceChar);
                } else {
                    require_type_arg(arg(0), kString, "String.replace");
                    require_type_arg(arg(1), kString, "String.replace");
                    n.builtin = static_cast<int>(BuiltinOp::StrReplaceStr);
                }
            }
            return kString;
        }
        if (m == "split") {
            if (expect_args("String.split", n.args, 1, span))
                require_type_arg(arg(0), kString, "String.split");
            n.builtin = static_cast<int>(BuiltinOp::StrSplit);
            return make_type(BaseType::String, true);
        }
        if (m == "toCharArray") {
            expect_args("String.toCharArray", n.args, 0, span);
            n.builtin = static_cast<int>(BuiltinOp::StrToCharArray);
            return make_type(BaseType::Char, true);
        }
        if (m == "concat") {
            if (expect_args("String.concat", n.args, 1, span))
                require_type_arg(arg(0), kString, "String.concat");
            n.builtin = static_cast<int>(BuiltinOp::StrConcat);
            return kString;
        }
        diag(DiagCategory::UnsupportedConstruct, span,
             "unsupported String method '" + m + "'");
        return kInt;
    }

    Type check_static_call(StaticCallExpr& n, const Span& span) {
        for (auto& a : n.args) check_expr(*a);
        const std::string& c = n.cls;
        const std::string& m = n.method;
        auto arg = [&](size_t i) -> Expr& { return *n.args[i]; };
        auto set = [&](BuiltinOp op) { n.builtin = static_cast<int>(op); };

        if (c == "Math") {
            if (m == "abs" || m == "max" || m == "min") {
                size_t want = m == "abs" ? 1 : 2;
                if (!expect_args("Math." + m, n.args, want, span)) return kDouble;
                for (auto& a : n.args) require_numeric_arg(*a, "Math." + m);
                set(m == "abs" ? BuiltinOp::MathAbs
                    : m == "max" ? BuiltinOp::MathMax
                                 : BuiltinOp::MathMin);
                Type t = promote_unary(arg(0).type);
                if (want == 2) t = promote(arg(0).type, arg(1).type);
                return is_numeric(t) ? t : kInt;
            }
            if (m == "sqrt" || m == "floor" || m == "ceil") {
                if (expect_args("Math." + m, n.args, 1, span))
                    require_numeric_arg(arg(0), "Math." + m);
                set(m == "sqrt" ? BuiltinOp::MathSqrt
                    : m == "floor" ? BuiltinOp::MathFloor
                                   : BuiltinOp::MathCeil);
                return kDouble;
            }
            if (m == "pow") {
                if (expect_args("Math.pow", n.args, 2, span)) {
                    require_numeric_arg(arg(0), "Math.pow");
                    require_numeric_arg(arg(1), "Math.pow");
                }
                set(BuiltinOp::MathPow);
                return kDouble;
            }
            if (m == "round") {
                if (expect_args("Math.round", n.args, 1, span))
                    require_numeric_arg(arg(0), "Math.round");
                set(BuiltinOp::MathRound);
                return kLong;
            }
            diag(DiagCategory::UnsupportedConstruct, span,
                 "unsupported Math method '" + m + "'");
            return kDouble;
        }
        if (c == "Integer") {
            if (m == "parseInt") {
                if (expect_args("Integer.parseInt", n.args, 1, span))
                    require_type_arg(arg(0), kString, "Integer.parseInt");
                set(BuiltinOp::IntegerParseInt);
                return kInt;
            }
            if (m == "toString") {
                if (expect_args("Integer.toString", n.args, 1, span))
                    require_type_arg(arg(0), kInt, "Integer.toString");
                set(BuiltinOp::IntegerToString);
                return kString;
            }
            if (m == "toBinaryString") {
                if (expect_args("Integer.toBinaryString", n.args, 1, span))
                    require_type_arg(arg(0), kInt, "Integer.toBinaryString");
                set(BuiltinOp::IntegerToBinaryString);
                return kString;
            }
            diag(DiagCategory::UnsupportedConstruct, span,
                 "unsupported Integer method '" + m + "'");
            return kInt;
        }
        if (c == "Long") {
            if (m == "parseLong") {
                if (expect_args("Long.parseLong", n.args, 1, span))
                    require_type_arg(arg(0), kString, "Long.parseLong");
                set(BuiltinOp::LongParseLong);
                return kLong;
            }
            if (m == "toString") {
                if (expect_args("Long.toString", n.args, 1, span))
                    require_type_arg(arg(0), kLong, "Long.toString");
                set(BuiltinOp::LongToString);
                return kString;
            }
            diag(DiagCategory::UnsupportedConstruct, span,
                 "unsupported Long method '" + m + "'");
            return kLong;
        }
        if (c == "Double") {
            if (m == "parseDouble") {
                if (expect_args("Double.parseDouble", n.args, 1, span))
                    require_type_arg(arg(0), kString, "Double.parseDouble");
                set(BuiltinOp::DoubleParseDouble);
                return kDouble;
            }
            if (m == "toString") {
                if (expect_args("Double.toString", n.args, 1, span))
                    require_type_arg(arg(0), kDouble, "Double.toString");
                set(BuiltinOp::DoubleToString);
                return kString;
            }
            diag(DiagCategory::UnsupportedConstruct, span,
                 "unsupported Double method '" + m + "'");
            return kDouble;
        }
        if (c == "Character") {
            static const std::unordered_map<std::string, std::pair<BuiltinOp, Type>> table = {
                {"isDigit", {BuiltinOp::CharIsDigit, kBool}},
                {"isLetter", {BuiltinOp::CharIsLetter, kBool}},
                {"isLetterOrDigit", {BuiltinOp::CharIsLetterOrDigit, kBool}},
                {"isWhitespace", {BuiltinOp::CharIsWhitespace, kBool}},
                {"isUpperCase", {BuiltinOp::CharIsUpperCase, kBool}},
                {"isLowerCase", {BuiltinOp::CharIsLowerCase, kBool}},
                {"toUpperCase", {BuiltinOp::CharToUpperCase, kChar}},
                {"toLowerCase", {BuiltinOp::CharToLowerCase, kChar}},
                {"getNumericValue", {BuiltinOp::CharGetNumericValue, kInt}},
            };
            auto it = table.find(m);
            if (it == table.end()) {
                diag(DiagCategory::UnsupportedConstruct, span,
                     "unsupported Character method '" + m + "'");
                return kBool;
            }
            if (expect_args("Character." + m, n.args, 1, span))
                require_type_arg(arg(0), kChar, "Character." + m);
            set(it->second.first);
            return it->second.second;
        }
        if (c == "String") {
            if (m == "valueOf") {
                if (expect_args("String.valueOf", n.args, 1, span)) {
                    if (!is_scalar(arg(0).type))
                        diag(DiagCategory::Type, arg(0).span,
                             "String.valueOf requires a printable value, found " +
                                 arg(0).type.to_string());
                }
                set(BuiltinOp::StringValueOf);
                return kString;
            }
            diag(DiagCategory::UnsupportedConstruct, span,
                 "unsupported String method '" + m + "'");
            return kString;
        }
        diag(DiagCategory::UnsupportedConstruct, span,
             "unsupported class '" + c + "'");
        return kInt;
    }

    Type check_field(FieldAccessExpr& n, const Span& span) {
        // Class constants: Integer.MAX_VALUE, Math.PI, ...
        if (const auto* base = n.receiver->as<NameRef>()) {
            if (!lookup(base->name)) {
                const std::string& c = base->name;
                if (c == "System" && n.field == "out") {
                    n.builtin = static_cast<int>(BuiltinOp::SystemOut);
                    return kVoid;
                }
                if (c == "Integer" && n.field == "MAX_VALUE") {
                    n.builtin = static_cast<int>(BuiltinOp::IntegerMaxValue);
                    return kInt;
                }
                if (c == "Integer" && n.field == "MIN_VALUE") {
                    n.builtin = static_cast<int>(BuiltinOp::IntegerMinValue);
                    return kInt;
                }
                if (c == "Long" && n.field == "MAX_VALUE") {
                    n.builtin = static_cast<int>(BuiltinOp::LongMaxValue);
                    return kLong;
                }
                if (c == "Long" && n.field == "MIN_VALUE") {
                    n.builtin = static_cast<int>(BuiltinOp::LongMinValue);
                    return kLong;
                }
                if (c == "Math" && n.field == "PI") {
                    n.builtin = static_cast<int>(BuiltinOp::MathPi);
                    return kDouble;
                }
                if (c == "Math" && n.field == "E") {
                    n.builtin = static_cast<int>(BuiltinOp::MathE);
                    return kDouble;
                }
                if (kReservedClassNames.count(c)) {
                    diag(DiagCategory::UnsupportedConstruct, span,
                         "unsupported field '" + c + "." + n.field + "'");
                    return kInt;
                }
            }
        }
        Type rt = check_expr(*n.receiver);
        if (rt.is_array && n.field == "length") {
            n.builtin = static_cast<int>(BuiltinOp::ArrayLength);
            return kInt;
        }
        if (rt == kString && n.field == "length") {
            diag(DiagCategory::Type, span, "use length() for strings, not .length");
            return kInt;
        }
        diag(DiagCategory::UnsupportedConstruct, span,
             "unsupported field access '" + n.field + "' on " + rt.to_string());
        return kInt;
    }
};

}  // namespace

CheckReport check(Ast& ast, const CheckOptions& options) {
    return Checker(ast, options).run();
}

CheckedProgram analyze(std::string_view source, const CheckOptions& options) {
    CheckedProgram out;
    try {
        out.ast = parse_source(source);
    } catch (const ParseError& e) {
        out.report.diagnostics.push_back(e.diagnostic());
        return out;
    }
    out.report = check(*out.ast, options);
    return out;
}

std::string_view builtin_name(BuiltinOp op) {
    switch (op) {
        case BuiltinOp::Println: return "println";
        case BuiltinOp::Print: return "print";
        case BuiltinOp::SystemOut: return "System.out";
        default: return "builtin";
    }
}

}  // namespace obfkit::lang
