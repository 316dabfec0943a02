#include "obfkit/interp/interpreter.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <regex>
#include <string>

#include "obfkit/interp/value.hpp"
#include "obfkit/lang/builtins.hpp"

namespace obfkit::interp {

using namespace obfkit::lang;

std::string_view run_status_name(RunStatus status) {
    switch (status) {
        case RunStatus::Completed: return "completed";
        case RunStatus::RuntimeError: return "runtime-error";
        case RunStatus::Timeout: return "timeout";
        case RunStatus::OutputOverflow: return "output-overflow";
    }
    return "unknown";
}

std::string java_double_to_string(double d) {
    if (std::isnan(d)) return "NaN";
    if (std::isinf(d)) return d > 0 ? "Infinity" : "-Infinity";
    if (d == 0.0) return std::signbit(d) ? "-0.0" : "0.0";

    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), d, std::chars_format::scientific);
    std::string s(buf, res.ptr);
    bool neg = s[0] == '-';
    size_t start = neg ? 1 : 0;
    size_t epos = s.find('e');
    std::string digits;
    for (size_t i = start; i < epos; ++i)
        if (s[i] != '.') digits += s[i];
    int exp10 = std::atoi(s.c_str() + epos + 1);

    std::string body;
    if (exp10 >= -3 && exp10 < 7) {
        if (exp10 >= 0) {
            std::string ip, fp;
            for (int k = 0; k <= exp10; ++k)
                ip += k < static_cast<int>(digits.size()) ? digits[static_cast<size_t>(k)] : '0';
            for (size_t k = static_cast<size_t>(exp10) + 1; k < digits.size(); ++k)
                fp += digits[k];
            if (fp.empty()) fp = "0";
            body = ip + "." + fp;
        } else {
            body = "0." + std::string(static_cast<size_t>(-exp10 - 1), '0') + digits;
        }
    } else {
        body = digits.substr(0, 1) + "." + (digits.size() > 1 ? digits.substr(1) : "0") + "E" +
               std::to_string(exp10);
    }
    return neg ? "-" + body : body;
}

std::string to_java_string(const Value& value) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, int32_t>) return std::to_string(x);
            else if constexpr (std::is_same_v<T, int64_t>) return std::to_string(x);
            else if constexpr (std::is_same_v<T, double>) return java_double_to_string(x);
            else if constexpr (std::is_same_v<T, bool>) return x ? "true" : "false";
            else if constexpr (std::is_same_v<T, uint8_t>) return std::string(1, static_cast<char>(x));
            else if constexpr (std::is_same_v<T, std::string>) return x;
            else return "<?>";
        },
        value.v);
}

namespace {

// ---- control signals (never escape run_program) -------------------------

struct JavaError {
    std::string message;
};
struct TimeoutSignal {};
struct OverflowSignal {};

[[noreturn]] void java_error(const std::string& msg) { throw JavaError{msg}; }

// ---- Scanner over the stdin text ----------------------------------------

bool is_space_byte(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

class StdinScanner {
public:
    explicit StdinScanner(std::string_view in) : in_(in) {}

    bool has_next() const {
        size_t p = pos_;
        while (p < in_.size() && is_space_byte(in_[p])) ++p;
        return p < in_.size();
    }

    bool has_next_line() const { return pos_ < in_.size(); }

    std::string next() {
        auto [start, end] = peek_token();
        if (start == end) java_error("java.util.NoSuchElementException");
        pos_ = end;
        return std::string(in_.substr(start, end - start));
    }

    std::string next_line() {
        if (pos_ >= in_.size())
            java_error("java.util.NoSuchElementException: No line found");
        size_t nl = in_.find('\n', pos_);
        std::string line;
        if (nl == std::string_view::npos) {
            line = std::string(in_.substr(pos_));
            pos_ = in_.size();
        } else {
            line = std::string(in_.substr(pos_, nl - pos_));
            pos_ = nl + 1;
        }
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
    }

    int32_t next_int() {
        auto tok = peek_token_text();
        if (tok.empty()) java_error("java.util.NoSuchElementException");
        int32_t out;
        if (!parse_i32(tok, out))
            java_error("java.util.InputMismatchException" +
                       (tok.empty() ? std::string() : ": \"" + std::string(tok) + "\""));
        consume_token();
        return out;
    }

    int64_t next_long() {
        auto tok = peek_token_text();
        if (tok.empty()) java_error("java.util.NoSuchElementException");
        int64_t out;
        if (!parse_i64(tok, out))
            java_error("java.util.InputMismatchException" +
                       (tok.empty() ? std::string() : ": \"" + std::string(tok) + "\""));
        consume_token();
        return out;
    }

    double next_double() {
        auto tok = peek_token_text();
        if (tok.empty()) java_error("java.util.NoSuchElementException");
        double out;
        if (!parse_f64(tok, out))
            java_error("java.util.InputMismatchException" +
                       (tok.empty() ? std::string() : ": \"" + std::string(tok) + "\""));
        consume_token();
        return out;
    }

    bool next_boolean() {
        auto tok = peek_token_text();
        if (tok.empty()) java_error("java.util.NoSuchElementException");
        std::string low;
        for (char c : tok) low += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (low != "true" && low != "false")
            java_error("java.util.InputMismatchException" +
                       (tok.empty() ? std::string() : ": \"" + std::string(tok) + "\""));
        consume_token();
        return low == "true";
    }

    bool has_next_int() const {
        int32_t tmp;
        return parse_i32(peek_token_text(), tmp);
    }
    bool has_next_long() const {
        int64_t tmp;
        return parse_i64(peek_token_text(), tmp);
    }
    bool has_next_double() const {
        double tmp;
        return parse_f64(peek_token_text(), tmp);
    }

private:
    std::string_view in_;
    size_t pos_ = 0;

    std::pair<size_t, size_t> peek_token() const {
        size_t start = pos_;
        while (start < in_.size() && is_space_byte(in_[start])) ++start;
        size_t end = start;
        while (end < in_.size() && !is_space_byte(in_[end])) ++end;
        return {start, end};
    }

    std::string_view peek_token_text() const {
        auto [start, end] = peek_token();
        return in_.substr(start, end - start);
    }

    void consume_token() {
        auto [start, end] = peek_token();
        pos_ = end;
    }

    static bool parse_i32(std::string_view t, int32_t& out) {
        int64_t wide;
        if (!parse_i64(t, wide)) return false;
        if (wide < INT32_MIN || wide > INT32_MAX) return false;
        out = static_cast<int32_t>(wide);
        return true;
    }

    static bool parse_i64(std::string_view t, int64_t& out) {
        if (t.empty()) return false;
        size_t i = 0;
        if (t[0] == '+' || t[0] == '-') i = 1;
        if (i >= t.size()) return false;
        auto res = std::from_chars(t.data() + (t[0] == '+' ? 1 : 0), t.data() + t.size(), out);
        return res.ec == std::errc() && res.ptr == t.data() + t.size();
    }

    static bool parse_f64(std::string_view t, double& out) {
        if (t.empty()) return false;
        std::string z(t);
        char* endp = nullptr;
        out = std::strtod(z.c_str(), &endp);
        return endp == z.c_str() + z.size();
    }
};

// ---- numeric helpers (Java wrap-around semantics, no UB) ----------------

int32_t wrap_add(int32_t a, int32_t b) {
    return static_cast<int32_t>(static_cast<uint32_t>(a) + static_cast<uint32_t>(b));
}
int32_t wrap_sub(int32_t a, int32_t b) {
    return static_cast<int32_t>(static_cast<uint32_t>(a) - static_cast<uint32_t>(b));
}
int32_t wrap_mul(int32_t a, int32_t b) {
    return static_cast<int32_t>(static_cast<uint32_t>(a) * static_cast<uint32_t>(b));
}
int64_t wrap_add64(int64_t a, int64_t b) {
    return static_cast<int64_t>(static_cast<uint64_t>(a) + static_cast<uint64_t>(b));
}
int64_t wrap_sub64(int64_t a, int64_t b) {
    return static_cast<int64_t>(static_cast<uint64_t>(a) - static_cast<uint64_t>(b));
}
int64_t wrap_mul64(int64_t a, int64_t b) {
    return static_cast<int64_t>(static_cast<uint64_t>(a) * static_cast<uint64_t>(b));
}

enum class NumKind { Int, Long, Dbl };

NumKind value_num_kind(const Value& v) {
    if (v.is<double>()) return NumKind::Dbl;
    if (v.is<int64_t>()) return NumKind::Long;
    return NumKind::Int;  // int32 / char / bool never reaches here for bool
}

int64_t as_integral(const Value& v) {
    if (v.is<int32_t>()) return v.get<int32_t>();
    if (v.is<int64_t>()) return v.get<int64_t>();
    if (v.is<uint8_t>()) return v.get<uint8_t>();
    java_error("internal: expected an integral value");
}

double as_double(const Value& v) {
    if (v.is<double>()) return v.get<double>();
    return static_cast<double>(as_integral(v));
}

// ---- the tree-walking interpreter ----------------------------------------

class Interp {
public:
    Interp(const Ast& ast, std::string_view stdin_text, const RunLimits& limits)
        : ast_(ast), limits_(limits), scanner_(stdin_text) {
        deadline_ = std::chrono::steady_clock::now() +
                    std::chrono::milliseconds(limits.wall_clock_ms);
    }

    RunResult run() {
        RunResult out;
        try {
            const Method* main = ast_.find_method("main");
            if (!main) java_error("internal: no main method");
            std::vector<Value> args;
            args.emplace_back(ArrayRef{std::make_shared<std::vector<Value>>(),
                                       BaseType::String});
            call(*main, std::move(args));
            out.status = RunStatus::Completed;
        } catch (const JavaError& e) {
            out.status = RunStatus::RuntimeError;
            out.error_message = e.message;
        } catch (const TimeoutSignal&) {
            out.status = RunStatus::Timeout;
        } catch (const OverflowSignal&) {
            out.status = RunStatus::OutputOverflow;
        }
        out.stdout_text = std::move(out_);
        out.steps_used = steps_;
        return out;
    }

private:
    const Ast& ast_;
    const RunLimits& limits_;
    StdinScanner scanner_;
    std::string out_;
    int64_t steps_ = 0;
    int call_depth_ = 0;
    std::chrono::steady_clock::time_point deadline_;
    Value ret_;

    static constexpr int kMaxCallDepth = 1500;

    void tick() {
        if (++steps_ > limits_.step_budget) throw TimeoutSignal{};
        if ((steps_ & 0xFFF) == 0 && std::chrono::steady_clock::now() > deadline_)
            throw TimeoutSignal{};
    }

    void emit(const std::string& text) {
        if (static_cast<int64_t>(out_.size() + text.size()) > limits_.output_budget) {
            out_.append(text.substr(0, static_cast<size_t>(limits_.output_budget) - out_.size()));
            throw OverflowSignal{};
        }
        out_ += text;
    }

    // -- frames and calls --------------------------------------------------

    Value call(const Method& m, std::vector<Value> args) {
        if (++call_depth_ > kMaxCallDepth) {
            --call_depth_;
            java_error("java.lang.StackOverflowError");
        }
        std::vector<Value> frame(static_cast<size_t>(std::max(m.frame_slots, 1)));
        for (size_t i = 0; i < m.params.size() && i < args.size(); ++i)
            frame[static_cast<size_t>(m.params[i].slot)] =
                convert(std::move(args[i]), m.params[i].type);
        Flow flow = exec(*m.body, frame);
        --call_depth_;
        if (flow == Flow::Return) return convert(std::move(ret_), m.return_type);
        if (m.return_type.base == BaseType::Void && !m.return_type.is_array) return {};
        java_error("missing return statement in method '" + m.name + "'");
    }

    // Coerces a value to a declared type (stores, params, returns, casts).
    Value convert(Value v, const Type& t) {
        if (t.is_array || t.base == BaseType::Scanner || t.base == BaseType::Void) return v;
        switch (t.base) {
            case BaseType::Int: {
                if (v.is<int32_t>()) return v;
                if (v.is<uint8_t>()) return Value(static_cast<int32_t>(v.get<uint8_t>()));
                if (v.is<int64_t>()) return Value(static_cast<int32_t>(
                    static_cast<uint32_t>(static_cast<uint64_t>(v.get<int64_t>()))));
                if (v.is<double>()) return Value(double_to_i32(v.get<double>()));
                return v;
            }
            case BaseType::Long: {
                if (v.is<int64_t>()) return v;
                if (v.is<int32_t>()) return Value(static_cast<int64_t>(v.get<int32_t>()));
                if (v.is<uint8_t>()) return Value(static_cast<int64_t>(v.get<uint8_t>()));
                if (v.is<double>()) return Value(double_to_i64(v.get<double>()));
                return v;
            }
            case BaseType::Double: {
                if (v.is<double>()) return v;
                return Value(as_double(v));
            }
            case BaseType::Char: {
                if (v.is<uint8_t>()) return v;
                if (v.is<int32_t>())
                    return Value(static_cast<uint8_t>(v.get<int32_t>() & 0xFF));
                if (v.is<int64_t>())
                    return Value(static_cast<uint8_t>(v.get<int64_t>() & 0xFF));
                if (v.is<double>())
                    return Value(static_cast<uint8_t>(double_to_i32(v.get<double>()) & 0xFF));
                return v;
            }
            default: return v;
        }
    }

    static int32_t double_to_i32(double d) {
        if (std::isnan(d)) return 0;
        if (d >= 2147483647.0) return INT32_MAX;
        if (d <= -2147483648.0) return INT32_MIN;
        return static_cast<int32_t>(d);
    }
    static int64_t double_to_i64(double d) {
        if (std::isnan(d)) return 0;
        if (d >= 9223372036854775807.0) return INT64_MAX;
        if (d <= -9223372036854775808.0) return INT64_MIN;
        return static_cast<int64_t>(d);
    }

    // -- statements ----------------------------------------------------------

    enum class Flow { Normal, Break, Continue, Return };

    Flow exec(const Stmt& s, std::vector<Value>& frame) {
        tick();
        return std::visit(
            [&](const auto& n) -> Flow {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, VarDeclStmt>) {
                    for (const auto& item : n.items) {
                        Value v = item.init ? eval(*item.init, frame) : default_value(n.type);
                        frame[static_cast<size_t>(item.slot)] = convert(std::move(v), n.type);
                    }
                    return Flow::Normal;
                } else if constexpr (std::is_same_v<T, ExprStmt>) {
                    eval(*n.expr, frame);
                    return Flow::Normal;
                } else if constexpr (std::is_same_v<T, BlockStmt>) {
                    for (const auto& st : n.statements) {
                        Flow f = exec(*st, frame);
                        if (f != Flow::Normal) return f;
                    }
                    return Flow::Normal;
                } else if constexpr (std::is_same_v<T, IfStmt>) {
                    if (truthy(eval(*n.cond, frame))) return exec(*n.then_branch, frame);
                    if (n.else_branch) return exec(*n.else_branch, frame);
                    return Flow::Normal;
                } else if constexpr (std::is_same_v<T, WhileStmt>) {
                    while (truthy(eval(*n.cond, frame))) {
                        Flow f = exec(*n.body, frame);
                        if (f == Flow::Break) break;
                        if (f == Flow::Return) return f;
                    }
                    return Flow::Normal;
                } else if constexpr (std::is_same_v<T, ForStmt>) {
                    if (n.init) exec(*n.init, frame);
                    for (const auto& e : n.init_exprs) eval(*e, frame);
                    while (!n.cond || truthy(eval(*n.cond, frame))) {
                        Flow f = exec(*n.body, frame);
                        if (f == Flow::Break) break;
                        if (f == Flow::Return) return f;
                        for (const auto& e : n.update) eval(*e, frame);
                        tick();
                    }
                    return Flow::Normal;
                } else if constexpr (std::is_same_v<T, ReturnStmt>) {
                    ret_ = n.value ? eval(*n.value, frame) : Value{};
                    return Flow::Return;
                } else if constexpr (std::is_same_v<T, BreakStmt>) {
                    return Flow::Break;
                } else if constexpr (std::is_same_v<T, ContinueStmt>) {
                    return Flow::Continue;
                } else {
                    return Flow::Normal;
                }
            },
            s.node);
    }

    static bool truthy(const Value& v) {
        if (v.is<bool>()) return v.get<bool>();
        java_error("internal: condition is not boolean");
    }

    Value default_value(const Type& t) {
        if (t.is_array) return Value(ArrayRef{nullptr, t.base});
        switch (t.base) {
            case BaseType::Int: return Value(int32_t{0});
            case BaseType::Long: return Value(int64_t{0});
            case BaseType::Double: return Value(0.0);
            case BaseType::Boolean: return Value(false);
            case BaseType::Char: return Value(uint8_t{0});
            case BaseType::String: return Value(std::string());
            case BaseType::Scanner: return Value(ScannerRef{});
            default: return {};
        }
    }

    // -- expressions ---------------------------------------------------------

    Value eval(const Expr& e, std::vector<Value>& frame) {
        tick();
        return std::visit(
            [&](const auto& n) -> Value {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, IntLit>) {
                    if (n.is_long) return Value(n.value);
                    return Value(static_cast<int32_t>(
                        static_cast<uint32_t>(static_cast<uint64_t>(n.value))));
                } else if constexpr (std::is_same_v<T, DoubleLit>) {
                    return Value(n.value);
                } else if constexpr (std::is_same_v<T, StringLit>) {
                    return Value(n.value);
                } else if constexpr (std::is_same_v<T, CharLit>) {
                    return Value(n.value);
                } else if constexpr (std::is_same_v<T, BoolLit>) {
                    return Value(n.value);
                } else if constexpr (std::is_same_v<T, NameRef>) {
                    return frame[static_cast<size_t>(n.slot)];
                } else if constexpr (std::is_same_v<T, UnaryExpr>) {
                    return eval_unary(n, frame);
                } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                    return eval_binary(n, frame);
                } else if constexpr (std::is_same_v<T, AssignExpr>) {
                    return eval_assign(n, frame);
                } else if constexpr (std::is_same_v<T, TernaryExpr>) {
                    Value branch = truthy(eval(*n.cond, frame)) ? eval(*n.then_branch, frame)
                                                                : eval(*n.else_branch, frame);
                    return convert(std::move(branch), e.type);
                } else if constexpr (std::is_same_v<T, CastExpr>) {
                    return convert(eval(*n.operand, frame), n.type);
                } else if constexpr (std::is_same_v<T, IndexExpr>) {
                    auto [arr, idx] = eval_index(n, frame);
                    return (*arr.elems)[static_cast<size_t>(idx)];
                } else if constexpr (std::is_same_v<T, NewArrayExpr>) {
                    int64_t len = as_integral(eval(*n.size, frame));
                    if (len < 0)
                        java_error("java.lang.NegativeArraySizeException: " +
                                   std::to_string(len));
                    ArrayRef ref{std::make_shared<std::vector<Value>>(), n.elem_type.base};
                    ref.elems->assign(static_cast<size_t>(len),
                                      default_value(make_type(n.elem_type.base)));
                    return Value(std::move(ref));
                } else if constexpr (std::is_same_v<T, ArrayInitExpr>) {
                    ArrayRef ref{std::make_shared<std::vector<Value>>(), e.type.base};
                    Type elem = make_type(e.type.base);
                    for (const auto& el : n.elements)
                        ref.elems->push_back(convert(eval(*el, frame), elem));
                    return Value(std::move(ref));
                } else if constexpr (std::is_same_v<T, NewScannerExpr>) {
                    return Value(ScannerRef{});
                } else if constexpr (std::is_same_v<T, CallExpr>) {
                    const Method& m =
                        ast_.unit.methods[static_cast<size_t>(n.method_index)];
                    std::vector<Value> args;
                    args.reserve(n.args.size());
                    for (const auto& a : n.args) args.push_back(eval(*a, frame));
                    return call(m, std::move(args));
                } else if constexpr (std::is_same_v<T, MethodCallExpr>) {
                    return eval_method_call(n, frame);
                } else if constexpr (std::is_same_v<T, StaticCallExpr>) {
                    return eval_static_call(n, frame);
                } else if constexpr (std::is_same_v<T, FieldAccessExpr>) {
                    return eval_field(n, frame);
                } else {
                    return {};
                }
            },
            e.node);
    }

    std::pair<ArrayRef, int64_t> eval_index(const IndexExpr& n, std::vector<Value>& frame) {
        Value av = eval(*n.array, frame);
        Value iv = eval(*n.index, frame);
        if (!av.is<ArrayRef>() || !av.get<ArrayRef>().elems)
            java_error("java.lang.NullPointerException");
        int64_t idx = as_integral(iv);
        const auto& arr = av.get<ArrayRef>();
        if (idx < 0 || idx >= static_cast<int64_t>(arr.elems->size()))
            java_error("java.lang.ArrayIndexOutOfBoundsException: Index " +
                       std::to_string(idx) + " out of bounds for length " +
                       std::to_string(arr.elems->size()));
        return {arr, idx};
    }

    Value eval_unary(const UnaryExpr& n, std::vector<Value>& frame) {
        if (n.op == "++" || n.op == "--") {
            // read-modify-write on an lvalue
            Value old;
            Value fresh;
            auto apply = [&](const Value& cur) {
                NumKind k = cur.is<uint8_t>() ? NumKind::Int : value_num_kind(cur);
                Value one = k == NumKind::Dbl ? Value(1.0)
                            : k == NumKind::Long ? Value(int64_t{1})
                                                 : Value(int32_t{1});
                return arith(n.op == "++" ? "+" : "-", cur, one);
            };
            if (const auto* ref = n.operand->as<NameRef>()) {
                old = frame[static_cast<size_t>(ref->slot)];
                fresh = convert(apply(old), n.operand->type);
                frame[static_cast<size_t>(ref->slot)] = fresh;
            } else if (const auto* ix = n.operand->as<IndexExpr>()) {
                auto [arr, idx] = eval_index(*ix, frame);
                old = (*arr.elems)[static_cast<size_t>(idx)];
                fresh = convert(apply(old), make_type(arr.elem_type));
                (*arr.elems)[static_cast<size_t>(idx)] = fresh;
            } else {
                java_error("internal: bad ++/-- operand");
            }
            return n.prefix ? fresh : old;
        }

        Value v = eval(*n.operand, frame);
        if (n.op == "!") return Value(!truthy(v));
        if (n.op == "~") {
            if (value_num_kind(v) == NumKind::Long) return Value(~v.get<int64_t>());
            return Value(static_cast<int32_t>(~static_cast<uint32_t>(as_integral(v))));
        }
        if (n.op == "-") {
            switch (value_num_kind(v)) {
                case NumKind::Dbl: return Value(-v.get<double>());
                case NumKind::Long: return Value(wrap_sub64(0, v.get<int64_t>()));
                default: return Value(wrap_sub(0, static_cast<int32_t>(as_integral(v))));
            }
        }
        // unary +: numeric promotion only
        switch (value_num_kind(v)) {
            case NumKind::Dbl: return v;
            case NumKind::Long: return v;
            default: return Value(static_cast<int32_t>(as_integral(v)));
        }
    }

    Value eval_binary(const BinaryExpr& n, std::vector<Value>& frame) {
        const std::string& op = n.op;
        if (op == "&&") {
            if (!truthy(eval(*n.lhs, frame))) return Value(false);
            return Value(truthy(eval(*n.rhs, frame)));
        }
        if (op == "||") {
            if (truthy(eval(*n.lhs, frame))) return Value(true);
            return Value(truthy(eval(*n.rhs, frame)));
        }
        Value a = eval(*n.lhs, frame);
        Value b = eval(*n.rhs, frame);
        return binary_op(op, a, b);
    }

    Value binary_op(const std::string& op, const Value& a, const Value& b) {
        if (op == "+") {
            if (a.is<std::string>() || b.is<std::string>())
                return Value(to_java_string(a) + to_java_string(b));
            return arith("+", a, b);
        }
        if (op == "-" || op == "*" || op == "/" || op == "%") return arith(op, a, b);
        if (op == "<<" || op == ">>" || op == ">>>") return shift(op, a, b);
        if (op == "&" || op == "|" || op == "^") {
            if (a.is<bool>() && b.is<bool>()) {
                bool x = a.get<bool>(), y = b.get<bool>();
                return Value(op == "&" ? (x && y) : op == "|" ? (x || y) : (x != y));
            }
            bool wide = value_num_kind(a) == NumKind::Long || value_num_kind(b) == NumKind::Long;
            int64_t x = as_integral(a), y = as_integral(b);
            int64_t r = op == "&" ? (x & y) : op == "|" ? (x | y) : (x ^ y);
            if (wide) return Value(r);
            return Value(static_cast<int32_t>(r));
        }
        if (op == "<" || op == "<=" || op == ">" || op == ">=") {
            if (value_num_kind(a) == NumKind::Dbl || value_num_kind(b) == NumKind::Dbl) {
                double x = as_double(a), y = as_double(b);
                return Value(op == "<" ? x < y : op == "<=" ? x <= y : op == ">" ? x > y
                                                                                 : x >= y);
            }
            int64_t x = as_integral(a), y = as_integral(b);
            return Value(op == "<" ? x < y : op == "<=" ? x <= y : op == ">" ? x > y : x >= y);
        }
        if (op == "==" || op == "!=") {
            bool eq;
            if (a.is<bool>() || b.is<bool>()) {
                eq = a.get<bool>() == b.get<bool>();
            } else if (value_num_kind(a) == NumKind::Dbl || value_num_kind(b) == NumKind::Dbl) {
                eq = as_double(a) == as_double(b);
            } else {
                eq = as_integral(a) == as_integral(b);
            }
            return Value(op == "==" ? eq : !eq);
        }
        java_error("internal: unknown operator " + op);
    }

    Value arith(const std::string& op, const Value& a, const Value& b) {
        NumKind ka = value_num_kind(a), kb = value_num_kind(b);
        if (ka == NumKind::Dbl || kb == NumKind::Dbl) {
            double x = as_double(a), y = as_double(b);
            if (op == "+") return Value(x + y);
            if (op == "-") return Value(x - y);
            if (op == "*") return Value(x * y);
            if (op == "/") return Value(x / y);
            return Value(std::fmod(x, y));
        }
        if (ka == NumKind::Long || kb == NumKind::Long) {
            int64_t x = as_integral(a), y = as_integral(b);
            if (op == "+") return Value(wrap_add64(x, y));
            if (op == "-") return Value(wrap_sub64(x, y));
            if (op == "*") return Value(wrap_mul64(x, y));
            if (y == 0) java_error("java.lang.ArithmeticException: / by zero");
            if (x == INT64_MIN && y == -1) return Value(op == "/" ? INT64_MIN : int64_t{0});
            return Value(op == "/" ? x / y : x % y);
        }
        int32_t x = static_cast<int32_t>(as_integral(a));
        int32_t y = static_cast<int32_t>(as_integral(b));
        if (op == "+") return Value(wrap_add(x, y));
        if (op == "-") return Value(wrap_sub(x, y));
        if (op == "*") return Value(wrap_mul(x, y));
        if (y == 0) java_error("java.lang.ArithmeticException: / by zero");
        if (x == INT32_MIN && y == -1) return Value(op == "/" ? INT32_MIN : int32_t{0});
        return Value(op == "/" ? x / y : x % y);
    }

    Value shift(const std::string& op, const Value& a, const Value& b) {
        int64_t count = as_integral(b);
        if (value_num_kind(a) == NumKind::Long) {
            int64_t x = a.get<int64_t>();
            int s = static_cast<int>(count & 63);
            if (op == "<<")
                return Value(static_cast<int64_t>(static_cast<uint64_t>(x) << s));
            if (op == ">>") return Value(x >> s);
            return Value(static_cast<int64_t>(static_cast<uint64_t>(x) >> s));
        }
        int32_t x = static_cast<int32_t>(as_integral(a));
        int s = static_cast<int>(count & 31);
        if (op == "<<") return Value(static_cast<int32_t>(static_cast<uint32_t>(x) << s));
        if (op == ">>") return Value(static_cast<int32_t>(x >> s));
        return Value(static_cast<int32_t>(static_cast<uint32_t>(x) >> s));
    }

    Value eval_assign(const AssignExpr& n, std::vector<Value>& frame) {
        if (const auto* ref = n.target->as<NameRef>()) {
            Value result = assigned_value(n, frame[static_cast<size_t>(ref->slot)], frame,
                                          n.target->type);
            frame[static_cast<size_t>(ref->slot)] = result;
            return result;
        }
        if (const auto* ix = n.target->as<IndexExpr>()) {
            auto [arr, idx] = eval_index(*ix, frame);
            Value& cell = (*arr.elems)[static_cast<size_t>(idx)];
            Value result = assigned_value(n, cell, frame, make_type(arr.elem_type));
            cell = result;
            return result;
        }
        java_error("internal: bad assignment target");
    }

    Value assigned_value(const AssignExpr& n, const Value& current, std::vector<Value>& frame,
                         const Type& target_type) {
        Value rhs = eval(*n.value, frame);
        if (n.op == "=") {
            if (target_type.is_array || target_type.base == BaseType::Scanner) return rhs;
            return convert(std::move(rhs), target_type);
        }
        std::string base_op = n.op.substr(0, n.op.size() - 1);
        if (target_type.base == BaseType::String && base_op == "+")
            return Value(current.get<std::string>() + to_java_string(rhs));
        Value combined = binary_op(base_op, current, rhs);
        return convert(std::move(combined), target_type);
    }

    // -- builtin dispatch ------------------------------------------------------

    Value eval_method_call(const MethodCallExpr& n, std::vector<Value>& frame) {
        auto op = static_cast<BuiltinOp>(n.builtin);
        if (op == BuiltinOp::Println || op == BuiltinOp::Print) {
            std::string text;
            if (!n.args.empty()) text = to_java_string(eval(*n.args[0], frame));
            if (op == BuiltinOp::Println) text += "\n";
            emit(text);
            return {};
        }

        Value recv = eval(*n.receiver, frame);
        auto arg = [&](size_t i) { return eval(*n.args[i], frame); };

        switch (op) {
            case BuiltinOp::ScannerNextInt: return Value(scanner_.next_int());
            case BuiltinOp::ScannerNextLong: return Value(scanner_.next_long());
            case BuiltinOp::ScannerNextDouble: return Value(scanner_.next_double());
            case BuiltinOp::ScannerNext: return Value(scanner_.next());
            case BuiltinOp::ScannerNextLine: return Value(scanner_.next_line());
            case BuiltinOp::ScannerNextBoolean: return Value(scanner_.next_boolean());
            case BuiltinOp::ScannerHasNext: return Value(scanner_.has_next());
            case BuiltinOp::ScannerHasNextInt: return Value(scanner_.has_next_int());
            case BuiltinOp::ScannerHasNextLong: return Value(scanner_.has_next_long());
            case BuiltinOp::ScannerHasNextDouble: return Value(scanner_.has_next_double());
            case BuiltinOp::ScannerHasNextLine: return Value(scanner_.has_next_line());
            case BuiltinOp::ScannerClose: return {};
            default: break;
        }

        const std::string& s = recv.get<std::string>();
        auto len = static_cast<int64_t>(s.size());
        auto str_index_check = [&](int64_t i, bool allow_end) {
            if (i < 0 || i > len || (!allow_end && i == len))
                java_error("java.lang.StringIndexOutOfBoundsException: index " +
                           std::to_string(i) + ", length " + std::to_string(len));
        };

        switch (op) {
            case BuiltinOp::StrLength: return Value(static_cast<int32_t>(len));
            case BuiltinOp::StrCharAt: {
                int64_t i = as_integral(arg(0));
                str_index_check(i, false);
                return Value(static_cast<uint8_t>(s[static_cast<size_t>(i)]));
            }
            case BuiltinOp::StrSubstring1: {
                int64_t i = as_integral(arg(0));
                str_index_check(i, true);
                return Value(s.substr(static_cast<size_t>(i)));
            }
            case BuiltinOp::StrSubstring2: {
                int64_t b = as_integral(arg(0));
                int64_t e = as_integral(arg(1));
                if (b < 0 || e > len || b > e)
                    java_error("java.lang.StringIndexOutOfBoundsException: begin " +
                               std::to_string(b) + ", end " + std::to_string(e) +
                               ", length " + std::to_string(len));
                return Value(s.substr(static_cast<size_t>(b), static_cast<size_t>(e - b)));
            }
            case BuiltinOp::StrIndexOfStr: {
                auto pos = s.find(arg(0).get<std::string>());
                return Value(pos == std::string::npos ? int32_t{-1}
                                                      : static_cast<int32_t>(pos));
            }
            case BuiltinOp::StrIndexOfStrFrom: {
                std::string needle = arg(0).get<std::string>();
                int64_t from = std::max<int64_t>(0, as_integral(arg(1)));
                if (from > len) return Value(int32_t{-1});
                auto pos = s.find(needle, static_cast<size_t>(from));
                return Value(pos == std::string::npos ? int32_t{-1}
                                                      : static_cast<int32_t>(pos));
            }
            case BuiltinOp::StrIndexOfChar: {
                auto pos = s.find(static_cast<char>(as_integral(arg(0)) & 0xFF));
                return Value(pos == std::string::npos ? int32_t{-1}
                                                      : static_cast<int32_t>(pos));
            }
            case BuiltinOp::StrContains:
                return Value(s.find(arg(0).get<std::string>()) != std::string::npos);
            case BuiltinOp::StrEquals: return Value(s == arg(0).get<std::string>());
            case BuiltinOp::StrEqualsIgnoreCase: {
                std::string other = arg(0).get<std::string>();
                if (s.size() != other.size()) return Value(false);
                for (size_t i = 0; i < s.size(); ++i)
                    if (ascii_lower(s[i]) != ascii_lower(other[i])) return Value(false);
                return Value(true);
            }
            case BuiltinOp::StrCompareTo: {
                std::string other = arg(0).get<std::string>();
                size_t nmin = std::min(s.size(), other.size());
                for (size_t i = 0; i < nmin; ++i) {
                    if (s[i] != other[i])
                        return Value(static_cast<int32_t>(static_cast<unsigned char>(s[i])) -
                                     static_cast<int32_t>(static_cast<unsigned char>(other[i])));
                }
                return Value(static_cast<int32_t>(s.size()) -
                             static_cast<int32_t>(other.size()));
            }
            case BuiltinOp::StrIsEmpty: return Value(s.empty());
            case BuiltinOp::StrToUpper: {
                std::string r = s;
                for (char& c : r) c = ascii_upper(c);
                return Value(std::move(r));
            }
            case BuiltinOp::StrToLower: {
                std::string r = s;
                for (char& c : r) c = ascii_lower(c);
                return Value(std::move(r));
            }
            case BuiltinOp::StrTrim: {
                size_t b = 0, e = s.size();
                while (b < e && static_cast<unsigned char>(s[b]) <= 0x20) ++b;
                while (e > b && static_cast<unsigned char>(s[e - 1]) <= 0x20) --e;
                return Value(s.substr(b, e - b));
            }
            case BuiltinOp::StrReplaceChar: {
                char from = static_cast<char>(as_integral(arg(0)) & 0xFF);
                char to = static_cast<char>(as_integral(arg(1)) & 0xFF);
                std::string r = s;
                for (char& c : r)
                    if (c == from) c = to;
                return Value(std::move(r));
            }
            case BuiltinOp::StrReplaceStr: {
                std::string from = arg(0).get<std::string>();
                std::string to = arg(1).get<std::string>();
                if (from.empty()) return Value(s);
                std::string r;
                size_t pos = 0;
                while (true) {
                    size_t hit = s.find(from, pos);
                    if (hit == std::string::npos) {
                        r += s.substr(pos);
                        break;
                    }
                    r += s.substr(pos, hit - pos);
                    r += to;
                    pos = hit + from.size();
                }
                return Value(std::move(r));
            }
            case BuiltinOp::StrStartsWith: {
                std::string p = arg(0).get<std::string>();
                return Value(s.size() >= p.size() && s.compare(0, p.size(), p) == 0);
            }
            case BuiltinOp::StrEndsWith: {
                std::string p = arg(0).get<std::string>();
                return Value(s.size() >= p.size() &&
                             s.compare(s.size() - p.size(), p.size(), p) == 0);
            }
            case BuiltinOp::StrSplit: return split_string(s, arg(0).get<std::string>());
            case BuiltinOp::StrToCharArray: {
                ArrayRef ref{std::make_shared<std::vector<Value>>(), BaseType::Char};
                for (char c : s) ref.elems->push_back(Value(static_cast<uint8_t>(c)));
                return Value(std::move(ref));
            }
            case BuiltinOp::StrConcat: return Value(s + arg(0).get<std::string>());
            default: java_error("internal: unresolved builtin call");
        }
    }

    static char ascii_lower(char c) { return c >= 'A' && c <= 'Z' ? static_cast<char>(c + 32) : c; }
    static char ascii_upper(char c) { return c >= 'a' && c <= 'z' ? static_cast<char>(c - 32) : c; }

    Value split_string(const std::string& s, const std::string& pattern) {
        ArrayRef ref{std::make_shared<std::vector<Value>>(), BaseType::String};
        if (s.empty()) {
            ref.elems->push_back(Value(std::string()));
            return Value(std::move(ref));
        }
        std::vector<std::string> parts;
        try {
            std::regex re(pattern);
            std::sregex_token_iterator it(s.begin(), s.end(), re, -1), end;
            for (; it != end; ++it) parts.push_back(*it);
        } catch (const std::regex_error&) {
            java_error("java.util.regex.PatternSyntaxException: " + pattern);
        }
        while (!parts.empty() && parts.back().empty()) parts.pop_back();
        for (auto& p : parts) ref.elems->push_back(Value(std::move(p)));
        return Value(std::move(ref));
    }

    Value eval_static_call(const StaticCallExpr& n, std::vector<Value>& frame) {
        auto op = static_cast<BuiltinOp>(n.builtin);
        std::vector<Value> args;
        args.reserve(n.args.size());
        for (const auto& a : n.args) args.push_back(eval(*a, frame));

        switch (op) {
            case BuiltinOp::MathAbs: {
                const Value& v = args[0];
                switch (value_num_kind(v)) {
                    case NumKind::Dbl: return Value(std::fabs(v.get<double>()));
                    case NumKind::Long: {
                        int64_t x = v.get<int64_t>();
                        return Value(x == INT64_MIN ? x : (x < 0 ? -x : x));
                    }
                    default: {
                        auto x = static_cast<int32_t>(as_integral(v));
                        return Value(x == INT32_MIN ? x : (x < 0 ? -x : x));
                    }
                }
            }
            case BuiltinOp::MathMax:
            case BuiltinOp::MathMin: {
                bool want_max = op == BuiltinOp::MathMax;
                NumKind k = std::max(value_num_kind(args[0]), value_num_kind(args[1]),
                                     [](NumKind a, NumKind b) {
                                         auto rank = [](NumKind x) {
                                             return x == NumKind::Dbl ? 2
                                                    : x == NumKind::Long ? 1
                                                                         : 0;
                                         };
                                         return rank(a) < rank(b);
                                     });
                if (k == NumKind::Dbl) {
                    double x = as_double(args[0]), y = as_double(args[1]);
                    return Value(want_max ? std::fmax(x, y) : std::fmin(x, y));
                }
                int64_t x = as_integral(args[0]), y = as_integral(args[1]);
                int64_t r = want_max ? std::max(x, y) : std::min(x, y);
                if (k == NumKind::Long) return Value(r);
                return Value(static_cast<int32_t>(r));
            }
            case BuiltinOp::MathSqrt: return Value(std::sqrt(as_double(args[0])));
            case BuiltinOp::MathPow:
                return Value(std::pow(as_double(args[0]), as_double(args[1])));
            case BuiltinOp::MathFloor: return Value(std::floor(as_double(args[0])));
            case BuiltinOp::MathCeil: return Value(std::ceil(as_double(args[0])));
            case BuiltinOp::MathRound: {
                double d = as_double(args[0]);
                if (std::isnan(d)) return Value(int64_t{0});
                return Value(double_to_i64(std::floor(d + 0.5)));
            }
            case BuiltinOp::IntegerParseInt: {
                const std::string& t = args[0].get<std::string>();
                int64_t wide;
                if (!parse_integral(t, wide) || wide < INT32_MIN || wide > INT32_MAX)
                    java_error("java.lang.NumberFormatException: For input string: \"" + t +
                               "\"");
                return Value(static_cast<int32_t>(wide));
            }
            case BuiltinOp::LongParseLong: {
                const std::string& t = args[0].get<std::string>();
                int64_t wide;
                if (!parse_integral(t, wide))
                    java_error("java.lang.NumberFormatException: For input string: \"" + t +
                               "\"");
                return Value(wide);
            }
            case BuiltinOp::DoubleParseDouble: {
                std::string t = args[0].get<std::string>();
                size_t b = 0, e = t.size();
                while (b < e && static_cast<unsigned char>(t[b]) <= 0x20) ++b;
                while (e > b && static_cast<unsigned char>(t[e - 1]) <= 0x20) --e;
                std::string core = t.substr(b, e - b);
                char* endp = nullptr;
                double d = std::strtod(core.c_str(), &endp);
                if (core.empty() || endp != core.c_str() + core.size())
                    java_error("java.lang.NumberFormatException: For input string: \"" + t +
                               "\"");
                return Value(d);
            }
            case BuiltinOp::IntegerToString:
                return Value(std::to_string(static_cast<int32_t>(as_integral(args[0]))));
            case BuiltinOp::IntegerToBinaryString: {
                auto u = static_cast<uint32_t>(static_cast<int32_t>(as_integral(args[0])));
                if (u == 0) return Value(std::string("0"));
                std::string r;
                while (u) {
                    r += static_cast<char>('0' + (u & 1));
                    u >>= 1;
                }
                return Value(std::string(r.rbegin(), r.rend()));
            }
            case BuiltinOp::LongToString: return Value(std::to_string(as_integral(args[0])));
            case BuiltinOp::DoubleToString:
                return Value(java_double_to_string(as_double(args[0])));
            case BuiltinOp::CharIsDigit: {
                auto c = static_cast<uint8_t>(as_integral(args[0]));
                return Value(c >= '0' && c <= '9');
            }
            case BuiltinOp::CharIsLetter: {
                auto c = static_cast<uint8_t>(as_integral(args[0]));
                return Value((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'));
            }
            case BuiltinOp::CharIsLetterOrDigit: {
                auto c = static_cast<uint8_t>(as_integral(args[0]));
                return Value((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                             (c >= '0' && c <= '9'));
            }
            case BuiltinOp::CharIsWhitespace: {
                auto c = static_cast<uint8_t>(as_integral(args[0]));
                return Value(is_space_byte(static_cast<char>(c)));
            }
            case BuiltinOp::CharIsUpperCase: {
                auto c = static_cast<uint8_t>(as_integral(args[0]));
                return Value(c >= 'A' && c <= 'Z');
            }
            case BuiltinOp::CharIsLowerCase: {
                auto c = static_cast<uint8_t>(as_integral(args[0]));
                return Value(c >= 'a' && c <= 'z');
            }
            case BuiltinOp::CharToUpperCase:
                return Value(static_cast<uint8_t>(
                    ascii_upper(static_cast<char>(as_integral(args[0]) & 0xFF))));
            case BuiltinOp::CharToLowerCase:
                return Value(static_cast<uint8_t>(
                    ascii_lower(static_cast<char>(as_integral(args[0]) & 0xFF))));
            case BuiltinOp::CharGetNumericValue: {
                auto c = static_cast<uint8_t>(as_integral(args[0]));
                if (c >= '0' && c <= '9') return Value(static_cast<int32_t>(c - '0'));
                if (c >= 'a' && c <= 'z') return Value(static_cast<int32_t>(c - 'a' + 10));
                if (c >= 'A' && c <= 'Z') return Value(static_cast<int32_t>(c - 'A' + 10));
                return Value(int32_t{-1});
            }
            case BuiltinOp::StringValueOf: return Value(to_java_string(args[0]));
            default: java_error("internal: unresolved static builtin");
        }
    }

    static bool parse_integral(const std::string& t, int64_t& out) {
        if (t.empty()) return false;
        size_t i = (t[0] == '+' || t[0] == '-') ? 1 : 0;
        if (i >= t.size()) return false;
        for (size_t j = i; j < t.size(); ++j)
            if (t[j] < '0' || t[j] > '9') return false;
        auto res = std::from_chars(t.data() + (t[0] == '+' ? 1 : 0), t.data() + t.size(), out);
        return res.ec == std::errc() && res.ptr == t.data() + t.size();
    }

    Value eval_field(const FieldAccessExpr& n, std::vector<Value>& frame) {
        auto op = static_cast<BuiltinOp>(n.builtin);
        switch (op) {
            case BuiltinOp::SystemOut: return {};
            case BuiltinOp::IntegerMaxValue: return Value(INT32_MAX);
            case BuiltinOp::IntegerMinValue: return Value(INT32_MIN);
            case BuiltinOp::LongMaxValue: return Value(INT64_MAX);
            case BuiltinOp::LongMinValue: return Value(INT64_MIN);
            case BuiltinOp::MathPi: return Value(3.141592653589793);
            case BuiltinOp::MathE: return Value(2.718281828459045);
            case BuiltinOp::ArrayLength: {
                Value v = eval(*n.receiver, frame);
                if (!v.is<ArrayRef>() || !v.get<ArrayRef>().elems)
                    java_error("java.lang.NullPointerException");
                return Value(static_cast<int32_t>(v.get<ArrayRef>().elems->size()));
            }
            default: java_error("internal: unresolved field access");
        }
    }
};

}  // namespace

RunResult run_program(const Ast& ast, std::string_view stdin_text, const RunLimits& limits) {
    return Interp(ast, stdin_text, limits).run();
}

}  // namespace obfkit::interp
