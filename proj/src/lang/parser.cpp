#include "obfkit/lang/parser.hpp"

#include <set>
#include <unordered_map>

namespace obfkit::lang {

namespace {

const std::set<std::string, std::less<>> kTypeKeywords = {
    "int", "long", "double", "boolean", "char", "String"};

const std::set<std::string, std::less<>> kBuiltinClasses = {
    "Math", "Integer", "Long", "Double", "Character"};

// Reserved Java keywords that mark constructs outside the subset.
const std::unordered_map<std::string, std::string> kUnsupportedKeywords = {
    {"switch", "switch statements"},
    {"do", "do-while loops"},
    {"try", "try/catch"},
    {"throw", "throw statements"},
    {"synchronized", "synchronized blocks"},
    {"this", "instance context"},
    {"super", "inheritance"},
    {"null", "null literals"},
    {"byte", "byte type"},
    {"short", "short type"},
    {"float", "float type"},
    {"instanceof", "instanceof"},
};

BaseType base_type_of(std::string_view kw) {
    if (kw == "int") return BaseType::Int;
    if (kw == "long") return BaseType::Long;
    if (kw == "double") return BaseType::Double;
    if (kw == "boolean") return BaseType::Boolean;
    if (kw == "char") return BaseType::Char;
    if (kw == "String") return BaseType::String;
    return BaseType::Void;
}

class Parser {
public:
    explicit Parser(const TokenStream& stream) : toks_(stream.tokens) {}

    Ast run() {
        Ast ast;
        drain_comments(ast.unit.leading_comments);
        parse_imports(ast.unit);
        parse_class(ast);
        ast.next_id = next_id_;
        return ast;
    }

private:
    const std::vector<Token>& toks_;
    size_t pos_ = 0;
    int next_id_ = 0;
    std::vector<std::string> pending_comments_;

    int fresh_id() { return next_id_++; }

    // -- cursor ----------------------------------------------------------

    const Token& peek(size_t ahead = 0) {
        size_t p = pos_;
        size_t seen = 0;
        while (p < toks_.size()) {
            if (toks_[p].kind != TokenKind::Comment) {
                if (seen == ahead) return toks_[p];
                ++seen;
            }
            ++p;
        }
        return toks_.back();  // EOF
    }

    const Token& advance() {
        while (pos_ < toks_.size() && toks_[pos_].kind == TokenKind::Comment) {
            pending_comments_.push_back(toks_[pos_].lexeme);
            ++pos_;
        }
        const Token& t = toks_[pos_];
        if (pos_ + 1 < toks_.size()) ++pos_;
        return t;
    }

    void drain_comments(std::vector<std::string>& into) {
        while (pos_ < toks_.size() && toks_[pos_].kind == TokenKind::Comment) {
            pending_comments_.push_back(toks_[pos_].lexeme);
            ++pos_;
        }
        for (auto& c : pending_comments_) into.push_back(std::move(c));
        pending_comments_.clear();
    }

    [[noreturn]] void fail(const Token& at, const std::string& msg,
                           DiagCategory cat = DiagCategory::Syntax) {
        throw ParseError({at.span, msg, cat}, msg + " at " + at.span.to_string());
    }

    [[noreturn]] void unsupported(const Token& at, const std::string& what) {
        fail(at, "unsupported construct: " + what, DiagCategory::UnsupportedConstruct);
    }

    const Token& expect_punct(const char* p) {
        const Token& t = peek();
        if (!t.is_punct(p)) fail(t, std::string("expected '") + p + "'");
        return advance();
    }

    const Token& expect_op(const char* o) {
        const Token& t = peek();
        if (!t.is_op(o)) fail(t, std::string("expected '") + o + "'");
        return advance();
    }

    const Token& expect_keyword(const char* k) {
        const Token& t = peek();
        if (!t.is_keyword(k)) fail(t, std::string("expected '") + k + "'");
        return advance();
    }

    std::string expect_identifier(const char* what) {
        const Token& t = peek();
        if (t.kind != TokenKind::Identifier) fail(t, std::string("expected ") + what);
        return advance().lexeme;
    }

    bool at_type_keyword() {
        const Token& t = peek();
        return t.kind == TokenKind::Keyword && kTypeKeywords.count(t.lexeme) > 0;
    }

    // -- declarations ------------------------------------------------------

    void parse_imports(CompilationUnit& unit) {
        while (peek().is_keyword("import")) {
            advance();
            std::string text = "import ";
            text += expect_identifier("package name");
            while (peek().is_punct(".")) {
                advance();
                text += ".";
                if (peek().is_op("*")) {
                    advance();
                    text += "*";
                    break;
                }
                const Token& part = peek();
                if (part.kind == TokenKind::Identifier || part.kind == TokenKind::Keyword)
                    text += advance().lexeme;
                else
                    fail(part, "expected name in import");
            }
            expect_punct(";");
            unit.imports.push_back({text + ";"});
            drain_comments(unit.leading_comments);
        }
    }

    void parse_class(Ast& ast) {
        if (peek().is_keyword("package")) unsupported(peek(), "package declarations");
        expect_keyword("public");
        if (peek().is_keyword("interface") || peek().is_keyword("enum"))
            unsupported(peek(), peek().lexeme + " declarations");
        expect_keyword("class");
        ast.unit.class_name = expect_identifier("class name");
        if (peek().is_keyword("extends") || peek().is_keyword("implements"))
            unsupported(peek(), "inheritance");
        if (peek().is_op("<")) unsupported(peek(), "generics");
        expect_punct("{");
        while (!peek().is_punct("}")) {
            if (peek().kind == TokenKind::EndOfFile) fail(peek(), "unexpected end of file in class body");
            parse_method(ast);
        }
        drain_comments(ast.unit.trailing_comments);
        expect_punct("}");
        if (peek().kind != TokenKind::EndOfFile)
            unsupported(peek(), "multiple top-level declarations");
        drain_comments(ast.unit.trailing_comments);
    }

    void parse_method(Ast& ast) {
        Method m;
        drain_comments(m.leading_comments);
        if (peek().is_keyword("private") || peek().is_keyword("protected"))
            unsupported(peek(), "non-public access modifiers");
        if (peek().is_keyword("public")) {
            m.is_public = true;
            advance();
        }
        if (!peek().is_keyword("static")) {
            if (peek().is_keyword("class")) unsupported(peek(), "nested classes");
            unsupported(peek(), "instance members");
        }
        advance();  // static

        if (peek().is_keyword("void")) {
            advance();
            m.return_type = make_type(BaseType::Void);
        } else {
            m.return_type = parse_type();
        }
        const Token& name_tok = peek();
        m.name = expect_identifier("method name");
        m.name_span = name_tok.span;
        m.id = fresh_id();
        if (!peek().is_punct("(")) unsupported(peek(), "static fields");
        advance();
        if (!peek().is_punct(")")) {
            while (true) {
                Param p;
                p.type = parse_type();
                const Token& pn = peek();
                p.name = expect_identifier("parameter name");
                p.name_span = pn.span;
                p.id = fresh_id();
                m.params.push_back(std::move(p));
                if (peek().is_punct(",")) {
                    advance();
                    continue;
                }
                break;
            }
        }
        expect_punct(")");
        if (peek().is_keyword("throws")) unsupported(peek(), "throws clauses");
        m.body = parse_block();
        ast.unit.methods.push_back(std::move(m));
    }

    Type parse_type() {
        const Token& t = peek();
        if (t.kind == TokenKind::Keyword && kTypeKeywords.count(t.lexeme)) {
            advance();
            Type ty = make_type(base_type_of(t.lexeme));
            if (peek().is_punct("[")) {
                advance();
                expect_punct("]");
                ty.is_array = true;
                if (peek().is_punct("[")) unsupported(peek(), "multi-dimensional arrays");
            }
            return ty;
        }
        if (t.kind == TokenKind::Identifier && t.lexeme == "Scanner") {
            advance();
            return make_type(BaseType::Scanner);
        }
        if (t.kind == TokenKind::Identifier) unsupported(t, "type '" + t.lexeme + "'");
        fail(t, "expected type");
    }

    // -- statements --------------------------------------------------------

    StmtPtr parse_block() {
        auto stmt = std::make_unique<Stmt>();
        stmt->span = peek().span;
        stmt->id = fresh_id();
        BlockStmt block;
        expect_punct("{");
        while (!peek().is_punct("}")) {
            if (peek().kind == TokenKind::EndOfFile) fail(peek(), "unexpected end of file in block");
            block.statements.push_back(parse_statement());
        }
        drain_comments(block.trailing_comments);
        expect_punct("}");
        stmt->node = std::move(block);
        return stmt;
    }

    StmtPtr parse_statement() {
        auto stmt = std::make_unique<Stmt>();
        drain_comments(stmt->leading_comments);
        const Token& t = peek();
        stmt->span = t.span;
        stmt->id = fresh_id();

        if (t.kind == TokenKind::Keyword) {
            auto it = kUnsupportedKeywords.find(t.lexeme);
            if (it != kUnsupportedKeywords.end()) unsupported(t, it->second);
        }

        if (t.is_punct("{")) {
            stmt = parse_block_into(std::move(stmt));
            return stmt;
        }
        if (t.is_punct(";")) {
            advance();
            stmt->node = EmptyStmt{};
            return stmt;
        }
        if (t.is_keyword("if")) {
            advance();
            IfStmt s;
            expect_punct("(");
            s.cond = parse_expr();
            expect_punct(")");
            s.then_branch = parse_statement();
            if (peek().is_keyword("else")) {
                advance();
                s.else_branch = parse_statement();
            }
            stmt->node = std::move(s);
            return stmt;
        }
        if (t.is_keyword("while")) {
            advance();
            WhileStmt s;
            expect_punct("(");
            s.cond = parse_expr();
            expect_punct(")");
            s.body = parse_statement();
            stmt->node = std::move(s);
            return stmt;
        }
        if (t.is_keyword("for")) {
            advance();
            ForStmt s;
            expect_punct("(");
            if (!peek().is_punct(";")) {
                if (at_decl_start()) {
                    s.init = parse_var_decl(false);
                } else {
                    auto init = std::make_unique<Stmt>();
                    init->span = peek().span;
                    init->id = fresh_id();
                    ExprStmt es;
                    es.expr = parse_expr();
                    // extra comma-separated initializers folded left to right
                    while (peek().is_punct(",")) {
                        advance();
                        s.init_exprs.push_back(parse_expr());
                    }
                    init->node = std::move(es);
                    s.init = std::move(init);
                }
            }
            expect_punct(";");
            if (!peek().is_punct(";")) s.cond = parse_expr();
            expect_punct(";");
            if (!peek().is_punct(")")) {
                s.update.push_back(parse_expr());
                while (peek().is_punct(",")) {
                    advance();
                    s.update.push_back(parse_expr());
                }
            }
            expect_punct(")");
            s.body = parse_statement();
            stmt->node = std::move(s);
            return stmt;
        }
        if (t.is_keyword("return")) {
            advance();
            ReturnStmt s;
            if (!peek().is_punct(";")) s.value = parse_expr();
            expect_punct(";");
            stmt->node = std::move(s);
            return stmt;
        }
        if (t.is_keyword("break")) {
            advance();
            expect_punct(";");
            stmt->node = BreakStmt{};
            return stmt;
        }
        if (t.is_keyword("continue")) {
            advance();
            expect_punct(";");
            stmt->node = ContinueStmt{};
            return stmt;
        }
        if (at_decl_start()) {
            auto decl = parse_var_decl(true);
            decl->leading_comments = std::move(stmt->leading_comments);
            return decl;
        }

        ExprStmt s;
        s.expr = parse_expr();
        if (peek().is_op("->")) unsupported(peek(), "lambda expressions");
        expect_punct(";");
        stmt->node = std::move(s);
        return stmt;
    }

    StmtPtr parse_block_into(StmtPtr stmt) {
        auto comments = std::move(stmt->leading_comments);
        auto block = parse_block();
        block->leading_comments = std::move(comments);
        return block;
    }

    // A declaration starts with a type keyword not followed by '.' (which
    // would be e.g. String.valueOf), or with the Scanner class name.
    bool at_decl_start() {
        const Token& t = peek();
        if (t.kind == TokenKind::Keyword && kTypeKeywords.count(t.lexeme))
            return !peek(1).is_punct(".");
        if (t.kind == TokenKind::Identifier && t.lexeme == "Scanner")
            return peek(1).kind == TokenKind::Identifier;
        return false;
    }

    StmtPtr parse_var_decl(bool expect_semi) {
        auto stmt = std::make_unique<Stmt>();
        stmt->span = peek().span;
        stmt->id = fresh_id();
        VarDeclStmt decl;
        decl.type = parse_type();
        while (true) {
            VarDeclItem item;
            const Token& name_tok = peek();
            item.name = expect_identifier("variable name");
            item.name_span = name_tok.span;
            item.id = fresh_id();
            if (peek().is_punct("[")) unsupported(peek(), "C-style array declarators");
            if (peek().is_op("=")) {
                advance();
                if (peek().is_punct("{")) {
                    item.init = parse_array_initializer();
                } else {
                    item.init = parse_expr();
                }
            }
            decl.items.push_back(std::move(item));
            if (peek().is_punct(",")) {
                advance();
                continue;
            }
            break;
        }
        if (expect_semi) expect_punct(";");
        stmt->node = std::move(decl);
        return stmt;
    }

    ExprPtr parse_array_initializer() {
        auto e = std::make_unique<Expr>();
        e->span = peek().span;
        e->id = fresh_id();
        ArrayInitExpr init;
        expect_punct("{");
        if (!peek().is_punct("}")) {
            init.elements.push_back(parse_expr());
            while (peek().is_punct(",")) {
                advance();
                if (peek().is_punct("}")) break;  // trailing comma
                init.elements.push_back(parse_expr());
            }
        }
        expect_punct("}");
        e->node = std::move(init);
        return e;
    }

    // -- expressions -------------------------------------------------------

    ExprPtr make_expr(Expr::Node node, Span span) {
        auto e = std::make_unique<Expr>();
        e->node = std::move(node);
        e->span = span;
        e->id = fresh_id();
        return e;
    }

    ExprPtr parse_expr() { return parse_assignment(); }

    ExprPtr parse_assignment() {
        ExprPtr lhs = parse_ternary();
        const Token& t = peek();
        if (t.kind == TokenKind::Operator &&
            (t.lexeme == "=" || t.lexeme == "+=" || t.lexeme == "-=" || t.lexeme == "*=" ||
             t.lexeme == "/=" || t.lexeme == "%=" || t.lexeme == "&=" || t.lexeme == "|=" ||
             t.lexeme == "^=" || t.lexeme == "<<=" || t.lexeme == ">>=" || t.lexeme == ">>>=")) {
            Span span = lhs->span;
            std::string op = advance().lexeme;
            AssignExpr a;
            a.op = std::move(op);
            a.target = std::move(lhs);
            a.value = parse_assignment();
            return make_expr(std::move(a), span);
        }
        return lhs;
    }

    ExprPtr parse_ternary() {
        ExprPtr cond = parse_binary(1);
        if (peek().is_op("?")) {
            Span span = cond->span;
            advance();
            TernaryExpr t;
            t.cond = std::move(cond);
            t.then_branch = parse_expr();
            expect_op(":");
            t.else_branch = parse_ternary();
            return make_expr(std::move(t), span);
        }
        return cond;
    }

    ExprPtr parse_binary(int min_prec) {
        ExprPtr lhs = parse_unary();
        while (true) {
            const Token& t = peek();
            if (t.kind != TokenKind::Operator) break;
            int prec = binary_precedence(t.lexeme);
            if (prec < min_prec) break;
            Span span = lhs->span;
            std::string op = advance().lexeme;
            BinaryExpr b;
            b.op = std::move(op);
            b.lhs = std::move(lhs);
            b.rhs = parse_binary(prec + 1);
            lhs = make_expr(std::move(b), span);
        }
        return lhs;
    }

    ExprPtr parse_unary() {
        const Token& t = peek();
        if (t.is_op("+") || t.is_op("-") || t.is_op("!") || t.is_op("~")) {
            Span span = t.span;
            std::string op = advance().lexeme;
            UnaryExpr u;
            u.op = std::move(op);
            u.prefix = true;
            u.operand = parse_unary();
            return make_expr(std::move(u), span);
        }
        if (t.is_op("++") || t.is_op("--")) {
            Span span = t.span;
            std::string op = advance().lexeme;
            UnaryExpr u;
            u.op = std::move(op);
            u.prefix = true;
            u.operand = parse_unary();
            return make_expr(std::move(u), span);
        }
        // cast: '(' type ')' unary
        if (t.is_punct("(") && peek(1).kind == TokenKind::Keyword &&
            kTypeKeywords.count(peek(1).lexeme) &&
            (peek(2).is_punct(")") || peek(2).is_punct("["))) {
            Span span = t.span;
            advance();
            CastExpr c;
            c.type = parse_type();
            expect_punct(")");
            c.operand = parse_unary();
            return make_expr(std::move(c), span);
        }
        return parse_postfix();
    }

    ExprPtr parse_postfix() {
        ExprPtr e = parse_primary();
        while (true) {
            const Token& t = peek();
            if (t.is_punct("[")) {
                Span span = e->span;
                advance();
                IndexExpr idx;
                idx.array = std::move(e);
                idx.index = parse_expr();
                expect_punct("]");
                e = make_expr(std::move(idx), span);
                continue;
            }
            if (t.is_punct(".")) {
                Span span = e->span;
                advance();
                const Token& name_tok = peek();
                std::string member;
                if (name_tok.kind == TokenKind::Identifier ||
                    name_tok.kind == TokenKind::Keyword) {
                    member = advance().lexeme;
                } else {
                    fail(name_tok, "expected member name after '.'");
                }
                if (peek().is_punct("(")) {
                    auto args = parse_args();
                    // Class.method(...) forms become static calls.
                    if (auto* nr = e->as<NameRef>(); nr && kBuiltinClasses.count(nr->name)) {
                        StaticCallExpr sc;
                        sc.cls = nr->name;
                        sc.method = member;
                        sc.args = std::move(args);
                        e = make_expr(std::move(sc), span);
                    } else if (auto* nr2 = e->as<NameRef>(); nr2 && nr2->name == "String") {
                        StaticCallExpr sc;
                        sc.cls = "String";
                        sc.method = member;
                        sc.args = std::move(args);
                        e = make_expr(std::move(sc), span);
                    } else {
                        MethodCallExpr mc;
                        mc.receiver = std::move(e);
                        mc.method = member;
                        mc.args = std::move(args);
                        e = make_expr(std::move(mc), span);
                    }
                    continue;
                }
                FieldAccessExpr fa;
                fa.receiver = std::move(e);
                fa.field = member;
                e = make_expr(std::move(fa), span);
                continue;
            }
            if (t.is_op("++") || t.is_op("--")) {
                Span span = e->span;
                UnaryExpr u;
                u.op = advance().lexeme;
                u.prefix = false;
                u.operand = std::move(e);
                e = make_expr(std::move(u), span);
                continue;
            }
            break;
        }
        return e;
    }

    std::vector<ExprPtr> parse_args() {
        std::vector<ExprPtr> args;
        expect_punct("(");
        if (!peek().is_punct(")")) {
            args.push_back(parse_expr());
            while (peek().is_punct(",")) {
                advance();
                args.push_back(parse_expr());
            }
        }
        expect_punct(")");
        return args;
    }

    ExprPtr parse_primary() {
        const Token& t = peek();
        Span span = t.span;
        switch (t.kind) {
            case TokenKind::IntLiteral: {
                advance();
                IntLit lit;
                lit.text = t.lexeme;
                std::string digits;
                bool hex = t.lexeme.size() > 2 && (t.lexeme[1] == 'x' || t.lexeme[1] == 'X');
                for (char c : t.lexeme) {
                    if (c == '_') continue;
                    if (c == 'l' || c == 'L') {
                        lit.is_long = true;
                        continue;
                    }
                    digits += c;
                }
                lit.value = hex ? static_cast<int64_t>(std::stoull(digits.substr(2), nullptr, 16))
                                : static_cast<int64_t>(std::stoull(digits));
                return make_expr(std::move(lit), span);
            }
            case TokenKind::FloatLiteral: {
                advance();
                DoubleLit lit;
                lit.text = t.lexeme;
                std::string digits;
                for (char c : t.lexeme) {
                    if (c == '_' || c == 'd' || c == 'D' || c == 'f' || c == 'F') continue;
                    digits += c;
                }
                lit.value = std::stod(digits);
                return make_expr(std::move(lit), span);
            }
            case TokenKind::StringLiteral: {
                advance();
                StringLit lit;
                lit.text = t.lexeme;
                lit.value = decode_string(t);
                return make_expr(std::move(lit), span);
            }
            case TokenKind::CharLiteral: {
                advance();
                CharLit lit;
                lit.text = t.lexeme;
                std::string bytes = decode_escapes(t, t.lexeme.substr(1, t.lexeme.size() - 2));
                if (bytes.empty()) fail(t, "empty char literal");
                lit.value = static_cast<uint8_t>(bytes[0]);
                return make_expr(std::move(lit), span);
            }
            default:
                break;
        }
        if (t.is_keyword("true") || t.is_keyword("false")) {
            advance();
            return make_expr(BoolLit{t.lexeme == "true"}, span);
        }
        if (t.is_keyword("new")) {
            advance();
            const Token& ty = peek();
            if (ty.kind == TokenKind::Identifier && ty.lexeme == "Scanner") {
                advance();
                expect_punct("(");
                // only `new Scanner(System.in)` is recognized
                const Token& sys = peek();
                if (!(sys.kind == TokenKind::Identifier && sys.lexeme == "System"))
                    unsupported(sys, "Scanner source other than System.in");
                advance();
                expect_punct(".");
                const Token& in_tok = peek();
                if (!(in_tok.kind == TokenKind::Identifier && in_tok.lexeme == "in"))
                    unsupported(in_tok, "Scanner source other than System.in");
                advance();
                expect_punct(")");
                return make_expr(NewScannerExpr{}, span);
            }
            if (ty.kind == TokenKind::Keyword && kTypeKeywords.count(ty.lexeme)) {
                Type elem = make_type(base_type_of(advance().lexeme));
                if (!peek().is_punct("[")) unsupported(peek(), "object construction");
                advance();
                NewArrayExpr na;
                na.elem_type = elem;
                na.size = parse_expr();
                expect_punct("]");
                if (peek().is_punct("[")) unsupported(peek(), "multi-dimensional arrays");
                return make_expr(std::move(na), span);
            }
            unsupported(ty, "construction of class '" + ty.lexeme + "'");
        }
        if (t.is_punct("(")) {
            advance();
            if (peek().is_punct(")")) unsupported(peek(), "lambda expressions");
            ExprPtr inner = parse_expr();
            expect_punct(")");
            if (peek().is_op("->")) unsupported(peek(), "lambda expressions");
            return inner;
        }
        if (t.kind == TokenKind::Identifier || (t.kind == TokenKind::Keyword && t.lexeme == "String")) {
            advance();
            if (peek().is_punct("(") && t.kind == TokenKind::Identifier) {
                CallExpr call;
                call.callee = t.lexeme;
                call.args = parse_args();
                return make_expr(std::move(call), span);
            }
            return make_expr(NameRef{t.lexeme}, span);
        }
        if (t.kind == TokenKind::Keyword) {
            auto it = kUnsupportedKeywords.find(t.lexeme);
            if (it != kUnsupportedKeywords.end()) unsupported(t, it->second);
        }
        fail(t, "expected expression, found '" + t.lexeme + "'");
    }

    std::string decode_string(const Token& t) {
        return decode_escapes(t, t.lexeme.substr(1, t.lexeme.size() - 2));
    }

    std::string decode_escapes(const Token& t, std::string_view body) {
        std::string out;
        for (size_t i = 0; i < body.size(); ++i) {
            char c = body[i];
            if (c != '\\') {
                out += c;
                continue;
            }
            if (++i >= body.size()) fail(t, "dangling escape");
            switch (body[i]) {
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                case 'r': out += '\r'; break;
                case 'b': out += '\b'; break;
                case 'f': out += '\f'; break;
                case '0': out += '\0'; break;
                case '\\': out += '\\'; break;
                case '"': out += '"'; break;
                case '\'': out += '\''; break;
                case 'u': {
                    if (i + 4 >= body.size()) fail(t, "bad unicode escape");
                    unsigned code = std::stoul(std::string(body.substr(i + 1, 4)), nullptr, 16);
                    i += 4;
                    // UTF-8 encode; the interpreter's strings are byte strings
                    if (code < 0x80) {
                        out += static_cast<char>(code);
                    } else if (code < 0x800) {
                        out += static_cast<char>(0xC0 | (code >> 6));
                        out += static_cast<char>(0x80 | (code & 0x3F));
                    } else {
                        out += static_cast<char>(0xE0 | (code >> 12));
                        out += static_cast<char>(0x80 | ((code >> 6) & 0x3F));
                        out += static_cast<char>(0x80 | (code & 0x3F));
                    }
                    break;
                }
                default:
                    fail(t, std::string("unknown escape '\\") + body[i] + "'");
            }
        }
        return out;
    }
};

}  // namespace

int binary_precedence(std::string_view op) {
    if (op == "*" || op == "/" || op == "%") return 12;
    if (op == "+" || op == "-") return 11;
    if (op == "<<" || op == ">>" || op == ">>>") return 10;
    if (op == "<" || op == ">" || op == "<=" || op == ">=") return 9;
    if (op == "==" || op == "!=") return 8;
    if (op == "&") return 7;
    if (op == "^") return 6;
    if (op == "|") return 5;
    if (op == "&&") return 4;
    if (op == "||") return 3;
    return 0;
}

Ast parse(const TokenStream& tokens) { return Parser(tokens).run(); }

Ast parse_source(std::string_view source) { return parse(tokenize(source)); }

}  // namespace obfkit::lang
