#include "obfkit/lang/lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_set>

namespace obfkit::lang {

namespace {

const std::unordered_set<std::string_view> kKeywords = {
    "public", "class",  "static", "void",   "int",    "long",   "double",
    "boolean", "char",  "String", "if",     "else",   "while",  "for",
    "break",  "continue", "return", "new",  "true",   "false",  "import",
    // Reserved Java words outside the subset; lexed as keywords so the
    // parser can emit unsupported-construct diagnostics with good spans.
    "switch", "case",   "default", "do",    "try",    "catch",  "finally",
    "throw",  "throws", "private", "protected", "final", "abstract",
    "interface", "enum", "extends", "implements", "instanceof", "this",
    "super", "null", "byte", "short", "float", "synchronized", "package",
};

// Multi-char operators, longest first.
const std::array<std::string_view, 27> kOperators = {
    ">>>=", "<<=", ">>=", ">>>", "->", "++", "--", "&&", "||", "<<", ">>",
    "<=",  ">=",  "==",  "!=",  "+=", "-=", "*=", "/=", "%=", "&=", "|=",
    "^=",  "?",   ":",   "~",   "!",
};

bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}
bool is_ident_part(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    TokenStream run() {
        TokenStream out;
        std::string ws;
        while (true) {
            ws += consume_whitespace();
            if (pos_ >= src_.size()) {
                Token eof;
                eof.kind = TokenKind::EndOfFile;
                eof.leading_ws = std::move(ws);
                eof.span = {line_, col_, pos_, 0};
                out.tokens.push_back(std::move(eof));
                return out;
            }
            Token t = next_token();
            t.leading_ws = std::move(ws);
            ws.clear();
            out.tokens.push_back(std::move(t));
        }
    }

private:
    std::string_view src_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;

    char peek(size_t ahead = 0) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    void advance(size_t n = 1) {
        for (size_t i = 0; i < n && pos_ < src_.size(); ++i) {
            if (src_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
            ++pos_;
        }
    }

    std::string consume_whitespace() {
        size_t start = pos_;
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
        return std::string(src_.substr(start, pos_ - start));
    }

    [[noreturn]] void fail(Span span, const std::string& msg) {
        throw ParseError({span, msg, DiagCategory::Syntax},
                         msg + " at " + span.to_string());
    }

    Token make(TokenKind kind, size_t start, Span span) {
        Token t;
        t.kind = kind;
        t.lexeme = std::string(src_.substr(start, pos_ - start));
        span.length = pos_ - start;
        t.span = span;
        return t;
    }

    Token next_token() {
        Span span{line_, col_, pos_, 0};
        size_t start = pos_;
        char c = peek();

        if (c == '/' && peek(1) == '/') {
            while (pos_ < src_.size() && peek() != '\n') advance();
            return make(TokenKind::Comment, start, span);
        }
        if (c == '/' && peek(1) == '*') {
            advance(2);
            while (pos_ < src_.size() && !(peek() == '*' && peek(1) == '/')) advance();
            if (pos_ >= src_.size()) fail(span, "unterminated block comment");
            advance(2);
            return make(TokenKind::Comment, start, span);
        }
        if (is_ident_start(c)) {
            while (is_ident_part(peek())) advance();
            std::string_view word = src_.substr(start, pos_ - start);
            return make(kKeywords.count(word) ? TokenKind::Keyword : TokenKind::Identifier, start, span);
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return lex_number(start, span);
        if (c == '"') return lex_string(start, span);
        if (c == '\'') return lex_char(start, span);

        static const std::string_view punct = "(){}[];,.";
        if (punct.find(c) != std::string_view::npos) {
            // `.5` style floats are not lexed; the subset writes `0.5`.
            advance();
            return make(TokenKind::Punct, start, span);
        }

        for (std::string_view op : kOperators) {
            if (src_.substr(pos_, op.size()) == op) {
                advance(op.size());
                return make(TokenKind::Operator, start, span);
            }
        }
        static const std::string_view single_ops = "+-*/%<>=&|^";
        if (single_ops.find(c) != std::string_view::npos) {
            advance();
            return make(TokenKind::Operator, start, span);
        }

        fail(span, std::string("illegal character '") + c + "'");
    }

    Token lex_number(size_t start, Span span) {
        auto digits = [&](auto pred) {
            while (pred(peek()) || (peek() == '_' && pred(peek(1)))) advance();
        };
        bool is_float = false;
        if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
            advance(2);
            digits([](char ch) { return std::isxdigit(static_cast<unsigned char>(ch)) != 0; });
        } else {
            digits([](char ch) { return std::isdigit(static_cast<unsigned char>(ch)) != 0; });
            if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
                is_float = true;
                advance();
                digits([](char ch) { return std::isdigit(static_cast<unsigned char>(ch)) != 0; });
            }
            if (peek() == 'e' || peek() == 'E') {
                size_t save = pos_;
                int save_col = col_;
                advance();
                if (peek() == '+' || peek() == '-') advance();
                if (std::isdigit(static_cast<unsigned char>(peek()))) {
                    is_float = true;
                    digits([](char ch) { return std::isdigit(static_cast<unsigned char>(ch)) != 0; });
                } else {
                    pos_ = save;  // not an exponent; same line, so column restore suffices
                    col_ = save_col;
                }
            }
        }
        if (peek() == 'l' || peek() == 'L') {
            advance();
        } else if (peek() == 'd' || peek() == 'D' || peek() == 'f' || peek() == 'F') {
            is_float = true;
            advance();
        }
        return make(is_float ? TokenKind::FloatLiteral : TokenKind::IntLiteral, start, span);
    }

    Token lex_string(size_t start, Span span) {
        advance();  // opening quote
        while (true) {
            if (pos_ >= src_.size() || peek() == '\n') fail(span, "unterminated string literal");
            if (peek() == '\\') {
                advance(2);
                continue;
            }
            if (peek() == '"') {
                advance();
                return make(TokenKind::StringLiteral, start, span);
            }
            advance();
        }
    }

    Token lex_char(size_t start, Span span) {
        advance();  // opening quote
        if (pos_ >= src_.size() || peek() == '\n') fail(span, "unterminated char literal");
        if (peek() == '\\') {
            advance(2);
            if (peek() == 'u') {  // \uXXXX was split oddly; consume hex digits
                while (std::isxdigit(static_cast<unsigned char>(peek()))) advance();
            }
        } else {
            advance();
        }
        if (peek() != '\'') fail(span, "unterminated char literal");
        advance();
        return make(TokenKind::CharLiteral, start, span);
    }
};

}  // namespace

TokenStream tokenize(std::string_view source) { return Lexer(source).run(); }

bool is_keyword(std::string_view word) { return kKeywords.count(word) > 0; }

const std::vector<std::string>& keyword_list() {
    static const std::vector<std::string> list = [] {
        std::vector<std::string> v(kKeywords.begin(), kKeywords.end());
        std::sort(v.begin(), v.end());
        return v;
    }();
    return list;
}

const char* token_kind_name(TokenKind k) {
    switch (k) {
        case TokenKind::Keyword: return "keyword";
        case TokenKind::Identifier: return "identifier";
        case TokenKind::IntLiteral: return "int-literal";
        case TokenKind::FloatLiteral: return "float-literal";
        case TokenKind::StringLiteral: return "string-literal";
        case TokenKind::CharLiteral: return "char-literal";
        case TokenKind::Operator: return "operator";
        case TokenKind::Punct: return "punctuation";
        case TokenKind::Comment: return "comment";
        case TokenKind::EndOfFile: return "eof";
    }
    return "?";
}

const char* diag_category_name(DiagCategory c) {
    switch (c) {
        case DiagCategory::Syntax: return "syntax";
        case DiagCategory::Undeclared: return "undeclared";
        case DiagCategory::Type: return "type";
        case DiagCategory::UnsupportedConstruct: return "unsupported-construct";
    }
    return "?";
}

std::string Diagnostic::to_string() const {
    return std::string(diag_category_name(category)) + " at " + span.to_string() + ": " + message;
}

std::string CheckReport::summary() const {
    if (ok()) return "ok";
    std::string out;
    for (const auto& d : diagnostics) {
        if (!out.empty()) out += "\n";
        out += d.to_string();
    }
    return out;
}

}  // namespace obfkit::lang
