#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace obfkit::lang {

enum class TokenKind {
    Keyword,
    Identifier,
    IntLiteral,
    FloatLiteral,
    StringLiteral,
    CharLiteral,
    Operator,
    Punct,
    Comment,
    EndOfFile,
};

struct Span {
    int line = 1;       // 1-based
    int column = 1;     // 1-based, in bytes
    size_t offset = 0;  // byte offset into the source
    size_t length = 0;

    std::string to_string() const {
        return std::to_string(line) + ":" + std::to_string(column);
    }
};

struct Token {
    TokenKind kind = TokenKind::EndOfFile;
    std::string lexeme;      // exact source bytes of the token
    std::string leading_ws;  // whitespace between the previous token and this one
    Span span;

    bool is(TokenKind k) const { return kind == k; }
    bool is_keyword(const char* kw) const { return kind == TokenKind::Keyword && lexeme == kw; }
    bool is_op(const char* op) const { return kind == TokenKind::Operator && lexeme == op; }
    bool is_punct(const char* p) const { return kind == TokenKind::Punct && lexeme == p; }
};

// All tokens in source order, comments included, terminated by one
// EndOfFile token whose leading_ws holds the trailing whitespace.
struct TokenStream {
    std::vector<Token> tokens;

    // Reassembles the original source byte-for-byte.
    std::string detokenize() const {
        std::string out;
        for (const auto& t : tokens) {
            out += t.leading_ws;
            out += t.lexeme;
        }
        return out;
    }

    // Tokens that carry syntax (everything except comments and EOF).
    std::vector<const Token*> significant() const {
        std::vector<const Token*> out;
        for (const auto& t : tokens)
            if (t.kind != TokenKind::Comment && t.kind != TokenKind::EndOfFile) out.push_back(&t);
        return out;
    }
};

const char* token_kind_name(TokenKind k);

}  // namespace obfkit::lang
