#include <string>

#include "doctest.h"
#include "obfkit/lang/checker.hpp"
#include "obfkit/lang/identifier_table.hpp"
#include "obfkit/lang/lexer.hpp"
#include "obfkit/lang/parser.hpp"
#include "obfkit/lang/printer.hpp"

using namespace obfkit::lang;

namespace {

std::string roundtrip(const std::string& src) { return tokenize(src).detokenize(); }

std::string print_of(const std::string& src) { return print_source(parse_source(src)); }

const char* kEmptyMain =
    "public class M { public static void main(String[] args) { } }";

const char* kScannerProgram = R"(import java.util.Scanner;

public class Main {
    public static void main(String[] args) {
        Scanner sc = new Scanner(System.in);
        int n = sc.nextInt();
        int sum = 0;
        for (int i = 1; i <= n; i++) {
            sum += i;
        }
        System.out.println(sum);
    }
}
)";

}  // namespace

TEST_CASE("tokenize: empty input yields only EOF") {
    auto ts = tokenize("");
    CHECK(ts.significant().empty());
    CHECK(ts.detokenize() == "");
}

TEST_CASE("tokenize: int a = 1; has 5 significant tokens") {
    auto ts = tokenize("int a = 1;");
    auto sig = ts.significant();
    REQUIRE(sig.size() == 5);
    CHECK(sig[0]->kind == TokenKind::Keyword);
    CHECK(sig[1]->kind == TokenKind::Identifier);
    CHECK(sig[2]->kind == TokenKind::Operator);
    CHECK(sig[3]->kind == TokenKind::IntLiteral);
    CHECK(sig[4]->kind == TokenKind::Punct);
}

TEST_CASE("tokenize: detokenization is byte-exact") {
    CHECK(roundtrip("int a = 1;") == "int a = 1;");
    std::string gnarly = "  // comment\nint  a=1 ;\t/* block\n comment */ a++;\r\n";
    CHECK(roundtrip(gnarly) == gnarly);
    std::string strings = "String s = \"a\\\"b\\n\\u0041\"; char c = '\\'';";
    CHECK(roundtrip(strings) == strings);
    CHECK(roundtrip(kScannerProgram) == kScannerProgram);
}

TEST_CASE("tokenize: spans are monotonically increasing and non-overlapping") {
    auto ts = tokenize(kScannerProgram);
    size_t prev_end = 0;
    for (const auto& t : ts.tokens) {
        if (t.kind == TokenKind::EndOfFile) break;
        CHECK(t.span.offset >= prev_end);
        prev_end = t.span.offset + t.span.length;
    }
}

TEST_CASE("tokenize: unterminated string literal is a lexical error with span") {
    try {
        tokenize("String s = \"x;");
        FAIL("expected a lexical error");
    } catch (const ParseError& e) {
        CHECK(e.diagnostic().category == DiagCategory::Syntax);
        CHECK(e.diagnostic().span.line == 1);
        CHECK(e.diagnostic().message.find("unterminated") != std::string::npos);
    }
}

TEST_CASE("parse: minimal empty main") {
    Ast ast = parse_source(kEmptyMain);
    REQUIRE(ast.unit.methods.size() == 1);
    CHECK(ast.unit.class_name == "M");
    CHECK(ast.unit.methods[0].name == "main");
    CHECK(ast.unit.methods[0].body->as<BlockStmt>()->statements.empty());
}

TEST_CASE("print: empty main canonical 3-line form") {
    std::string out = print_of(kEmptyMain);
    CHECK(out ==
          "public class M {\n"
          "    public static void main(String[] args) {}\n"
          "}\n");
}

TEST_CASE("parse: lambdas are an unsupported construct") {
    std::string src =
        "public class M { public static void main(String[] args) {"
        " f(() -> {}); } }";
    try {
        parse_source(src);
        FAIL("expected unsupported-construct");
    } catch (const ParseError& e) {
        CHECK(e.diagnostic().category == DiagCategory::UnsupportedConstruct);
        CHECK(e.diagnostic().message.find("lambda") != std::string::npos);
    }
}

TEST_CASE("parse: out-of-subset statements carry a distinct category") {
    std::string src =
        "public class M { public static void main(String[] args) {"
        " switch (1) { } } }";
    try {
        parse_source(src);
        FAIL("expected unsupported-construct");
    } catch (const ParseError& e) {
        CHECK(e.diagnostic().category == DiagCategory::UnsupportedConstruct);
    }
}

TEST_CASE("parse+print: Scanner idiom program survives a round trip") {
    Ast ast = parse_source(kScannerProgram);
    std::string once = print_source(ast);
    std::string twice = print_source(parse_source(once));
    CHECK(once == twice);
}

TEST_CASE("print: fixpoint on representative programs") {
    const char* samples[] = {
        kScannerProgram,
        "public class A { public static void main(String[] args) {"
        " int[] xs = {1, 2, 3}; int s = 0;"
        " for (int i = 0; i < xs.length; i++) { s += xs[i]; }"
        " if (s > 3) { System.out.println(\"big\"); } else System.out.println(s);"
        " } }",
        "public class B { public static void main(String[] args) {"
        " double d = 1.5e3; long big = 10000000000L;"
        " boolean ok = d < big && !(d == 0.0);"
        " System.out.println(ok ? \"y\" : \"n\"); } "
        " static int helper(int a, int b) { return a % b == 0 ? a / b : -a * (b + 1); } }",
        "public class C { public static void main(String[] args) {"
        " int x = 0; // trailing note\n"
        " /* block */ x = x << 2 | 3 & 1 ^ ~x >>> 1;"
        " while (x > 0) { x--; if (x == 2) continue; }"
        " } }",
    };
    for (const char* s : samples) {
        std::string once = print_of(s);
        CHECK(print_of(once) == once);
    }
}

TEST_CASE("print: precedence is preserved without original parentheses") {
    std::string src =
        "public class P { public static void main(String[] args) {"
        " int a = 2; int b = 3; int c = 4;"
        " System.out.println((a + b) * c);"
        " System.out.println(a + b * c);"
        " System.out.println(-(a + b));"
        " System.out.println(a - (b - c));"
        " System.out.println((a - b) - c);"
        " } }";
    std::string out = print_of(src);
    CHECK(out.find("(a + b) * c") != std::string::npos);
    CHECK(out.find("println(a + b * c)") != std::string::npos);
    CHECK(out.find("-(a + b)") != std::string::npos);
    CHECK(out.find("a - (b - c)") != std::string::npos);
    CHECK(out.find("println(a - b - c)") != std::string::npos);
    std::string once = print_of(src);
    CHECK(print_of(once) == once);
}

TEST_CASE("check: undeclared identifier") {
    auto got = analyze(
        "public class M { public static void main(String[] args) { x = 1; } }");
    REQUIRE(got.ast.has_value());
    REQUIRE_FALSE(got.report.ok());
    CHECK(got.report.diagnostics[0].category == DiagCategory::Undeclared);
}

TEST_CASE("check: well-formed fixture is ok") {
    auto got = analyze(kScannerProgram);
    CHECK(got.ok());
}

TEST_CASE("check: redeclaration in one block") {
    auto got = analyze(
        "public class M { public static void main(String[] args) {"
        " int x; boolean x; } }");
    REQUIRE(got.ast.has_value());
    REQUIRE_FALSE(got.report.ok());
    CHECK(got.report.diagnostics[0].message.find("already declared") != std::string::npos);
}

TEST_CASE("check: shadowing in a nested block is allowed") {
    auto got = analyze(
        "public class M { public static void main(String[] args) {"
        " int x = 1; { int x = 2; System.out.println(x); }"
        " System.out.println(x); } }");
    CHECK(got.ok());
}

TEST_CASE("check: type mismatches") {
    auto got = analyze(
        "public class M { public static void main(String[] args) {"
        " int x = \"s\"; } }");
    CHECK_FALSE(got.report.ok());
    auto got2 = analyze(
        "public class M { public static void main(String[] args) {"
        " double d = 1.0; int i = d; } }");
    CHECK_FALSE(got2.report.ok());
    auto got3 = analyze(
        "public class M { public static void main(String[] args) {"
        " double d = 1.0; int i = (int) d; long l = i; double e = l; } }");
    CHECK(got3.ok());
}

TEST_CASE("check: string equality via == is rejected") {
    auto got = analyze(
        "public class M { public static void main(String[] args) {"
        " String a = \"x\"; if (a == \"x\") { System.out.println(1); } } }");
    REQUIRE_FALSE(got.report.ok());
    CHECK(got.report.diagnostics[0].category == DiagCategory::UnsupportedConstruct);
}

TEST_CASE("check: builtin arity mismatch") {
    auto got = analyze(
        "public class M { public static void main(String[] args) {"
        " String s = \"abc\"; System.out.println(s.charAt()); } }");
    CHECK_FALSE(got.report.ok());
}

TEST_CASE("identifier table: locals and params with use sites") {
    auto got = analyze(
        "public class M { public static void main(String[] args) {"
        " int count = 0; int sum = 0;"
        " sum = sum + count; count = count + 1;"
        " System.out.println(helper(sum)); }"
        " static int helper(int v) { return v * 2; } }");
    REQUIRE(got.ok());
    auto table = collect_identifiers(*got.ast);
    // helper (method), count, sum, v — main and its fixed args param are excluded
    REQUIRE(table.size() == 4);
    CHECK(table[0].name == "helper");
    CHECK(table[0].kind == IdentKind::Method);
    CHECK(table[0].use_count() == 1);
    int count_uses = 0, sum_uses = 0;
    for (const auto& e : table) {
        if (e.name == "count") count_uses = e.use_count();
        if (e.name == "sum") sum_uses = e.use_count();
    }
    CHECK(count_uses == 3);
    CHECK(sum_uses == 3);
}

TEST_CASE("identifier table: no locals or params yields an empty table") {
    auto got = analyze("public class M { public static void main(String[] args) { } }");
    REQUIRE(got.ok());
    // main and its judge-required parameter are both excluded
    auto table = collect_identifiers(*got.ast);
    CHECK(table.empty());
}

TEST_CASE("identifier table: shadowed variable yields two distinct entries") {
    auto got = analyze(
        "public class M { public static void main(String[] args) {"
        " int x = 1; { int x = 2; System.out.println(x); }"
        " System.out.println(x); } }");
    REQUIRE(got.ok());
    auto table = collect_identifiers(*got.ast);
    int xs = 0;
    std::vector<int> uses;
    for (const auto& e : table)
        if (e.name == "x") {
            ++xs;
            uses.push_back(e.use_count());
        }
    CHECK(xs == 2);
    REQUIRE(uses.size() == 2);
    CHECK(uses[0] == 1);  // outer x: printed once after the block
    CHECK(uses[1] == 1);  // inner x: printed once inside
}

TEST_CASE("check: break/continue outside loop") {
    auto got = analyze(
        "public class M { public static void main(String[] args) { break; } }");
    CHECK_FALSE(got.report.ok());
}

TEST_CASE("check: main signature is validated") {
    auto got = analyze("public class M { public static int main(String[] args) { return 1; } }");
    CHECK_FALSE(got.report.ok());
    auto got2 = analyze("public class M { static void notMain(String[] args) { } }");
    CHECK_FALSE(got2.report.ok());
}

TEST_CASE("parse errors report expected token and span") {
    try {
        parse_source("public class M { public static void main(String[] args) { int x = ; } }");
        FAIL("expected syntax error");
    } catch (const ParseError& e) {
        CHECK(e.diagnostic().category == DiagCategory::Syntax);
        CHECK(e.diagnostic().span.line == 1);
    }
}
