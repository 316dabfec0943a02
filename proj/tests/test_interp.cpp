#include <string>

#include "doctest.h"
#include "obfkit/interp/evaluator.hpp"
#include "obfkit/interp/interpreter.hpp"
#include "obfkit/interp/value.hpp"
#include "obfkit/lang/checker.hpp"

using namespace obfkit;
using namespace obfkit::interp;

namespace {

lang::Ast checked(const std::string& src) {
    auto got = lang::analyze(src);
    REQUIRE_MESSAGE(got.ok(), got.report.summary());
    return std::move(*got.ast);
}

RunResult run_src(const std::string& body, const std::string& stdin_text = "",
                  const RunLimits& limits = {}) {
    std::string src = "import java.util.Scanner;\npublic class M {\n"
                      "    public static void main(String[] args) {\n" +
                      body + "\n    }\n}\n";
    lang::Ast ast = checked(src);
    return run_program(ast, stdin_text, limits);
}

}  // namespace

TEST_CASE("run: println(1+2) completes with stdout 3") {
    auto r = run_src("System.out.println(1 + 2);");
    CHECK(r.status == RunStatus::Completed);
    CHECK(r.stdout_text == "3\n");
}

TEST_CASE("run: out-of-bounds index is a runtime error with index message") {
    auto r = run_src("int[] a = new int[1]; System.out.println(a[5]);");
    CHECK(r.status == RunStatus::RuntimeError);
    CHECK(r.error_message.find("Index 5 out of bounds for length 1") != std::string::npos);
}

TEST_CASE("run: infinite loop hits the limits as a timeout") {
    RunLimits limits;
    limits.wall_clock_ms = 1000;
    limits.step_budget = 200000;
    auto r = run_src("while (true) { }", "", limits);
    CHECK(r.status == RunStatus::Timeout);
}

TEST_CASE("run: integer semantics are Java's") {
    auto r = run_src(
        "int big = 2147483647; big = big + 1; System.out.println(big);"
        "System.out.println(7 / 2); System.out.println(-7 / 2);"
        "System.out.println(-7 % 3); System.out.println(7 % -3);"
        "System.out.println(1 << 35);"
        "System.out.println(-8 >> 1); System.out.println(-8 >>> 28);"
        "long l = 1L << 40; System.out.println(l);");
    REQUIRE(r.status == RunStatus::Completed);
    CHECK(r.stdout_text == "-2147483648\n3\n-3\n-1\n1\n8\n-4\n15\n1099511627776\n");
}

TEST_CASE("run: division by zero") {
    auto r = run_src("int x = 0; System.out.println(1 / x);");
    CHECK(r.status == RunStatus::RuntimeError);
    CHECK(r.error_message == "java.lang.ArithmeticException: / by zero");
    auto rd = run_src("double x = 0.0; System.out.println(1.0 / x);");
    CHECK(rd.status == RunStatus::Completed);
    CHECK(rd.stdout_text == "Infinity\n");
}

TEST_CASE("run: double printing follows Java Double.toString") {
    auto r = run_src(
        "System.out.println(1.0); System.out.println(2.5); System.out.println(0.001);"
        "System.out.println(0.0001); System.out.println(10000000.0);"
        "System.out.println(1234567.0); System.out.println(-0.5);"
        "System.out.println(1.0 / 3.0);");
    REQUIRE(r.status == RunStatus::Completed);
    CHECK(r.stdout_text ==
          "1.0\n2.5\n0.001\n1.0E-4\n1.0E7\n1234567.0\n-0.5\n0.3333333333333333\n");
}

TEST_CASE("run: string operations on byte strings") {
    auto r = run_src(
        "String s = \"Hello, World\";"
        "System.out.println(s.length());"
        "System.out.println(s.charAt(1));"
        "System.out.println(s.substring(7));"
        "System.out.println(s.substring(0, 5));"
        "System.out.println(s.indexOf(\"World\"));"
        "System.out.println(s.toUpperCase());"
        "System.out.println(s.replace('l', 'L'));"
        "System.out.println(\"  pad  \".trim());"
        "System.out.println(\"a,b,,c\".split(\",\").length);"
        "System.out.println(\"x\" + 1 + 'y' + 2.5 + true);");
    REQUIRE(r.status == RunStatus::Completed);
    CHECK(r.stdout_text ==
          "12\ne\nWorld\nHello\n7\nHELLO, WORLD\nHeLLo, WorLd\npad\n4\nx1y2.5true\n");
}

TEST_CASE("run: char arithmetic and casts") {
    auto r = run_src(
        "char c = 'A'; int i = c + 1; char d = (char) i;"
        "System.out.println(c); System.out.println(i); System.out.println(d);"
        "c++; System.out.println(c);"
        "int trunc = (int) 3.99; System.out.println(trunc);"
        "int neg = (int) -3.99; System.out.println(neg);");
    REQUIRE(r.status == RunStatus::Completed);
    CHECK(r.stdout_text == "A\n66\nB\nB\n3\n-3\n");
}

TEST_CASE("run: scanner reads tokens, lines, and mixed types") {
    auto r = run_src(
        "Scanner sc = new Scanner(System.in);"
        "int n = sc.nextInt(); double d = sc.nextDouble(); String w = sc.next();"
        "String rest = sc.nextLine(); String line = sc.nextLine();"
        "System.out.println(n + 1); System.out.println(d * 2.0);"
        "System.out.println(w); System.out.println(\"[\" + rest + \"]\");"
        "System.out.println(line);",
        "41 1.5 word tail\nnext line\n");
    REQUIRE(r.status == RunStatus::Completed);
    CHECK(r.stdout_text == "42\n3.0\nword\n[ tail]\nnext line\n");
}

TEST_CASE("run: scanner hasNext loop") {
    auto r = run_src(
        "Scanner sc = new Scanner(System.in); long sum = 0;"
        "while (sc.hasNextInt()) { sum += sc.nextInt(); }"
        "System.out.println(sum);",
        "1 2 3 4 5");
    REQUIRE(r.status == RunStatus::Completed);
    CHECK(r.stdout_text == "15\n");
}

TEST_CASE("run: scanner input mismatch and exhaustion") {
    auto r = run_src("Scanner sc = new Scanner(System.in); sc.nextInt();", "abc");
    CHECK(r.status == RunStatus::RuntimeError);
    CHECK(r.error_message.find("InputMismatchException") != std::string::npos);
    auto r2 = run_src("Scanner sc = new Scanner(System.in); sc.nextInt();", "");
    CHECK(r2.status == RunStatus::RuntimeError);
    CHECK(r2.error_message.find("NoSuchElementException") != std::string::npos);
}

TEST_CASE("run: Integer.parseInt failures carry Java-style messages") {
    auto r = run_src("System.out.println(Integer.parseInt(\"12x\"));");
    CHECK(r.status == RunStatus::RuntimeError);
    CHECK(r.error_message ==
          "java.lang.NumberFormatException: For input string: \"12x\"");
}

TEST_CASE("run: user methods, recursion, and widening returns") {
    std::string src =
        "public class M {\n"
        "    public static void main(String[] args) {\n"
        "        System.out.println(fib(10));\n"
        "        System.out.println(half(7));\n"
        "    }\n"
        "    static int fib(int n) { if (n < 2) { return n; } return fib(n-1) + fib(n-2); }\n"
        "    static double half(int x) { return x / 2; }\n"
        "}\n";
    auto ast = checked(src);
    auto r = run_program(ast, "");
    REQUIRE(r.status == RunStatus::Completed);
    CHECK(r.stdout_text == "55\n3.0\n");
}

TEST_CASE("run: unbounded recursion raises StackOverflowError") {
    std::string src =
        "public class M {\n"
        "    public static void main(String[] args) { System.out.println(down(0)); }\n"
        "    static int down(int n) { return down(n + 1); }\n"
        "}\n";
    auto r = run_program(checked(src), "");
    CHECK(r.status == RunStatus::RuntimeError);
    CHECK(r.error_message == "java.lang.StackOverflowError");
}

TEST_CASE("run: output budget enforced") {
    RunLimits limits;
    limits.output_budget = 64;
    auto r = run_src("for (int i = 0; i < 1000; i++) { System.out.println(i); }", "", limits);
    CHECK(r.status == RunStatus::OutputOverflow);
    CHECK(r.stdout_text.size() <= 64);
}

TEST_CASE("run: arrays are references and Math builtins work") {
    auto r = run_src(
        "int[] a = {3, 1, 2}; int[] b = a; b[0] = 9;"
        "System.out.println(a[0]);"
        "System.out.println(Math.max(2, 3) + Math.min(1L, 5) + Math.abs(-4));"
        "System.out.println(Math.sqrt(16.0));"
        "System.out.println(Math.pow(2, 10));"
        "System.out.println(Math.round(2.5) + Math.round(-2.5));");
    REQUIRE(r.status == RunStatus::Completed);
    CHECK(r.stdout_text == "9\n8\n4.0\n1024.0\n1\n");
}

TEST_CASE("run: determinism") {
    std::string body =
        "Scanner sc = new Scanner(System.in); int n = sc.nextInt();"
        "int h = 17; for (int i = 0; i < n; i++) { h = h * 31 + i; }"
        "System.out.println(h);";
    auto a = run_src(body, "1000");
    auto b = run_src(body, "1000");
    CHECK(a.status == b.status);
    CHECK(a.stdout_text == b.stdout_text);
    CHECK(a.steps_used == b.steps_used);
}

TEST_CASE("normalize_output: trailing whitespace per line and trailing newline") {
    CHECK(normalize_output("a \nb\t\n") == "a\nb");
    CHECK(normalize_output("a\r\nb\r\n") == "a\nb");
    CHECK(outputs_match("1 \n2\n", "1\n2"));
    CHECK_FALSE(outputs_match("1\n2\n", "1\n 2\n"));
}

TEST_CASE("evaluate_semantics: unparsable text is a compile error") {
    TestSuite suite{"t", {{"", "1"}}};
    auto out = evaluate_semantics(std::string_view("public class {"), suite);
    CHECK(out.verdict == Verdict::CompileError);
    CHECK(out.pass_rate == 0.0);
    CHECK_FALSE(out.feedback.empty());
}

TEST_CASE("evaluate_semantics: check failure is a compile error") {
    TestSuite suite{"t", {{"", "1"}}};
    auto out = evaluate_semantics(
        std::string_view(
            "public class M { public static void main(String[] args) { x = 1; } }"),
        suite);
    CHECK(out.verdict == Verdict::CompileError);
}

TEST_CASE("evaluate_semantics: constant wrong answer on all cases") {
    TestSuite suite{"t", {{"1\n", "2"}, {"5\n", "6"}}};
    auto out = evaluate_semantics(
        std::string_view("public class M { public static void main(String[] args) {"
                         " System.out.println(0); } }"),
        suite);
    CHECK(out.verdict == Verdict::WrongOutput);
    CHECK(out.pass_rate == 0.0);
    CHECK(out.feedback.find("wrong output on test case 1") != std::string::npos);
}

TEST_CASE("evaluate_semantics: pass with pass_rate 1.0") {
    TestSuite suite{"t", {{"2 3\n", "5\n"}, {"10 20\n", "30\n"}}};
    auto out = evaluate_semantics(
        std::string_view("import java.util.Scanner;\n"
                         "public class M { public static void main(String[] args) {"
                         " Scanner sc = new Scanner(System.in);"
                         " System.out.println(sc.nextInt() + sc.nextInt()); } }"),
        suite);
    CHECK(out.verdict == Verdict::Pass);
    CHECK(out.pass_rate == 1.0);
    CHECK(out.feedback.empty());
    REQUIRE(out.per_case.size() == 2);
    CHECK(out.per_case[0].matched);
}

TEST_CASE("evaluate_semantics: runtime beats wrong-output in the taxonomy") {
    // case 1 produces a wrong answer; case 2 divides by zero
    TestSuite suite{"t", {{"5\n", "999"}, {"0\n", "0"}}};
    auto out = evaluate_semantics(
        std::string_view("import java.util.Scanner;\n"
                         "public class M { public static void main(String[] args) {"
                         " Scanner sc = new Scanner(System.in); int n = sc.nextInt();"
                         " System.out.println(10 / n); } }"),
        suite);
    CHECK(out.verdict == Verdict::RuntimeError);
    CHECK(out.feedback.find("runtime error on test case 2") != std::string::npos);
    CHECK(out.per_case[1].run.status == RunStatus::RuntimeError);
}

TEST_CASE("run: ternary, compound assignment, nested loops with break/continue") {
    auto r = run_src(
        "int acc = 0;"
        "for (int i = 0; i < 10; i++) {"
        "  if (i == 3) continue;"
        "  if (i == 7) break;"
        "  acc += i;"
        "}"
        "acc *= 2; acc -= 1; acc %= 100; acc <<= 1; acc >>= 1;"
        "String verdictText = acc > 30 ? \"hi\" : \"lo\";"
        "System.out.println(acc + \" \" + verdictText);");
    REQUIRE(r.status == RunStatus::Completed);
    CHECK(r.stdout_text == "35 hi\n");
}

TEST_CASE("run: string equality helpers and char classification") {
    auto r = run_src(
        "String a = \"abc\";"
        "System.out.println(a.equals(\"abc\"));"
        "System.out.println(a.equalsIgnoreCase(\"ABC\"));"
        "System.out.println(a.compareTo(\"abd\"));"
        "System.out.println(Character.isDigit('7'));"
        "System.out.println(Character.isLetter('7'));"
        "System.out.println(Character.toUpperCase('q'));"
        "System.out.println(Character.getNumericValue('f'));");
    REQUIRE(r.status == RunStatus::Completed);
    CHECK(r.stdout_text == "true\ntrue\n-1\ntrue\nfalse\nQ\n15\n");
}
