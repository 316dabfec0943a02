#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "obfkit/interp/interpreter.hpp"
#include "obfkit/lang/ast.hpp"

namespace obfkit::interp {

struct TestCase {
    std::string stdin_text;
    std::string expected_stdout;
};

struct TestSuite {
    std::string id;
    std::vector<TestCase> cases;
};

// Three-way failure taxonomy plus pass; mutually exclusive with priority
// compile-error > runtime-error > wrong-output. Timeouts and output
// overflows fall in the runtime-error bucket (detail kept in per_case).
enum class Verdict { Pass, CompileError, RuntimeError, WrongOutput };

std::string_view verdict_name(Verdict verdict);

struct CaseOutcome {
    RunResult run;
    bool matched = false;
};

struct EvalOutcome {
    Verdict verdict = Verdict::Pass;
    double pass_rate = 0.0;
    std::vector<CaseOutcome> per_case;
    // Human-readable failure summary; the auto-correction loop feeds this
    // back to the model. Empty when the verdict is pass.
    std::string feedback;
};

// Trailing whitespace per line and trailing newlines are normalized away;
// everything else is exact.
std::string normalize_output(std::string_view text);
bool outputs_match(std::string_view actual, std::string_view expected);

EvalOutcome evaluate_semantics(const lang::Ast& ast, const TestSuite& suite,
                               const RunLimits& limits = {});
// Text input is parsed and checked internally; failures become compile-error.
EvalOutcome evaluate_semantics(std::string_view source, const TestSuite& suite,
                               const RunLimits& limits = {});

}  // namespace obfkit::interp
