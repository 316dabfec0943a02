#include "obfkit/interp/evaluator.hpp"

#include <algorithm>
#include <sstream>

#include "obfkit/lang/checker.hpp"

namespace obfkit::interp {

std::string_view verdict_name(Verdict verdict) {
    switch (verdict) {
        case Verdict::Pass: return "pass";
        case Verdict::CompileError: return "compile-error";
        case Verdict::RuntimeError: return "runtime-error";
        case Verdict::WrongOutput: return "wrong-output";
    }
    return "unknown";
}

std::string normalize_output(std::string_view text) {
    std::string out;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t nl = text.find('\n', pos);
        std::string_view line =
            nl == std::string_view::npos ? text.substr(pos) : text.substr(pos, nl - pos);
        size_t end = line.size();
        while (end > 0 && (line[end - 1] == ' ' || line[end - 1] == '\t' || line[end - 1] == '\r'))
            --end;
        out.append(line.substr(0, end));
        out += '\n';
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    while (!out.empty() && out.back() == '\n') out.pop_back();
    return out;
}

bool outputs_match(std::string_view actual, std::string_view expected) {
    return normalize_output(actual) == normalize_output(expected);
}

namespace {

std::string clip(std::string_view text, size_t max_len = 200) {
    if (text.size() <= max_len) return std::string(text);
    return std::string(text.substr(0, max_len)) + "...";
}

EvalOutcome run_suite(const lang::Ast& ast, const TestSuite& suite, const RunLimits& limits) {
    EvalOutcome out;
    std::string first_runtime_feedback;
    std::string first_wrong_feedback;
    int matched = 0;

    for (size_t i = 0; i < suite.cases.size(); ++i) {
        const TestCase& tc = suite.cases[i];
        CaseOutcome co;
        co.run = run_program(ast, tc.stdin_text, limits);
        if (co.run.status == RunStatus::Completed) {
            co.matched = outputs_match(co.run.stdout_text, tc.expected_stdout);
            if (co.matched) {
                ++matched;
            } else if (first_wrong_feedback.empty()) {
                std::ostringstream os;
                os << "wrong output on test case " << (i + 1) << ": expected \""
                   << clip(normalize_output(tc.expected_stdout)) << "\" but got \""
                   << clip(normalize_output(co.run.stdout_text)) << "\"";
                first_wrong_feedback = os.str();
            }
        } else if (first_runtime_feedback.empty()) {
            std::ostringstream os;
            if (co.run.status == RunStatus::RuntimeError) {
                os << "runtime error on test case " << (i + 1) << ": " << co.run.error_message;
            } else if (co.run.status == RunStatus::Timeout) {
                os << "time limit exceeded on test case " << (i + 1);
            } else {
                os << "output limit exceeded on test case " << (i + 1);
            }
            first_runtime_feedback = os.str();
        }
        out.per_case.push_back(std::move(co));
    }

    out.pass_rate =
        suite.cases.empty() ? 0.0 : static_cast<double>(matched) / suite.cases.size();
    if (!first_runtime_feedback.empty()) {
        out.verdict = Verdict::RuntimeError;
        out.feedback = first_runtime_feedback;
    } else if (!first_wrong_feedback.empty()) {
        out.verdict = Verdict::WrongOutput;
        out.feedback = first_wrong_feedback;
    } else {
        out.verdict = Verdict::Pass;
    }
    return out;
}

}  // namespace

EvalOutcome evaluate_semantics(const lang::Ast& ast, const TestSuite& suite,
                               const RunLimits& limits) {
    return run_suite(ast, suite, limits);
}

EvalOutcome evaluate_semantics(std::string_view source, const TestSuite& suite,
                               const RunLimits& limits) {
    lang::CheckedProgram checked = lang::analyze(source);
    if (!checked.ok()) {
        EvalOutcome out;
        out.verdict = Verdict::CompileError;
        out.pass_rate = 0.0;
        out.feedback = "compile error: " + checked.report.summary();
        return out;
    }
    return run_suite(*checked.ast, suite, limits);
}

}  // namespace obfkit::interp
