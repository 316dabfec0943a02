#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "obfkit/lang/ast.hpp"

namespace obfkit::interp {

struct RunLimits {
    int64_t wall_clock_ms = 2000;
    int64_t step_budget = 50'000'000;
    int64_t output_budget = 1'048'576;
};

enum class RunStatus { Completed, RuntimeError, Timeout, OutputOverflow };

std::string_view run_status_name(RunStatus status);

struct RunResult {
    RunStatus status = RunStatus::Completed;
    std::string stdout_text;
    std::string error_message;  // non-empty iff status == RuntimeError
    int64_t steps_used = 0;
};

// Runs a checked program against the given stdin. Deterministic for fixed
// (program, stdin, limits); every failure mode is encoded in the status.
RunResult run_program(const lang::Ast& ast, std::string_view stdin_text,
                      const RunLimits& limits = {});

}  // namespace obfkit::interp
