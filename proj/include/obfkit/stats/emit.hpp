#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "obfkit/exp/report.hpp"

namespace obfkit::stats {

enum class ReportFormat { Json, Csv, Both };

std::optional<ReportFormat> format_from_name(std::string_view name);  // "json"|"csv"|"both"

struct EmitResult {
    std::vector<std::string> files;  // paths written, emission order
};

// Writes `<out_base>.json` (full records) and/or the CSV tables
// (`<out_base>.csv` aggregates, `<out_base>.taxonomy.csv` failure
// percentages). Emission is deterministic: re-emitting the same report
// yields byte-identical files. Throws std::runtime_error on unwritable
// paths.
EmitResult emit_report(const exp::ExperimentReport& report, const std::string& out_base,
                       ReportFormat format = ReportFormat::Both);

// Comparative flavor: `<out_base>.csv` is the per-model summary table and
// `<out_base>.effect.csv` the SFT-vs-CFT effect-size block.
EmitResult emit_report(const exp::ComparativeReport& report, const std::string& out_base,
                       ReportFormat format = ReportFormat::Both);

}  // namespace obfkit::stats
