#include "obfkit/stats/emit.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace obfkit::stats {

namespace {

namespace fs = std::filesystem;

std::optional<ReportFormat> parse_format(std::string_view name) {
    if (name == "json") return ReportFormat::Json;
    if (name == "csv") return ReportFormat::Csv;
    if (name == "both") return ReportFormat::Both;
    return std::nullopt;
}

bool wants_json(ReportFormat f) { return f != ReportFormat::Csv; }
bool wants_csv(ReportFormat f) { return f != ReportFormat::Json; }

// RFC 4180: quote fields containing comma, quote, or newline; double
// embedded quotes.
std::string csv_field(std::string_view value) {
    bool needs_quote = value.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs_quote) return std::string(value);
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

// Percentages print as integers when they are integers (the common fixture
// shape), otherwise with two decimals.
std::string percent(double v) {
    double rounded = std::round(v);
    if (std::fabs(v - rounded) < 1e-9) {
        return std::to_string(static_cast<long long>(rounded));
    }
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

void write_file(const std::string& path, const std::string& blob) {
    fs::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("emit_report: cannot write " + path);
    }
    out << blob;
    if (!out) {
        throw std::runtime_error("emit_report: short write to " + path);
    }
}

void append_row(std::string& csv, std::string_view key, std::string_view value) {
    csv += csv_field(key);
    csv += ',';
    csv += csv_field(value);
    csv += "\r\n";
}

std::string aggregates_csv(const exp::ExperimentReport& r) {
    const exp::Aggregates& a = r.aggregates;
    std::string csv = "key,value\r\n";
    append_row(csv, "kind", r.kind);
    append_row(csv, "technique", r.technique);
    append_row(csv, "strategy", r.strategy);
    append_row(csv, "model", r.model);
    append_row(csv, "seed", std::to_string(r.seed));
    append_row(csv, "total", std::to_string(a.total));
    append_row(csv, "passed", std::to_string(a.passed));
    append_row(csv, "first_pass", std::to_string(a.first_pass));
    append_row(csv, "echo_count", std::to_string(a.echo_count));
    append_row(csv, "pass_rate", num(a.pass_rate));
    append_row(csv, "first_pass_rate", num(a.first_pass_rate));
    append_row(csv, "mean_iterations", num(a.mean_iterations));
    append_row(csv, "sim_mean", num(a.sim_mean));
    append_row(csv, "sim_min", num(a.sim_min));
    append_row(csv, "sim_max", num(a.sim_max));
    append_row(csv, "readability_original_mean", num(a.readability_original_mean));
    append_row(csv, "readability_final_mean", num(a.readability_final_mean));
    if (r.patterns) {
        append_row(csv, "pattern_samples", std::to_string(r.patterns->samples));
        append_row(csv, "pattern_degenerate", r.patterns->degenerate ? "true" : "false");
        if (r.patterns->chi_square) {
            append_row(csv, "pattern_chi_square", num(r.patterns->chi_square->statistic));
            append_row(csv, "pattern_p_value", num(r.patterns->chi_square->p_value));
        }
        for (const auto& [cls, count] : r.patterns->per_generation) {
            append_row(csv, "pattern_class." + cls, std::to_string(count));
        }
    }
    return csv;
}

std::string taxonomy_csv(const exp::Aggregates& a) {
    std::string csv = "category,percent\r\n";
    double failures = 0;
    for (const auto& [tag, count] : a.taxonomy) {
        (void)tag;
        failures += count;
    }
    for (const auto& [tag, count] : a.taxonomy) {
        double pct = failures > 0 ? 100.0 * count / failures : 0.0;
        append_row(csv, tag, percent(pct));
    }
    return csv;
}

}  // namespace

std::optional<ReportFormat> format_from_name(std::string_view name) { return parse_format(name); }

EmitResult emit_report(const exp::ExperimentReport& report, const std::string& out_base,
                       ReportFormat format) {
    EmitResult result;
    if (wants_json(format)) {
        std::string path = out_base + ".json";
        write_file(path, exp::report_to_json(report).dump(2) + "\n");
        result.files.push_back(path);
    }
    if (wants_csv(format)) {
        std::string path = out_base + ".csv";
        write_file(path, aggregates_csv(report));
        result.files.push_back(path);
        std::string tax_path = out_base + ".taxonomy.csv";
        write_file(tax_path, taxonomy_csv(report.aggregates));
        result.files.push_back(tax_path);
    }
    return result;
}

EmitResult emit_report(const exp::ComparativeReport& report, const std::string& out_base,
                       ReportFormat format) {
    EmitResult result;
    if (wants_json(format)) {
        std::string path = out_base + ".json";
        write_file(path, exp::comparative_to_json(report).dump(2) + "\n");
        result.files.push_back(path);
    }
    if (wants_csv(format)) {
        std::string path = out_base + ".csv";
        std::string csv = "label,forward_preservation_mean,reverse_success_rate\r\n";
        for (const auto& m : report.models) {
            csv += csv_field(m.label);
            csv += ',';
            csv += num(m.forward_preservation_mean);
            csv += ',';
            csv += num(m.reverse_success_rate);
            csv += "\r\n";
        }
        write_file(path, csv);
        result.files.push_back(path);

        std::string effect_path = out_base + ".effect.csv";
        std::string effect = "key,value\r\n";
        if (report.sft_vs_cft_effect) {
            append_row(effect, "cohens_d", num(report.sft_vs_cft_effect->statistic));
            append_row(effect, "p_value", num(report.sft_vs_cft_effect->p_value));
            append_row(effect, "n", std::to_string(report.sft_vs_cft_effect->n));
            append_row(effect, "method", report.sft_vs_cft_effect->method);
        }
        if (!report.effect_note.empty()) {
            append_row(effect, "note", report.effect_note);
        }
        write_file(effect_path, effect);
        result.files.push_back(effect_path);
    }
    return result;
}

}  // namespace obfkit::stats
