#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace obfkit::util {

// Minimal TOML subset sufficient for experiment manifests: [table] and
// [dotted.table] headers, `key = value` with basic strings, integers,
// floats, and booleans, plus # comments. No arrays, inline tables, dates,
// or multi-line strings; duplicate keys are errors.
class TomlTable {
public:
    using Value = std::variant<std::string, int64_t, double, bool>;

    bool contains(const std::string& dotted_key) const;
    // Typed getters return nullopt when the key is absent and throw
    // std::runtime_error when it holds a different type. get_double accepts
    // integer values.
    std::optional<std::string> get_string(const std::string& dotted_key) const;
    std::optional<int64_t> get_int(const std::string& dotted_key) const;
    std::optional<double> get_double(const std::string& dotted_key) const;
    std::optional<bool> get_bool(const std::string& dotted_key) const;

    // All keys under `prefix.` (or every key for ""), dotted, sorted.
    std::vector<std::string> keys(const std::string& prefix = "") const;

    std::map<std::string, Value> values;  // dotted key -> value
};

// Throws std::runtime_error with a line number on syntax errors.
TomlTable parse_toml(std::string_view text);
TomlTable load_toml(const std::string& path);

}  // namespace obfkit::util
