#include "obfkit/util/toml.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace obfkit::util {

namespace {

[[noreturn]] void fail(int line, const std::string& message) {
    throw std::runtime_error("toml: line " + std::to_string(line) + ": " + message);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

bool is_bare_key_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

bool is_bare_key(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!is_bare_key_char(c) && c != '.') return false;
    }
    return s.front() != '.' && s.back() != '.' && s.find("..") == std::string_view::npos;
}

// Strips a trailing comment that is not inside a basic string.
std::string_view strip_comment(std::string_view s) {
    bool in_string = false;
    for (size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (in_string) {
            if (c == '\\') {
                ++i;
            } else if (c == '"') {
                in_string = false;
            }
        } else if (c == '"') {
            in_string = true;
        } else if (c == '#') {
            return s.substr(0, i);
        }
    }
    return s;
}

std::string parse_basic_string(std::string_view raw, int line) {
    // raw includes the surrounding quotes
    if (raw.size() < 2 || raw.front() != '"' || raw.back() != '"') {
        fail(line, "unterminated string");
    }
    std::string out;
    for (size_t i = 1; i + 1 < raw.size(); ++i) {
        char c = raw[i];
        if (c != '\\') {
            out += c;
            continue;
        }
        // parse_value pre-validates quoting, so an escape always has a
        // character after it inside the body.
        char esc = raw[++i];
        switch (esc) {
            case '"': out += '"'; break;
            case '\\': out += '\\'; break;
            case 'n': out += '\n'; break;
            case 't': out += '\t'; break;
            case 'r': out += '\r'; break;
            default: fail(line, std::string("unsupported escape \\") + esc);
        }
    }
    return out;
}

TomlTable::Value parse_value(std::string_view raw, int line) {
    if (raw.empty()) fail(line, "missing value");
    if (raw.front() == '"') {
        // Reject trailing junk after the closing quote.
        bool closed = false;
        for (size_t i = 1; i < raw.size(); ++i) {
            if (raw[i] == '\\') {
                ++i;
            } else if (raw[i] == '"') {
                if (i != raw.size() - 1) fail(line, "trailing characters after string");
                closed = true;
            }
        }
        if (!closed) fail(line, "unterminated string");
        return parse_basic_string(raw, line);
    }
    if (raw == "true") return true;
    if (raw == "false") return false;

    std::string compact;
    for (char c : raw) {
        if (c == '_') continue;  // TOML digit separators
        compact += c;
    }
    bool looks_float = compact.find_first_of(".eE") != std::string::npos;
    if (!looks_float) {
        int64_t iv = 0;
        auto [p, ec] = std::from_chars(compact.data(), compact.data() + compact.size(), iv);
        if (ec == std::errc() && p == compact.data() + compact.size()) return iv;
    }
    try {
        size_t used = 0;
        double dv = std::stod(compact, &used);
        if (used == compact.size()) return dv;
    } catch (const std::exception&) {
        // fall through to the error below
    }
    fail(line, "cannot parse value '" + std::string(raw) + "'");
}

}  // namespace

bool TomlTable::contains(const std::string& dotted_key) const {
    return values.find(dotted_key) != values.end();
}

std::optional<std::string> TomlTable::get_string(const std::string& dotted_key) const {
    auto it = values.find(dotted_key);
    if (it == values.end()) return std::nullopt;
    if (const auto* s = std::get_if<std::string>(&it->second)) return *s;
    throw std::runtime_error("toml: key '" + dotted_key + "' is not a string");
}

std::optional<int64_t> TomlTable::get_int(const std::string& dotted_key) const {
    auto it = values.find(dotted_key);
    if (it == values.end()) return std::nullopt;
    if (const auto* v = std::get_if<int64_t>(&it->second)) return *v;
    throw std::runtime_error("toml: key '" + dotted_key + "' is not an integer");
}

std::optional<double> TomlTable::get_double(const std::string& dotted_key) const {
    auto it = values.find(dotted_key);
    if (it == values.end()) return std::nullopt;
    if (const auto* v = std::get_if<double>(&it->second)) return *v;
    if (const auto* i = std::get_if<int64_t>(&it->second)) return static_cast<double>(*i);
    throw std::runtime_error("toml: key '" + dotted_key + "' is not a number");
}

std::optional<bool> TomlTable::get_bool(const std::string& dotted_key) const {
    auto it = values.find(dotted_key);
    if (it == values.end()) return std::nullopt;
    if (const auto* v = std::get_if<bool>(&it->second)) return *v;
    throw std::runtime_error("toml: key '" + dotted_key + "' is not a boolean");
}

std::vector<std::string> TomlTable::keys(const std::string& prefix) const {
    std::vector<std::string> out;
    std::string want = prefix.empty() ? "" : prefix + ".";
    for (const auto& [k, v] : values) {
        (void)v;
        if (want.empty() || k.rfind(want, 0) == 0) out.push_back(k);
    }
    return out;
}

TomlTable parse_toml(std::string_view text) {
    TomlTable table;
    std::string section;
    int line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos
                                                                              : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        std::string_view body = trim(strip_comment(line));
        if (body.empty()) continue;

        if (body.front() == '[') {
            if (body.back() != ']' || body.size() < 3) fail(line_no, "malformed table header");
            std::string_view name = trim(body.substr(1, body.size() - 2));
            if (!is_bare_key(name)) {
                fail(line_no, "unsupported table name '" + std::string(name) + "'");
            }
            section = std::string(name);
            continue;
        }

        size_t eq = std::string_view::npos;
        bool in_string = false;
        for (size_t i = 0; i < body.size(); ++i) {
            char c = body[i];
            if (in_string) {
                if (c == '\\') {
                    ++i;
                } else if (c == '"') {
                    in_string = false;
                }
            } else if (c == '"') {
                in_string = true;
            } else if (c == '=') {
                eq = i;
                break;
            }
        }
        if (eq == std::string_view::npos) fail(line_no, "expected 'key = value'");
        std::string_view key = trim(body.substr(0, eq));
        std::string_view raw = trim(body.substr(eq + 1));
        if (!is_bare_key(key)) fail(line_no, "invalid key '" + std::string(key) + "'");

        std::string dotted = section.empty() ? std::string(key) : section + "." + std::string(key);
        if (table.values.count(dotted) != 0) fail(line_no, "duplicate key '" + dotted + "'");
        table.values.emplace(dotted, parse_value(raw, line_no));
    }
    return table;
}

TomlTable load_toml(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("toml: cannot open " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_toml(buf.str());
}

}  // namespace obfkit::util
