#include "obfkit/model/extract.hpp"

#include <string_view>
#include <vector>

namespace obfkit::model {

namespace {

// A fence line is optional indentation, three-or-more backticks, and an
// optional language tag. Returns the position just past the line's newline
// (or npos for "rest of text") plus whether the line qualified.
struct FenceLine {
    bool is_fence = false;
    size_t content_start = 0;  // first byte after the fence line
};

FenceLine classify_fence(std::string_view text, size_t line_start) {
    size_t i = line_start;
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    size_t ticks = 0;
    while (i < text.size() && text[i] == '`') {
        ++ticks;
        ++i;
    }
    if (ticks < 3) return {};
    // Language tag (e.g. "java") or nothing; any other junk still counts,
    // models emit tags like "java copy" often enough.
    size_t eol = text.find('\n', i);
    FenceLine f;
    f.is_fence = true;
    f.content_start = eol == std::string_view::npos ? text.size() : eol + 1;
    return f;
}

}  // namespace

std::string extract_code(const std::string& text) {
    std::string_view sv(text);
    std::string best;
    bool found = false;

    size_t line_start = 0;
    while (line_start <= sv.size()) {
        FenceLine open = classify_fence(sv, line_start);
        if (!open.is_fence) {
            size_t nl = sv.find('\n', line_start);
            if (nl == std::string_view::npos) break;
            line_start = nl + 1;
            continue;
        }

        // Scan forward for the closing fence; an unterminated block runs to
        // the end of the reply.
        size_t body_start = open.content_start;
        size_t scan = body_start;
        size_t body_end = sv.size();
        size_t next_line = sv.size();
        while (scan <= sv.size()) {
            FenceLine close = classify_fence(sv, scan);
            if (close.is_fence) {
                body_end = scan;
                next_line = close.content_start;
                break;
            }
            size_t nl = sv.find('\n', scan);
            if (nl == std::string_view::npos) break;
            scan = nl + 1;
        }

        std::string_view body = sv.substr(body_start, body_end - body_start);
        // The newline(s) before the closing fence belong to the fence, not
        // the code.
        while (!body.empty() && (body.back() == '\n' || body.back() == '\r')) {
            body.remove_suffix(1);
        }
        if (!found || body.size() > best.size()) {
            best.assign(body);
            found = true;
        }
        line_start = next_line;
        if (next_line >= sv.size()) break;
    }

    return found ? best : text;
}

}  // namespace obfkit::model
