#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "obfkit/data/builders.hpp"

namespace obfkit::data {

struct ExportSummary {
    std::string path;
    size_t lines = 0;
    std::string digest;  // SHA-256 of the written bytes
};

// Writes one chat-format JSON object per instance (system/user/assistant
// messages plus provenance metadata), UTF-8 with LF endings, byte-stable for
// fixed inputs. `template_id` selects the prompt wording; "default" is the
// only built-in. Throws std::invalid_argument on an empty item list or
// unknown template, std::runtime_error on an unwritable path.
ExportSummary export_jsonl(const std::vector<TripletInstance>& items,
                           const std::string& template_id, const std::string& out_path);

// The chat messages for one instance; exposed for tests and the orchestrator.
struct ChatMessage {
    std::string role;
    std::string content;
};
std::vector<ChatMessage> render_messages(const TripletInstance& item,
                                         const std::string& template_id);

}  // namespace obfkit::data
