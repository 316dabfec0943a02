#pragma once

#include <string>

namespace obfkit::model {

// Pulls the code payload out of a chat reply. Returns the largest
// ```-fenced block with fences and language tag stripped; if the reply has
// no fenced block, the text comes back unchanged. An unterminated fence
// runs to the end of the text.
std::string extract_code(const std::string& text);

}  // namespace obfkit::model
