#pragma once

#include <string_view>

#include "obfkit/lang/diagnostics.hpp"
#include "obfkit/lang/token.hpp"

namespace obfkit::lang {

// Lexes UTF-8 source into a TokenStream. Comments become Comment tokens;
// whitespace is recorded on the following token so detokenize() is lossless.
// Throws ParseError on unterminated literals/comments and illegal characters.
TokenStream tokenize(std::string_view source);

bool is_keyword(std::string_view word);
const std::vector<std::string>& keyword_list();

}  // namespace obfkit::lang
