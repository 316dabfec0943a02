#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace obfkit::obf {

enum class Technique { VariableRenaming, DeadCodeInsertion, StringEncryption };
enum class NamingScheme { Sequential, Systematic, CustomRandom };

std::string_view technique_name(Technique t);
std::string_view scheme_name(NamingScheme s);
std::optional<Technique> technique_from_name(std::string_view name);
std::optional<NamingScheme> scheme_from_name(std::string_view name);

// Prose form used inside prompts: "variable renaming", "dead code
// insertion", "literals encryption".
std::string_view technique_display_name(Technique t);

struct RenameEntry {
    std::string from;
    std::string to;
};

// One dead-code insertion, addressed in the post-image: `block_path` walks
// nested blocks from the method body (pairs of statement index and branch
// selector), `index` is where the first inserted statement now sits.
struct InsertionEntry {
    int method_index = 0;
    std::vector<int> block_path;
    int index = 0;
    int stmt_count = 1;
    int template_id = 0;
    std::vector<std::string> names;  // synthesized fresh identifiers
};

struct StringMapEntry {
    std::string text;    // original literal spelling, quotes and escapes included
    std::string cipher;  // base64(xor(bytes, key))
};

struct TransformRecord {
    Technique technique = Technique::VariableRenaming;
    uint64_t seed = 0;

    // VariableRenaming
    NamingScheme scheme = NamingScheme::Sequential;
    std::vector<RenameEntry> rename_map;  // injective, declaration order

    // DeadCodeInsertion; sorted descending by address so that removing
    // entries in order never invalidates later addresses.
    std::vector<InsertionEntry> insertions;

    // StringEncryption
    std::vector<StringMapEntry> string_map;
    int key = 0;  // XOR key in [1, 255]
    bool decoder_added = false;
    std::string decoder_name;

    nlohmann::json to_json() const;
    static TransformRecord from_json(const nlohmann::json& j);

    void save(const std::string& path) const;
    static TransformRecord load(const std::string& path);
};

}  // namespace obfkit::obf
