#include "obfkit/obf/record.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <stdexcept>

namespace obfkit::obf {

using nlohmann::json;

std::string_view technique_name(Technique t) {
    switch (t) {
        case Technique::VariableRenaming: return "variable_renaming";
        case Technique::DeadCodeInsertion: return "dead_code_insertion";
        case Technique::StringEncryption: return "string_encryption";
    }
    return "unknown";
}

std::string_view scheme_name(NamingScheme s) {
    switch (s) {
        case NamingScheme::Sequential: return "sequential";
        case NamingScheme::Systematic: return "systematic";
        case NamingScheme::CustomRandom: return "custom_random";
    }
    return "unknown";
}

std::string_view technique_display_name(Technique t) {
    switch (t) {
        case Technique::VariableRenaming: return "variable renaming";
        case Technique::DeadCodeInsertion: return "dead code insertion";
        case Technique::StringEncryption: return "literals encryption";
    }
    return "unknown";
}

namespace {

// Lowercase with '-', '_' and spaces removed, so CLI spellings like
// "dead-code-insertion" and "DeadCodeInsertion" resolve alike.
std::string fold(std::string_view name) {
    std::string out;
    for (char c : name) {
        if (c == '-' || c == '_' || c == ' ') continue;
        out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

}  // namespace

std::optional<Technique> technique_from_name(std::string_view name) {
    std::string k = fold(name);
    if (k == "variablerenaming" || k == "rename" || k == "renaming")
        return Technique::VariableRenaming;
    if (k == "deadcodeinsertion" || k == "deadcode")
        return Technique::DeadCodeInsertion;
    if (k == "stringencryption" || k == "encrypt" || k == "encryption" ||
        k == "literalsencryption")
        return Technique::StringEncryption;
    return std::nullopt;
}

std::optional<NamingScheme> scheme_from_name(std::string_view name) {
    std::string k = fold(name);
    if (k == "sequential" || k == "seq") return NamingScheme::Sequential;
    if (k == "systematic" || k == "sys") return NamingScheme::Systematic;
    if (k == "customrandom" || k == "custom" || k == "random")
        return NamingScheme::CustomRandom;
    return std::nullopt;
}

json TransformRecord::to_json() const {
    json j;
    j["technique"] = std::string(technique_name(technique));
    j["seed"] = seed;
    if (technique == Technique::VariableRenaming) {
        j["scheme"] = std::string(scheme_name(scheme));
        json map = json::array();
        for (const auto& e : rename_map) map.push_back({{"from", e.from}, {"to", e.to}});
        j["rename_map"] = std::move(map);
    }
    if (technique == Technique::DeadCodeInsertion) {
        json ins = json::array();
        for (const auto& e : insertions) {
            ins.push_back({{"method", e.method_index},
                           {"block_path", e.block_path},
                           {"index", e.index},
                           {"stmt_count", e.stmt_count},
                           {"template", e.template_id},
                           {"names", e.names}});
        }
        j["insertions"] = std::move(ins);
    }
    if (technique == Technique::StringEncryption) {
        json map = json::array();
        for (const auto& e : string_map)
            map.push_back({{"text", e.text}, {"cipher", e.cipher}});
        j["string_map"] = std::move(map);
        j["key"] = key;
        j["decoder_added"] = decoder_added;
        j["decoder_name"] = decoder_name;
    }
    return j;
}

TransformRecord TransformRecord::from_json(const json& j) {
    TransformRecord r;
    auto t = technique_from_name(j.at("technique").get<std::string>());
    if (!t) throw std::runtime_error("unknown technique in transform record");
    r.technique = *t;
    r.seed = j.value("seed", uint64_t{0});
    if (j.contains("scheme")) {
        auto s = scheme_from_name(j.at("scheme").get<std::string>());
        if (!s) throw std::runtime_error("unknown naming scheme in transform record");
        r.scheme = *s;
    }
    for (const auto& e : j.value("rename_map", json::array()))
        r.rename_map.push_back({e.at("from").get<std::string>(), e.at("to").get<std::string>()});
    for (const auto& e : j.value("insertions", json::array())) {
        InsertionEntry ins;
        ins.method_index = e.at("method").get<int>();
        ins.block_path = e.at("block_path").get<std::vector<int>>();
        ins.index = e.at("index").get<int>();
        ins.stmt_count = e.value("stmt_count", 1);
        ins.template_id = e.value("template", 0);
        ins.names = e.value("names", std::vector<std::string>{});
        r.insertions.push_back(std::move(ins));
    }
    for (const auto& e : j.value("string_map", json::array()))
        r.string_map.push_back({e.at("text").get<std::string>(), e.at("cipher").get<std::string>()});
    r.key = j.value("key", 0);
    r.decoder_added = j.value("decoder_added", false);
    r.decoder_name = j.value("decoder_name", std::string{});
    return r;
}

void TransformRecord::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write transform record: " + path);
    out << to_json().dump(2) << '\n';
}

TransformRecord TransformRecord::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read transform record: " + path);
    json j = json::parse(in);
    return from_json(j);
}

}  // namespace obfkit::obf
