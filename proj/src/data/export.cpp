#include "obfkit/data/export.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"
#include "obfkit/util/digest.hpp"

namespace obfkit::data {

std::vector<ChatMessage> render_messages(const TripletInstance& item,
                                         const std::string& template_id) {
    if (template_id != "default")
        throw std::invalid_argument("unknown prompt template: " + template_id);

    std::vector<ChatMessage> messages;
    if (item.task == TripletTask::GEN) {
        messages.push_back(
            {"system", "You are a program transformation tool that obfuscates Java code."});
        // The generation prompt wording is fixed; only the technique varies.
        messages.push_back({"user", "Obfuscate the following Java code by " +
                                        std::string(obf::technique_display_name(item.technique)) +
                                        " while preserving its functionality.\n\n" + item.code_a});
        messages.push_back({"assistant", item.target});
    } else {
        messages.push_back(
            {"system", "You are a program analysis assistant that compares Java programs."});
        messages.push_back({"user",
                            "Do the following two Java programs have the same functionality? "
                            "Answer with one word: \"equivalent\" or \"different\".\n\n"
                            "Program A:\n" +
                                item.code_a + "\nProgram B:\n" + item.code_b});
        messages.push_back({"assistant", item.target});
    }
    return messages;
}

ExportSummary export_jsonl(const std::vector<TripletInstance>& items,
                           const std::string& template_id, const std::string& out_path) {
    if (items.empty()) throw std::invalid_argument("export_jsonl: no items");

    std::string blob;
    for (const TripletInstance& item : items) {
        nlohmann::json j;
        j["messages"] = nlohmann::json::array();
        for (const ChatMessage& m : render_messages(item, template_id))
            j["messages"].push_back({{"role", m.role}, {"content", m.content}});
        j["meta"] = {{"task", std::string(triplet_task_name(item.task))},
                     {"technique", std::string(obf::technique_name(item.technique))},
                     {"problem_a", item.problem_a},
                     {"program_a", item.program_a},
                     {"problem_b", item.problem_b},
                     {"program_b", item.program_b}};
        blob += j.dump();
        blob += '\n';
    }

    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("export_jsonl: cannot write " + out_path);
    out << blob;
    out.close();
    if (!out) throw std::runtime_error("export_jsonl: write failed for " + out_path);

    ExportSummary summary;
    summary.path = out_path;
    summary.lines = items.size();
    summary.digest = util::sha256_hex(blob);
    return summary;
}

}  // namespace obfkit::data
