#include "obfkit/obf/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>

#include "obfkit/lang/checker.hpp"
#include "obfkit/lang/identifier_table.hpp"
#include "obfkit/lang/printer.hpp"
#include "obfkit/lang/walk.hpp"
#include "obfkit/util/rng.hpp"

namespace obfkit::obf {

using namespace lang;

namespace {

// ---- shared plumbing ----------------------------------------------------

// Transforms are implemented as AST rewrites followed by a print/reparse
// round trip, so the returned AST is always canonical and fully re-checked.
Ast reanalyze(const std::string& source, const char* what) {
    CheckedProgram checked = analyze(source);
    if (!checked.ok())
        throw std::logic_error(std::string("internal error: ") + what +
                               " produced an invalid program: " + checked.report.summary());
    return std::move(*checked.ast);
}

Ast reanalyze_or_mismatch(const std::string& source) {
    CheckedProgram checked = analyze(source);
    if (!checked.ok())
        throw std::runtime_error("transform record does not match program: " +
                                 checked.report.summary());
    return std::move(*checked.ast);
}

Ast canonicalize(const Ast& ast) { return reanalyze(print_source(ast), "canonicalization"); }

// Names that synthesized identifiers must never collide with.
const std::set<std::string>& reserved_names() {
    static const std::set<std::string> kReserved = {
        "int",    "long",   "double",  "boolean",  "char",      "void",   "String",
        "Scanner", "System", "Math",   "Integer",  "Long",      "Double", "Character",
        "public", "static", "class",   "if",       "else",      "while",  "for",
        "break",  "continue", "return", "new",     "true",      "false",  "null",
        "import", "main",   "args",    "length"};
    return kReserved;
}

std::set<std::string> program_names(const Ast& ast) {
    std::set<std::string> names(reserved_names());
    names.insert(ast.unit.class_name);
    for (const Method& m : ast.unit.methods) {
        names.insert(m.name);
        for (const Param& p : m.params) names.insert(p.name);
        walk_stmts(*m.body, [&](const Stmt& s) {
            if (const auto* decl = s.as<VarDeclStmt>())
                for (const auto& item : decl->items) names.insert(item.name);
        });
    }
    return names;
}

// Parses statements by wrapping them in a scratch program; used to build
// dead-code templates from source text rather than hand-assembled nodes.
std::vector<StmtPtr> parse_stmts(const std::string& text) {
    std::string src = "public class __Scratch {\n    public static void main(String[] args) {\n" +
                      text + "\n    }\n}\n";
    Ast ast = reanalyze(src, "statement template");
    auto* body = ast.unit.methods[0].body->as<BlockStmt>();
    std::vector<StmtPtr> out;
    for (StmtPtr& s : body->statements) out.push_back(std::move(s));
    return out;
}

struct RenamePlan {
    std::map<int, std::string> decls;    // Param/VarDeclItem id -> new name
    std::map<int, std::string> methods;  // method index -> new name
};

void apply_renames(Ast& ast, const RenamePlan& plan) {
    for (size_t mi = 0; mi < ast.unit.methods.size(); ++mi) {
        Method& m = ast.unit.methods[mi];
        if (auto it = plan.methods.find(static_cast<int>(mi)); it != plan.methods.end())
            m.name = it->second;
        for (Param& p : m.params)
            if (auto it = plan.decls.find(p.id); it != plan.decls.end()) p.name = it->second;
        walk_stmts(*m.body, [&](Stmt& s) {
            if (auto* decl = s.as<VarDeclStmt>())
                for (auto& item : decl->items)
                    if (auto it = plan.decls.find(item.id); it != plan.decls.end())
                        item.name = it->second;
        });
        walk_stmt_exprs(*m.body, [&](Expr& e) {
            if (auto* ref = e.as<NameRef>()) {
                if (auto it = plan.decls.find(ref->decl_id); it != plan.decls.end())
                    ref->name = it->second;
            } else if (auto* call = e.as<CallExpr>()) {
                if (auto it = plan.methods.find(call->method_index); it != plan.methods.end())
                    call->callee = it->second;
            }
        });
    }
}

ObfResult finish(Ast ast, TransformRecord record, const char* what) {
    ObfResult result;
    result.source = print_source(ast);
    result.ast = reanalyze(result.source, what);
    result.record = std::move(record);
    return result;
}

// ---- naming schemes -----------------------------------------------------

// k-th name over the alphabet {i, l} in length-then-lexicographic order:
// i, l, ii, il, li, ll, iii, ...
std::string sequential_name(int k) {
    int len = 1;
    int count = 2;
    while (k >= count) {
        k -= count;
        ++len;
        count *= 2;
    }
    std::string out;
    for (int bit = len - 1; bit >= 0; --bit) out += ((k >> bit) & 1) ? 'l' : 'i';
    return out;
}

std::string random_name(util::Rng& rng) {
    std::string out = "_";
    int len = 1 + static_cast<int>(rng.below(3));
    for (int i = 0; i < len; ++i)
        out += static_cast<char>('A' + static_cast<int>(rng.below(26)));
    return out;
}

// ---- block addressing ---------------------------------------------------
//
// A block address is (method index, path). The path is read left to right
// starting from the method body: at a block the next element is a statement
// index; at an if it selects then (1) or else (2); at a while it is 3 (body);
// at a for it is 4 (body). The walk must end on a block.

struct BlockAddr {
    int method_index = 0;
    std::vector<int> path;
    BlockStmt* block = nullptr;
};

void enum_blocks(Stmt& s, int method_index, std::vector<int>& path,
                 std::vector<BlockAddr>& out) {
    if (auto* blk = s.as<BlockStmt>()) {
        out.push_back({method_index, path, blk});
        for (int i = 0; i < static_cast<int>(blk->statements.size()); ++i) {
            path.push_back(i);
            enum_blocks(*blk->statements[i], method_index, path, out);
            path.pop_back();
        }
    } else if (auto* iff = s.as<IfStmt>()) {
        path.push_back(1);
        enum_blocks(*iff->then_branch, method_index, path, out);
        path.pop_back();
        if (iff->else_branch) {
            path.push_back(2);
            enum_blocks(*iff->else_branch, method_index, path, out);
            path.pop_back();
        }
    } else if (auto* wh = s.as<WhileStmt>()) {
        path.push_back(3);
        enum_blocks(*wh->body, method_index, path, out);
        path.pop_back();
    } else if (auto* fr = s.as<ForStmt>()) {
        path.push_back(4);
        enum_blocks(*fr->body, method_index, path, out);
        path.pop_back();
    }
}

std::vector<BlockAddr> all_blocks(Ast& ast) {
    std::vector<BlockAddr> out;
    std::vector<int> path;
    for (size_t mi = 0; mi < ast.unit.methods.size(); ++mi)
        enum_blocks(*ast.unit.methods[mi].body, static_cast<int>(mi), path, out);
    return out;
}

BlockStmt* resolve_block(Ast& ast, int method_index, const std::vector<int>& path) {
    if (method_index < 0 || method_index >= static_cast<int>(ast.unit.methods.size()))
        return nullptr;
    Stmt* cur = ast.unit.methods[method_index].body.get();
    size_t i = 0;
    while (i < path.size()) {
        int step = path[i++];
        if (auto* blk = cur->as<BlockStmt>()) {
            if (step < 0 || step >= static_cast<int>(blk->statements.size())) return nullptr;
            cur = blk->statements[step].get();
        } else if (auto* iff = cur->as<IfStmt>()) {
            if (step == 1) cur = iff->then_branch.get();
            else if (step == 2 && iff->else_branch) cur = iff->else_branch.get();
            else return nullptr;
        } else if (auto* wh = cur->as<WhileStmt>()) {
            if (step != 3) return nullptr;
            cur = wh->body.get();
        } else if (auto* fr = cur->as<ForStmt>()) {
            if (step != 4) return nullptr;
            cur = fr->body.get();
        } else {
            return nullptr;
        }
    }
    return cur->as<BlockStmt>();
}

// ---- dead-code templates --------------------------------------------------

constexpr int kDeadTemplateCount = 6;

// Every template is self-contained: it reads no program state, only its own
// fresh variable, so inserting it anywhere preserves semantics.
std::string instantiate_template(int id, const std::string& name, util::Rng& rng,
                                 int* stmt_count) {
    std::string k;
    switch (id) {
        case 0:
            *stmt_count = 1;
            k = std::to_string(rng.range(0, 99));
            return "int " + name + " = " + k + ";";
        case 1:
            *stmt_count = 1;
            k = std::to_string(rng.range(0, 9));
            return "double " + name + " = " + k + ".5;";
        case 2:
            *stmt_count = 2;
            k = std::to_string(rng.range(1, 9));
            return "int " + name + " = " + k + ";\nif (" + name + " * " + name +
                   " < 0) {\n" + name + " = " + name + " + 1;\n}";
        case 3:
            *stmt_count = 1;
            return "for (int " + name + " = 0; " + name + " < 0; " + name + "++) {\n}";
        case 4:
            *stmt_count = 2;
            k = std::to_string(rng.range(0, 99));
            return "int " + name + " = " + k + ";\n" + name + " = " + name + " * 2;";
        case 5:
            *stmt_count = 1;
            return "boolean " + name + " = false;";
        default:
            throw std::logic_error("unknown dead-code template");
    }
}

// Fresh-name pool for dead code; plain dictionary words keep the inserted
// statements looking hand-written.
std::string fresh_dead_name(util::Rng& rng, std::set<std::string>& taken) {
    static const std::vector<std::string> kWords = {
        "temp",   "buffer", "cache",  "extra",  "spare",  "scratch", "holder",
        "filler", "probe",  "marker", "padding", "slack",  "stash",   "trace"};
    const std::string& base = kWords[static_cast<size_t>(rng.below(kWords.size()))];
    std::string name = base;
    for (int n = 2; taken.count(name); ++n) name = base + std::to_string(n);
    taken.insert(name);
    return name;
}

// Validates that the statement at a recorded insertion site really declares
// (or loops over) the recorded fresh name before removing it.
bool mentions_name(const Stmt& s, const std::string& name) {
    bool found = false;
    walk_stmts(s, [&](const Stmt& st) {
        if (const auto* decl = st.as<VarDeclStmt>())
            for (const auto& item : decl->items)
                if (item.name == name) found = true;
    });
    return found;
}

// ---- base64 / xor ---------------------------------------------------------

constexpr char kB64Alphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::string base64_encode(std::string_view bytes) {
    std::string out;
    size_t i = 0;
    while (i + 2 < bytes.size()) {
        uint32_t v = (static_cast<uint8_t>(bytes[i]) << 16) |
                     (static_cast<uint8_t>(bytes[i + 1]) << 8) |
                     static_cast<uint8_t>(bytes[i + 2]);
        out += kB64Alphabet[(v >> 18) & 63];
        out += kB64Alphabet[(v >> 12) & 63];
        out += kB64Alphabet[(v >> 6) & 63];
        out += kB64Alphabet[v & 63];
        i += 3;
    }
    size_t rest = bytes.size() - i;
    if (rest == 1) {
        uint32_t v = static_cast<uint8_t>(bytes[i]) << 16;
        out += kB64Alphabet[(v >> 18) & 63];
        out += kB64Alphabet[(v >> 12) & 63];
        out += "==";
    } else if (rest == 2) {
        uint32_t v = (static_cast<uint8_t>(bytes[i]) << 16) |
                     (static_cast<uint8_t>(bytes[i + 1]) << 8);
        out += kB64Alphabet[(v >> 18) & 63];
        out += kB64Alphabet[(v >> 12) & 63];
        out += kB64Alphabet[(v >> 6) & 63];
        out += '=';
    }
    return out;
}

std::string base64_decode(std::string_view text) {
    int value_of[256];
    std::fill(std::begin(value_of), std::end(value_of), -1);
    for (int i = 0; i < 64; ++i) value_of[static_cast<uint8_t>(kB64Alphabet[i])] = i;
    std::string out;
    uint32_t acc = 0;
    int bits = 0;
    for (char c : text) {
        if (c == '=') break;
        int v = value_of[static_cast<uint8_t>(c)];
        if (v < 0) throw std::runtime_error("invalid base64 in transform record");
        acc = (acc << 6) | static_cast<uint32_t>(v);
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out += static_cast<char>((acc >> bits) & 0xFF);
        }
    }
    return out;
}

std::string xor_bytes(std::string_view bytes, int key) {
    std::string out(bytes);
    for (char& c : out)
        c = static_cast<char>(static_cast<uint8_t>(c) ^ static_cast<uint8_t>(key));
    return out;
}

// The runtime decoder emitted alongside encrypted literals. It is written in
// the supported subset and deliberately uses opaque one-letter locals.
std::string decoder_source(const std::string& name, int key) {
    // Deliberately convoluted (single-char names, deep nesting): the decoder
    // is part of the obfuscated artifact and should read like one. Padding
    // '=' only occurs at the end of the cipher, so guarding each character
    // instead of breaking at the first '=' is equivalent.
    std::string src;
    src += "    static String " + name + "(String s) {\n";
    src += "        String a = \"" + std::string(kB64Alphabet) + "\";\n";
    src += "        int[] b = new int[s.length() + 1];\n";
    src += "        int t = 0;\n";
    src += "        if (s.length() > 0) {\n";
    src += "            int k = 0;\n";
    src += "            int u = 0;\n";
    src += "            for (int p = 0; p < s.length(); p++) {\n";
    src += "                char c = s.charAt(p);\n";
    src += "                if (c != '=') {\n";
    src += "                    u = u * 64 + a.indexOf(c);\n";
    src += "                    k += 6;\n";
    src += "                    if (k >= 8) {\n";
    src += "                        k -= 8;\n";
    src += "                        int v = (u >> k) & 255;\n";
    src += "                        if (v * v >= 0) {\n";
    src += "                            b[t] = v;\n";
    src += "                            t++;\n";
    src += "                        }\n";
    src += "                    }\n";
    src += "                }\n";
    src += "            }\n";
    src += "        }\n";
    src += "        String r = \"\";\n";
    src += "        for (int p = 0; p < t; p++) {\n";
    src += "            r += (char) (b[p] ^ " + std::to_string(key) + ");\n";
    src += "        }\n";
    src += "        return r;\n";
    src += "    }\n";
    return src;
}

Method build_decoder(const std::string& name, int key) {
    std::string src = "public class __Scratch {\n" + decoder_source(name, key) +
                      "\n    public static void main(String[] args) {}\n}\n";
    Ast ast = reanalyze(src, "decoder template");
    return std::move(ast.unit.methods[0]);
}

}  // namespace

// ---- variable renaming ----------------------------------------------------

ObfResult rename_variables(const Ast& input, NamingScheme scheme, uint64_t seed) {
    Ast ast = canonicalize(input);
    std::vector<IdentifierInfo> table = collect_identifiers(ast);

    TransformRecord record;
    record.technique = Technique::VariableRenaming;
    record.scheme = scheme;
    record.seed = seed;

    util::Rng rng(seed ^ 0x72656e616d65ULL);
    const std::set<std::string>& reserved = reserved_names();
    std::set<std::string> chosen;
    RenamePlan plan;
    int sequential_next = 0;
    for (size_t k = 0; k < table.size(); ++k) {
        std::string name;
        switch (scheme) {
            case NamingScheme::Sequential:
                do {
                    name = sequential_name(sequential_next++);
                } while (reserved.count(name));
                break;
            case NamingScheme::Systematic:
                name = "var" + std::to_string(k + 1);
                break;
            case NamingScheme::CustomRandom:
                do {
                    name = random_name(rng);
                } while (chosen.count(name) || reserved.count(name));
                break;
        }
        chosen.insert(name);
        const IdentifierInfo& info = table[k];
        if (info.kind == IdentKind::Method)
            plan.methods[info.method_index] = name;
        else
            plan.decls[info.decl_id] = name;
        record.rename_map.push_back({info.name, name});
    }

    apply_renames(ast, plan);
    return finish(std::move(ast), std::move(record), "variable renaming");
}

// ---- dead-code insertion ----------------------------------------------------

ObfResult insert_dead_code(const Ast& input, double density, uint64_t seed) {
    if (density < 0 || density > 1)
        throw std::invalid_argument("dead-code density must lie in [0, 1]");
    Ast ast = canonicalize(input);

    TransformRecord record;
    record.technique = Technique::DeadCodeInsertion;
    record.seed = seed;

    util::Rng rng(seed ^ 0x64656164636f6465ULL);
    std::vector<BlockAddr> blocks = all_blocks(ast);

    // Candidate slots: every gap between statements, block by block.
    std::vector<std::pair<size_t, int>> slots;  // (index into blocks, position)
    for (size_t b = 0; b < blocks.size(); ++b)
        for (int pos = 0; pos <= static_cast<int>(blocks[b].block->statements.size()); ++pos)
            slots.push_back({b, pos});

    size_t want = 0;
    if (density > 0 && !slots.empty())
        want = static_cast<size_t>(
            std::ceil(density * static_cast<double>(slots.size()) - 1e-9));
    want = std::min(want, slots.size());
    if (want == 0) return finish(std::move(ast), std::move(record), "dead-code insertion");

    std::vector<std::pair<size_t, int>> picked(slots);
    rng.shuffle(picked);
    picked.resize(want);
    // Fill per block from the highest position down so earlier positions keep
    // their meaning while statements are spliced in.
    std::sort(picked.begin(), picked.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first < b.first : a.second > b.second;
    });

    std::set<std::string> taken = program_names(ast);
    struct PendingInsertion {
        int marker_id;
        int template_id;
        int stmt_count;
        std::vector<std::string> names;
    };
    std::map<int, PendingInsertion> pending;  // marker id -> metadata
    int next_marker = -1000;

    for (const auto& [block_idx, pos] : picked) {
        BlockStmt* block = blocks[block_idx].block;
        int template_id = static_cast<int>(rng.below(kDeadTemplateCount));
        std::string name = fresh_dead_name(rng, taken);
        int stmt_count = 0;
        std::vector<StmtPtr> stmts =
            parse_stmts(instantiate_template(template_id, name, rng, &stmt_count));
        if (static_cast<int>(stmts.size()) != stmt_count)
            throw std::logic_error("dead-code template statement count mismatch");
        int marker = next_marker--;
        stmts[0]->id = marker;
        pending[marker] = {marker, template_id, stmt_count, {name}};
        block->statements.insert(block->statements.begin() + pos,
                                 std::make_move_iterator(stmts.begin()),
                                 std::make_move_iterator(stmts.end()));
    }

    // Locate every marker in the mutated tree to record post-image addresses.
    for (const BlockAddr& addr : all_blocks(ast)) {
        const auto& stmts = addr.block->statements;
        for (int i = 0; i < static_cast<int>(stmts.size()); ++i) {
            auto it = pending.find(stmts[i]->id);
            if (it == pending.end()) continue;
            InsertionEntry entry;
            entry.method_index = addr.method_index;
            entry.block_path = addr.path;
            entry.index = i;
            entry.stmt_count = it->second.stmt_count;
            entry.template_id = it->second.template_id;
            entry.names = it->second.names;
            record.insertions.push_back(std::move(entry));
        }
    }
    if (record.insertions.size() != pending.size())
        throw std::logic_error("lost track of a dead-code insertion");

    // Descending structural order, so invert can remove entries front to back.
    std::sort(record.insertions.begin(), record.insertions.end(),
              [](const InsertionEntry& a, const InsertionEntry& b) {
                  if (a.method_index != b.method_index) return a.method_index > b.method_index;
                  std::vector<int> ka = a.block_path, kb = b.block_path;
                  ka.push_back(a.index);
                  kb.push_back(b.index);
                  return std::lexicographical_compare(kb.begin(), kb.end(), ka.begin(),
                                                      ka.end());
              });

    return finish(std::move(ast), std::move(record), "dead-code insertion");
}

// ---- string encryption ------------------------------------------------------

ObfResult encrypt_strings(const Ast& input, uint64_t seed) {
    Ast ast = canonicalize(input);

    TransformRecord record;
    record.technique = Technique::StringEncryption;
    record.seed = seed;

    std::vector<Expr*> literals;
    walk_ast_exprs(ast, [&](Expr& e) {
        if (e.as<StringLit>()) literals.push_back(&e);
    });
    if (literals.empty())
        return finish(std::move(ast), std::move(record), "string encryption");

    util::Rng rng(seed ^ 0x786f726b6579ULL);
    record.key = static_cast<int>(rng.range(1, 255));

    std::set<std::string> taken = program_names(ast);
    std::string decoder = "__dec";
    for (int n = 2; taken.count(decoder); ++n) decoder = "__dec" + std::to_string(n);
    record.decoder_added = true;
    record.decoder_name = decoder;

    std::set<std::string> seen;
    for (Expr* e : literals) {
        auto* lit = e->as<StringLit>();
        std::string cipher = base64_encode(xor_bytes(lit->value, record.key));
        if (seen.insert(cipher).second) record.string_map.push_back({lit->text, cipher});

        CallExpr call;
        call.callee = decoder;
        auto arg = std::make_unique<Expr>();
        arg->node = StringLit{cipher, "\"" + cipher + "\""};
        call.args.push_back(std::move(arg));
        e->node = std::move(call);
    }

    ast.unit.methods.push_back(build_decoder(decoder, record.key));
    return finish(std::move(ast), std::move(record), "string encryption");
}

// ---- dispatch ----------------------------------------------------------------

ObfResult apply(Technique technique, const Ast& ast, const ObfParams& params, uint64_t seed) {
    switch (technique) {
        case Technique::VariableRenaming: return rename_variables(ast, params.scheme, seed);
        case Technique::DeadCodeInsertion: return insert_dead_code(ast, params.density, seed);
        case Technique::StringEncryption: return encrypt_strings(ast, seed);
    }
    throw std::invalid_argument("unknown obfuscation technique");
}

// ---- inversion -----------------------------------------------------------------

namespace {

Ast invert_rename(const TransformRecord& record, const Ast& obf) {
    Ast ast = canonicalize(obf);
    std::map<std::string, std::string> back;
    for (const RenameEntry& e : record.rename_map)
        if (!back.emplace(e.to, e.from).second)
            throw std::runtime_error("transform record rename map is not injective");

    std::vector<IdentifierInfo> table = collect_identifiers(ast);
    if (table.size() != record.rename_map.size())
        throw std::runtime_error(
            "transform record does not match program: identifier count differs");

    RenamePlan plan;
    std::set<std::string> consumed;
    for (const IdentifierInfo& info : table) {
        auto it = back.find(info.name);
        if (it == back.end() || !consumed.insert(info.name).second)
            throw std::runtime_error(
                "transform record does not match program: unexpected identifier '" +
                info.name + "'");
        if (info.kind == IdentKind::Method)
            plan.methods[info.method_index] = it->second;
        else
            plan.decls[info.decl_id] = it->second;
    }

    apply_renames(ast, plan);
    return reanalyze_or_mismatch(print_source(ast));
}

Ast invert_dead_code(const TransformRecord& record, const Ast& obf) {
    Ast ast = canonicalize(obf);
    std::vector<InsertionEntry> entries = record.insertions;
    std::sort(entries.begin(), entries.end(),
              [](const InsertionEntry& a, const InsertionEntry& b) {
                  if (a.method_index != b.method_index) return a.method_index > b.method_index;
                  std::vector<int> ka = a.block_path, kb = b.block_path;
                  ka.push_back(a.index);
                  kb.push_back(b.index);
                  return std::lexicographical_compare(kb.begin(), kb.end(), ka.begin(),
                                                      ka.end());
              });
    for (const InsertionEntry& e : entries) {
        BlockStmt* block = resolve_block(ast, e.method_index, e.block_path);
        if (!block || e.index < 0 || e.stmt_count < 1 ||
            e.index + e.stmt_count > static_cast<int>(block->statements.size()))
            throw std::runtime_error(
                "transform record does not match program: insertion site not found");
        if (!e.names.empty() && !mentions_name(*block->statements[e.index], e.names[0]))
            throw std::runtime_error(
                "transform record does not match program: inserted statement not found");
        block->statements.erase(block->statements.begin() + e.index,
                                block->statements.begin() + e.index + e.stmt_count);
    }
    return reanalyze_or_mismatch(print_source(ast));
}

Ast invert_encryption(const TransformRecord& record, const Ast& obf) {
    Ast ast = canonicalize(obf);
    if (!record.decoder_added) return ast;

    auto& methods = ast.unit.methods;
    auto it = std::find_if(methods.begin(), methods.end(),
                           [&](const Method& m) { return m.name == record.decoder_name; });
    if (it == methods.end())
        throw std::runtime_error("transform record does not match program: decoder '" +
                                 record.decoder_name + "' not found");
    methods.erase(it);

    std::map<std::string, std::string> back;  // cipher -> original spelling
    for (const StringMapEntry& e : record.string_map) back[e.cipher] = e.text;

    bool mismatch = false;
    walk_ast_exprs(ast, [&](Expr& e) {
        auto* call = e.as<CallExpr>();
        if (!call || call->callee != record.decoder_name) return;
        const StringLit* arg =
            call->args.size() == 1 ? call->args[0]->as<StringLit>() : nullptr;
        if (!arg) {
            mismatch = true;
            return;
        }
        auto hit = back.find(arg->value);
        if (hit == back.end()) {
            mismatch = true;
            return;
        }
        StringLit restored;
        restored.value = xor_bytes(base64_decode(arg->value), record.key);
        restored.text = hit->second;
        e.node = std::move(restored);
    });
    if (mismatch)
        throw std::runtime_error(
            "transform record does not match program: unrecognized decoder call");

    return reanalyze_or_mismatch(print_source(ast));
}

}  // namespace

Ast invert(const TransformRecord& record, const Ast& obfuscated) {
    switch (record.technique) {
        case Technique::VariableRenaming: return invert_rename(record, obfuscated);
        case Technique::DeadCodeInsertion: return invert_dead_code(record, obfuscated);
        case Technique::StringEncryption: return invert_encryption(record, obfuscated);
    }
    throw std::invalid_argument("unknown obfuscation technique");
}

}  // namespace obfkit::obf
