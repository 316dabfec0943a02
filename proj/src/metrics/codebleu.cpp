#include "obfkit/metrics/codebleu.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <tuple>
#include <utility>
#include <vector>

#include "obfkit/lang/ast.hpp"
#include "obfkit/lang/diagnostics.hpp"
#include "obfkit/lang/lexer.hpp"
#include "obfkit/lang/parser.hpp"
#include "obfkit/lang/walk.hpp"

namespace obfkit::metrics {
namespace {

// ---- token components -----------------------------------------------------

std::vector<std::string> lexemes_of(std::string_view source) {
    try {
        lang::TokenStream ts = lang::tokenize(source);
        std::vector<std::string> out;
        // Separator punctuation is canonical-printer structure, not authored
        // content; the AST component already grades structure, so the n-gram
        // streams keep words, literals, and operators only.
        for (const lang::Token* t : ts.significant())
            if (t->kind != lang::TokenKind::Punct) out.push_back(t->lexeme);
        return out;
    } catch (const lang::ParseError&) {
        // Lexically broken text (common in raw model output): fall back to
        // whitespace tokens so the n-gram components still grade gradually.
        std::istringstream in{std::string(source)};
        std::vector<std::string> out;
        std::string word;
        while (in >> word) out.push_back(word);
        return out;
    }
}

// BLEU-4, clipped counts, add-one smoothing per order, brevity penalty.
// Each n-gram weighs the mean of its token weights (1 for plain BLEU).
template <typename WeightFn>
double bleu4(const std::vector<std::string>& cand, const std::vector<std::string>& ref,
             WeightFn&& token_weight) {
    if (cand.empty() || ref.empty()) return (cand.empty() && ref.empty()) ? 1.0 : 0.0;

    auto gram_key = [](const std::vector<std::string>& toks, size_t i, int n) {
        std::string key;
        for (int k = 0; k < n; ++k) {
            key += toks[i + static_cast<size_t>(k)];
            key += '\x1f';
        }
        return key;
    };

    double log_sum = 0.0;
    for (int n = 1; n <= 4; ++n) {
        std::map<std::string, int> ref_count;
        if (ref.size() >= static_cast<size_t>(n))
            for (size_t i = 0; i + n <= ref.size(); ++i) ++ref_count[gram_key(ref, i, n)];

        std::map<std::string, std::pair<int, double>> cand_grams;  // count, weight
        if (cand.size() >= static_cast<size_t>(n)) {
            for (size_t i = 0; i + n <= cand.size(); ++i) {
                double w = 0.0;
                for (int k = 0; k < n; ++k) w += token_weight(cand[i + static_cast<size_t>(k)]);
                auto& slot = cand_grams[gram_key(cand, i, n)];
                ++slot.first;
                slot.second = w / n;
            }
        }

        double total = 0.0, matched = 0.0;
        for (const auto& [key, cw] : cand_grams) {
            total += cw.first * cw.second;
            auto it = ref_count.find(key);
            int clip = it == ref_count.end() ? 0 : std::min(cw.first, it->second);
            matched += clip * cw.second;
        }
        log_sum += 0.25 * std::log((matched + 1.0) / (total + 1.0));
    }

    double c = static_cast<double>(cand.size());
    double r = static_cast<double>(ref.size());
    double bp = c >= r ? 1.0 : std::exp(1.0 - r / c);
    return bp * std::exp(log_sum);
}

// ---- AST component ----------------------------------------------------------

// Shape tree with identifiers abstracted away and blocks spliced into their
// parent statement lists, so bracing style and names cannot affect the match.
struct MNode {
    std::string label;
    std::vector<MNode> kids;
};

void add_stmt(const lang::Stmt& s, std::vector<MNode>& out);

MNode node_of_expr(const lang::Expr& e) {
    using namespace lang;
    MNode m;
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, IntLit>) {
                m.label = "int:" + n.text;
            } else if constexpr (std::is_same_v<T, DoubleLit>) {
                m.label = "dbl:" + n.text;
            } else if constexpr (std::is_same_v<T, StringLit>) {
                m.label = "str:" + n.text;
            } else if constexpr (std::is_same_v<T, CharLit>) {
                m.label = "chr:" + n.text;
            } else if constexpr (std::is_same_v<T, BoolLit>) {
                m.label = n.value ? "true" : "false";
            } else if constexpr (std::is_same_v<T, NameRef>) {
                m.label = "id";
            } else if constexpr (std::is_same_v<T, UnaryExpr>) {
                m.label = std::string("un:") + (n.prefix ? "" : "post") + n.op;
                m.kids.push_back(node_of_expr(*n.operand));
            } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                m.label = "bin:" + n.op;
                m.kids.push_back(node_of_expr(*n.lhs));
                m.kids.push_back(node_of_expr(*n.rhs));
            } else if constexpr (std::is_same_v<T, AssignExpr>) {
                m.label = "asg:" + n.op;
                m.kids.push_back(node_of_expr(*n.target));
                m.kids.push_back(node_of_expr(*n.value));
            } else if constexpr (std::is_same_v<T, TernaryExpr>) {
                m.label = "tern";
                m.kids.push_back(node_of_expr(*n.cond));
                m.kids.push_back(node_of_expr(*n.then_branch));
                m.kids.push_back(node_of_expr(*n.else_branch));
            } else if constexpr (std::is_same_v<T, CastExpr>) {
                m.label = "cast:" + n.type.to_string();
                m.kids.push_back(node_of_expr(*n.operand));
            } else if constexpr (std::is_same_v<T, IndexExpr>) {
                m.label = "idx";
                m.kids.push_back(node_of_expr(*n.array));
                m.kids.push_back(node_of_expr(*n.index));
            } else if constexpr (std::is_same_v<T, NewArrayExpr>) {
                m.label = "new:" + n.elem_type.to_string();
                m.kids.push_back(node_of_expr(*n.size));
            } else if constexpr (std::is_same_v<T, ArrayInitExpr>) {
                m.label = "arrinit";
                for (const auto& el : n.elements) m.kids.push_back(node_of_expr(*el));
            } else if constexpr (std::is_same_v<T, NewScannerExpr>) {
                m.label = "scanner";
            } else if constexpr (std::is_same_v<T, CallExpr>) {
                m.label = "call";  // user method names are renameable
                for (const auto& a : n.args) m.kids.push_back(node_of_expr(*a));
            } else if constexpr (std::is_same_v<T, MethodCallExpr>) {
                m.label = "mcall:" + n.method;
                m.kids.push_back(node_of_expr(*n.receiver));
                for (const auto& a : n.args) m.kids.push_back(node_of_expr(*a));
            } else if constexpr (std::is_same_v<T, StaticCallExpr>) {
                m.label = "scall:" + n.cls + "." + n.method;
                for (const auto& a : n.args) m.kids.push_back(node_of_expr(*a));
            } else if constexpr (std::is_same_v<T, FieldAccessExpr>) {
                m.label = "field:" + n.field;
                m.kids.push_back(node_of_expr(*n.receiver));
            }
        },
        e.node);
    return m;
}

MNode body_node(const char* label, const lang::StmtPtr& body) {
    MNode m{label, {}};
    if (body) add_stmt(*body, m.kids);
    return m;
}

void add_stmt(const lang::Stmt& s, std::vector<MNode>& out) {
    using namespace lang;
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, VarDeclStmt>) {
                MNode m{"decl:" + n.type.to_string(), {}};
                for (const auto& item : n.items) {
                    MNode iv{"item", {}};
                    if (item.init) iv.kids.push_back(node_of_expr(*item.init));
                    m.kids.push_back(std::move(iv));
                }
                out.push_back(std::move(m));
            } else if constexpr (std::is_same_v<T, ExprStmt>) {
                MNode m{"expr", {node_of_expr(*n.expr)}};
                out.push_back(std::move(m));
            } else if constexpr (std::is_same_v<T, BlockStmt>) {
                // transparent: splice the block's statements into the parent
                for (const auto& st : n.statements) add_stmt(*st, out);
            } else if constexpr (std::is_same_v<T, IfStmt>) {
                MNode m{"if", {node_of_expr(*n.cond), body_node("then", n.then_branch)}};
                if (n.else_branch) m.kids.push_back(body_node("else", n.else_branch));
                out.push_back(std::move(m));
            } else if constexpr (std::is_same_v<T, WhileStmt>) {
                MNode m{"while", {node_of_expr(*n.cond), body_node("body", n.body)}};
                out.push_back(std::move(m));
            } else if constexpr (std::is_same_v<T, ForStmt>) {
                MNode m{"for", {}};
                MNode init{"init", {}};
                if (n.init) add_stmt(*n.init, init.kids);
                for (const auto& e : n.init_exprs) init.kids.push_back(node_of_expr(*e));
                m.kids.push_back(std::move(init));
                MNode cond{"cond", {}};
                if (n.cond) cond.kids.push_back(node_of_expr(*n.cond));
                m.kids.push_back(std::move(cond));
                MNode upd{"update", {}};
                for (const auto& e : n.update) upd.kids.push_back(node_of_expr(*e));
                m.kids.push_back(std::move(upd));
                m.kids.push_back(body_node("body", n.body));
                out.push_back(std::move(m));
            } else if constexpr (std::is_same_v<T, ReturnStmt>) {
                MNode m{"return", {}};
                if (n.value) m.kids.push_back(node_of_expr(*n.value));
                out.push_back(std::move(m));
            } else if constexpr (std::is_same_v<T, BreakStmt>) {
                out.push_back({"break", {}});
            } else if constexpr (std::is_same_v<T, ContinueStmt>) {
                out.push_back({"continue", {}});
            } else if constexpr (std::is_same_v<T, EmptyStmt>) {
                out.push_back({"empty", {}});
            }
        },
        s.node);
}

MNode tree_of(const lang::Ast& ast) {
    MNode root{"class", {}};
    for (const auto& imp : ast.unit.imports) root.kids.push_back({"import:" + imp.text, {}});
    for (const auto& m : ast.unit.methods) {
        std::string sig = "method:" + m.return_type.to_string();
        for (const auto& p : m.params) sig += "," + p.type.to_string();
        MNode mn{std::move(sig), {}};
        if (m.body) add_stmt(*m.body, mn.kids);
        root.kids.push_back(std::move(mn));
    }
    return root;
}

constexpr int kSubtreeDepth = 3;

std::string serialize(const MNode& n, int depth) {
    if (depth <= 1 || n.kids.empty()) return n.label;
    std::string out = n.label;
    out += '(';
    for (size_t i = 0; i < n.kids.size(); ++i) {
        if (i) out += ',';
        out += serialize(n.kids[i], depth - 1);
    }
    out += ')';
    return out;
}

void collect_subtrees(const MNode& n, std::map<std::string, int>& sigs) {
    ++sigs[serialize(n, kSubtreeDepth)];
    for (const MNode& k : n.kids) collect_subtrees(k, sigs);
}

double multiset_match(const std::map<std::string, int>& cand,
                      const std::map<std::string, int>& ref) {
    long total = 0, matched = 0;
    for (const auto& [sig, count] : cand) {
        total += count;
        auto it = ref.find(sig);
        if (it != ref.end()) matched += std::min(count, it->second);
    }
    if (total == 0) return ref.empty() ? 1.0 : 0.0;
    return static_cast<double>(matched) / static_cast<double>(total);
}

double ast_match(const lang::Ast& cand, const lang::Ast& ref) {
    std::map<std::string, int> cs, rs;
    collect_subtrees(tree_of(cand), cs);
    collect_subtrees(tree_of(ref), rs);
    return multiset_match(cs, rs);
}

// ---- dataflow component ------------------------------------------------------

// Def-use edges (target ordinal <- source ordinal) at each definition site;
// ordinals number variables by first declaration (or first appearance),
// which makes the component invariant under consistent renaming.
// (def-site kind, target ordinal, source ordinal) -> occurrence count. The
// kind keeps a lone `x += y` edge from matching an unrelated `z++`.
using EdgeBag = std::map<std::tuple<std::string, int, int>, int>;

const lang::NameRef* base_name(const lang::Expr& e) {
    if (const auto* n = e.as<lang::NameRef>()) return n;
    if (const auto* ix = e.as<lang::IndexExpr>()) return base_name(*ix->array);
    return nullptr;
}

class DataflowBuilder {
public:
    void add_method(const lang::Method& m) {
        names_.clear();
        for (const auto& p : m.params) ordinal(p.name);
        lang::walk_stmts(*m.body, [&](const lang::Stmt& s) {
            if (const auto* decl = s.as<lang::VarDeclStmt>())
                for (const auto& item : decl->items) ordinal(item.name);
        });

        lang::walk_stmts(*m.body, [&](const lang::Stmt& s) {
            if (const auto* decl = s.as<lang::VarDeclStmt>())
                for (const auto& item : decl->items)
                    if (item.init) add_edges("init", ordinal(item.name), *item.init);
        });
        lang::walk_stmt_exprs(*m.body, [&](const lang::Expr& e) {
            if (const auto* asg = e.as<lang::AssignExpr>()) {
                const lang::NameRef* target = base_name(*asg->target);
                if (!target) return;
                int tid = ordinal(target->name);
                add_edges(asg->op, tid, *asg->value);
                // Compound assignment reads its target; an indexed target
                // also reads the array reference and the index.
                if (asg->op != "=" || !asg->target->as<lang::NameRef>())
                    add_edges(asg->op, tid, *asg->target);
            } else if (const auto* un = e.as<lang::UnaryExpr>()) {
                if (un->op == "++" || un->op == "--") {
                    const lang::NameRef* target = base_name(*un->operand);
                    if (target) add_edges(un->op, ordinal(target->name), *un->operand);
                }
            }
        });
    }

    const EdgeBag& edges() const { return edges_; }

private:
    int ordinal(const std::string& name) {
        auto it = names_.find(name);
        if (it != names_.end()) return it->second;
        int id = next_ordinal_++;
        names_.emplace(name, id);
        return id;
    }

    void add_edges(const std::string& kind, int target, const lang::Expr& source) {
        lang::walk_exprs(source, [&](const lang::Expr& e) {
            if (const auto* ref = e.as<lang::NameRef>())
                ++edges_[{kind, target, ordinal(ref->name)}];
        });
    }

    std::map<std::string, int> names_;  // per method
    int next_ordinal_ = 0;              // program-wide
    EdgeBag edges_;
};

EdgeBag dataflow_edges(const lang::Ast& ast) {
    DataflowBuilder b;
    for (const auto& m : ast.unit.methods) b.add_method(m);
    return b.edges();
}

double dataflow_match(const lang::Ast& cand, const lang::Ast& ref) {
    EdgeBag ce = dataflow_edges(cand), re = dataflow_edges(ref);
    long total = 0, matched = 0;
    for (const auto& [edge, count] : ce) {
        total += count;
        auto it = re.find(edge);
        if (it != re.end()) matched += std::min(count, it->second);
    }
    if (total == 0) return re.empty() ? 1.0 : 0.0;
    return static_cast<double>(matched) / static_cast<double>(total);
}

std::optional<lang::Ast> try_parse(std::string_view source) {
    try {
        return lang::parse_source(source);
    } catch (const lang::ParseError&) {
        return std::nullopt;
    }
}

}  // namespace

CodeBleuScore codebleu(std::string_view candidate, std::string_view reference,
                       const CodeBleuWeights& weights) {
    CodeBleuScore s;
    s.weights = weights;

    std::vector<std::string> ct = lexemes_of(candidate);
    std::vector<std::string> rt = lexemes_of(reference);
    s.ngram = bleu4(ct, rt, [](const std::string&) { return 1.0; });
    s.weighted_ngram =
        bleu4(ct, rt, [](const std::string& t) { return lang::is_keyword(t) ? 5.0 : 1.0; });

    std::optional<lang::Ast> ca = try_parse(candidate);
    std::optional<lang::Ast> ra = try_parse(reference);
    if (ca && ra) {
        s.ast_match = ast_match(*ca, *ra);
        s.dataflow_match = dataflow_match(*ca, *ra);
    } else {
        s.parse_fallback = true;
    }

    s.total = weights.alpha * s.ngram + weights.beta * s.weighted_ngram +
              weights.gamma * s.ast_match + weights.delta * s.dataflow_match;
    return s;
}

SimilarityQuad similarity_quad(std::string_view c_ft, std::string_view c_orig,
                               std::string_view c_base, std::string_view c_tool,
                               const CodeBleuWeights& weights) {
    SimilarityQuad q;
    q.s1 = codebleu(c_ft, c_orig, weights);
    q.s2 = codebleu(c_ft, c_base, weights);
    q.s3 = codebleu(c_base, c_orig, weights);
    q.s4 = codebleu(c_ft, c_tool, weights);
    return q;
}

int token_count(std::string_view source) {
    return static_cast<int>(lang::tokenize(source).significant().size());
}

}  // namespace obfkit::metrics
