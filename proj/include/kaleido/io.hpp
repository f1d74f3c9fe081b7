#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "kaleido/cclo.hpp"
#include "kaleido/coloring.hpp"
#include "kaleido/decorated.hpp"
#include "kaleido/ramsey.hpp"
#include "kaleido/relstruct.hpp"
#include "kaleido/tree.hpp"

namespace kaleido::io {

using nlohmann::json;

inline constexpr const char* kTreeSchema = "kaleido.tree/1";
inline constexpr const char* kRelStructSchema = "kaleido.relstruct/1";
inline constexpr const char* kDecoratedSchema = "kaleido.decorated/1";
inline constexpr const char* kColoredSchema = "kaleido.colored/1";
inline constexpr const char* kOrderSchema = "kaleido.order/1";
inline constexpr const char* kColoringSchema = "kaleido.coloring/1";
inline constexpr const char* kVerdictSchema = "kaleido.verdict/1";
inline constexpr const char* kArrowSchema = "kaleido.arrow/1";
inline constexpr const char* kChainSchema = "kaleido.chain/1";
inline constexpr const char* kReportSchema = "kaleido.report/1";

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

inline void expect_schema(const json& j, const char* schema) {
    if (!j.is_object() || !j.contains("schema") || j.at("schema") != schema)
        throw ParseError(std::string("expected document with schema ") + schema);
}

inline std::string schema_of(const json& j) {
    if (!j.is_object() || !j.contains("schema") || !j.at("schema").is_string())
        throw ParseError("document has no schema field");
    return j.at("schema").get<std::string>();
}

// ---- tree ----

inline json tree_body(const Tree& t) {
    json j;
    j["vertices"] = t.vertices();
    json es = json::array();
    for (auto [a, b] : t.edges()) es.push_back(json::array({a, b}));
    j["edges"] = es;
    return j;
}

inline Tree tree_from_body(const json& j) {
    std::vector<int> vs = j.at("vertices").get<std::vector<int>>();
    std::vector<std::pair<int, int>> es;
    for (const auto& e : j.at("edges")) es.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    return Tree(std::move(vs), std::move(es));
}

inline json tree_to_json(const Tree& t, std::optional<int> root = std::nullopt) {
    json j = tree_body(t);
    j["schema"] = kTreeSchema;
    if (root) j["root"] = *root;
    return j;
}

inline json rooted_tree_to_json(const RootedTree& rt) { return tree_to_json(rt.tree(), rt.root()); }

inline Tree tree_from_json(const json& j) {
    expect_schema(j, kTreeSchema);
    return tree_from_body(j);
}

inline RootedTree rooted_tree_from_json(const json& j) {
    expect_schema(j, kTreeSchema);
    if (!j.contains("root")) throw ParseError("rooted tree document needs a root field");
    return RootedTree(tree_from_body(j), j.at("root").get<int>());
}

// ---- relational structures ----

inline json signature_to_json(const Signature& sig) {
    json rels = json::array();
    for (const auto& [name, arity] : sig.relations) rels.push_back(json::array({name, arity}));
    return json{{"relations", rels}, {"constant", sig.has_constant}};
}

inline Signature signature_from_json(const json& j) {
    Signature sig;
    for (const auto& r : j.at("relations")) sig.relations.emplace_back(r.at(0).get<std::string>(), r.at(1).get<int>());
    sig.has_constant = j.at("constant").get<bool>();
    sig.validate();
    return sig;
}

inline json relstruct_to_json(const RelStructure& s) {
    json j;
    j["schema"] = kRelStructSchema;
    j["signature"] = signature_to_json(s.signature());
    j["universe"] = s.universe();
    json rels = json::object();
    for (const auto& [name, arity] : s.signature().relations) {
        json ts = json::array();
        for (const auto& t : s.tuples(name)) ts.push_back(t);
        rels[name] = ts;
    }
    j["relations"] = rels;
    if (s.constant()) j["constant"] = *s.constant();
    return j;
}

inline RelStructure relstruct_from_json(const json& j) {
    expect_schema(j, kRelStructSchema);
    Signature sig = signature_from_json(j.at("signature"));
    std::vector<int> uni = j.at("universe").get<std::vector<int>>();
    std::map<std::string, std::set<std::vector<int>>> interp;
    if (j.contains("relations"))
        for (const auto& [name, ts] : j.at("relations").items())
            for (const auto& t : ts) interp[name].insert(t.get<std::vector<int>>());
    std::optional<int> c;
    if (j.contains("constant")) c = j.at("constant").get<int>();
    return RelStructure(std::move(sig), std::move(uni), std::move(interp), c);
}

// ---- decorated trees ----

inline json decorated_to_json(const DecoratedTree& dt) {
    json j = tree_body(dt.rt().tree());
    j["schema"] = kDecoratedSchema;
    j["root"] = dt.root();
    j["alphabet"] = signature_to_json(dt.alphabet());
    json decs = json::object();
    for (const auto& [v, d] : dt.stored_decorations()) {
        json dj;
        dj["universe"] = d.universe();
        json rels = json::object();
        for (const auto& [name, arity] : d.signature().relations) {
            json ts = json::array();
            for (const auto& t : d.tuples(name)) ts.push_back(t);
            rels[name] = ts;
        }
        dj["relations"] = rels;
        dj["constant"] = "parent";
        decs[std::to_string(v)] = dj;
    }
    j["decorations"] = decs;
    return j;
}

inline DecoratedTree decorated_from_json(const json& j) {
    expect_schema(j, kDecoratedSchema);
    if (!j.contains("root")) throw ParseError("decorated tree document needs a root field");
    RootedTree rt(tree_from_body(j), j.at("root").get<int>());
    Signature alpha = signature_from_json(j.at("alphabet"));
    std::map<int, RelStructure> dec;
    if (j.contains("decorations"))
        for (const auto& [key, dj] : j.at("decorations").items()) {
            int v = std::stoi(key);
            std::vector<int> uni = dj.at("universe").get<std::vector<int>>();
            std::map<std::string, std::set<std::vector<int>>> interp;
            if (dj.contains("relations"))
                for (const auto& [name, ts] : dj.at("relations").items())
                    for (const auto& t : ts) interp[name].insert(t.get<std::vector<int>>());
            if (!dj.contains("constant") || dj.at("constant") != "parent")
                throw ParseError("decoration constant must be the string \"parent\"");
            dec.emplace(v, RelStructure(alpha, std::move(uni), std::move(interp), rt.parent(v)));
        }
    return DecoratedTree(std::move(rt), std::move(alpha), std::move(dec));
}

// ---- colored trees ----

inline json colored_to_json(const ColoredTree& ct) {
    json j = tree_body(ct.tree);
    j["schema"] = kColoredSchema;
    if (ct.root) j["root"] = *ct.root;
    j["palette"] = ct.palette;
    if (ct.constant) j["constant"] = *ct.constant;
    json cols = json::array();
    for (const auto& [comp, sym] : ct.colors) cols.push_back(json::array({comp.anchor, comp.direction, sym}));
    j["colors"] = cols;
    return j;
}

inline ColoredTree colored_from_json(const json& j) {
    expect_schema(j, kColoredSchema);
    Tree t = tree_from_body(j);
    std::optional<int> root;
    if (j.contains("root")) root = j.at("root").get<int>();
    std::vector<std::string> palette = j.at("palette").get<std::vector<std::string>>();
    std::optional<std::string> constant;
    if (j.contains("constant")) constant = j.at("constant").get<std::string>();
    std::map<Component, std::string> colors;
    for (const auto& c : j.at("colors"))
        colors[Component{c.at(0).get<int>(), c.at(1).get<int>()}] = c.at(2).get<std::string>();
    return ColoredTree(std::move(t), root, std::move(palette), constant, std::move(colors));
}

// ---- linear orders ----

inline json order_to_json(const TreeLinearOrder& o) {
    json j = tree_body(o.tree);
    j["schema"] = kOrderSchema;
    json ranks = json::object();
    for (const auto& [v, r] : o.ranks) ranks[std::to_string(v)] = r;
    j["ranks"] = ranks;
    return j;
}

inline TreeLinearOrder order_from_json(const json& j) {
    expect_schema(j, kOrderSchema);
    Tree t = tree_from_body(j);
    std::map<int, int> ranks;
    for (const auto& [key, r] : j.at("ranks").items()) ranks[std::stoi(key)] = r.get<int>();
    return TreeLinearOrder(std::move(t), std::move(ranks));
}

// ---- coloring assignments and verdicts ----

inline json coloring_to_json(const ColoringAssignment& c) {
    return json{{"schema", kColoringSchema}, {"k", c.k}, {"colors", c.colors}};
}

inline ColoringAssignment coloring_from_json(const json& j) {
    expect_schema(j, kColoringSchema);
    return ColoringAssignment{j.at("k").get<int>(), j.at("colors").get<std::vector<int>>()};
}

inline json stats_to_json(const ArrowStats& s) {
    return json{{"a_copies", s.a_copies}, {"b_copies", s.b_copies}, {"search_nodes", s.search_nodes}};
}

inline json verdict_to_json(const ArrowVerdict& v) {
    json j{{"schema", kVerdictSchema}, {"holds", v.holds}, {"stats", stats_to_json(v.stats)}};
    if (v.bad_coloring) j["bad_coloring"] = coloring_to_json(*v.bad_coloring);
    return j;
}

// ---- arrow instances ----

struct ArrowDoc {
    ArrowInstance instance;
    std::optional<RelStructure> alphabet;  // set when given as an A[h]-family instance
    int c_height = -1, b_height = -1, a_height = -1;
};

inline ArrowDoc arrow_from_json(const json& j) {
    expect_schema(j, kArrowSchema);
    int k = j.at("k").get<int>();
    bool rooted = j.value("rooted", false);
    if (j.contains("alphabet")) {
        RelStructure alpha = relstruct_from_json(j.at("alphabet"));
        int ch = j.at("C_height").get<int>();
        int bh = j.at("B_height").get<int>();
        int ah = j.at("A_height").get<int>();
        ArrowInstance inst{build_Ah(alpha, ch), build_Ah(alpha, bh), build_Ah(alpha, ah), k, rooted};
        return ArrowDoc{std::move(inst), std::move(alpha), ch, bh, ah};
    }
    ArrowInstance inst{decorated_from_json(j.at("C")), decorated_from_json(j.at("B")),
                       decorated_from_json(j.at("A")), k, rooted};
    return ArrowDoc{std::move(inst), std::nullopt, -1, -1, -1};
}

// ---- proof chains ----

struct ChainDoc {
    std::vector<ChainEntry> entries;
    RelStructure point_alphabet;  // the alphabet of A[ell]
    int ell = 1;
};

inline ChainDoc chain_from_json(const json& j) {
    expect_schema(j, kChainSchema);
    ChainDoc doc{{}, relstruct_from_json(j.at("point_alphabet")), j.at("ell").get<int>()};
    for (const auto& e : j.at("entries"))
        doc.entries.push_back(ChainEntry{relstruct_from_json(e.at("alphabet")), e.at("n").get<int>()});
    return doc;
}

inline json chain_to_json(const ChainDoc& doc) {
    json entries = json::array();
    for (const auto& e : doc.entries) entries.push_back(json{{"alphabet", relstruct_to_json(e.alphabet)}, {"n", e.n}});
    return json{{"schema", kChainSchema},
                {"entries", entries},
                {"point_alphabet", relstruct_to_json(doc.point_alphabet)},
                {"ell", doc.ell}};
}

// ---- files and digests ----

inline json load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return j;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline void save_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << dump(j);
}

inline std::uint64_t fnv1a64(const std::string& data, std::uint64_t seed = 1469598103934665603ull) {
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[i] = digits[v & 0xf];
        v >>= 4;
    }
    return s;
}

}  // namespace kaleido::io
