#pragma once

// Invariant batteries behind the `suite` subcommand: every corpus document
// is dispatched on its schema and checked against the laws of its module.

#include <algorithm>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "kaleido/kaleido.hpp"

namespace kaleido::suite {

using io::json;

struct Check {
    std::string file;
    std::string invariant;
    bool pass = true;
    std::string detail;
};

namespace detail {

inline std::string tuple_str(const std::vector<int>& t) {
    std::string s = "(";
    for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
    return s + ")";
}

inline void tree_battery(const std::string& file, const Tree& t, std::vector<Check>& out) {
    Check med{file, "median-permutation"};
    Check btw{file, "betweenness-laws"};
    Check cmp{file, "component-partition"};
    const auto& vs = t.vertices();
    for (int x : vs)
        for (int y : vs)
            for (int z : vs) {
                int m = t.median(x, y, z);
                if (t.median(x, z, y) != m || t.median(y, x, z) != m || t.median(y, z, x) != m ||
                    t.median(z, x, y) != m || t.median(z, y, x) != m) {
                    med.pass = false;
                    med.detail = "triple " + tuple_str({x, y, z});
                }
                if (t.between(x, y, z) != t.between(z, y, x)) {
                    btw.pass = false;
                    btw.detail = "symmetry at " + tuple_str({x, y, z});
                }
                if (t.between(x, y, z) && t.between(x, z, y) && y != z) {
                    btw.pass = false;
                    btw.detail = "antisymmetry at " + tuple_str({x, y, z});
                }
            }
    for (int v : vs) {
        std::set<int> dirs;
        for (int y : vs)
            if (y != v) dirs.insert(t.component_of(v, y).direction);
        if (static_cast<int>(dirs.size()) != t.degree(v)) {
            cmp.pass = false;
            cmp.detail = "vertex " + std::to_string(v);
        }
    }
    Check gen{file, "generated-idempotent"};
    for (int x : vs)
        for (int y : vs)
            for (int z : vs) {
                std::vector<int> gens{x, y, z};
                Tree g = t.generated_subtree(gens);
                Tree g2 = t.generated_subtree(g.vertices());
                if (!(g == g2)) {
                    gen.pass = false;
                    gen.detail = "generators " + tuple_str(gens);
                }
            }
    out.push_back(med);
    out.push_back(btw);
    out.push_back(cmp);
    out.push_back(gen);
}

inline void rooted_battery(const std::string& file, const RootedTree& rt, std::vector<Check>& out) {
    Check c{file, "meet-semilattice"};
    const auto& vs = rt.vertices();
    for (int x : vs) {
        if (rt.meet(x, x) != x || rt.meet(x, rt.root()) != rt.root()) {
            c.pass = false;
            c.detail = "vertex " + std::to_string(x);
        }
        for (int y : vs) {
            if (rt.meet(x, y) != rt.meet(y, x)) c.pass = false;
            if (rt.leq(x, y) && rt.leq(y, x) && x != y) c.pass = false;
            for (int z : vs) {
                if (rt.meet(rt.meet(x, y), z) != rt.meet(x, rt.meet(y, z))) c.pass = false;
                if (rt.leq(x, y) && rt.leq(y, z) && !rt.leq(x, z)) c.pass = false;
                if (rt.tree().median(x, y, z) != rt.meet(x, y) && rt.tree().median(x, y, z) != rt.meet(y, z) &&
                    rt.tree().median(x, y, z) != rt.meet(x, z))
                    c.pass = false;
                if (!c.pass && c.detail.empty()) c.detail = "triple " + tuple_str({x, y, z});
            }
        }
    }
    out.push_back(c);
}

inline void cclo_battery(const std::string& file, const Tree& t, std::size_t max_size, std::vector<Check>& out) {
    if (t.size() > max_size) return;
    LineData ld(t);
    auto orders = enumerate_cclo(t, max_size);
    Check fp{file, "cclo-five-point"};
    Check rtp{file, "pi-round-trip"};
    for (const auto& o : orders) {
        auto w1 = check_five_point_1(o, ld);
        auto w2 = check_five_point_2(o, ld);
        if (!w1.ok || !w2.ok) {
            fp.pass = false;
            fp.detail = "witness " + tuple_str(!w1.ok ? w1.tuple : w2.tuple);
        }
        OrderedConfiguration cfg = realize_cclo(t, o);
        TreeLinearOrder back = pi_order(cfg);
        for (int x : t.vertices())
            for (int y : t.vertices())
                if (x != y && o.less(x, y) != back.less(x, y)) {
                    rtp.pass = false;
                    rtp.detail = "pair (" + std::to_string(x) + "," + std::to_string(y) + ")";
                }
    }
    fp.detail = fp.detail.empty() ? std::to_string(orders.size()) + " orders" : fp.detail;
    out.push_back(fp);
    out.push_back(rtp);
    Check col{file, "collapse-agreement"};
    for (auto [x0, x1] : t.edges())
        for (int swap = 0; swap < 2; ++swap) {
            int a = swap ? x1 : x0, b = swap ? x0 : x1;
            auto [q1, q2] = collapse_pair(t, a, b);
            if (q1 == q2) {
                col.pass = false;
                col.detail = "configurations coincide at edge (" + std::to_string(a) + "," + std::to_string(b) + ")";
            }
            TreeLinearOrder p1 = pi_order(q1), p2 = pi_order(q2);
            for (int x : t.vertices())
                for (int y : t.vertices())
                    if (x != y && p1.less(x, y) != p2.less(x, y)) {
                        col.pass = false;
                        col.detail = "pi orders disagree at (" + std::to_string(x) + "," + std::to_string(y) + ")";
                    }
        }
    out.push_back(col);
}

inline void alphabet_battery(const std::string& file, const RelStructure& a, std::uint64_t seed,
                             std::vector<Check>& out) {
    if (!a.constant()) {
        out.push_back({file, "alphabet-constant", false, "alphabet documents must carry a constant"});
        return;
    }
    Check grp{file, "automorphism-group"};
    auto autos = a.automorphisms();
    bool has_id = false;
    for (const auto& g : autos) {
        bool id = true;
        for (int e : a.universe())
            if (g.at(e) != e) id = false;
        if (id) has_id = true;
        // closure under composition
        for (const auto& h : autos) {
            std::map<int, int> gh;
            for (int e : a.universe()) gh[e] = g.at(h.at(e));
            if (std::find(autos.begin(), autos.end(), gh) == autos.end()) {
                grp.pass = false;
                grp.detail = "composition escapes the group";
            }
        }
    }
    if (!has_id) {
        grp.pass = false;
        grp.detail = "identity missing";
    }
    out.push_back(grp);
    if (a.size() < 2) return;

    Check census{file, "ah-level-census"};
    for (int h = 0; h <= 3 && census.pass; ++h) {
        DecoratedTree ah = build_Ah(a, h);
        long long expect = 1;
        for (int lvl = 1; lvl <= h + 1; ++lvl) {
            if (static_cast<long long>(ah.rt().vertices_at_height(lvl).size()) != expect) {
                census.pass = false;
                census.detail = "h=" + std::to_string(h) + " level " + std::to_string(lvl);
            }
            expect *= static_cast<long long>(a.size()) - 1;
        }
    }
    out.push_back(census);

    if (a.size() <= 3) {
        Check wreath{file, "wreath-law"};
        auto aut_c = a.automorphisms().size();
        std::size_t prev = dec_automorphisms(build_Ah(a, 0)).size();
        for (int h = 0; h <= 2; ++h) {
            std::size_t next = dec_automorphisms(build_Ah(a, h + 1)).size();
            std::size_t expect = aut_c;
            for (int i = 1; i < static_cast<int>(a.size()); ++i) expect *= prev;
            if (next != expect) {
                wreath.pass = false;
                wreath.detail = "h=" + std::to_string(h) + ": " + std::to_string(next) + " vs " +
                                std::to_string(expect);
            }
            prev = next;
        }
        out.push_back(wreath);
    }

    Check cof{file, "cofinality"};
    for (int h = 0; h <= 2; ++h) {
        DecoratedTree ah = build_Ah(a, h);
        auto res = embed_into_Ah(ah);
        if (!is_dec_embedding(ah, res.target, res.embedding)) {
            cof.pass = false;
            cof.detail = "A[" + std::to_string(h) + "] does not re-embed";
        }
    }
    out.push_back(cof);

    Check bound{file, "generated-bound"};
    DecoratedTree a2 = build_Ah(a, 2);
    std::vector<int> pool;
    for (int v : a2.rt().vertices())
        if (v != a2.root()) pool.push_back(v);
    std::mt19937_64 rng(seed);
    for (int trial = 0; trial < 20; ++trial) {
        int k = 1 + static_cast<int>(rng() % 3);
        std::vector<int> gens;
        for (int i = 0; i < k; ++i) gens.push_back(pool[rng() % pool.size()]);
        std::sort(gens.begin(), gens.end());
        gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
        DecoratedTree g = dec_generated(a2, gens);
        if (g.size() - 1 > 2 * gens.size()) {
            bound.pass = false;
            bound.detail = "generators " + tuple_str(gens);
        }
    }
    out.push_back(bound);
}

inline void colored_battery(const std::string& file, const ColoredTree& ct, std::vector<Check>& out) {
    Check coc{file, "cocycle-identity"};
    auto autos = tree_automorphisms(ct.tree);
    for (const auto& g : autos)
        for (const auto& gp : autos) {
            auto res = check_cocycle_identity(g, gp, ct);
            if (!res.holds) {
                coc.pass = false;
                coc.detail = "witness vertex " + std::to_string(*res.witness);
            }
        }
    out.push_back(coc);
    if (ct.root && ct.constant && ct.total()) {
        Check der{file, "derive-root-coloring"};
        auto sigma = transposition_sigma(ct.palette, *ct.constant);
        ColoredTree derived = derive_root_coloring(ct, sigma);
        if (!derived.is_rooted_coloring()) {
            der.pass = false;
            der.detail = "derived coloring violates the rooted invariant";
        }
        out.push_back(der);
    }
    if (ct.palette.size() >= 2 && ct.tree.size() >= 2) {
        Check ext{file, "extend-restriction"};
        auto [x, y] = ct.tree.edges().front();
        auto [extended, z] = kaleidoscopic_extend(ct, x, y, ct.palette[0], ct.palette[1]);
        for (const auto& [comp, sym] : ct.colors) {
            Component c = comp;
            if (c.anchor == x && c.direction == y) c.direction = z;
            if (c.anchor == y && c.direction == x) c.direction = z;
            auto ncol = extended.color(c);
            if (!ncol || *ncol != sym) {
                ext.pass = false;
                ext.detail = "color lost at (" + std::to_string(comp.anchor) + "," + std::to_string(comp.direction) +
                             ")";
            }
        }
        out.push_back(ext);
    }
}

inline std::map<std::map<int, int>, int> ramseyIndex(const std::vector<DecEmbedding>& embs) {
    std::map<std::map<int, int>, int> idx;
    for (std::size_t i = 0; i < embs.size(); ++i) idx[embs[i].map] = static_cast<int>(i);
    return idx;
}

inline void arrow_battery(const std::string& file, const io::ArrowDoc& doc, std::vector<Check>& out) {
    Check snd{file, "arrow-soundness"};
    ArrowVerdict v = decide_arrow(doc.instance);
    if (!v.holds) {
        auto replay = find_mono_copy(doc.instance.C, doc.instance.B, doc.instance.A, *v.bad_coloring,
                                     doc.instance.rooted);
        if (replay) {
            snd.pass = false;
            snd.detail = "bad coloring admits a monochromatic copy";
        }
    } else {
        // literal enumeration agreement on small instances
        EmbedOptions opts;
        opts.rooted = doc.instance.rooted;
        auto EA = dec_embeddings(doc.instance.A, doc.instance.C, opts);
        if (EA.size() <= 12) {
            auto EB = dec_embeddings(doc.instance.B, doc.instance.C, opts);
            auto EAB = dec_embeddings(doc.instance.A, doc.instance.B, opts);
            auto index = ramseyIndex(EA);
            std::vector<std::vector<int>> sets;
            for (const auto& f : EB) {
                std::set<int> ids;
                for (const auto& g : EAB) ids.insert(index.at(compose(f, g).map));
                sets.emplace_back(ids.begin(), ids.end());
            }
            long long total = 1;
            for (std::size_t i = 0; i < EA.size(); ++i) total *= doc.instance.k;
            bool any_bad = false;
            std::vector<int> colors(EA.size(), 0);
            for (long long code = 0; code < total && !any_bad; ++code) {
                long long c = code;
                for (std::size_t i = 0; i < colors.size(); ++i) {
                    colors[i] = static_cast<int>(c % doc.instance.k);
                    c /= doc.instance.k;
                }
                bool bad = true;
                for (const auto& s : sets) {
                    bool mono = true;
                    for (std::size_t i = 1; i < s.size(); ++i)
                        if (colors[s[i]] != colors[s[0]]) mono = false;
                    if (mono || s.empty()) {
                        bad = false;
                        break;
                    }
                }
                if (bad) any_bad = true;
            }
            if (any_bad) {
                snd.pass = false;
                snd.detail = "literal enumeration found a bad coloring the search missed";
            }
        }
    }
    out.push_back(snd);
    Check k1{file, "arrow-k1-law"};
    EmbedOptions opts;
    opts.rooted = doc.instance.rooted;
    bool b_embeds = !dec_embeddings(doc.instance.B, doc.instance.C, opts).empty();
    ArrowInstance one = doc.instance;
    one.k = 1;
    if (decide_arrow(one).holds != b_embeds) {
        k1.pass = false;
        k1.detail = "k=1 verdict disagrees with Emb(B,C) emptiness";
    }
    out.push_back(k1);
}

inline void order_battery(const std::string& file, const TreeLinearOrder& o, std::vector<Check>& out) {
    LineData ld(o.tree);
    Check chk{file, "cclo-check"};
    auto conv = is_converging(o, ld);
    if (!conv.ok) {
        chk.pass = false;
        chk.detail = "not converging, witness " + tuple_str(conv.tuple);
    } else {
        auto cvx = is_convex(o, ld);
        if (!cvx.ok) {
            chk.pass = false;
            chk.detail = "not convex, witness " + tuple_str(cvx.tuple);
        }
    }
    out.push_back(chk);
    if (chk.pass) {
        Check fp{file, "cclo-five-point"};
        auto w1 = check_five_point_1(o, ld);
        auto w2 = check_five_point_2(o, ld);
        if (!w1.ok || !w2.ok) {
            fp.pass = false;
            fp.detail = "witness " + tuple_str(!w1.ok ? w1.tuple : w2.tuple);
        }
        out.push_back(fp);
        Check du{file, "duchesne-comparison"};
        du.detail = is_convex_duchesne(o, ld) ? "agrees" : "disagrees";
        out.push_back(du);
    }
}

inline void decorated_battery(const std::string& file, const DecoratedTree& dt, std::uint64_t seed,
                              std::vector<Check>& out) {
    Check closure{file, "automorphism-closure"};
    auto autos = dec_automorphisms(dt);
    for (const auto& g : autos)
        for (const auto& h : autos) {
            DecEmbedding gh = compose(g, h);
            bool found = false;
            for (const auto& x : autos)
                if (x.map == gh.map) found = true;
            if (!found) {
                closure.pass = false;
                closure.detail = "composition escapes the group";
            }
        }
    out.push_back(closure);

    Check cof{file, "cofinality"};
    auto res = embed_into_Ah(dt);
    if (!res.degenerate && !is_dec_embedding(dt, res.target, res.embedding)) {
        cof.pass = false;
        cof.detail = "embed_into_Ah output fails the embedding predicate";
    }
    out.push_back(cof);

    std::vector<int> pool;
    for (int v : dt.rt().vertices())
        if (v != dt.root()) pool.push_back(v);
    if (!pool.empty()) {
        Check bound{file, "generated-bound"};
        std::mt19937_64 rng(seed);
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<int> gens{pool[rng() % pool.size()], pool[rng() % pool.size()]};
            std::sort(gens.begin(), gens.end());
            gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
            DecoratedTree g = dec_generated(dt, gens);
            if (g.size() - 1 > 2 * gens.size()) {
                bound.pass = false;
                bound.detail = "generators " + tuple_str(gens);
            }
        }
        out.push_back(bound);
    }
}

}  // namespace detail

/// Runs the battery appropriate to one corpus document.
inline std::vector<Check> run_file(const std::string& name, const json& j, std::size_t max_size, std::uint64_t seed) {
    std::vector<Check> out;
    try {
        std::string schema = io::schema_of(j);
        if (schema == io::kTreeSchema) {
            Tree t = io::tree_from_body(j);
            detail::tree_battery(name, t, out);
            if (j.contains("root")) detail::rooted_battery(name, io::rooted_tree_from_json(j), out);
            detail::cclo_battery(name, t, max_size, out);
        } else if (schema == io::kRelStructSchema) {
            detail::alphabet_battery(name, io::relstruct_from_json(j), seed, out);
        } else if (schema == io::kColoredSchema) {
            detail::colored_battery(name, io::colored_from_json(j), out);
        } else if (schema == io::kArrowSchema) {
            detail::arrow_battery(name, io::arrow_from_json(j), out);
        } else if (schema == io::kOrderSchema) {
            detail::order_battery(name, io::order_from_json(j), out);
        } else if (schema == io::kDecoratedSchema) {
            detail::decorated_battery(name, io::decorated_from_json(j), seed, out);
        } else {
            out.push_back({name, "schema", false, "unrecognized schema " + schema});
        }
    } catch (const std::exception& e) {
        out.push_back({name, "parse", false, e.what()});
    }
    return out;
}

struct SuiteResult {
    json report;
    bool all_pass = true;
};

inline SuiteResult run_corpus(const std::string& dir, std::size_t max_size, std::uint64_t seed) {
    namespace fs = std::filesystem;
    std::vector<std::pair<std::string, std::string>> files;  // (name, contents)
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
            std::ifstream in(entry.path());
            std::stringstream ss;
            ss << in.rdbuf();
            files.emplace_back(entry.path().filename().string(), ss.str());
        }
    std::sort(files.begin(), files.end());
    std::uint64_t digest = io::fnv1a64("corpus");
    for (const auto& [name, body] : files) digest = io::fnv1a64(body, io::fnv1a64(name, digest));

    auto per_file = exec::parallel_map(files.size(), [&](std::size_t i) {
        const auto& [name, body] = files[i];
        json j;
        try {
            j = json::parse(body);
        } catch (const json::exception& e) {
            return std::vector<Check>{{name, "parse", false, e.what()}};
        }
        return run_file(name, j, max_size, seed ^ io::fnv1a64(name));
    });

    json checks = json::array();
    std::size_t passed = 0, failed = 0;
    for (const auto& chunk : per_file)
        for (const auto& c : chunk) {
            checks.push_back(json{{"file", c.file}, {"invariant", c.invariant}, {"pass", c.pass}, {"detail", c.detail}});
            (c.pass ? passed : failed)++;
        }
    SuiteResult res;
    res.all_pass = failed == 0;
    res.report = json{{"schema", io::kReportSchema},
                      {"version", kVersion},
                      {"command", "suite"},
                      {"inputs", json{{"digest", io::hex64(digest)}, {"files", files.size()}}},
                      {"seed", seed},
                      {"max_size", max_size},
                      {"checks", checks},
                      {"summary", json{{"checks", passed + failed}, {"passed", passed}, {"failed", failed}}}};
    return res;
}

}  // namespace kaleido::suite
