#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "kaleido/exec.hpp"
#include "kaleido/relstruct.hpp"
#include "kaleido/tree.hpp"

namespace kaleido {

/// Rooted tree whose non-root vertices carry relational structures on their
/// component sets. The universe of the structure at v is the set of
/// neighbors of v, naming the components around v; the constant is the
/// parent direction. The root carries nothing, and leaf decorations are the
/// implicit one-point structure on the parent direction.
class DecoratedTree {
public:
    DecoratedTree(RootedTree rt, Signature alphabet, std::map<int, RelStructure> decorations)
        : rt_(std::move(rt)), alpha_(std::move(alphabet)), dec_(std::move(decorations)) {
        if (!alpha_.has_constant) throw std::invalid_argument("decorated: alphabet must carry a constant");
        alpha_.validate();
        for (int v : rt_.vertices()) {
            bool internal = v != rt_.root() && !rt_.children(v).empty();
            auto it = dec_.find(v);
            if (!internal) {
                if (it != dec_.end())
                    throw std::invalid_argument("decorated: only internal non-root vertices carry decorations");
                continue;
            }
            if (it == dec_.end())
                throw std::invalid_argument("decorated: missing decoration at vertex " + std::to_string(v));
            const RelStructure& d = it->second;
            if (d.signature() != alpha_) throw std::invalid_argument("decorated: decoration signature mismatch");
            if (d.universe() != rt_.tree().neighbors(v))
                throw std::invalid_argument("decorated: decoration universe must equal the component set");
            if (*d.constant() != rt_.parent(v))
                throw std::invalid_argument("decorated: decoration constant must be the parent direction");
        }
    }

    const RootedTree& rt() const { return rt_; }
    const Signature& alphabet() const { return alpha_; }
    int root() const { return rt_.root(); }
    std::size_t size() const { return rt_.size(); }

    /// Decoration at a non-root vertex; leaves materialize the one-point
    /// structure on the parent direction.
    RelStructure decoration(int v) const {
        auto it = dec_.find(v);
        if (it != dec_.end()) return it->second;
        if (v == rt_.root()) throw std::invalid_argument("decorated: no decoration at the root");
        return RelStructure(alpha_, {rt_.parent(v)}, {}, rt_.parent(v));
    }

    bool has_stored_decoration(int v) const { return dec_.count(v) > 0; }
    const std::map<int, RelStructure>& stored_decorations() const { return dec_; }

    friend bool operator==(const DecoratedTree& a, const DecoratedTree& b) {
        return a.rt_ == b.rt_ && a.alpha_ == b.alpha_ && a.dec_ == b.dec_;
    }

private:
    RootedTree rt_;
    Signature alpha_;
    std::map<int, RelStructure> dec_;
};

/// Injective vertex map preserving the root, meets, and component
/// decorations; `rooted` records that f(r_S) = r_T was required.
struct DecEmbedding {
    std::map<int, int> map;
    bool rooted = false;

    int operator()(int v) const { return map.at(v); }
    friend bool operator==(const DecEmbedding&, const DecEmbedding&) = default;
};

/// g after f: (g ∘ f)(x) = g(f(x)).
inline DecEmbedding compose(const DecEmbedding& g, const DecEmbedding& f) {
    DecEmbedding out;
    out.rooted = g.rooted && f.rooted;
    for (const auto& [k, v] : f.map) out.map[k] = g.map.at(v);
    return out;
}

struct EmbedOptions {
    bool rooted = false;               // require f(r_S) = r_T
    std::optional<int> anchor;         // require f(r_S) = anchor (stronger than rooted)
    std::optional<std::set<int>> allowed;  // restrict images to this set (root always allowed)
};

namespace detail {

inline int step_toward(const Tree& t, int from, int to) { return t.path(from, to)[1]; }

/// Relation check at s-vertex u once f is defined on u and all its
/// neighbors: the induced component map must embed decoration_S(u) into
/// decoration_T(f(u)).
inline bool decoration_compatible(const DecoratedTree& s, const DecoratedTree& t, const std::map<int, int>& f,
                                  int u) {
    int fu = f.at(u);
    if (u == s.root()) return fu == t.root();  // no relations live at the root
    if (fu == t.root()) return false;
    const auto& nbrs = s.rt().tree().neighbors(u);
    std::map<int, int> comp_map;
    std::set<int> images;
    for (int y : nbrs) {
        int dir = step_toward(t.rt().tree(), fu, f.at(y));
        if (!images.insert(dir).second) return false;  // components must stay distinct
        comp_map[y] = dir;
    }
    // the parent direction must map to the parent direction
    if (comp_map.at(s.rt().parent(u)) != t.rt().parent(fu)) return false;
    RelStructure ds = s.decoration(u);
    RelStructure dt = t.decoration(fu);
    for (const auto& [name, arity] : s.alphabet().relations) {
        std::vector<int> idx(static_cast<std::size_t>(arity), 0);
        for (;;) {
            std::vector<int> a(static_cast<std::size_t>(arity)), b(static_cast<std::size_t>(arity));
            for (int i = 0; i < arity; ++i) {
                a[i] = nbrs[idx[i]];
                b[i] = comp_map.at(a[i]);
            }
            if (ds.holds(name, a) != dt.holds(name, b)) return false;
            int p = arity - 1;
            while (p >= 0 && idx[p] + 1 == static_cast<int>(nbrs.size())) idx[p--] = 0;
            if (p < 0) break;
            ++idx[p];
        }
    }
    return true;
}

struct EmbedSearch {
    const DecoratedTree& s;
    const DecoratedTree& t;
    std::vector<int> order;            // s-vertices, root first, then by (height, id)
    std::vector<int> targets;          // candidate images (non-root t-vertices, ascending)
    std::optional<int> forced_anchor;  // image of r_S, when constrained
    std::vector<DecEmbedding> out;
    bool rooted_flag = false;

    EmbedSearch(const DecoratedTree& s_, const DecoratedTree& t_, const EmbedOptions& opts) : s(s_), t(t_) {
        order.push_back(s.root());
        std::vector<int> rest;
        for (int v : s.rt().vertices())
            if (v != s.root()) rest.push_back(v);
        std::sort(rest.begin(), rest.end(), [&](int a, int b) {
            return std::pair(s.rt().height(a), a) < std::pair(s.rt().height(b), b);
        });
        order.insert(order.end(), rest.begin(), rest.end());
        for (int v : t.rt().vertices())
            if (v != t.root() && (!opts.allowed || opts.allowed->count(v))) targets.push_back(v);
        if (opts.anchor)
            forced_anchor = *opts.anchor;
        else if (opts.rooted)
            forced_anchor = t.size() > 1 ? std::optional<int>(t.rt().rvertex()) : std::nullopt;
        rooted_flag = opts.rooted || opts.anchor.has_value();
    }

    bool meets_ok(const std::map<int, int>& f, int v, int w) const {
        for (const auto& [u, fu] : f) {
            if (u == v || u == s.root()) continue;
            int m = s.rt().meet(v, u);
            auto it = f.find(m);
            if (it == f.end()) continue;  // cannot happen with height order, kept for safety
            if (t.rt().meet(w, fu) != it->second) return false;
        }
        return true;
    }

    void run(std::size_t pos, std::map<int, int>& f, std::set<int>& used, std::map<int, int>& pending) {
        if (pos == order.size()) {
            out.push_back(DecEmbedding{f, rooted_flag});
            return;
        }
        int v = order[pos];
        bool anchored = forced_anchor && s.size() > 1 && v == s.rt().rvertex();
        for (int w : targets) {
            if (anchored && w != *forced_anchor) continue;
            if (used.count(w)) continue;
            if (!meets_ok(f, v, w)) continue;
            f[v] = w;
            used.insert(w);
            auto nbh = closed_neighborhood(v);
            for (int u : nbh) --pending.at(u);
            bool ok = true;
            for (int u : nbh)
                if (pending.at(u) == 0 && !decoration_compatible(s, t, f, u)) {
                    ok = false;
                    break;
                }
            if (ok) run(pos + 1, f, used, pending);
            for (int u : nbh) ++pending.at(u);
            used.erase(w);
            f.erase(v);
        }
    }

    std::vector<int> closed_neighborhood(int v) const {
        std::vector<int> ns = s.rt().tree().neighbors(v);
        ns.push_back(v);
        return ns;
    }

    std::vector<DecEmbedding> search() {
        std::map<int, int> pending;
        for (int v : s.rt().vertices()) pending[v] = static_cast<int>(s.rt().tree().neighbors(v).size()) + 1;
        std::map<int, int> f;
        std::set<int> used;
        // the root is forced
        f[s.root()] = t.root();
        for (int u : closed_neighborhood(s.root())) --pending.at(u);
        for (int u : closed_neighborhood(s.root()))
            if (pending.at(u) == 0 && !decoration_compatible(s, t, f, u)) return {};
        if (order.size() == 1) {
            out.push_back(DecEmbedding{f, rooted_flag});
            return out;
        }
        int nthreads = exec::thread_count();
        if (nthreads > 1 && order.size() > 1) {
            // fan out over the image of the first non-root vertex; each task is
            // independent and results are merged in candidate order
            int v = order[1];
            bool anchored = forced_anchor && s.size() > 1 && v == s.rt().rvertex();
            std::vector<int> firsts;
            for (int w : targets) {
                if (anchored && w != *forced_anchor) continue;
                firsts.push_back(w);
            }
            auto chunks = exec::parallel_map(firsts.size(), [&](std::size_t i) {
                EmbedSearch worker(s, t, EmbedOptions{});
                worker.order = order;
                worker.targets = targets;
                worker.forced_anchor = forced_anchor;
                worker.rooted_flag = rooted_flag;
                std::map<int, int> wf = f;
                std::set<int> wused;
                std::map<int, int> wpending = pending;
                int w = firsts[i];
                if (!worker.meets_ok(wf, v, w)) return std::vector<DecEmbedding>{};
                wf[v] = w;
                wused.insert(w);
                auto nbh = worker.closed_neighborhood(v);
                for (int u : nbh) --wpending.at(u);
                bool ok = true;
                for (int u : nbh)
                    if (wpending.at(u) == 0 && !decoration_compatible(s, t, wf, u)) {
                        ok = false;
                        break;
                    }
                if (ok) worker.run(2, wf, wused, wpending);
                return std::move(worker.out);
            });
            for (auto& c : chunks) out.insert(out.end(), c.begin(), c.end());
        } else {
            run(1, f, used, pending);
        }
        std::sort(out.begin(), out.end(), [](const DecEmbedding& a, const DecEmbedding& b) { return a.map < b.map; });
        return out;
    }
};

}  // namespace detail

/// All embeddings of s into t, in canonical order (lexicographic by image
/// tuple over the sorted vertices of s). Non-rooted embeddings may send r_S
/// anywhere, so the search ranges over all target vertices.
inline std::vector<DecEmbedding> dec_embeddings(const DecoratedTree& s, const DecoratedTree& t,
                                                const EmbedOptions& opts = {}) {
    if (s.alphabet() != t.alphabet()) throw std::invalid_argument("dec_embeddings: alphabet signature mismatch");
    detail::EmbedSearch search(s, t, opts);
    return search.search();
}

inline std::vector<DecEmbedding> dec_embeddings(const DecoratedTree& s, const DecoratedTree& t, bool rooted) {
    EmbedOptions o;
    o.rooted = rooted;
    return dec_embeddings(s, t, o);
}

/// Self-embeddings of a finite structure are surjective, so this is the full
/// automorphism group. Every automorphism fixes the root and r.
inline std::vector<DecEmbedding> dec_automorphisms(const DecoratedTree& t) {
    return dec_embeddings(t, t, EmbedOptions{});
}

/// Full predicate check, independent of how a map was produced.
inline bool is_dec_embedding(const DecoratedTree& s, const DecoratedTree& t, const DecEmbedding& f) {
    if (s.alphabet() != t.alphabet()) return false;
    std::set<int> imgs;
    for (int v : s.rt().vertices()) {
        auto it = f.map.find(v);
        if (it == f.map.end() || !t.rt().tree().has_vertex(it->second)) return false;
        if (!imgs.insert(it->second).second) return false;
    }
    if (f.map.at(s.root()) != t.root()) return false;
    const auto& vs = s.rt().vertices();
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = i + 1; j < vs.size(); ++j) {
            int m = s.rt().meet(vs[i], vs[j]);
            if (t.rt().meet(f.map.at(vs[i]), f.map.at(vs[j])) != f.map.at(m)) return false;
        }
    for (int v : vs)
        if (!detail::decoration_compatible(s, t, f.map, v)) return false;
    if (f.rooted && s.size() > 1 && f.map.at(s.rt().rvertex()) != t.rt().rvertex()) return false;
    return true;
}

/// The tower tree A[h]: root 0, r = 1, every internal vertex carries a copy
/// of `a` on its components, children tagged by the non-constant elements of
/// `a` in ascending order, and every leaf at height h+1.
inline DecoratedTree build_Ah(const RelStructure& a, int h) {
    if (!a.constant()) throw std::invalid_argument("build_Ah: alphabet needs a constant");
    if (a.size() < 2) throw std::invalid_argument("build_Ah: alphabet needs at least two elements");
    if (h < 0) throw std::invalid_argument("build_Ah: height must be nonnegative");
    int c = *a.constant();
    std::vector<int> elems;  // non-constant elements, ascending
    for (int e : a.universe())
        if (e != c) elems.push_back(e);

    std::vector<int> vertices{0, 1};
    std::vector<std::pair<int, int>> edges{{0, 1}};
    std::map<int, int> level{{0, 0}, {1, 1}};
    std::map<int, std::vector<int>> kids;
    std::vector<int> frontier{1};
    int next = 2;
    for (int lvl = 2; lvl <= h + 1; ++lvl) {
        std::vector<int> nf;
        for (int p : frontier)
            for (std::size_t i = 0; i < elems.size(); ++i) {
                int v = next++;
                vertices.push_back(v);
                edges.emplace_back(p, v);
                level[v] = lvl;
                kids[p].push_back(v);
                nf.push_back(v);
            }
        frontier = std::move(nf);
    }
    RootedTree rt(Tree(vertices, edges), 0);
    std::map<int, RelStructure> dec;
    for (int v : vertices) {
        if (v == 0 || kids[v].empty()) continue;
        std::map<int, int> lambda_inv;  // alphabet element -> component
        lambda_inv[c] = rt.parent(v);
        for (std::size_t i = 0; i < elems.size(); ++i) lambda_inv[elems[i]] = kids[v][i];
        std::map<std::string, std::set<std::vector<int>>> interp;
        for (const auto& [name, arity] : a.signature().relations)
            for (const auto& tup : a.tuples(name)) {
                std::vector<int> u;
                for (int e : tup) u.push_back(lambda_inv.at(e));
                interp[name].insert(std::move(u));
            }
        std::vector<int> uni = rt.tree().neighbors(v);
        dec.emplace(v, RelStructure(a.signature(), uni, std::move(interp), rt.parent(v)));
    }
    return DecoratedTree(std::move(rt), a.signature(), std::move(dec));
}

/// Child of v in a build_Ah output tagged by alphabet element `label`
/// (valid only for trees produced by build_Ah: children were created in
/// ascending label order).
inline int ah_child_for_label(const DecoratedTree& ah, const RelStructure& a, int v, int label) {
    int c = *a.constant();
    std::vector<int> elems;
    for (int e : a.universe())
        if (e != c) elems.push_back(e);
    auto kids = ah.rt().children(v);
    for (std::size_t i = 0; i < elems.size(); ++i)
        if (elems[i] == label) return kids.at(i);
    throw std::invalid_argument("ah_child_for_label: not a non-constant alphabet element");
}

/// Substructure generated by `gens`: the meet closure together with the
/// root, decorations restricted to surviving components. The closure has at
/// most 2|gens| vertices besides the root.
inline DecoratedTree dec_generated(const DecoratedTree& t, const std::vector<int>& gens) {
    if (gens.empty()) throw std::invalid_argument("dec_generated: empty generator set");
    std::set<int> cl{t.root()};
    for (int g : gens) {
        if (g == t.root()) throw std::invalid_argument("dec_generated: generators must exclude the root");
        if (!t.rt().tree().has_vertex(g)) throw std::invalid_argument("dec_generated: unknown vertex");
        cl.insert(g);
    }
    for (bool grew = true; grew;) {
        grew = false;
        std::vector<int> cur(cl.begin(), cl.end());
        for (std::size_t i = 0; i < cur.size(); ++i)
            for (std::size_t j = i + 1; j < cur.size(); ++j)
                if (cl.insert(t.rt().meet(cur[i], cur[j])).second) grew = true;
    }
    Tree sub = t.rt().tree().generated_subtree(std::vector<int>(cl.begin(), cl.end()));
    RootedTree rt(sub, t.root());
    std::map<int, RelStructure> dec;
    for (int v : rt.vertices()) {
        if (v == rt.root() || rt.children(v).empty()) continue;
        std::map<int, int> comp_of;  // new neighbor -> old component direction
        for (int n : rt.tree().neighbors(v)) comp_of[n] = detail::step_toward(t.rt().tree(), v, n);
        RelStructure old = t.decoration(v);
        std::map<std::string, std::set<std::vector<int>>> interp;
        const auto& nbrs = rt.tree().neighbors(v);
        for (const auto& [name, arity] : t.alphabet().relations) {
            std::vector<int> idx(static_cast<std::size_t>(arity), 0);
            for (;;) {
                std::vector<int> a(static_cast<std::size_t>(arity)), b(static_cast<std::size_t>(arity));
                for (int i = 0; i < arity; ++i) {
                    a[i] = nbrs[idx[i]];
                    b[i] = comp_of.at(a[i]);
                }
                if (old.holds(name, b)) interp[name].insert(a);
                int p = arity - 1;
                while (p >= 0 && idx[p] + 1 == static_cast<int>(nbrs.size())) idx[p--] = 0;
                if (p < 0) break;
                ++idx[p];
            }
        }
        dec.emplace(v, RelStructure(t.alphabet(), nbrs, std::move(interp), rt.parent(v)));
    }
    return DecoratedTree(std::move(rt), t.alphabet(), std::move(dec));
}

struct AhEmbedding {
    RelStructure alphabet;
    int h = 0;
    DecoratedTree target;
    DecEmbedding embedding;
    bool degenerate = false;
};

namespace detail {

inline RelStructure canonical_relabel(const RelStructure& a) {
    std::map<int, int> f;
    int next = 1;
    f[*a.constant()] = 0;
    for (int e : a.universe())
        if (e != *a.constant()) f[e] = next++;
    return a.relabeled(f);
}

}  // namespace detail

/// Finds an alphabet a and a rooted embedding of s into A[h] with
/// h = height(s) - 1, following the level-by-level construction: the image
/// of each successor is the child tagged by its component's alphabet label.
inline AhEmbedding embed_into_Ah(const DecoratedTree& s) {
    std::vector<int> internal;
    for (int v : s.rt().vertices())
        if (v != s.root() && !s.rt().children(v).empty()) internal.push_back(v);

    if (internal.empty()) {
        // s is {xi} or {xi, x}: one-point alphabet, h = 0
        Signature sig = s.alphabet();
        RelStructure a(sig, {0}, {}, 0);
        RootedTree rt(Tree({0, 1}, {{0, 1}}), 0);
        DecoratedTree target(rt, sig, {});
        DecEmbedding e;
        e.rooted = true;
        e.map[s.root()] = 0;
        if (s.size() > 1) e.map[s.rt().rvertex()] = 1;
        return AhEmbedding{std::move(a), 0, std::move(target), std::move(e), true};
    }

    std::vector<RelStructure> decs;
    for (int v : internal) decs.push_back(s.decoration(v));

    // prefer an existing decoration that absorbs all the others
    std::optional<RelStructure> alpha;
    std::vector<std::size_t> by_size(decs.size());
    for (std::size_t i = 0; i < by_size.size(); ++i) by_size[i] = i;
    std::sort(by_size.begin(), by_size.end(),
              [&](std::size_t i, std::size_t j) { return decs[i].size() > decs[j].size(); });
    for (std::size_t i : by_size) {
        bool all = true;
        for (const auto& d : decs)
            if (d.embeddings_into(decs[i]).empty()) {
                all = false;
                break;
            }
        if (all) {
            alpha = detail::canonical_relabel(decs[i]);
            break;
        }
    }
    if (!alpha) {
        // free amalgamation over the constant, folding in only what is missing
        RelStructure base = decs[by_size.front()];
        for (const auto& d : decs) {
            if (!d.embeddings_into(base).empty()) continue;
            RelStructure point = base.induced({*base.constant()});
            std::map<int, int> f1{{*base.constant(), *base.constant()}};
            std::map<int, int> f2{{*base.constant(), *d.constant()}};
            auto res = amalgamate(point, base, d, f1, f2);
            base = *res.amalgam;
        }
        alpha = detail::canonical_relabel(base);
    }

    int h = s.rt().tree_height() - 1;
    DecoratedTree target = build_Ah(*alpha, h);
    DecEmbedding e;
    e.rooted = true;
    e.map[s.root()] = target.root();
    e.map[s.rt().rvertex()] = target.rt().rvertex();
    // process internal vertices by height so parents are mapped first
    std::sort(internal.begin(), internal.end(), [&](int a, int b) {
        return std::pair(s.rt().height(a), a) < std::pair(s.rt().height(b), b);
    });
    for (int v : internal) {
        auto embs = s.decoration(v).embeddings_into(*alpha);
        if (embs.empty()) throw std::logic_error("embed_into_Ah: decoration does not embed into the alphabet");
        const auto& lambda = embs.front();
        for (int y : s.rt().children(v)) e.map[y] = ah_child_for_label(target, *alpha, e.map.at(v), lambda.at(y));
    }
    return AhEmbedding{std::move(*alpha), h, std::move(target), std::move(e), false};
}

}  // namespace kaleido
