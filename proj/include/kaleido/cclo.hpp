#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "kaleido/decorated.hpp"
#include "kaleido/relstruct.hpp"
#include "kaleido/tree.hpp"

namespace kaleido {

/// Total strict order on the vertices of an unrooted tree, as a rank map.
struct TreeLinearOrder {
    Tree tree;
    std::map<int, int> ranks;

    TreeLinearOrder(Tree t, std::map<int, int> r) : tree(std::move(t)), ranks(std::move(r)) {
        std::set<int> vals;
        for (int v : tree.vertices()) {
            auto it = ranks.find(v);
            if (it == ranks.end()) throw std::invalid_argument("order: not total on the vertices");
            if (!vals.insert(it->second).second) throw std::invalid_argument("order: duplicate rank");
        }
        if (ranks.size() != tree.size()) throw std::invalid_argument("order: rank assigned to unknown vertex");
    }

    bool less(int x, int y) const { return ranks.at(x) < ranks.at(y); }

    friend bool operator==(const TreeLinearOrder&, const TreeLinearOrder&) = default;
};

/// Per-tree geometric cache: betweenness plus the collinear tuples needed by
/// the order predicates, so scanning many orders on one tree stays cheap.
class LineData {
public:
    explicit LineData(const Tree& t) : verts_(t.vertices()) {
        n_ = verts_.size();
        for (std::size_t i = 0; i < n_; ++i) idx_[verts_[i]] = i;
        bt_.assign(n_ * n_ * n_, 0);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) {
                for (int v : t.path(verts_[i], verts_[j])) bt_[(i * n_ + static_cast<std::size_t>(idx_.at(v))) * n_ + j] = 1;
            }
        for (std::size_t a = 0; a < n_; ++a)
            for (std::size_t b = 0; b < n_; ++b) {
                if (a == b) continue;
                for (std::size_t c = 0; c < n_; ++c) {
                    if (c == a || c == b) continue;
                    if (bt(a, b, c)) triples_.push_back({verts_[a], verts_[b], verts_[c]});
                    for (std::size_t d = 0; d < n_; ++d) {
                        if (d == a || d == b || d == c) continue;
                        if (bt(a, b, c) && bt(a, c, d)) quads_.push_back({verts_[a], verts_[b], verts_[c], verts_[d]});
                    }
                }
            }
        // quintuples (z1, y1, x, y2, z2) collinear in this order; only y1, x,
        // y2 need to be distinct
        for (std::size_t z1 = 0; z1 < n_; ++z1)
            for (std::size_t y1 = 0; y1 < n_; ++y1)
                for (std::size_t x = 0; x < n_; ++x) {
                    if (x == y1 || !bt(z1, y1, x)) continue;
                    for (std::size_t y2 = 0; y2 < n_; ++y2) {
                        if (y2 == x || y2 == y1 || !bt(z1, x, y2) || !bt(y1, x, y2)) continue;
                        for (std::size_t z2 = 0; z2 < n_; ++z2) {
                            if (bt(z1, y2, z2) && bt(y1, y2, z2) && bt(x, y2, z2))
                                quints_.push_back({verts_[z1], verts_[y1], verts_[x], verts_[y2], verts_[z2]});
                        }
                    }
                }
    }

    bool between(int x, int y, int z) const {
        return bt(static_cast<std::size_t>(idx_.at(x)), static_cast<std::size_t>(idx_.at(y)),
                  static_cast<std::size_t>(idx_.at(z)));
    }

    const std::vector<std::array<int, 3>>& triples() const { return triples_; }
    const std::vector<std::array<int, 4>>& quads() const { return quads_; }
    const std::vector<std::array<int, 5>>& quints() const { return quints_; }

private:
    bool bt(std::size_t a, std::size_t b, std::size_t c) const { return bt_[(a * n_ + b) * n_ + c] != 0; }

    std::vector<int> verts_;
    std::map<int, int> idx_;
    std::size_t n_ = 0;
    std::vector<char> bt_;
    std::vector<std::array<int, 3>> triples_;
    std::vector<std::array<int, 4>> quads_;
    std::vector<std::array<int, 5>> quints_;
};

struct OrderWitness {
    bool ok = true;
    std::vector<int> tuple;  // geometric-order witness when the check fails
};

/// No collinear triple (x1, x2, x3) may satisfy x1 < x3 < x2.
inline OrderWitness is_converging(const TreeLinearOrder& o, const LineData& ld) {
    for (const auto& t : ld.triples())
        if (o.less(t[0], t[2]) && o.less(t[2], t[1])) return {false, {t[0], t[1], t[2]}};
    return {};
}

inline OrderWitness is_converging(const TreeLinearOrder& o) { return is_converging(o, LineData(o.tree)); }

/// No collinear quadruple (x1, x2, x3, x4) may satisfy x2 < x3 < x1 < x4.
/// Convexity is defined for converging orders only.
inline OrderWitness is_convex(const TreeLinearOrder& o, const LineData& ld) {
    if (!is_converging(o, ld).ok) throw std::invalid_argument("is_convex: order is not converging");
    for (const auto& q : ld.quads())
        if (o.less(q[1], q[2]) && o.less(q[2], q[0]) && o.less(q[0], q[3]))
            return {false, {q[0], q[1], q[2], q[3]}};
    return {};
}

inline OrderWitness is_convex(const TreeLinearOrder& o) { return is_convex(o, LineData(o.tree)); }

/// Finite reading of the original convexity definition: m(x, y) is the
/// least vertex on [x, y]; every x' before it must sit below every y' after
/// it. Equivalence with the 4-point pattern is reported, never assumed.
inline bool is_convex_duchesne(const TreeLinearOrder& o, const LineData& ld) {
    if (!is_converging(o, ld).ok) throw std::invalid_argument("is_convex_duchesne: order is not converging");
    for (int x : o.tree.vertices())
        for (int y : o.tree.vertices()) {
            if (x == y || !o.less(x, y)) continue;
            auto p = o.tree.path(x, y);
            std::size_t mi = 0;
            for (std::size_t i = 1; i < p.size(); ++i)
                if (o.less(p[i], p[mi])) mi = i;
            for (std::size_t i = 0; i < mi; ++i)
                for (std::size_t j = mi + 1; j < p.size(); ++j)
                    if (o.less(p[j], p[i])) return false;
        }
    return true;
}

inline bool is_convex_duchesne(const TreeLinearOrder& o) { return is_convex_duchesne(o, LineData(o.tree)); }

/// All converging convex orders on t, in lexicographic rank order.
inline std::vector<TreeLinearOrder> enumerate_cclo(const Tree& t, std::size_t max_vertices = 8) {
    if (t.size() > max_vertices) throw std::invalid_argument("enumerate_cclo: tree exceeds the configured bound");
    LineData ld(t);
    const auto& vs = t.vertices();
    std::vector<int> perm(vs.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
    std::vector<TreeLinearOrder> out;
    do {
        std::map<int, int> ranks;
        for (std::size_t i = 0; i < vs.size(); ++i) ranks[vs[i]] = perm[i];
        TreeLinearOrder o(t, std::move(ranks));
        if (is_converging(o, ld).ok && is_convex(o, ld).ok) out.push_back(std::move(o));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

/// Five-point law (1): collinear (z1, y1, x, y2, z2) with x < y1 < y2
/// forces z1 < z2.
inline OrderWitness check_five_point_1(const TreeLinearOrder& o, const LineData& ld) {
    for (const auto& q : ld.quints()) {
        if (o.less(q[2], q[1]) && o.less(q[1], q[3])) {
            if (q[0] == q[4]) continue;
            if (!o.less(q[0], q[4])) return {false, {q[0], q[1], q[2], q[3], q[4]}};
        }
    }
    return {};
}

/// Five-point law (2): for x < y and two components around y avoiding x, the
/// comparison between the components is independent of the representatives.
inline OrderWitness check_five_point_2(const TreeLinearOrder& o, const LineData& ld) {
    const Tree& t = o.tree;
    for (int y : t.vertices()) {
        const auto& ns = t.neighbors(y);
        if (ns.size() < 2) continue;
        std::map<int, std::vector<int>> comp;  // direction -> vertices inside
        for (int v : t.vertices()) {
            if (v == y) continue;
            comp[t.path(y, v)[1]].push_back(v);
        }
        for (int x : t.vertices()) {
            if (x == y || !o.less(x, y)) continue;
            int xdir = t.path(y, x)[1];
            for (std::size_t i = 0; i < ns.size(); ++i)
                for (std::size_t j = 0; j < ns.size(); ++j) {
                    if (i == j || ns[i] == xdir || ns[j] == xdir) continue;
                    const auto& a1 = comp.at(ns[i]);
                    const auto& a2 = comp.at(ns[j]);
                    bool some_less = false, some_ge = false;
                    for (int z1 : a1)
                        for (int z2 : a2) (o.less(z1, z2) ? some_less : some_ge) = true;
                    if (some_less && some_ge) {
                        for (int z1 : a1)
                            for (int z2 : a2)
                                if (!o.less(z1, z2)) return {false, {x, y, z1, z2}};
                    }
                }
        }
    }
    return {};
}

/// Rooted configuration: a decorated tree over the pointed-linear-order
/// alphabet, every decoration a total order with the parent direction least.
class OrderedConfiguration {
public:
    explicit OrderedConfiguration(DecoratedTree dt) : dt_(std::move(dt)) {
        Signature expected{{{kOrderRelation, 2}}, true};
        if (dt_.alphabet() != expected)
            throw std::invalid_argument("configuration: alphabet must be the pointed linear order");
        auto total = total_order_constraint();
        for (const auto& [v, d] : dt_.stored_decorations()) {
            if (auto why = total.check(d))
                throw std::invalid_argument("configuration: decoration at vertex " + std::to_string(v) +
                                            " is not a total order (" + *why + ")");
            for (int e : d.universe())
                if (e != *d.constant() && !d.holds(kOrderRelation, {*d.constant(), e}))
                    throw std::invalid_argument("configuration: parent direction must be least at vertex " +
                                                std::to_string(v));
        }
    }

    const DecoratedTree& dt() const { return dt_; }

    friend bool operator==(const OrderedConfiguration&, const OrderedConfiguration&) = default;

private:
    DecoratedTree dt_;
};

inline Signature pointed_order_signature() { return Signature{{{kOrderRelation, 2}}, true}; }

/// The factor map: x precedes y when x is below y, and otherwise when the
/// decoration at their meet ranks the component of x before the component of
/// y. The result is always converging and convex; this is checked.
inline TreeLinearOrder pi_order(const OrderedConfiguration& cfg) {
    const DecoratedTree& dt = cfg.dt();
    const RootedTree& rt = dt.rt();
    std::vector<int> vs;
    for (int v : rt.vertices())
        if (v != rt.root()) vs.push_back(v);
    auto lt = [&](int x, int y) {
        if (x == y) return false;
        int m = rt.meet(x, y);
        if (m == x) return true;
        if (m == y) return false;
        int dx = detail::step_toward(rt.tree(), m, x);
        int dy = detail::step_toward(rt.tree(), m, y);
        return dt.decoration(m).holds(kOrderRelation, {dx, dy});
    };
    std::vector<int> sorted = vs;
    std::sort(sorted.begin(), sorted.end(), lt);
    std::map<int, int> ranks;
    for (std::size_t i = 0; i < sorted.size(); ++i) ranks[sorted[i]] = static_cast<int>(i);
    // the tree without its root (the root is a leaf hanging off r)
    std::vector<std::pair<int, int>> edges;
    for (auto [a, b] : rt.tree().edges())
        if (a != rt.root() && b != rt.root()) edges.emplace_back(a, b);
    TreeLinearOrder out(Tree(vs, edges), std::move(ranks));
    LineData ld(out.tree);
    if (!is_converging(out, ld).ok || !is_convex(out, ld).ok)
        throw std::logic_error("pi_order: image is not a converging convex order");
    return out;
}

namespace detail {

inline RelStructure order_decoration(const Signature& sig, const std::vector<int>& universe, int parent,
                                     const std::vector<int>& rest_in_order) {
    std::set<std::vector<int>> lt;
    std::vector<int> chain{parent};
    chain.insert(chain.end(), rest_in_order.begin(), rest_in_order.end());
    for (std::size_t i = 0; i < chain.size(); ++i)
        for (std::size_t j = i + 1; j < chain.size(); ++j) lt.insert({chain[i], chain[j]});
    return RelStructure(sig, universe, {{kOrderRelation, lt}}, parent);
}

}  // namespace detail

/// Builds a configuration whose pi_order restricted to t matches o: the root
/// hangs above a fresh vertex between the minimum x0 and its greatest
/// neighbor x1; around every original vertex the components are ordered with
/// the parent least and the rest by their representatives.
inline OrderedConfiguration realize_cclo(const Tree& t, const TreeLinearOrder& o) {
    if (!(o.tree == t)) throw std::invalid_argument("realize_cclo: order is not over the given tree");
    LineData ld(t);
    if (!is_converging(o, ld).ok || !is_convex(o, ld).ok)
        throw std::invalid_argument("realize_cclo: order must be converging and convex");
    Signature sig = pointed_order_signature();

    if (t.size() == 1) {
        auto [t2, xi] = t.attach_leaf(t.vertices().front());
        return OrderedConfiguration(DecoratedTree(RootedTree(t2, xi), sig, {}));
    }

    int x0 = t.vertices().front();
    for (int v : t.vertices())
        if (o.less(v, x0)) x0 = v;
    int x1 = t.neighbors(x0).front();
    for (int n : t.neighbors(x0))
        if (o.less(x1, n)) x1 = n;

    auto [t2, w] = t.insert_between(x0, x1);
    auto [t3, xi] = t2.attach_leaf(w);
    RootedTree rt(t3, xi);
    std::map<int, RelStructure> dec;
    {
        std::vector<int> uni = t3.neighbors(w);  // {x0, x1, xi}
        dec.emplace(w, detail::order_decoration(sig, uni, xi, {x0, x1}));
    }
    for (int v : t.vertices()) {
        auto kids = rt.children(v);
        if (kids.empty()) continue;
        std::vector<int> uni = t3.neighbors(v);
        int parent = rt.parent(v);
        std::vector<int> rest;
        for (int n : uni)
            if (n != parent) rest.push_back(n);
        // rank components by the least original vertex inside them; the
        // comparison is representative-independent for a CCLO
        auto comp_rank = [&](int n) {
            int best = -1;
            for (int z : t.vertices()) {
                if (z == v) continue;
                if (t3.path(v, z)[1] != n) continue;
                if (best == -1 || o.less(z, best)) best = z;
            }
            return o.ranks.at(best);
        };
        std::sort(rest.begin(), rest.end(), [&](int p, int q) { return comp_rank(p) < comp_rank(q); });
        dec.emplace(v, detail::order_decoration(sig, uni, parent, rest));
    }
    return OrderedConfiguration(DecoratedTree(std::move(rt), sig, std::move(dec)));
}

/// Two distinct configurations over t whose pi_orders agree on t: one rooted
/// between x0 and x1, the other rooted in a fresh component at x0 with the
/// component of x1 pushed to the top.
inline std::pair<OrderedConfiguration, OrderedConfiguration> collapse_pair(const Tree& t, int x0, int x1) {
    if (!t.adjacent(x0, x1)) throw std::invalid_argument("collapse_pair: vertices must be adjacent");
    Signature sig = pointed_order_signature();

    auto canonical_rest = [&](const std::vector<int>& uni, int parent) {
        std::vector<int> rest;
        for (int n : uni)
            if (n != parent) rest.push_back(n);
        return rest;  // neighbor ids ascending: the shared arbitrary order
    };

    // q1: root above a fresh w subdividing x0-x1
    auto [t2, w] = t.insert_between(x0, x1);
    auto [t3, xi1] = t2.attach_leaf(w);
    RootedTree rt1(t3, xi1);
    std::map<int, RelStructure> dec1;
    dec1.emplace(w, detail::order_decoration(sig, t3.neighbors(w), xi1, {x0, x1}));
    for (int v : t.vertices()) {
        if (rt1.children(v).empty()) continue;
        dec1.emplace(v, detail::order_decoration(sig, t3.neighbors(v), rt1.parent(v),
                                                 canonical_rest(t3.neighbors(v), rt1.parent(v))));
    }

    // q2: root in a fresh component attached at x0, component of x1 greatest
    auto [t4, xi2] = t.attach_leaf(x0);
    RootedTree rt2(t4, xi2);
    std::map<int, RelStructure> dec2;
    for (int v : t.vertices()) {
        if (rt2.children(v).empty()) continue;
        int parent = rt2.parent(v);
        std::vector<int> rest = canonical_rest(t4.neighbors(v), parent);
        if (v == x0) {
            // same order as q1 at x0 on the shared components, x1 on top
            std::erase(rest, x1);
            rest.push_back(x1);
        }
        dec2.emplace(v, detail::order_decoration(sig, t4.neighbors(v), parent, rest));
    }

    return {OrderedConfiguration(DecoratedTree(std::move(rt1), sig, std::move(dec1))),
            OrderedConfiguration(DecoratedTree(std::move(rt2), sig, std::move(dec2)))};
}

}  // namespace kaleido
