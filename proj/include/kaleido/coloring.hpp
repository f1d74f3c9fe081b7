#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "kaleido/tree.hpp"

namespace kaleido {

/// Palette coloring of components. Colorings are partial but injective on
/// the components around any single vertex; the rooted variant additionally
/// sends every parent direction to the distinguished constant.
struct ColoredTree {
    Tree tree;
    std::optional<int> root;
    std::vector<std::string> palette;
    std::optional<std::string> constant;
    std::map<Component, std::string> colors;

    ColoredTree(Tree t, std::optional<int> r, std::vector<std::string> pal, std::optional<std::string> c,
                std::map<Component, std::string> cols)
        : tree(std::move(t)), root(r), palette(std::move(pal)), constant(c), colors(std::move(cols)) {
        std::sort(palette.begin(), palette.end());
        if (std::adjacent_find(palette.begin(), palette.end()) != palette.end())
            throw std::invalid_argument("colored tree: duplicate palette symbol");
        if (constant && !has_symbol(*constant)) throw std::invalid_argument("colored tree: constant not in palette");
        if (root && !tree.has_vertex(*root)) throw std::invalid_argument("colored tree: root not a vertex");
        for (const auto& [comp, sym] : colors) {
            if (!tree.has_vertex(comp.anchor) || !tree.adjacent(comp.anchor, comp.direction))
                throw std::invalid_argument("colored tree: color assigned to a non-component");
            if (!has_symbol(sym)) throw std::invalid_argument("colored tree: color outside palette");
        }
        for (int v : tree.vertices()) {
            std::set<std::string> seen;
            for (int n : tree.neighbors(v)) {
                auto it = colors.find(Component{v, n});
                if (it != colors.end() && !seen.insert(it->second).second)
                    throw std::invalid_argument("colored tree: colors around vertex " + std::to_string(v) +
                                                " are not injective");
            }
        }
    }

    bool has_symbol(const std::string& s) const { return std::binary_search(palette.begin(), palette.end(), s); }

    std::optional<std::string> color(const Component& c) const {
        auto it = colors.find(c);
        return it == colors.end() ? std::nullopt : std::optional<std::string>(it->second);
    }

    bool total() const {
        for (int v : tree.vertices())
            for (int n : tree.neighbors(v))
                if (!colors.count(Component{v, n})) return false;
        return true;
    }

    /// Parent direction of v in the rooted tree.
    Component rho(int v) const {
        if (!root) throw std::invalid_argument("colored tree: rho needs a root");
        if (v == *root) throw std::invalid_argument("colored tree: rho undefined at the root");
        return Component{v, tree.path(v, *root)[1]};
    }

    /// Every non-root vertex has its parent direction colored with the constant.
    bool is_rooted_coloring() const {
        if (!root || !constant) return false;
        for (int v : tree.vertices()) {
            if (v == *root) continue;
            auto c = color(rho(v));
            if (!c || *c != *constant) return false;
        }
        return true;
    }

    friend bool operator==(const ColoredTree&, const ColoredTree&) = default;
};

/// A permutation-like injective partial map on the palette induced by an
/// automorphism at a vertex.
struct LocalAction {
    std::map<std::string, std::string> map;
    friend bool operator==(const LocalAction&, const LocalAction&) = default;
};

using VertexMap = std::map<int, int>;

inline bool is_tree_automorphism(const Tree& t, const VertexMap& g) {
    std::set<int> imgs;
    for (int v : t.vertices()) {
        auto it = g.find(v);
        if (it == g.end() || !t.has_vertex(it->second) || !imgs.insert(it->second).second) return false;
    }
    for (auto [a, b] : t.edges())
        if (!t.adjacent(g.at(a), g.at(b))) return false;
    return true;
}

/// All automorphisms of the underlying tree, in lexicographic order.
inline std::vector<VertexMap> tree_automorphisms(const Tree& t) {
    std::vector<VertexMap> out;
    const auto& vs = t.vertices();
    VertexMap g;
    std::set<int> used;
    // order vertices by a BFS so degree mismatches prune early
    std::vector<int> order{vs.front()};
    std::set<int> seen{vs.front()};
    for (std::size_t i = 0; i < order.size(); ++i)
        for (int w : t.neighbors(order[i]))
            if (seen.insert(w).second) order.push_back(w);
    auto rec = [&](auto&& self, std::size_t pos) -> void {
        if (pos == order.size()) {
            out.push_back(g);
            return;
        }
        int v = order[pos];
        for (int w : vs) {
            if (used.count(w) || t.degree(w) != t.degree(v)) continue;
            bool ok = true;
            for (int n : t.neighbors(v)) {
                auto it = g.find(n);
                if (it != g.end() && !t.adjacent(w, it->second)) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            g[v] = w;
            used.insert(w);
            self(self, pos + 1);
            used.erase(w);
            g.erase(v);
        }
    };
    rec(rec, 0);
    std::sort(out.begin(), out.end());
    return out;
}

inline VertexMap compose_vertex_maps(const VertexMap& g, const VertexMap& f) {
    VertexMap out;
    for (const auto& [k, v] : f) out[k] = g.at(v);
    return out;
}

/// Local action of g at x: the palette map kappa_{gx} . g . kappa_x^{-1},
/// collected over the colored components around x whose images are colored.
inline LocalAction local_action(const VertexMap& g, int x, const ColoredTree& ct) {
    if (!is_tree_automorphism(ct.tree, g)) throw std::invalid_argument("local_action: not a tree automorphism");
    if (!ct.tree.has_vertex(x)) throw std::invalid_argument("local_action: unknown vertex");
    LocalAction act;
    for (int n : ct.tree.neighbors(x)) {
        auto src = ct.color(Component{x, n});
        if (!src) continue;
        auto dst = ct.color(Component{g.at(x), g.at(n)});
        if (!dst) continue;
        act.map[*src] = *dst;
    }
    return act;
}

struct CocycleCheck {
    bool holds = true;
    std::optional<int> witness;  // first vertex violating the identity
};

/// Checks alpha(g g', x) = alpha(g, g' x) . alpha(g', x) at every vertex.
inline CocycleCheck check_cocycle_identity(const VertexMap& g, const VertexMap& gp, const ColoredTree& ct) {
    if (!is_tree_automorphism(ct.tree, g) || !is_tree_automorphism(ct.tree, gp))
        throw std::invalid_argument("check_cocycle_identity: inputs must be tree automorphisms");
    VertexMap ggp = compose_vertex_maps(g, gp);
    for (int x : ct.tree.vertices()) {
        LocalAction lhs = local_action(ggp, x, ct);
        LocalAction a1 = local_action(gp, x, ct);
        LocalAction a2 = local_action(g, gp.at(x), ct);
        LocalAction rhs;
        for (const auto& [m, m1] : a1.map) {
            auto it = a2.map.find(m1);
            if (it != a2.map.end()) rhs.map[m] = it->second;
        }
        if (!(lhs == rhs)) return CocycleCheck{false, x};
    }
    return CocycleCheck{};
}

/// sigma must fix the constant and carry every symbol to the constant:
/// sigma(c) = id and sigma(a)(a) = c.
inline void validate_sigma(const ColoredTree& ct, const std::map<std::string, std::map<std::string, std::string>>& sigma) {
    if (!ct.constant) throw std::invalid_argument("derive_root_coloring: palette needs a constant");
    for (const auto& sym : ct.palette) {
        auto it = sigma.find(sym);
        if (it == sigma.end()) throw std::invalid_argument("sigma: missing entry for symbol " + sym);
        const auto& perm = it->second;
        std::set<std::string> imgs;
        for (const auto& s : ct.palette) {
            auto jt = perm.find(s);
            if (jt == perm.end() || !ct.has_symbol(jt->second) || !imgs.insert(jt->second).second)
                throw std::invalid_argument("sigma: value at " + sym + " is not a palette permutation");
        }
        if (sym == *ct.constant) {
            for (const auto& s : ct.palette)
                if (perm.at(s) != s) throw std::invalid_argument("sigma: sigma(c) must be the identity");
        }
        if (perm.at(sym) != *ct.constant)
            throw std::invalid_argument("sigma: sigma(a) must carry a to the constant");
    }
}

/// Derives a rooted coloring: kappa*(a) = sigma(kappa(rho(x))) . kappa(a)
/// for a component a around x. Components around the root are dropped.
inline ColoredTree derive_root_coloring(const ColoredTree& ct,
                                        const std::map<std::string, std::map<std::string, std::string>>& sigma) {
    if (!ct.root) throw std::invalid_argument("derive_root_coloring: needs a rooted tree");
    validate_sigma(ct, sigma);
    std::map<Component, std::string> out;
    for (int v : ct.tree.vertices()) {
        if (v == *ct.root) continue;
        auto base = ct.color(ct.rho(v));
        bool any = false;
        for (int n : ct.tree.neighbors(v))
            if (ct.colors.count(Component{v, n})) any = true;
        if (!any) continue;
        if (!base)
            throw std::invalid_argument("derive_root_coloring: parent direction uncolored at vertex " +
                                        std::to_string(v));
        const auto& perm = sigma.at(*base);
        for (int n : ct.tree.neighbors(v)) {
            auto c = ct.color(Component{v, n});
            if (c) out[Component{v, n}] = perm.at(*c);
        }
    }
    return ColoredTree(ct.tree, ct.root, ct.palette, ct.constant, std::move(out));
}

/// One-step kaleidoscopic witness: inserts a fresh vertex z strictly between
/// x and y (subdividing the edge of the path incident to x) colored a toward
/// x and b toward y; all old colors carry over.
inline std::pair<ColoredTree, int> kaleidoscopic_extend(const ColoredTree& ct, int x, int y, const std::string& a,
                                                        const std::string& b) {
    if (x == y) throw std::invalid_argument("kaleidoscopic_extend: x == y");
    if (a == b) throw std::invalid_argument("kaleidoscopic_extend: colors must differ");
    if (!ct.has_symbol(a) || !ct.has_symbol(b)) throw std::invalid_argument("kaleidoscopic_extend: color not in palette");
    auto p = ct.tree.path(x, y);
    int n1 = p[1];
    auto [nt, z] = ct.tree.insert_between(x, n1);
    std::map<Component, std::string> cols;
    for (const auto& [comp, sym] : ct.colors) {
        Component c = comp;
        if (c.anchor == x && c.direction == n1) c.direction = z;
        if (c.anchor == n1 && c.direction == x) c.direction = z;
        cols[c] = sym;
    }
    cols[Component{z, x}] = a;
    cols[Component{z, n1}] = b;  // the component of z containing y
    return {ColoredTree(std::move(nt), ct.root, ct.palette, ct.constant, std::move(cols)), z};
}

/// Rooted variant: y must lie strictly between the root and x; the fresh
/// vertex becomes the new parent of x, colored a toward x and with the
/// constant toward the root.
inline std::pair<ColoredTree, int> root_kaleidoscopic_extend(const ColoredTree& ct, int x, int y,
                                                             const std::string& a) {
    if (!ct.root || !ct.constant) throw std::invalid_argument("root_kaleidoscopic_extend: needs root and constant");
    if (x == *ct.root || y == x || y == *ct.root)
        throw std::invalid_argument("root_kaleidoscopic_extend: bad vertices");
    if (!ct.tree.between(*ct.root, y, x))
        throw std::invalid_argument("root_kaleidoscopic_extend: y must lie strictly between the root and x");
    if (a == *ct.constant) throw std::invalid_argument("root_kaleidoscopic_extend: color must differ from constant");
    int px = ct.tree.path(x, y)[1];  // first step from x toward the root side
    auto [nt, z] = ct.tree.insert_between(x, px);
    std::map<Component, std::string> cols;
    for (const auto& [comp, sym] : ct.colors) {
        Component c = comp;
        if (c.anchor == x && c.direction == px) c.direction = z;
        if (c.anchor == px && c.direction == x) c.direction = z;
        cols[c] = sym;
    }
    cols[Component{z, x}] = a;
    cols[Component{z, px}] = *ct.constant;
    return {ColoredTree(std::move(nt), ct.root, ct.palette, ct.constant, std::move(cols)), z};
}

/// The canonical sigma: sigma(c) = id, sigma(a) = the transposition (a c).
inline std::map<std::string, std::map<std::string, std::string>> transposition_sigma(
    const std::vector<std::string>& palette, const std::string& constant) {
    std::map<std::string, std::map<std::string, std::string>> sigma;
    for (const auto& a : palette) {
        auto& perm = sigma[a];
        for (const auto& s : palette) perm[s] = s;
        if (a != constant) {
            perm[a] = constant;
            perm[constant] = a;
        }
    }
    return sigma;
}

}  // namespace kaleido
