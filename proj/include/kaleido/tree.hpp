#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace kaleido {

/// One connected piece of tree minus `anchor`, named by the neighbor of
/// `anchor` that lies inside it. Two vertices y1, y2 name the same component
/// around v exactly when v does not lie between them.
struct Component {
    int anchor = -1;
    int direction = -1;
    friend auto operator<=>(const Component&, const Component&) = default;
};

/// Finite combinatorial tree over opaque integer vertex ids. Values are
/// immutable once built; every edit returns a fresh tree. Fresh vertex ids
/// grow monotonically along any chain of edits and are never reused.
class Tree {
public:
    Tree(std::vector<int> vertices, std::vector<std::pair<int, int>> edges) {
        std::sort(vertices.begin(), vertices.end());
        if (vertices.empty()) throw std::invalid_argument("tree: needs at least one vertex");
        if (std::adjacent_find(vertices.begin(), vertices.end()) != vertices.end())
            throw std::invalid_argument("tree: duplicate vertex id");
        vertices_ = std::move(vertices);
        if (edges.size() + 1 != vertices_.size())
            throw std::invalid_argument("tree: edge count must be vertex count - 1");
        for (int v : vertices_) adj_[v] = {};
        for (auto [a, b] : edges) {
            if (a == b) throw std::invalid_argument("tree: self-loop");
            if (!has_vertex(a) || !has_vertex(b)) throw std::invalid_argument("tree: edge endpoint not a vertex");
            adj_[a].push_back(b);
            adj_[b].push_back(a);
        }
        for (auto& [v, ns] : adj_) {
            std::sort(ns.begin(), ns.end());
            if (std::adjacent_find(ns.begin(), ns.end()) != ns.end())
                throw std::invalid_argument("tree: parallel edge");
        }
        // n vertices, n-1 edges, no parallels: connectivity is the remaining check
        std::set<int> seen;
        std::vector<int> stack{vertices_.front()};
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            if (!seen.insert(v).second) continue;
            for (int w : adj_.at(v)) stack.push_back(w);
        }
        if (seen.size() != vertices_.size()) throw std::invalid_argument("tree: not connected");
        next_id_ = vertices_.back() + 1;
    }

    static Tree single(int v) { return Tree({v}, {}); }

    static Tree path_of(const std::vector<int>& vs) {
        std::vector<std::pair<int, int>> es;
        for (std::size_t i = 0; i + 1 < vs.size(); ++i) es.emplace_back(vs[i], vs[i + 1]);
        return Tree(vs, es);
    }

    /// Star with the given center and leaves.
    static Tree star(int center, const std::vector<int>& leaves) {
        std::vector<int> vs{center};
        std::vector<std::pair<int, int>> es;
        for (int l : leaves) {
            vs.push_back(l);
            es.emplace_back(center, l);
        }
        return Tree(vs, es);
    }

    const std::vector<int>& vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }
    bool has_vertex(int v) const { return std::binary_search(vertices_.begin(), vertices_.end(), v); }

    const std::vector<int>& neighbors(int v) const {
        auto it = adj_.find(v);
        if (it == adj_.end()) throw std::invalid_argument("tree: unknown vertex " + std::to_string(v));
        return it->second;
    }

    int degree(int v) const { return static_cast<int>(neighbors(v).size()); }

    bool adjacent(int a, int b) const {
        const auto& ns = neighbors(a);
        return std::binary_search(ns.begin(), ns.end(), b);
    }

    std::vector<std::pair<int, int>> edges() const {
        std::vector<std::pair<int, int>> es;
        for (const auto& [v, ns] : adj_)
            for (int w : ns)
                if (v < w) es.emplace_back(v, w);
        return es;
    }

    /// Vertices of the unique path from x to y, inclusive of both ends.
    std::vector<int> path(int x, int y) const {
        require_vertex(x);
        require_vertex(y);
        if (x == y) return {x};
        std::map<int, int> parent;
        std::vector<int> stack{x};
        parent[x] = x;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            if (v == y) break;
            for (int w : adj_.at(v))
                if (!parent.count(w)) {
                    parent[w] = v;
                    stack.push_back(w);
                }
        }
        std::vector<int> p;
        for (int v = y;; v = parent.at(v)) {
            p.push_back(v);
            if (v == x) break;
        }
        std::reverse(p.begin(), p.end());
        return p;
    }

    /// The unique vertex lying on all three pairwise paths among x, y, z.
    int median(int x, int y, int z) const {
        auto pxy = path(x, y);
        auto pyz = path(y, z);
        auto pxz = path(x, z);
        std::set<int> sxy(pxy.begin(), pxy.end());
        std::set<int> syz(pyz.begin(), pyz.end());
        for (int v : pxz)
            if (sxy.count(v) && syz.count(v)) return v;
        throw std::logic_error("tree: median not found");  // unreachable on a tree
    }

    /// Betweenness: y lies on the path from x to z.
    bool between(int x, int y, int z) const { return median(x, y, z) == y; }

    /// The component around v that contains y.
    Component component_of(int v, int y) const {
        if (v == y) throw std::invalid_argument("component_of: v == y");
        auto p = path(v, y);
        return Component{v, p[1]};
    }

    /// Median closure of `gens` with adjacency recomputed: two closure
    /// vertices end up adjacent when no third closure vertex separates them.
    Tree generated_subtree(const std::vector<int>& gens) const {
        if (gens.empty()) throw std::invalid_argument("generated_subtree: empty generator set");
        std::set<int> cl;
        for (int g : gens) {
            require_vertex(g);
            cl.insert(g);
        }
        for (bool grew = true; grew;) {
            grew = false;
            std::vector<int> cur(cl.begin(), cl.end());
            for (std::size_t i = 0; i < cur.size(); ++i)
                for (std::size_t j = i + 1; j < cur.size(); ++j)
                    for (std::size_t k = j + 1; k < cur.size(); ++k)
                        if (cl.insert(median(cur[i], cur[j], cur[k])).second) grew = true;
        }
        std::vector<int> vs(cl.begin(), cl.end());
        std::vector<std::pair<int, int>> es;
        for (std::size_t i = 0; i < vs.size(); ++i)
            for (std::size_t j = i + 1; j < vs.size(); ++j) {
                bool separated = false;
                for (int c : path(vs[i], vs[j]))
                    if (c != vs[i] && c != vs[j] && cl.count(c)) {
                        separated = true;
                        break;
                    }
                if (!separated) es.emplace_back(vs[i], vs[j]);
            }
        Tree t(vs, es);
        t.next_id_ = next_id_;
        return t;
    }

    /// Subdivides the edge x-y with a fresh vertex; returns (tree, fresh id).
    /// Medians among the old vertices are unchanged.
    std::pair<Tree, int> insert_between(int x, int y) const {
        if (!adjacent(x, y)) throw std::invalid_argument("insert_between: vertices not adjacent");
        int z = next_id_;
        std::vector<int> vs = vertices_;
        vs.push_back(z);
        auto es = edges();
        std::erase_if(es, [&](auto e) {
            return (e.first == std::min(x, y)) && (e.second == std::max(x, y));
        });
        es.emplace_back(x, z);
        es.emplace_back(z, y);
        Tree t(std::move(vs), std::move(es));
        t.next_id_ = z + 1;
        return {std::move(t), z};
    }

    /// Adds a fresh leaf adjacent to v; returns (tree, fresh id).
    std::pair<Tree, int> attach_leaf(int v) const {
        require_vertex(v);
        int z = next_id_;
        std::vector<int> vs = vertices_;
        vs.push_back(z);
        auto es = edges();
        es.emplace_back(v, z);
        Tree t(std::move(vs), std::move(es));
        t.next_id_ = z + 1;
        return {std::move(t), z};
    }

    friend bool operator==(const Tree& a, const Tree& b) {
        return a.vertices_ == b.vertices_ && a.adj_ == b.adj_;
    }

private:
    void require_vertex(int v) const {
        if (!has_vertex(v)) throw std::invalid_argument("tree: unknown vertex " + std::to_string(v));
    }

    std::vector<int> vertices_;
    std::map<int, std::vector<int>> adj_;
    int next_id_ = 0;
};

/// Tree with a distinguished root xi. When the tree has more than one vertex
/// the root must have exactly one neighbor, its unique immediate successor.
/// Stored as a parent map; the meet is computed as the lowest common ancestor.
class RootedTree {
public:
    RootedTree(Tree tree, int root) : tree_(std::move(tree)), root_(root) {
        if (!tree_.has_vertex(root)) throw std::invalid_argument("rooted tree: root not a vertex");
        if (tree_.size() > 1 && tree_.degree(root) != 1)
            throw std::invalid_argument("rooted tree: root must have exactly one neighbor");
        std::vector<int> stack{root};
        height_[root] = 0;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : tree_.neighbors(v))
                if (!height_.count(w)) {
                    parent_[w] = v;
                    height_[w] = height_.at(v) + 1;
                    stack.push_back(w);
                }
        }
    }

    const Tree& tree() const { return tree_; }
    int root() const { return root_; }
    std::size_t size() const { return tree_.size(); }
    const std::vector<int>& vertices() const { return tree_.vertices(); }

    /// The unique immediate successor of the root.
    int rvertex() const {
        if (tree_.size() <= 1) throw std::invalid_argument("rooted tree: no r in a one-vertex tree");
        return tree_.neighbors(root_).front();
    }

    int parent(int v) const {
        auto it = parent_.find(v);
        if (it == parent_.end()) throw std::invalid_argument("rooted tree: root has no parent / unknown vertex");
        return it->second;
    }

    int height(int v) const {
        auto it = height_.find(v);
        if (it == height_.end()) throw std::invalid_argument("rooted tree: unknown vertex " + std::to_string(v));
        return it->second;
    }

    int tree_height() const {
        int h = 0;
        for (const auto& [v, hv] : height_) h = std::max(h, hv);
        return h;
    }

    std::vector<int> children(int v) const {
        std::vector<int> cs;
        for (int w : tree_.neighbors(v))
            if (w != v && (v == root_ || w != parent(v))) cs.push_back(w);
        return cs;
    }

    bool is_leaf(int v) const { return v != root_ && children(v).empty(); }

    /// Lowest common ancestor; equals median(x, y, root).
    int meet(int x, int y) const {
        int a = x, b = y;
        while (height(a) > height(b)) a = parent(a);
        while (height(b) > height(a)) b = parent(b);
        while (a != b) {
            a = parent(a);
            b = parent(b);
        }
        return a;
    }

    /// x precedes y in the tree order (x lies on the root-path of y).
    bool leq(int x, int y) const { return meet(x, y) == x; }

    std::vector<int> vertices_at_height(int h) const {
        std::vector<int> out;
        for (int v : tree_.vertices())
            if (height(v) == h) out.push_back(v);
        return out;
    }

    friend bool operator==(const RootedTree& a, const RootedTree& b) {
        return a.root_ == b.root_ && a.tree_ == b.tree_;
    }

private:
    Tree tree_;
    int root_;
    std::map<int, int> parent_;
    std::map<int, int> height_;
};

/// AHU-style canonical encoding; equal strings iff rooted-tree isomorphic.
inline std::string ahu_encoding(const RootedTree& rt, int v) {
    std::vector<std::string> cs;
    for (int c : rt.children(v)) cs.push_back(ahu_encoding(rt, c));
    std::sort(cs.begin(), cs.end());
    std::string s = "(";
    for (const auto& c : cs) s += c;
    s += ")";
    return s;
}

inline std::string ahu_encoding(const RootedTree& rt) { return ahu_encoding(rt, rt.root()); }

}  // namespace kaleido
