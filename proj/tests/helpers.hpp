#pragma once

// Test-side oracles: path and median computations written directly from the
// definitions over raw edge lists, independent of the library's search and
// caching choices, plus labeled-tree enumeration via Prufer sequences.

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <vector>

namespace oracle {

using Edges = std::vector<std::pair<int, int>>;

inline std::vector<int> path(const std::vector<int>& vertices, const Edges& edges, int from, int to) {
    std::map<int, std::vector<int>> adj;
    for (auto [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::map<int, int> prev;
    std::vector<int> queue{from};
    prev[from] = from;
    for (std::size_t i = 0; i < queue.size(); ++i)
        for (int w : adj[queue[i]])
            if (!prev.count(w)) {
                prev[w] = queue[i];
                queue.push_back(w);
            }
    std::vector<int> p;
    for (int v = to;; v = prev.at(v)) {
        p.push_back(v);
        if (v == from) break;
    }
    std::reverse(p.begin(), p.end());
    return p;
}

/// Brute-force median: the vertex lying on all three pairwise paths.
inline int median(const std::vector<int>& vertices, const Edges& edges, int x, int y, int z) {
    auto pxy = path(vertices, edges, x, y);
    auto pyz = path(vertices, edges, y, z);
    auto pxz = path(vertices, edges, x, z);
    for (int v : vertices) {
        bool on_all = std::count(pxy.begin(), pxy.end(), v) && std::count(pyz.begin(), pyz.end(), v) &&
                      std::count(pxz.begin(), pxz.end(), v);
        if (on_all) return v;
    }
    return -1;
}

inline bool between(const std::vector<int>& vertices, const Edges& edges, int x, int y, int z) {
    return median(vertices, edges, x, y, z) == y;
}

/// Median closure by fixpoint iteration.
inline std::set<int> median_closure(const std::vector<int>& vertices, const Edges& edges,
                                    const std::vector<int>& gens) {
    std::set<int> cl(gens.begin(), gens.end());
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<int> cur(cl.begin(), cl.end());
        for (std::size_t i = 0; i < cur.size(); ++i)
            for (std::size_t j = i + 1; j < cur.size(); ++j)
                for (std::size_t k = j + 1; k < cur.size(); ++k)
                    if (cl.insert(median(vertices, edges, cur[i], cur[j], cur[k])).second) grew = true;
    }
    return cl;
}

/// Labeled tree on n vertices (ids 0..n-1) from a Prufer sequence.
inline Edges prufer_edges(const std::vector<int>& seq) {
    int n = static_cast<int>(seq.size()) + 2;
    std::vector<int> degree(n, 1);
    for (int v : seq) degree[v]++;
    Edges edges;
    std::set<int> leaves;
    for (int v = 0; v < n; ++v)
        if (degree[v] == 1) leaves.insert(v);
    std::vector<int> rest = seq;
    for (int v : rest) {
        int leaf = *leaves.begin();
        leaves.erase(leaves.begin());
        edges.emplace_back(leaf, v);
        if (--degree[v] == 1) leaves.insert(v);
    }
    int a = *leaves.begin();
    int b = *std::next(leaves.begin());
    edges.emplace_back(a, b);
    return edges;
}

/// Every labeled tree on n vertices, by enumerating Prufer sequences.
inline std::vector<Edges> all_labeled_trees(int n) {
    if (n == 1) return {Edges{}};
    if (n == 2) return {Edges{{0, 1}}};
    std::vector<Edges> out;
    std::vector<int> seq(n - 2, 0);
    for (;;) {
        out.push_back(prufer_edges(seq));
        int i = n - 3;
        while (i >= 0 && seq[i] == n - 1) seq[i--] = 0;
        if (i < 0) break;
        ++seq[i];
    }
    return out;
}

inline Edges random_tree(std::mt19937_64& rng, int n) {
    if (n == 1) return {};
    if (n == 2) return {{0, 1}};
    std::vector<int> seq(n - 2);
    for (auto& v : seq) v = static_cast<int>(rng() % n);
    return prufer_edges(seq);
}

inline std::vector<int> iota_vertices(int n) {
    std::vector<int> vs(n);
    for (int i = 0; i < n; ++i) vs[i] = i;
    return vs;
}

}  // namespace oracle
