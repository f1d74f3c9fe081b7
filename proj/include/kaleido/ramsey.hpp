#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "kaleido/decorated.hpp"

namespace kaleido {

/// Colors indexed by the canonical enumeration of an embedding list.
struct ColoringAssignment {
    int k = 1;
    std::vector<int> colors;

    void validate(std::size_t domain) const {
        if (k < 1) throw std::invalid_argument("coloring: k must be at least 1");
        if (colors.size() != domain) throw std::invalid_argument("coloring: not total on the embedding list");
        for (int c : colors)
            if (c < 0 || c >= k) throw std::invalid_argument("coloring: color out of range");
    }
};

struct ArrowInstance {
    DecoratedTree C;
    DecoratedTree B;
    DecoratedTree A;
    int k = 2;
    bool rooted = false;
};

struct ArrowStats {
    std::size_t a_copies = 0;
    std::size_t b_copies = 0;
    std::size_t search_nodes = 0;
};

struct ArrowVerdict {
    bool holds = false;
    std::optional<ColoringAssignment> bad_coloring;  // lexicographically least, when the arrow fails
    ArrowStats stats;
};

struct BudgetExhausted : std::runtime_error {
    explicit BudgetExhausted(const std::string& msg) : std::runtime_error(msg) {}
};

namespace detail {

inline std::map<std::map<int, int>, int> embedding_index(const std::vector<DecEmbedding>& embs) {
    std::map<std::map<int, int>, int> idx;
    for (std::size_t i = 0; i < embs.size(); ++i) idx[embs[i].map] = static_cast<int>(i);
    return idx;
}

/// Searches for the lexicographically least coloring in which no constraint
/// set is monochromatic; empty result means none exists.
class BadColoringSearch {
public:
    BadColoringSearch(std::size_t nvars, int k, std::vector<std::vector<int>> constraints, std::size_t node_budget)
        : nvars_(nvars), k_(k), constrs_(std::move(constraints)), budget_(node_budget) {
        occurs_.resize(nvars_);
        for (std::size_t ci = 0; ci < constrs_.size(); ++ci)
            for (int v : constrs_[ci]) occurs_[v].push_back(ci);
        state_.resize(constrs_.size());
        for (std::size_t ci = 0; ci < constrs_.size(); ++ci) state_[ci].unassigned = constrs_[ci].size();
    }

    std::optional<std::vector<int>> run(std::size_t& nodes_out) {
        assignment_.assign(nvars_, -1);
        bool found = dfs(0);
        nodes_out = nodes_;
        if (!found) return std::nullopt;
        return assignment_;
    }

private:
    struct ConstraintState {
        std::size_t unassigned = 0;
        int first_color = -1;
        bool uniform = true;
    };

    bool dfs(std::size_t pos) {
        if (++nodes_ > budget_) throw BudgetExhausted("arrow search exceeded the node budget");
        if (pos == nvars_) return true;
        for (int c = 0; c < k_; ++c) {
            std::vector<std::size_t> flipped;
            bool dead = false;
            for (std::size_t ci : occurs_[pos]) {
                auto& st = state_[ci];
                if (st.unassigned == constrs_[ci].size()) st.first_color = c;
                else if (st.uniform && c != st.first_color) {
                    st.uniform = false;
                    flipped.push_back(ci);
                }
                --st.unassigned;
                if (st.unassigned == 0 && st.uniform) dead = true;  // a copy went monochromatic
            }
            if (!dead) {
                assignment_[pos] = c;
                if (dfs(pos + 1)) return true;
                assignment_[pos] = -1;
            }
            for (std::size_t ci : occurs_[pos]) ++state_[ci].unassigned;
            for (std::size_t ci : flipped) state_[ci].uniform = true;
        }
        return false;
    }

    std::size_t nvars_;
    int k_;
    std::vector<std::vector<int>> constrs_;
    std::vector<std::vector<int>> occurs_;
    std::vector<ConstraintState> state_;
    std::vector<int> assignment_;
    std::size_t nodes_ = 0;
    std::size_t budget_;
};

}  // namespace detail

/// Decides C -> (B)^k_A by searching for a coloring of the A-copies in C in
/// which every B-copy sees at least two colors. The verdict is reproducible:
/// the search follows the canonical embedding order, so a failing instance
/// reports the lexicographically least bad coloring.
inline ArrowVerdict decide_arrow(const ArrowInstance& inst, std::size_t node_budget = SIZE_MAX) {
    if (inst.k < 1) throw std::invalid_argument("decide_arrow: k must be at least 1");
    EmbedOptions opts;
    opts.rooted = inst.rooted;
    auto EA = dec_embeddings(inst.A, inst.C, opts);
    if (EA.empty()) throw std::invalid_argument("decide_arrow: (C choose A) is empty, the arrow is undefined");
    auto EB = dec_embeddings(inst.B, inst.C, opts);
    auto EAB = dec_embeddings(inst.A, inst.B, opts);
    ArrowVerdict v;
    v.stats.a_copies = EA.size();
    v.stats.b_copies = EB.size();
    auto index = detail::embedding_index(EA);
    std::vector<std::vector<int>> constraints;
    constraints.reserve(EB.size());
    for (const auto& f : EB) {
        std::set<int> ids;
        for (const auto& g : EAB) {
            auto it = index.find(compose(f, g).map);
            if (it == index.end()) throw std::logic_error("decide_arrow: composite not in the canonical enumeration");
            ids.insert(it->second);
        }
        if (ids.empty()) {
            // a B-copy with no A-subcopies is monochromatic under any coloring
            v.holds = true;
            return v;
        }
        constraints.emplace_back(ids.begin(), ids.end());
    }
    detail::BadColoringSearch search(EA.size(), inst.k, std::move(constraints), node_budget);
    auto bad = search.run(v.stats.search_nodes);
    if (bad) {
        v.holds = false;
        v.bad_coloring = ColoringAssignment{inst.k, std::move(*bad)};
    } else {
        v.holds = true;
    }
    return v;
}

struct MonoCopy {
    DecEmbedding copy;
    int color = 0;
};

/// First B-copy in T (canonical order) whose A-subcopies all share one
/// gamma-color; empty when the search exhausts, which is the expected
/// outcome when replaying a bad coloring of a failed arrow.
inline std::optional<MonoCopy> find_mono_copy(const DecoratedTree& t, const DecoratedTree& b, const DecoratedTree& a,
                                              const ColoringAssignment& gamma, bool rooted = false) {
    EmbedOptions opts;
    opts.rooted = rooted;
    auto EA = dec_embeddings(a, t, opts);
    gamma.validate(EA.size());
    auto EB = dec_embeddings(b, t, opts);
    auto EAB = dec_embeddings(a, b, opts);
    auto index = detail::embedding_index(EA);
    for (const auto& f : EB) {
        std::optional<int> color;
        bool mono = true;
        for (const auto& g : EAB) {
            int idx = index.at(compose(f, g).map);
            int c = gamma.colors[idx];
            if (!color) color = c;
            else if (*color != c) {
                mono = false;
                break;
            }
        }
        if (mono) return MonoCopy{f, color.value_or(0)};
    }
    return std::nullopt;
}

/// A growing family of decoration alphabets, indexed by size.
struct AlphabetFamily {
    std::string name;
    std::function<RelStructure(int)> make;
    int min_size = 2;
};

inline AlphabetFamily constant_family() { return AlphabetFamily{"constant", [](int n) { return constant_only(n); }, 2}; }

inline AlphabetFamily linear_order_family() {
    return AlphabetFamily{"linear-order", [](int n) { return pointed_linear_order(n); }, 2};
}

struct WitnessResult {
    enum class Status { found, inconclusive };
    Status status = Status::inconclusive;
    std::optional<DecoratedTree> witness;
    std::optional<RelStructure> alphabet;
    int alphabet_size = 0;
    int height = -1;  // witness = D[height]
    std::size_t nodes_used = 0;
    std::size_t candidates_tried = 0;
    bool found() const { return status == Status::found; }
};

/// Searches the cofinal A[h]-shaped family for a witness T with
/// T -> (B)^k_A, growing the alphabet and the height, smallest candidates
/// first. Budget exhaustion is reported as inconclusive, which is distinct
/// from an arrow failing.
inline WitnessResult witness_search(const DecoratedTree& b, const DecoratedTree& a, int k, bool rooted,
                                    const AlphabetFamily& family, std::size_t node_budget,
                                    int max_alphabet = 6, int max_height = 12) {
    if (family.make(family.min_size).signature() != b.alphabet())
        throw std::invalid_argument("witness_search: family signature does not match the alphabet of B");
    int m_min = std::max(0, b.rt().tree_height() - 1);
    struct Cand {
        long long count;
        int d, m;
    };
    std::vector<Cand> cands;
    for (int d = family.min_size; d <= max_alphabet; ++d)
        for (int m = m_min; m <= max_height; ++m) {
            long long count = 1, level = 1;
            for (int j = 0; j <= m; ++j) {
                count += level;
                level *= (d - 1);
                if (count > 1'000'000) break;
            }
            cands.push_back({count, d, m});
        }
    std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
        return std::tie(x.count, x.d, x.m) < std::tie(y.count, y.d, y.m);
    });
    WitnessResult res;
    for (const auto& cand : cands) {
        if (res.nodes_used >= node_budget) break;
        RelStructure alpha = family.make(cand.d);
        DecoratedTree T = build_Ah(alpha, cand.m);
        ++res.candidates_tried;
        ArrowVerdict v;
        try {
            v = decide_arrow(ArrowInstance{T, b, a, k, rooted}, node_budget - res.nodes_used);
        } catch (const BudgetExhausted&) {
            res.nodes_used = node_budget;
            break;
        } catch (const std::invalid_argument&) {
            continue;  // (C choose A) empty for this candidate; grow further
        }
        res.nodes_used += v.stats.search_nodes + v.stats.a_copies + v.stats.b_copies;
        if (v.holds) {
            res.status = WitnessResult::Status::found;
            res.witness = std::move(T);
            res.alphabet = std::move(alpha);
            res.alphabet_size = cand.d;
            res.height = cand.m;
            return res;
        }
    }
    return res;
}

struct ChainEntry {
    RelStructure alphabet;
    int n = 0;
};

struct ProofFollowResult {
    std::optional<MonoCopy> copy;
    std::optional<int> failed_level;  // level whose sub-arrow failed at runtime
    std::string message;
    std::vector<int> final_subtree;       // homogenized subtree, as vertices of T
    std::map<int, int> point_coloring;    // the induced delta, where defined
    bool ok() const { return copy.has_value(); }
};

/// Replays the inductive monochromatization: T = C_0[n_0]; at each level the
/// subtree above an anchor is replaced by the image of a gamma-monochromatic
/// copy of C_{i+1}[n_{i+1}+1] planted at the anchor, the next anchors being
/// that copy's children. Afterwards every A[ell]-copy rooted at a fixed
/// vertex of the surviving subtree has one color (the point coloring delta),
/// and a copy of u whose A[ell]-subcopies agree is extracted.
inline ProofFollowResult proof_follow_mono(const std::vector<ChainEntry>& chain, const ColoringAssignment& gamma,
                                           const DecoratedTree& u, const RelStructure& a, int ell,
                                           bool fallback_to_direct = false) {
    if (chain.empty()) throw std::invalid_argument("proof_follow_mono: empty chain");
    if (ell < 1) throw std::invalid_argument("proof_follow_mono: ell must be at least 1");
    DecoratedTree T = build_Ah(chain.front().alphabet, chain.front().n);
    DecoratedTree Al = build_Ah(a, ell);
    auto EA = dec_embeddings(Al, T, EmbedOptions{});
    gamma.validate(EA.size());
    auto index = detail::embedding_index(EA);
    auto color_of = [&](const DecEmbedding& e) { return gamma.colors[index.at(e.map)]; };

    std::set<int> S(T.rt().vertices().begin(), T.rt().vertices().end());
    std::vector<int> anchors{T.rt().rvertex()};
    std::size_t h = chain.size() - 1;
    for (std::size_t i = 0; i < h; ++i) {
        DecoratedTree Bnext = build_Ah(chain[i + 1].alphabet, chain[i + 1].n + 1);
        EmbedOptions rooted_opts;
        rooted_opts.rooted = true;
        auto rooted_sub = dec_embeddings(Al, Bnext, rooted_opts);
        std::vector<int> next_anchors;
        for (int s : anchors) {
            std::set<int> above{T.root()};
            for (int t : S)
                if (t != T.root() && T.rt().leq(s, t)) above.insert(t);
            EmbedOptions opts;
            opts.anchor = s;
            opts.allowed = above;
            auto candidates = dec_embeddings(Bnext, T, opts);
            std::optional<DecEmbedding> chosen;
            for (const auto& g : candidates) {
                std::optional<int> c;
                bool mono = true;
                for (const auto& e : rooted_sub) {
                    int col = color_of(compose(g, e));
                    if (!c) c = col;
                    else if (*c != col) {
                        mono = false;
                        break;
                    }
                }
                if (mono) {
                    chosen = g;
                    break;
                }
            }
            if (!chosen) {
                if (fallback_to_direct) {
                    auto direct = find_mono_copy(T, u, Al, gamma);
                    ProofFollowResult r;
                    r.copy = direct;
                    r.failed_level = static_cast<int>(i);
                    r.message = "sub-arrow failed at level " + std::to_string(i) + "; fell back to direct search";
                    return r;
                }
                ProofFollowResult r;
                r.failed_level = static_cast<int>(i);
                r.message = "no monochromatic rooted copy at level " + std::to_string(i) + ", anchor vertex " +
                            std::to_string(s);
                return r;
            }
            for (auto it = S.begin(); it != S.end();) {
                if (*it != T.root() && T.rt().leq(s, *it)) it = S.erase(it);
                else ++it;
            }
            for (const auto& [sv, tv] : chosen->map)
                if (sv != Bnext.root()) S.insert(tv);
            for (int child : Bnext.rt().children(Bnext.rt().rvertex())) next_anchors.push_back(chosen->map.at(child));
        }
        std::sort(next_anchors.begin(), next_anchors.end());
        anchors = std::move(next_anchors);
    }

    ProofFollowResult result;
    result.final_subtree.assign(S.begin(), S.end());
    // the induced point coloring: common color of the A[ell]-copies rooted
    // at each surviving vertex
    int p = Al.rt().rvertex();
    for (const auto& e : EA) {
        bool inside = true;
        for (const auto& [sv, tv] : e.map)
            if (!S.count(tv)) {
                inside = false;
                break;
            }
        if (!inside) continue;
        int root_pt = e.map.at(p);
        auto it = result.point_coloring.find(root_pt);
        if (it == result.point_coloring.end()) result.point_coloring[root_pt] = color_of(e);
    }

    auto EAU = dec_embeddings(Al, u, EmbedOptions{});
    EmbedOptions final_opts;
    final_opts.allowed = S;
    for (const auto& f : dec_embeddings(u, T, final_opts)) {
        std::optional<int> c;
        bool mono = true;
        for (const auto& e : EAU) {
            int col = color_of(compose(f, e));
            if (!c) c = col;
            else if (*c != col) {
                mono = false;
                break;
            }
        }
        if (mono) {
            result.copy = MonoCopy{f, c.value_or(0)};
            return result;
        }
    }
    result.failed_level = static_cast<int>(h);
    result.message = "no monochromatic copy of u inside the homogenized subtree";
    return result;
}

struct DeuberReport {
    bool found = false;
    int m = -1;
    int h = 0;
    int k = 0;
    int deuber_bound = 0;  // 2h - 1
    bool within_bound = false;
    std::vector<std::pair<int, bool>> trail;  // (candidate m, arrow held)
    ArrowStats total;
};

/// Measures the least m with B[m] -> (B[h])^k_{A[0]} by increasing search.
/// The classical bound 2h-1 is recorded for comparison, not asserted.
inline DeuberReport deuber_explore(const RelStructure& b_alphabet, int h, int k, int max_m) {
    if (h < 1) throw std::invalid_argument("deuber_explore: h must be at least 1");
    DeuberReport rep;
    rep.h = h;
    rep.k = k;
    rep.deuber_bound = 2 * h - 1;
    DecoratedTree B = build_Ah(b_alphabet, h);
    DecoratedTree A0 = build_Ah(b_alphabet, 0);
    for (int m = h; m <= max_m; ++m) {
        DecoratedTree C = build_Ah(b_alphabet, m);
        auto v = decide_arrow(ArrowInstance{C, B, A0, k, false});
        rep.total.a_copies += v.stats.a_copies;
        rep.total.b_copies += v.stats.b_copies;
        rep.total.search_nodes += v.stats.search_nodes;
        rep.trail.emplace_back(m, v.holds);
        if (v.holds) {
            rep.found = true;
            rep.m = m;
            rep.within_bound = m <= rep.deuber_bound;
            return rep;
        }
    }
    return rep;
}

}  // namespace kaleido
