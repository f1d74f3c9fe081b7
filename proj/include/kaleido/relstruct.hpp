#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace kaleido {

struct Signature {
    std::vector<std::pair<std::string, int>> relations;  // (name, arity >= 1)
    bool has_constant = false;

    void validate() const {
        std::set<std::string> names;
        for (const auto& [name, arity] : relations) {
            if (arity < 1) throw std::invalid_argument("signature: arity must be positive");
            if (!names.insert(name).second) throw std::invalid_argument("signature: duplicate relation " + name);
        }
    }

    friend bool operator==(const Signature&, const Signature&) = default;
};

/// Finite relational structure with an optional distinguished constant.
/// Element ids are local to the structure; maps between structures are
/// always explicit.
class RelStructure {
public:
    RelStructure(Signature sig, std::vector<int> universe,
                 std::map<std::string, std::set<std::vector<int>>> interp,
                 std::optional<int> constant)
        : sig_(std::move(sig)), universe_(std::move(universe)), interp_(std::move(interp)), constant_(constant) {
        sig_.validate();
        std::sort(universe_.begin(), universe_.end());
        if (std::adjacent_find(universe_.begin(), universe_.end()) != universe_.end())
            throw std::invalid_argument("relstruct: duplicate element");
        for (const auto& [name, arity] : sig_.relations) interp_.try_emplace(name);
        for (const auto& [name, tuples] : interp_) {
            int arity = arity_of(name);
            for (const auto& t : tuples) {
                if (static_cast<int>(t.size()) != arity)
                    throw std::invalid_argument("relstruct: tuple length mismatch for " + name);
                for (int e : t)
                    if (!has_element(e)) throw std::invalid_argument("relstruct: tuple entry outside universe");
            }
        }
        if (sig_.has_constant != constant_.has_value())
            throw std::invalid_argument("relstruct: constant presence must match signature");
        if (constant_ && !has_element(*constant_)) throw std::invalid_argument("relstruct: constant outside universe");
    }

    const Signature& signature() const { return sig_; }
    const std::vector<int>& universe() const { return universe_; }
    std::size_t size() const { return universe_.size(); }
    std::optional<int> constant() const { return constant_; }
    bool has_element(int e) const { return std::binary_search(universe_.begin(), universe_.end(), e); }

    int arity_of(const std::string& name) const {
        for (const auto& [n, a] : sig_.relations)
            if (n == name) return a;
        throw std::invalid_argument("relstruct: unknown relation " + name);
    }

    const std::set<std::vector<int>>& tuples(const std::string& name) const {
        auto it = interp_.find(name);
        if (it == interp_.end()) throw std::invalid_argument("relstruct: unknown relation " + name);
        return it->second;
    }

    bool holds(const std::string& name, const std::vector<int>& t) const { return tuples(name).count(t) > 0; }

    /// Structure obtained by renaming elements through `f` (injective, total).
    RelStructure relabeled(const std::map<int, int>& f) const {
        std::vector<int> uni;
        std::set<int> imgs;
        for (int e : universe_) {
            int i = f.at(e);
            if (!imgs.insert(i).second) throw std::invalid_argument("relabeled: map not injective");
            uni.push_back(i);
        }
        std::map<std::string, std::set<std::vector<int>>> interp;
        for (const auto& [name, ts] : interp_) {
            auto& out = interp[name];
            for (const auto& t : ts) {
                std::vector<int> u;
                for (int e : t) u.push_back(f.at(e));
                out.insert(std::move(u));
            }
        }
        std::optional<int> c = constant_ ? std::optional<int>(f.at(*constant_)) : std::nullopt;
        return RelStructure(sig_, std::move(uni), std::move(interp), c);
    }

    /// Induced substructure on `sub` (must contain the constant, if any).
    RelStructure induced(const std::set<int>& sub) const {
        std::vector<int> uni(sub.begin(), sub.end());
        for (int e : uni)
            if (!has_element(e)) throw std::invalid_argument("induced: element outside universe");
        std::map<std::string, std::set<std::vector<int>>> interp;
        for (const auto& [name, ts] : interp_) {
            auto& out = interp[name];
            for (const auto& t : ts)
                if (std::all_of(t.begin(), t.end(), [&](int e) { return sub.count(e) > 0; })) out.insert(t);
        }
        if (constant_ && !sub.count(*constant_)) throw std::invalid_argument("induced: constant dropped");
        return RelStructure(sig_, std::move(uni), std::move(interp), constant_);
    }

    /// All embeddings of *this into b: injective, constant to constant,
    /// every relation preserved in both directions. Lexicographic order by
    /// image tuple over the sorted universe.
    std::vector<std::map<int, int>> embeddings_into(const RelStructure& b) const {
        if (sig_ != b.sig_) throw std::invalid_argument("embeddings: signature mismatch");
        std::vector<std::map<int, int>> out;
        std::map<int, int> partial;
        std::set<int> used;
        backtrack_embed(b, 0, partial, used, out);
        return out;
    }

    std::vector<std::map<int, int>> automorphisms() const { return embeddings_into(*this); }

    friend bool operator==(const RelStructure& a, const RelStructure& b) {
        return a.sig_ == b.sig_ && a.universe_ == b.universe_ && a.interp_ == b.interp_ && a.constant_ == b.constant_;
    }

private:
    bool extends_to_embedding(const RelStructure& b, const std::map<int, int>& f, int just_added) const {
        // check only tuples that mention the newly mapped element and are
        // otherwise fully mapped
        for (const auto& [name, arity] : sig_.relations) {
            std::vector<std::vector<int>> doms(arity);
            // enumerate mapped tuples containing just_added
            std::vector<int> mapped;
            for (const auto& [k, v] : f) mapped.push_back(k);
            std::vector<int> idx(arity, 0);
            for (;;) {
                std::vector<int> t(arity);
                bool mentions = false;
                for (int i = 0; i < arity; ++i) {
                    t[i] = mapped[idx[i]];
                    if (t[i] == just_added) mentions = true;
                }
                if (mentions) {
                    std::vector<int> u(arity);
                    for (int i = 0; i < arity; ++i) u[i] = f.at(t[i]);
                    if (holds(name, t) != b.holds(name, u)) return false;
                }
                int p = arity - 1;
                while (p >= 0 && idx[p] + 1 == static_cast<int>(mapped.size())) idx[p--] = 0;
                if (p < 0) break;
                ++idx[p];
            }
        }
        return true;
    }

    void backtrack_embed(const RelStructure& b, std::size_t pos, std::map<int, int>& f, std::set<int>& used,
                         std::vector<std::map<int, int>>& out) const {
        if (pos == universe_.size()) {
            out.push_back(f);
            return;
        }
        int e = universe_[pos];
        for (int target : b.universe_) {
            if (used.count(target)) continue;
            if (constant_ && e == *constant_ && target != *b.constant_) continue;
            if (constant_ && e != *constant_ && target == *b.constant_) continue;
            f[e] = target;
            used.insert(target);
            if (extends_to_embedding(b, f, e)) backtrack_embed(b, pos + 1, f, used, out);
            used.erase(target);
            f.erase(e);
        }
    }

    Signature sig_;
    std::vector<int> universe_;
    std::map<std::string, std::set<std::vector<int>>> interp_;
    std::optional<int> constant_;
};

/// Structure with no relations and a constant; elements 0..n-1, constant 0.
inline RelStructure constant_only(int n) {
    if (n < 1) throw std::invalid_argument("constant_only: need n >= 1");
    std::vector<int> uni(n);
    for (int i = 0; i < n; ++i) uni[i] = i;
    return RelStructure(Signature{{}, true}, std::move(uni), {}, 0);
}

inline const std::string kOrderRelation = "<";

/// Linear order 0 < 1 < ... < n-1 with the constant 0 as least element.
inline RelStructure pointed_linear_order(int n) {
    if (n < 1) throw std::invalid_argument("pointed_linear_order: need n >= 1");
    std::vector<int> uni(n);
    for (int i = 0; i < n; ++i) uni[i] = i;
    std::set<std::vector<int>> lt;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) lt.insert({i, j});
    return RelStructure(Signature{{{kOrderRelation, 2}}, true}, std::move(uni), {{kOrderRelation, std::move(lt)}}, 0);
}

/// Age constraint: a named validator returning a violation description, or
/// nothing when the structure is admissible.
struct AgeConstraint {
    std::string name;
    std::function<std::optional<std::string>(const RelStructure&)> check;
};

/// Requires `rel` to be a strict total order on the universe.
inline AgeConstraint total_order_constraint(const std::string& rel = kOrderRelation) {
    return AgeConstraint{
        "total-order(" + rel + ")",
        [rel](const RelStructure& s) -> std::optional<std::string> {
            const auto& uni = s.universe();
            for (int a : uni) {
                if (s.holds(rel, {a, a})) return "reflexive pair (" + std::to_string(a) + ")";
                for (int b : uni) {
                    if (a == b) continue;
                    bool ab = s.holds(rel, {a, b});
                    bool ba = s.holds(rel, {b, a});
                    if (ab && ba) return "cycle between " + std::to_string(a) + " and " + std::to_string(b);
                    if (!ab && !ba)
                        return "missing comparison between " + std::to_string(a) + " and " + std::to_string(b);
                    for (int c : uni)
                        if (ab && s.holds(rel, {b, c}) && !s.holds(rel, {a, c}))
                            return "transitivity failure at (" + std::to_string(a) + "," + std::to_string(b) + "," +
                                   std::to_string(c) + ")";
                }
            }
            return std::nullopt;
        }};
}

struct AmalgamResult {
    std::optional<RelStructure> amalgam;
    std::map<int, int> g1, g2;  // embeddings of b1, b2 into the amalgam
    std::optional<std::string> violation;
    bool ok() const { return amalgam.has_value(); }
};

inline bool is_embedding_map(const RelStructure& a, const RelStructure& b, const std::map<int, int>& f) {
    if (a.signature() != b.signature()) return false;
    std::set<int> imgs;
    for (int e : a.universe()) {
        auto it = f.find(e);
        if (it == f.end() || !b.has_element(it->second)) return false;
        if (!imgs.insert(it->second).second) return false;
    }
    if (a.constant() && f.at(*a.constant()) != *b.constant()) return false;
    for (const auto& [name, arity] : a.signature().relations) {
        std::vector<int> idx(arity, 0);
        const auto& uni = a.universe();
        if (uni.empty()) continue;
        for (;;) {
            std::vector<int> t(arity), u(arity);
            for (int i = 0; i < arity; ++i) {
                t[i] = uni[idx[i]];
                u[i] = f.at(t[i]);
            }
            if (a.holds(name, t) != b.holds(name, u)) return false;
            int p = arity - 1;
            while (p >= 0 && idx[p] + 1 == static_cast<int>(uni.size())) idx[p--] = 0;
            if (p < 0) break;
            ++idx[p];
        }
    }
    return true;
}

/// Free amalgamation of b1 and b2 over a along the embeddings f1, f2: the
/// pushout identifies f1(x) with f2(x) and takes the union of relations. When
/// a constraint is supplied and the pushout violates it, the violation is
/// reported instead of a structure.
inline AmalgamResult amalgamate(const RelStructure& a, const RelStructure& b1, const RelStructure& b2,
                                const std::map<int, int>& f1, const std::map<int, int>& f2,
                                const std::optional<AgeConstraint>& constraint = std::nullopt) {
    if (!is_embedding_map(a, b1, f1) || !is_embedding_map(a, b2, f2))
        throw std::invalid_argument("amalgamate: f1/f2 must be embeddings of a");
    std::map<int, int> g1, g2;
    int fresh = 0;
    for (int e : b1.universe()) g1[e] = fresh++;
    std::map<int, int> via_a;  // image of a inside the amalgam
    for (int x : a.universe()) via_a[f2.at(x)] = g1.at(f1.at(x));
    for (int e : b2.universe()) {
        auto it = via_a.find(e);
        g2[e] = (it != via_a.end()) ? it->second : fresh++;
    }
    std::vector<int> uni(fresh);
    for (int i = 0; i < fresh; ++i) uni[i] = i;
    std::map<std::string, std::set<std::vector<int>>> interp;
    for (const auto& [name, ts] : std::map<std::string, const RelStructure*>{{"1", &b1}, {"2", &b2}}) {
        const RelStructure& b = *ts;
        const auto& g = (name == "1") ? g1 : g2;
        for (const auto& [rel, arity] : b.signature().relations)
            for (const auto& t : b.tuples(rel)) {
                std::vector<int> u;
                for (int e : t) u.push_back(g.at(e));
                interp[rel].insert(std::move(u));
            }
    }
    std::optional<int> c = b1.constant() ? std::optional<int>(g1.at(*b1.constant())) : std::nullopt;
    RelStructure result(b1.signature(), std::move(uni), std::move(interp), c);
    if (constraint) {
        if (auto why = constraint->check(result))
            return AmalgamResult{std::nullopt, std::move(g1), std::move(g2), constraint->name + ": " + *why};
    }
    return AmalgamResult{std::move(result), std::move(g1), std::move(g2), std::nullopt};
}

}  // namespace kaleido
