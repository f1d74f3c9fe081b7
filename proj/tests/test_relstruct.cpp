#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "kaleido/relstruct.hpp"

using namespace kaleido;

namespace {

// brute-force oracle: every injection, filtered by the definition
std::vector<std::map<int, int>> naive_embeddings(const RelStructure& a, const RelStructure& b) {
    std::vector<std::map<int, int>> out;
    std::vector<int> targets = b.universe();
    std::vector<int> dom = a.universe();
    std::function<void(std::size_t, std::map<int, int>&, std::set<int>&)> rec = [&](std::size_t pos,
                                                                                    std::map<int, int>& f,
                                                                                    std::set<int>& used) {
        if (pos == dom.size()) {
            if (a.constant() && f.at(*a.constant()) != *b.constant()) return;
            for (const auto& [name, arity] : a.signature().relations) {
                std::vector<int> t(static_cast<std::size_t>(arity), 0);
                std::function<bool(int)> all = [&](int d) -> bool {
                    if (d == arity) {
                        std::vector<int> u;
                        for (int e : t) u.push_back(f.at(e));
                        return a.holds(name, t) == b.holds(name, u);
                    }
                    for (int e : dom) {
                        t[static_cast<std::size_t>(d)] = e;
                        if (!all(d + 1)) return false;
                    }
                    return true;
                };
                if (!all(0)) return;
            }
            out.push_back(f);
            return;
        }
        for (int w : targets) {
            if (used.count(w)) continue;
            f[dom[pos]] = w;
            used.insert(w);
            rec(pos + 1, f, used);
            used.erase(w);
            f.erase(dom[pos]);
        }
    };
    std::map<int, int> f;
    std::set<int> used;
    rec(0, f, used);
    return out;
}

}  // namespace

TEST_CASE("embeddings with a constant") {
    RelStructure cd = constant_only(2);  // {0=c, 1=d}
    SECTION("into itself: the constant pins everything") {
        auto embs = cd.embeddings_into(cd);
        REQUIRE(embs.size() == 1);
        CHECK(embs[0].at(0) == 0);
        CHECK(embs[0].at(1) == 1);
    }
    SECTION("into a three-element structure") {
        RelStructure cde = constant_only(3);
        auto expected = naive_embeddings(cd, cde);
        auto embs = cd.embeddings_into(cde);
        CHECK(embs.size() == 2);
        CHECK(embs == expected);
    }
    SECTION("relation mismatch kills all embeddings") {
        Signature sig{{{"R", 1}}, true};
        RelStructure a(sig, {0, 1}, {{"R", {{1}}}}, 0);
        RelStructure b(sig, {0, 1}, {}, 0);
        CHECK(a.embeddings_into(b).empty());
    }
    SECTION("signature mismatch is an input error") {
        CHECK_THROWS_AS(cd.embeddings_into(pointed_linear_order(2)), std::invalid_argument);
    }
}

TEST_CASE("automorphism groups") {
    SECTION("constant-only three elements: the two non-constants swap") {
        auto autos = constant_only(3).automorphisms();
        CHECK(autos.size() == 2);
        CHECK(autos == naive_embeddings(constant_only(3), constant_only(3)));
    }
    SECTION("linear orders are rigid") { CHECK(pointed_linear_order(3).automorphisms().size() == 1); }
    SECTION("one point") { CHECK(constant_only(1).automorphisms().size() == 1); }
}

TEST_CASE("automorphisms form a group on small structures") {
    for (const RelStructure& s : {constant_only(4), pointed_linear_order(4)}) {
        auto autos = s.automorphisms();
        bool has_id = false;
        for (const auto& g : autos) {
            bool id = true;
            for (int e : s.universe())
                if (g.at(e) != e) id = false;
            has_id |= id;
            std::map<int, int> inv;
            for (const auto& [k, v] : g) inv[v] = k;
            CHECK(std::find(autos.begin(), autos.end(), inv) != autos.end());
            for (const auto& h : autos) {
                std::map<int, int> gh;
                for (int e : s.universe()) gh[e] = g.at(h.at(e));
                CHECK(std::find(autos.begin(), autos.end(), gh) != autos.end());
            }
        }
        CHECK(has_id);
    }
}

TEST_CASE("embedding counts grow along substructures") {
    RelStructure a = constant_only(2);
    RelStructure b = constant_only(3);
    RelStructure c = constant_only(4);
    auto ab = a.embeddings_into(b);
    auto ac = a.embeddings_into(c);
    CHECK(ac.size() >= ab.size());
    // composition witnesses the inequality
    auto bc = b.embeddings_into(c);
    REQUIRE_FALSE(bc.empty());
    for (const auto& f : ab) {
        std::map<int, int> comp;
        for (const auto& [k, v] : f) comp[k] = bc.front().at(v);
        CHECK(std::find(ac.begin(), ac.end(), comp) != ac.end());
    }
}

TEST_CASE("amalgamation") {
    RelStructure point = constant_only(1);
    RelStructure cd = constant_only(2);
    std::map<int, int> c_into_cd{{0, 0}};

    SECTION("identity square returns a copy of a") {
        auto res = amalgamate(cd, cd, cd, {{0, 0}, {1, 1}}, {{0, 0}, {1, 1}});
        REQUIRE(res.ok());
        CHECK(res.amalgam->size() == 2);
        for (int e : cd.universe()) CHECK(res.g1.at(e) == res.g2.at(e));
    }
    SECTION("two one-point extensions of the constant glue to size 3") {
        auto res = amalgamate(point, cd, cd, c_into_cd, c_into_cd);
        REQUIRE(res.ok());
        CHECK(res.amalgam->size() == 3);
        CHECK(res.g1.at(0) == res.g2.at(0));
        CHECK(res.g1.at(1) != res.g2.at(1));
    }
    SECTION("free amalgam of linear orders misses a comparison") {
        RelStructure lo2 = pointed_linear_order(2);
        RelStructure lo1 = lo2.induced({0});
        auto res = amalgamate(lo1, lo2, lo2, {{0, 0}}, {{0, 0}}, total_order_constraint());
        REQUIRE_FALSE(res.ok());
        REQUIRE(res.violation.has_value());
        CHECK(res.violation->find("missing comparison") != std::string::npos);
    }
    SECTION("non-embedding inputs are rejected") {
        CHECK_THROWS_AS(amalgamate(cd, cd, cd, {{0, 1}, {1, 0}}, {{0, 0}, {1, 1}}), std::invalid_argument);
    }
}

TEST_CASE("pointed linear order preset") {
    RelStructure lo = pointed_linear_order(3);
    CHECK(lo.constant() == 0);
    CHECK(lo.holds(kOrderRelation, {0, 1}));
    CHECK(lo.holds(kOrderRelation, {0, 2}));
    CHECK(lo.holds(kOrderRelation, {1, 2}));
    CHECK_FALSE(lo.holds(kOrderRelation, {1, 0}));
    CHECK_FALSE(total_order_constraint().check(lo).has_value());
}
