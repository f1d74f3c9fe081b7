#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "kaleido/ramsey.hpp"

using namespace kaleido;

namespace {

/// Literal oracle: enumerate every coloring and test the arrow definition
/// directly. Only feasible for small embedding counts.
bool oracle_arrow_holds(const ArrowInstance& inst) {
    EmbedOptions opts;
    opts.rooted = inst.rooted;
    auto EA = dec_embeddings(inst.A, inst.C, opts);
    auto EB = dec_embeddings(inst.B, inst.C, opts);
    auto EAB = dec_embeddings(inst.A, inst.B, opts);
    REQUIRE(!EA.empty());
    std::map<std::map<int, int>, int> index;
    for (std::size_t i = 0; i < EA.size(); ++i) index[EA[i].map] = static_cast<int>(i);
    std::vector<std::vector<int>> sets;
    for (const auto& f : EB) {
        std::set<int> ids;
        for (const auto& g : EAB) ids.insert(index.at(compose(f, g).map));
        sets.emplace_back(ids.begin(), ids.end());
    }
    long long total = 1;
    for (std::size_t i = 0; i < EA.size(); ++i) total *= inst.k;
    std::vector<int> colors(EA.size());
    for (long long code = 0; code < total; ++code) {
        long long c = code;
        for (auto& col : colors) {
            col = static_cast<int>(c % inst.k);
            c /= inst.k;
        }
        bool has_mono = false;
        for (const auto& s : sets) {
            bool mono = true;
            for (std::size_t i = 1; i < s.size(); ++i)
                if (colors[s[i]] != colors[s[0]]) mono = false;
            if (mono) {
                has_mono = true;
                break;
            }
        }
        if (!has_mono) return false;  // found a bad coloring
    }
    return true;
}

DecoratedTree C2(int h) { return build_Ah(constant_only(2), h); }
DecoratedTree C3(int h) { return build_Ah(constant_only(3), h); }

}  // namespace

TEST_CASE("trivial arrows") {
    SECTION("C = B = A = A[0] holds for two colors") {
        auto v = decide_arrow({C2(0), C2(0), C2(0), 2, false});
        CHECK(v.holds);
    }
    SECTION("one color holds exactly when B embeds") {
        CHECK(decide_arrow({C2(2), C2(1), C2(0), 1, false}).holds);
        CHECK_FALSE(decide_arrow({C2(1), C2(2), C2(0), 1, false}).holds);
    }
    SECTION("empty A-copy set is an input error") {
        DecoratedTree big = C3(1);
        DecoratedTree small_alpha = C2(1);
        CHECK_THROWS_AS(decide_arrow({C2(0), C2(1), C2(1), 2, false}), std::invalid_argument);
        (void)big;
        (void)small_alpha;
    }
}

TEST_CASE("the two-element tower fails its own point arrow") {
    // A[1] -> (A[1])^2_{A[0]} admits the bad coloring that separates r from
    // its child
    auto v = decide_arrow({C2(1), C2(1), C2(0), 2, false});
    REQUIRE_FALSE(v.holds);
    REQUIRE(v.bad_coloring.has_value());
    CHECK(v.bad_coloring->colors.size() == 2);
    CHECK(v.bad_coloring->colors[0] != v.bad_coloring->colors[1]);
    CHECK(v.bad_coloring->colors[0] == 0);  // lexicographically least

    SECTION("the bad coloring defeats the replay search") {
        CHECK_FALSE(find_mono_copy(C2(1), C2(1), C2(0), *v.bad_coloring).has_value());
    }
}

TEST_CASE("decide_arrow agrees with the literal enumeration oracle") {
    std::vector<ArrowInstance> instances;
    instances.push_back({C2(2), C2(1), C2(0), 2, false});
    instances.push_back({C2(3), C2(1), C2(0), 2, false});
    instances.push_back({C2(1), C2(1), C2(0), 2, false});
    instances.push_back({C3(1), C3(1), C3(0), 2, false});
    instances.push_back({C2(2), C2(2), C2(0), 2, false});
    instances.push_back({C2(2), C2(1), C2(0), 3, false});
    instances.push_back({C2(2), C2(1), C2(1), 2, false});
    instances.push_back({C2(3), C2(1), C2(1), 2, true});
    instances.push_back({build_Ah(pointed_linear_order(2), 2), build_Ah(pointed_linear_order(2), 1),
                         build_Ah(pointed_linear_order(2), 0), 2, false});
    for (const auto& inst : instances) {
        EmbedOptions opts;
        opts.rooted = inst.rooted;
        REQUIRE(dec_embeddings(inst.A, inst.C, opts).size() <= 12);
        CHECK(decide_arrow(inst).holds == oracle_arrow_holds(inst));
    }
}

TEST_CASE("bad verdicts replay as exhausted searches") {
    for (auto inst : {ArrowInstance{C2(1), C2(1), C2(0), 2, false}, ArrowInstance{C3(1), C3(1), C3(0), 2, false}}) {
        auto v = decide_arrow(inst);
        if (!v.holds) {
            REQUIRE(v.bad_coloring.has_value());
            CHECK_FALSE(find_mono_copy(inst.C, inst.B, inst.A, *v.bad_coloring, inst.rooted).has_value());
        }
    }
}

TEST_CASE("arrow verdicts are monotone in C") {
    // if the arrow holds in C and C embeds in C', it holds in C'
    ArrowInstance small{C2(2), C2(1), C2(0), 2, false};
    ArrowInstance large{C2(3), C2(1), C2(0), 2, false};
    REQUIRE_FALSE(dec_embeddings(small.C, large.C, false).empty());
    if (decide_arrow(small).holds) CHECK(decide_arrow(large).holds);

    ArrowInstance small3{C3(1), C3(1), C3(0), 2, false};
    ArrowInstance large3{C3(2), C3(1), C3(0), 2, false};
    REQUIRE_FALSE(dec_embeddings(small3.C, large3.C, false).empty());
    if (decide_arrow(small3).holds) CHECK(decide_arrow(large3).holds);
}

TEST_CASE("verdicts and searches are deterministic") {
    auto v1 = decide_arrow({C2(1), C2(1), C2(0), 2, false});
    auto v2 = decide_arrow({C2(1), C2(1), C2(0), 2, false});
    CHECK(v1.holds == v2.holds);
    CHECK(v1.bad_coloring->colors == v2.bad_coloring->colors);
    CHECK(v1.stats.search_nodes == v2.stats.search_nodes);
}

TEST_CASE("find_mono_copy basics") {
    DecoratedTree T = C2(2);
    auto EA = dec_embeddings(C2(0), T, false);
    SECTION("constant colorings yield the first copy") {
        ColoringAssignment constant{2, std::vector<int>(EA.size(), 1)};
        auto res = find_mono_copy(T, C2(1), C2(0), constant);
        REQUIRE(res.has_value());
        CHECK(res->color == 1);
        auto EB = dec_embeddings(C2(1), T, false);
        CHECK(res->copy == EB.front());
    }
    SECTION("a verified arrow guarantees success for every coloring") {
        REQUIRE(decide_arrow({T, C2(1), C2(0), 2, false}).holds);
        std::mt19937_64 rng(5);
        for (int trial = 0; trial < 20; ++trial) {
            ColoringAssignment gamma{2, {}};
            for (std::size_t i = 0; i < EA.size(); ++i) gamma.colors.push_back(static_cast<int>(rng() % 2));
            CHECK(find_mono_copy(T, C2(1), C2(0), gamma).has_value());
        }
    }
    SECTION("coloring must be total") {
        ColoringAssignment bad{2, {0}};
        CHECK_THROWS_AS(find_mono_copy(T, C2(1), C2(0), bad), std::invalid_argument);
    }
}

TEST_CASE("witness_search walks the tower family") {
    SECTION("a point arrow is witnessed immediately") {
        auto res = witness_search(C2(0), C2(0), 2, false, constant_family(), 100000);
        REQUIRE(res.found());
        CHECK(res.height == 0);
        CHECK(res.alphabet_size == 2);
    }
    SECTION("the chain alphabet needs height two for the point arrow") {
        auto res = witness_search(C2(1), C2(0), 2, false, constant_family(), 1000000);
        REQUIRE(res.found());
        CHECK(res.alphabet_size == 2);
        CHECK(res.height == 2);
        CHECK(decide_arrow({*res.witness, C2(1), C2(0), 2, false}).holds);
    }
    SECTION("the ordered alphabet also yields a witness") {
        DecoratedTree b = build_Ah(pointed_linear_order(2), 1);
        DecoratedTree a = build_Ah(pointed_linear_order(2), 0);
        auto res = witness_search(b, a, 2, false, linear_order_family(), 1000000);
        REQUIRE(res.found());
        CHECK(decide_arrow({*res.witness, b, a, 2, false}).holds);
    }
    SECTION("a tiny budget is inconclusive, not a failure") {
        auto res = witness_search(C2(1), C2(0), 2, false, constant_family(), 1);
        CHECK_FALSE(res.found());
    }
    SECTION("family signature must match") {
        DecoratedTree b = build_Ah(pointed_linear_order(2), 1);
        CHECK_THROWS_AS(witness_search(b, b, 2, false, constant_family(), 100), std::invalid_argument);
    }
}

TEST_CASE("deuber exploration") {
    SECTION("one color is immediate") {
        auto rep = deuber_explore(constant_only(2), 1, 1, 4);
        REQUIRE(rep.found);
        CHECK(rep.m == 1);
        CHECK(rep.within_bound);
    }
    SECTION("two colors on the chain alphabet need m = 2") {
        auto rep = deuber_explore(constant_only(2), 1, 2, 6);
        REQUIRE(rep.found);
        CHECK(rep.trail.front() == std::pair<int, bool>{1, false});
        CHECK(rep.m == 2);
        CHECK(rep.deuber_bound == 1);
        CHECK_FALSE(rep.within_bound);
        // cross-check both endpoints against the literal oracle
        CHECK_FALSE(oracle_arrow_holds({C2(1), C2(1), C2(0), 2, false}));
        CHECK(oracle_arrow_holds({C2(2), C2(1), C2(0), 2, false}));
    }
    SECTION("the three-element alphabet agrees with the oracle") {
        auto rep = deuber_explore(constant_only(3), 1, 2, 4);
        REQUIRE(rep.found);
        CHECK_FALSE(oracle_arrow_holds({C3(1), C3(1), C3(0), 2, false}));
        CHECK(oracle_arrow_holds({C3(2), C3(1), C3(0), 2, false}));
        CHECK(rep.m == 2);
        CHECK(decide_arrow({C3(rep.m), C3(1), C3(0), 2, false}).holds);
    }
    SECTION("budget exhaustion is inconclusive") {
        auto rep = deuber_explore(constant_only(2), 1, 2, 1);
        CHECK_FALSE(rep.found);
    }
}

TEST_CASE("proof-following monochromatization on a verified chain") {
    RelStructure alpha = constant_only(2);
    std::vector<ChainEntry> chain{{alpha, 15}, {alpha, 7}, {alpha, 3}, {alpha, 1}, {alpha, 0}};
    DecoratedTree T = build_Ah(alpha, 15);
    DecoratedTree A1 = build_Ah(alpha, 1);
    DecoratedTree u = build_Ah(alpha, 2);
    auto EA = dec_embeddings(A1, T, EmbedOptions{});

    SECTION("constant colorings sail through") {
        ColoringAssignment gamma{2, std::vector<int>(EA.size(), 0)};
        auto res = proof_follow_mono(chain, gamma, u, alpha, 1);
        REQUIRE(res.ok());
        CHECK(res.copy->color == 0);
    }
    SECTION("random colorings give genuinely monochromatic copies") {
        std::mt19937_64 rng(42);
        auto index = [&] {
            std::map<std::map<int, int>, int> idx;
            for (std::size_t i = 0; i < EA.size(); ++i) idx[EA[i].map] = static_cast<int>(i);
            return idx;
        }();
        auto EAU = dec_embeddings(A1, u, EmbedOptions{});
        for (int trial = 0; trial < 5; ++trial) {
            ColoringAssignment gamma{2, {}};
            for (std::size_t i = 0; i < EA.size(); ++i) gamma.colors.push_back(static_cast<int>(rng() % 2));
            auto res = proof_follow_mono(chain, gamma, u, alpha, 1);
            REQUIRE(res.ok());
            for (const auto& g : EAU) {
                DecEmbedding comp = compose(res.copy->copy, g);
                CHECK(gamma.colors[index.at(comp.map)] == res.copy->color);
            }
            // the direct search agrees that a copy exists
            CHECK(find_mono_copy(T, u, A1, gamma).has_value());
        }
    }
    SECTION("an undersized chain reports the failing level") {
        std::vector<ChainEntry> weak{{alpha, 2}, {alpha, 1}, {alpha, 0}};
        DecoratedTree Tw = build_Ah(alpha, 2);
        auto EAw = dec_embeddings(A1, Tw, EmbedOptions{});
        REQUIRE(EAw.size() == 3);  // pairs on the 3-chain
        // color the pairs at r with different colors so no level-0 plant works
        ColoringAssignment gamma{2, {0, 1, 0}};
        auto res = proof_follow_mono(weak, gamma, u, alpha, 1);
        CHECK_FALSE(res.ok());
        REQUIRE(res.failed_level.has_value());
        CHECK(*res.failed_level == 0);
    }
}
