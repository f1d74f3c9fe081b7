#include <catch2/catch_amalgamated.hpp>

#include "kaleido/io.hpp"

using namespace kaleido;
using io::json;

TEST_CASE("tree documents round-trip") {
    Tree t({0, 1, 2, 3}, {{0, 1}, {1, 2}, {1, 3}});
    json j = io::tree_to_json(t);
    CHECK(io::tree_from_json(j) == t);
    RootedTree rt(t, 0);
    CHECK(io::rooted_tree_from_json(io::rooted_tree_to_json(rt)) == rt);
}

TEST_CASE("relational structure documents round-trip") {
    for (const RelStructure& s : {constant_only(3), pointed_linear_order(4)}) {
        json j = io::relstruct_to_json(s);
        CHECK(io::relstruct_from_json(j) == s);
    }
}

TEST_CASE("decorated tree documents round-trip and omit leaf decorations") {
    for (int m : {2, 3})
        for (int h = 0; h <= 2; ++h) {
            DecoratedTree dt = build_Ah(m == 2 ? constant_only(2) : pointed_linear_order(3), h);
            json j = io::decorated_to_json(dt);
            CHECK(io::decorated_from_json(j) == dt);
            for (int v : dt.rt().vertices())
                if (dt.rt().is_leaf(v)) CHECK_FALSE(j.at("decorations").contains(std::to_string(v)));
        }
}

TEST_CASE("colored tree documents round-trip") {
    Tree t = Tree::path_of({0, 1, 2});
    std::map<Component, std::string> cols{{{1, 0}, "c"}, {{1, 2}, "d"}, {{2, 1}, "c"}};
    ColoredTree ct(t, 0, {"c", "d"}, "c", cols);
    CHECK(io::colored_from_json(io::colored_to_json(ct)) == ct);
}

TEST_CASE("order and coloring documents round-trip") {
    Tree t = Tree::path_of({0, 1, 2});
    TreeLinearOrder o(t, {{0, 2}, {1, 0}, {2, 1}});
    CHECK(io::order_from_json(io::order_to_json(o)) == o);

    ColoringAssignment gamma{3, {0, 2, 1, 1}};
    json j = io::coloring_to_json(gamma);
    ColoringAssignment back = io::coloring_from_json(j);
    CHECK(back.k == gamma.k);
    CHECK(back.colors == gamma.colors);
}

TEST_CASE("verdict documents carry the bad coloring") {
    auto v = decide_arrow({build_Ah(constant_only(2), 1), build_Ah(constant_only(2), 1),
                           build_Ah(constant_only(2), 0), 2, false});
    json j = io::verdict_to_json(v);
    CHECK(j.at("holds") == false);
    CHECK(j.at("bad_coloring").at("colors").size() == 2);
    CHECK(j.at("stats").contains("search_nodes"));
}

TEST_CASE("arrow instance documents in tower form") {
    json j{{"schema", io::kArrowSchema},
           {"alphabet", io::relstruct_to_json(constant_only(2))},
           {"C_height", 1},
           {"B_height", 1},
           {"A_height", 0},
           {"k", 2}};
    auto doc = io::arrow_from_json(j);
    CHECK(doc.instance.C.size() == 3);
    CHECK(doc.instance.A.size() == 2);
    CHECK_FALSE(decide_arrow(doc.instance).holds);
}

TEST_CASE("serialization is deterministic") {
    DecoratedTree dt = build_Ah(pointed_linear_order(3), 2);
    CHECK(io::dump(io::decorated_to_json(dt)) == io::dump(io::decorated_to_json(dt)));
}

TEST_CASE("schema mismatches raise parse errors") {
    json j = io::tree_to_json(Tree::single(0));
    CHECK_THROWS_AS(io::relstruct_from_json(j), io::ParseError);
    CHECK_THROWS_AS(io::rooted_tree_from_json(j), io::ParseError);  // no root field
}
