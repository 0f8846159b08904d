#include <catch2/catch_amalgamated.hpp>

#include <bit>

#include "om/arrangements.hpp"
#include "om/tope_graph.hpp"

using namespace om;

namespace {
TopeGraph graph_of(const std::string& key) {
    return TopeGraph::build(named_instance(key).structure.topes);
}
}

TEST_CASE("the four-line tope graph is an eight cycle", "[graph]") {
    auto g = graph_of("paper4");
    REQUIRE(g.order() == 8);
    for (uint32_t v = 0; v < g.order(); ++v) REQUIRE(g.neighbors(v).size() == 2);
    // antipodal topes sit at distance four
    for (uint32_t v = 0; v < g.order(); ++v) {
        auto anti = g.index_of(g.vertex(v).negated());
        REQUIRE(g.distance(v, anti) == 4);
    }
}

TEST_CASE("graph distance equals sign disagreement", "[graph]") {
    auto g = graph_of("cube(3)");
    for (uint32_t a = 0; a < g.order(); ++a)
        for (uint32_t b = 0; b < g.order(); ++b)
            REQUIRE(g.distance(a, b) ==
                    std::popcount(g.vertex(a).separator_mask(g.vertex(b))));
}

TEST_CASE("disconnected tope sets are rejected", "[graph]") {
    auto res = parse_system("++\n--\n");
    REQUIRE_THROWS_AS(TopeGraph::build(res.system), NotPartialCube);
}

TEST_CASE("halfspaces partition the vertices", "[graph]") {
    auto g = graph_of("paper4");
    for (ElementId e : g.ground()->ids()) {
        auto plus = g.halfspace(e, Sign::Plus);
        auto minus = g.halfspace(e, Sign::Minus);
        REQUIRE(plus.size() + minus.size() == g.order());
        for (uint32_t v : plus) REQUIRE(g.vertex(v).at(e) == Sign::Plus);
    }
}

TEST_CASE("convex sets are exactly halfspace intersections", "[graph]") {
    auto g = graph_of("paper4");
    auto all = g.enumerate_convex_sets();
    REQUIRE(all.size() == 33);
    for (const auto& c : all) {
        auto again = g.convex_from_members(c.members);
        REQUIRE(again.members == c.members);
        REQUIRE(again.osc == c.osc);
        REQUIRE((c.osc & c.cross) == 0);
        REQUIRE((c.side_plus & c.side_minus) == 0);
    }
}

TEST_CASE("convex set counts on the named suite", "[graph]") {
    REQUIRE(graph_of("cycle(3)").enumerate_convex_sets().size() == 19);
    REQUIRE(graph_of("cycle(5)").enumerate_convex_sets().size() == 51);
    REQUIRE(graph_of("cube(2)").enumerate_convex_sets().size() == 9);
    REQUIRE(graph_of("cube(3)").enumerate_convex_sets().size() == 27);
    REQUIRE(graph_of("unif(3,4)").enumerate_convex_sets().size() == 71);
}

TEST_CASE("samples cut out convex sets", "[graph]") {
    auto g = graph_of("paper4");
    auto whole = g.convex_from_sample(SignVector::from_token(g.ground(), "0000"));
    REQUIRE(whole.members.size() == 8);
    REQUIRE(whole.osc == 0);
    auto one = g.convex_from_sample(SignVector::from_token(g.ground(), "----"));
    REQUIRE(one.members.size() == 1);
    REQUIRE(one.osc == (elem_bit(0) | elem_bit(3)));
    REQUIRE_THROWS_AS(g.convex_from_sample(SignVector::from_token(g.ground(), "+-+0")),
                      UnrealizableSample);
}

TEST_CASE("osc elements flip exactly one step outside", "[graph]") {
    auto g = graph_of("cycle(4)");
    for (const auto& c : g.enumerate_convex_sets()) {
        for (ElementId e : mask_elements(c.osc)) {
            bool seen = false;
            for (uint32_t v : c.members)
                for (uint32_t w : g.neighbors(v)) {
                    bool inside = std::binary_search(c.members.begin(), c.members.end(), w);
                    if (!inside && (g.vertex(v).separator_mask(g.vertex(w)) == elem_bit(e)))
                        seen = true;
                }
            REQUIRE(seen);
        }
    }
}

TEST_CASE("shattering matches the brute force definition", "[graph]") {
    auto g = graph_of("paper4");
    REQUIRE(g.vc_dimension() == 2);
    auto fam = g.shattered_family();
    REQUIRE(fam.size() == 11);
    unsigned pairs = 0;
    for (ElemMask w : fam)
        if (std::popcount(w) == 2) ++pairs;
    REQUIRE(pairs == 6);
    REQUIRE_FALSE(g.is_shattered(elem_bit(0) | elem_bit(1) | elem_bit(2)));
    REQUIRE(g.is_shattered(0));
}

TEST_CASE("cubes shatter everything", "[graph]") {
    auto g = graph_of("cube(3)");
    REQUIRE(g.vc_dimension() == 3);
    REQUIRE(g.shattered_family().size() == 8);
}

TEST_CASE("vc dimension across the suite", "[graph]") {
    REQUIRE(graph_of("cycle(6)").vc_dimension() == 2);
    REQUIRE(graph_of("unif(3,4)").vc_dimension() == 3);
    REQUIRE(graph_of("unif(3,6)").vc_dimension() == 3);
    REQUIRE(graph_of("cube(1)").vc_dimension() == 1);
}

TEST_CASE("full convex sets survive crossing deletions", "[graph]") {
    auto inst = named_instance("paper4");
    auto g = graph_of("paper4");
    // on the 8-cycle an arc of k topes crosses k-1 of the four directions,
    // and rank two survives exactly while two directions remain uncrossed
    for (const auto& c : g.enumerate_convex_sets())
        REQUIRE(is_full_convex(inst.structure.system, c) == (c.members.size() <= 3));
}
