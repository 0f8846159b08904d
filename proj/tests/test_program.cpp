#include <catch2/catch_amalgamated.hpp>

#include "om/arrangements.hpp"
#include "om/program.hpp"

using namespace om;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::MessageMatches;

namespace {
AffineOM tri_affine() {
    auto inst = named_instance("tri");
    return AffineOM::make(inst.structure.system, *inst.g);
}

std::map<ElementId, Sign> S(std::initializer_list<std::pair<ElementId, Sign>> cs) {
    return std::map<ElementId, Sign>(cs.begin(), cs.end());
}

std::string opt(const AffineOM& a, ElementId f, std::map<ElementId, Sign> cs) {
    return solve_program(a, f, polyhedron(a, std::move(cs))).render();
}
}

TEST_CASE("affine split of the triangle system", "[program]") {
    auto a = tri_affine();
    REQUIRE(a.affine_cocircuits.size() == 3);
    REQUIRE(a.projected_topes().size() == 7);
    for (const auto& x : a.affine) REQUIRE(x.at(a.g) == Sign::Plus);
    for (const auto& x : a.infinity) REQUIRE(x.at(a.g) == Sign::Zero);
    REQUIRE_THROWS_AS(AffineOM::make(a.base, 9), ElementNotFound);
}

TEST_CASE("the cocircuit digraph ranges over affine vertices", "[program]") {
    auto a = tri_affine();
    for (ElementId f : {0u, 1u, 2u}) {
        auto d = cocircuit_digraph(a, f);
        REQUIRE(d.nodes.size() == 3);
        REQUIRE_FALSE(d.arcs.empty());
        REQUIRE_FALSE(d.half_arcs.empty());
        // edges parallel to the objective level line stay unoriented, but
        // some arc must carry a direction
        bool oriented = false;
        for (const auto& arc : d.arcs) oriented = oriented || arc.dir != 0;
        REQUIRE(oriented);
    }
    REQUIRE_THROWS_AS(cocircuit_digraph(a, a.g), Error);
}

TEST_CASE("optima of the triangle programs", "[program]") {
    auto a = tri_affine();
    auto inside = S({{0, Sign::Plus}, {1, Sign::Plus}, {2, Sign::Minus}});
    auto wedge = S({{0, Sign::Plus}, {1, Sign::Minus}, {2, Sign::Plus}});

    REQUIRE(opt(a, 0, inside) == "0+0+");
    REQUIRE(opt(a, 0, wedge) == "+00+");
    REQUIRE(opt(a, 1, inside) == "+00+");
    REQUIRE(opt(a, 1, S({{1, Sign::Plus}})) == "+00+");
    REQUIRE(opt(a, 2, inside) == "00-+");
    REQUIRE(opt(a, 2, wedge) == "+00+");
}

TEST_CASE("feasible region sizes", "[program]") {
    auto a = tri_affine();
    REQUIRE(polyhedron(a, S({{0, Sign::Plus}, {1, Sign::Plus}, {2, Sign::Minus}})).members.size() == 7);
    REQUIRE(polyhedron(a, S({{1, Sign::Plus}})).members.size() == 14);
    REQUIRE(polyhedron(a, S({{0, Sign::Plus}, {1, Sign::Minus}, {2, Sign::Plus}})).members.size() == 4);
    REQUIRE_THROWS_AS(polyhedron(a, S({{3, Sign::Plus}})), Error);
    REQUIRE_THROWS_AS(polyhedron(a, S({{0, Sign::Zero}})), Error);
}

TEST_CASE("unbounded programs name a recession direction", "[program]") {
    auto a = tri_affine();
    REQUIRE_THROWS_MATCHES(opt(a, 0, S({{1, Sign::Plus}})), Unbounded,
                           MessageMatches(ContainsSubstring("-+00")));
    REQUIRE_THROWS_MATCHES(opt(a, 1, S({{0, Sign::Plus}, {1, Sign::Minus}, {2, Sign::Plus}})),
                           Unbounded, MessageMatches(ContainsSubstring("+-00")));
    REQUIRE_THROWS_MATCHES(opt(a, 2, S({{1, Sign::Plus}})), Unbounded,
                           MessageMatches(ContainsSubstring("-0-0")));
}

TEST_CASE("infeasible programs are rejected up front", "[program]") {
    auto a = tri_affine();
    auto p = polyhedron(a, S({{0, Sign::Minus}, {1, Sign::Minus}, {2, Sign::Plus}}));
    REQUIRE(p.members.empty());
    REQUIRE_THROWS_AS(solve_program(a, 1, p), EmptyPolyhedron);
}

TEST_CASE("the optimum is the unique feasible sink", "[program]") {
    auto a = tri_affine();
    for (ElementId f : {0u, 1u, 2u}) {
        auto d = cocircuit_digraph(a, f);
        for (auto cs : {S({{0, Sign::Plus}, {1, Sign::Plus}, {2, Sign::Minus}}),
                        S({{0, Sign::Plus}, {1, Sign::Minus}, {2, Sign::Plus}}),
                        S({{1, Sign::Plus}})}) {
            auto p = polyhedron(a, cs);
            SignVector x(a.base.ground, 0, 0);
            try {
                x = solve_program(d, p);
            } catch (const Unbounded&) {
                continue;
            }
            REQUIRE(p.admits(x));
            uint32_t xi = 0;
            for (uint32_t i = 0; i < d.nodes.size(); ++i)
                if (d.nodes[i] == x) xi = i;
            for (const auto& arc : d.arcs) {
                if (arc.dir == 0) continue;
                if (!p.admits(d.nodes[arc.a]) || !p.admits(d.nodes[arc.b])) continue;
                uint32_t head = arc.dir > 0 ? arc.b : arc.a;
                REQUIRE(head != xi);
            }
            for (const auto& h : d.half_arcs)
                if (h.node == xi && h.dir == -1) REQUIRE_FALSE(p.admits(h.cover));
        }
    }
}

TEST_CASE("the corner at a solution does not depend on the polyhedron", "[program]") {
    auto a = tri_affine();
    auto d = cocircuit_digraph(a, 0);
    auto x = solve_program(d, polyhedron(a, S({{0, Sign::Plus}, {1, Sign::Minus}, {2, Sign::Plus}})));
    auto y = solve_program(d, polyhedron(a, S({{1, Sign::Minus}, {2, Sign::Plus}})));
    REQUIRE(x == y);
    REQUIRE(x.render() == "+00+");

    auto c1 = corner_at_solution(a, d, x, 0);
    auto c2 = corner_at_solution(a, x, 0);
    REQUIRE(c1.record.corner == c2.record.corner);
    REQUIRE(c1.record.side == Sign::Minus);
    REQUIRE_FALSE(c1.record.corner.empty());
    REQUIRE(c1.cell.base == x);
    REQUIRE_THROWS_AS(corner_at_solution(a, d, SignVector(a.base.ground, 0, 0), 0),
                      VectorNotInSystem);
    // an optimum with the objective vanishing on it gives no usable corner
    auto z = solve_program(a, 1, polyhedron(a, S({{1, Sign::Plus}})));
    REQUIRE(z.at(1) == Sign::Zero);
    REQUIRE_THROWS_AS(corner_at_solution(a, z, 1), NotGeneralPosition);
}
