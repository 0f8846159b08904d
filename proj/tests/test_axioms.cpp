#include <catch2/catch_amalgamated.hpp>

#include "om/arrangements.hpp"
#include "om/axioms.hpp"
#include "om/extensions.hpp"
#include "om/system.hpp"

using namespace om;

namespace {
SignSystem sys(const std::string& text) { return parse_system(text).system; }
}

TEST_CASE("the four-line class is an oriented matroid", "[axioms]") {
    auto o = named_instance("paper4").structure;
    REQUIRE(o.classification.verdict == Verdict::OM);
    REQUIRE(o.classification.simple);
    REQUIRE(o.system.size() == 17);
    REQUIRE(o.topes.size() == 8);
    REQUIRE(o.cocircuits.size() == 8);
    REQUIRE(o.rank == 2u);
}

TEST_CASE("tope sets are closed under negation in an OM", "[axioms]") {
    auto o = named_instance("paper4").structure;
    for (const auto& t : o.topes.vectors) REQUIRE(o.topes.contains(t.negated()));
}

TEST_CASE("verdicts split along the axioms", "[axioms]") {
    auto om = classify_system(sys("00\n+0\n-0\n0+\n0-\n++\n+-\n-+\n--\n"));
    REQUIRE(om.verdict == Verdict::OM);

    // three corners of the square: face symmetric without negation closure
    auto path = covectors_from_topes(sys("++\n+-\n-+\n")).system;
    auto com = classify_system(path);
    REQUIRE(path.size() == 5);
    REQUIRE(com.verdict == Verdict::COM_NOT_OM);
    REQUIRE(com.composition);
    REQUIRE(com.strong_elimination);
    REQUIRE_FALSE(com.symmetric);
    REQUIRE(com.face_symmetric);

    // negation closure without elimination support
    auto neither = classify_system(sys("++\n--\n"));
    REQUIRE(neither.verdict == Verdict::NEITHER);
    REQUIRE_THROWS_AS(classify_system(SignSystem{}), EmptySystem);
}

TEST_CASE("topes and cocircuits are the extremes of the order", "[axioms]") {
    auto s = named_instance("cube(2)").structure.system;
    auto t = topes(s);
    REQUIRE(t.size() == 4);
    for (const auto& v : t.vectors) REQUIRE(v.full_support());
    auto c = cocircuits(s);
    REQUIRE(c.size() == 4);
    for (const auto& v : c.vectors) REQUIRE(v.support_mask() != 0);
}

TEST_CASE("rank counts chain steps", "[axioms]") {
    REQUIRE(rank_of(named_instance("paper4").structure.system) == 2);
    REQUIRE(rank_of(named_instance("cube(3)").structure.system) == 3);
    REQUIRE(rank_of(named_instance("cube(1)").structure.system) == 1);
    REQUIRE(rank_of(named_instance("unif(3,5)").structure.system) == 3);
}

TEST_CASE("upset restricts to covectors above a witness", "[axioms]") {
    auto s = named_instance("cube(2)").structure.system;
    auto u = upset(s, SignVector::from_token(s.ground, "+0"));
    REQUIRE(u.reduced.ground->ids() == std::vector<ElementId>{1});
    REQUIRE(u.reduced.size() == 3);
    REQUIRE(rank_of(u.reduced) == 1);
    auto p = named_instance("paper4").structure.system;
    REQUIRE_THROWS_AS(upset(p, SignVector::from_token(p.ground, "+0+0")), VectorNotInSystem);
}

TEST_CASE("deletion and contraction keep stable ids", "[axioms]") {
    auto s = named_instance("cube(3)").structure.system;
    auto del = delete_elements(s, elem_bit(1));
    REQUIRE(del.ground->ids() == std::vector<ElementId>{0, 2});
    REQUIRE(rank_of(del) == 2);

    auto con = contract(s, elem_bit(1));
    REQUIRE(con.ground->ids() == std::vector<ElementId>{0, 2});
    REQUIRE(rank_of(con) == 2);
    REQUIRE(classify_system(con).verdict == Verdict::OM);

    REQUIRE_THROWS_AS(delete_elements(s, s.ground->mask()), Error);
}

TEST_CASE("contraction of a cycle drops the rank to one", "[axioms]") {
    auto s = named_instance("cycle(4)").structure.system;
    auto con = contract(s, elem_bit(0));
    REQUIRE(rank_of(con) == 1);
    REQUIRE(classify_system(con).verdict == Verdict::OM);
}

TEST_CASE("simplification drops constants and parallel copies", "[axioms]") {
    // two parallel elements and one constant zero column
    auto s = sys("++0\n--0\n000\n");
    auto sp = simplify(s);
    REQUIRE(sp.system.ground->size() == 1);
    REQUIRE(sp.system.ground->ids().front() == 0);
    REQUIRE(check_simple(sp.system));
}

TEST_CASE("analyze bundles the derived data", "[axioms]") {
    auto o = analyze(named_instance("cycle(5)").structure.system);
    REQUIRE(o.topes.size() == 10);
    REQUIRE(o.cocircuits.size() == 10);
    REQUIRE(o.rank == 2u);
    REQUIRE(o.classification.verdict == Verdict::OM);
}
