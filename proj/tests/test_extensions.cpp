#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "om/arrangements.hpp"
#include "om/extensions.hpp"
#include "om/program.hpp"

using namespace om;

namespace {
SignSystem sys(const std::string& text) { return parse_system(text).system; }

std::vector<std::string> tokens(const std::vector<SignVector>& vs) {
    std::vector<std::string> out;
    for (const auto& v : vs) out.push_back(v.render());
    return out;
}
}

TEST_CASE("lexicographic extension adds an element in general position", "[extend]") {
    auto base = named_instance("cycle(3)").structure.system;
    auto ext = extend_by_localization(base, Localization::lex({{0, Sign::Plus},
                                                               {1, Sign::Plus},
                                                               {2, Sign::Plus}}));
    REQUIRE(ext.element == 3);
    REQUIRE(classify_system(ext.system).verdict == Verdict::OM);
    REQUIRE(topes(ext.system).size() == 8);
    REQUIRE(rank_of(ext.system) == 2);
    REQUIRE(is_general_position(ext.system, ext.element));
    auto back = delete_elements(ext.system, elem_bit(ext.element));
    REQUIRE(back.vectors == base.vectors);
}

TEST_CASE("a short rule lands the new element on old vertices", "[extend]") {
    auto base = named_instance("cycle(3)").structure.system;
    auto ext = extend_by_localization(base, Localization::lex({{0, Sign::Plus}}));
    REQUIRE(classify_system(ext.system).verdict == Verdict::OM);
    REQUIRE_FALSE(is_general_position(ext.system, ext.element));
}

TEST_CASE("localization rules validate their input", "[extend]") {
    auto base = named_instance("cycle(3)").structure.system;
    REQUIRE_THROWS_AS(Localization::lex({{0, Sign::Zero}}), Error);
    REQUIRE_THROWS_AS(Localization::lex({{0, Sign::Plus}, {0, Sign::Minus}}), Error);
    REQUIRE_THROWS_AS(extend_by_localization(base, Localization::lex({{7, Sign::Plus}})),
                      ElementNotFound);
}

TEST_CASE("explicit localizations must be antipodal", "[extend]") {
    auto base = sys("0\n+\n-\n");
    auto g = base.ground;
    std::map<SignVector, Sign> bad{{SignVector::from_token(g, "+"), Sign::Plus},
                                   {SignVector::from_token(g, "-"), Sign::Plus}};
    REQUIRE_THROWS_AS(extend_by_localization(base, Localization::explicit_table(bad)),
                      InvalidLocalization);
    std::map<SignVector, Sign> good{{SignVector::from_token(g, "+"), Sign::Plus},
                                    {SignVector::from_token(g, "-"), Sign::Minus}};
    auto ext = extend_by_localization(base, Localization::explicit_table(good));
    REQUIRE(topes(ext.system).size() == 2);
    REQUIRE(rank_of(ext.system) == 1);
}

TEST_CASE("corner of the four line arrangement", "[corner]") {
    auto base = named_instance("paper4").structure.system;
    auto rec = find_corner(base);
    REQUIRE(rec.element == 4);
    REQUIRE(rec.side == Sign::Plus);
    REQUIRE(tokens(rec.corner) == std::vector<std::string>{"--++", "---+", "----"});
    REQUIRE(is_general_position(rec.extension, rec.element));
    auto back = delete_elements(rec.extension, elem_bit(rec.element));
    REQUIRE(back.vectors == base.vectors);
}

TEST_CASE("corner sizes across the suite", "[corner]") {
    for (long n = 3; n <= 6; ++n) {
        auto base = named_instance("cycle(" + std::to_string(n) + ")").structure.system;
        REQUIRE(find_corner(base).corner.size() == static_cast<size_t>(n - 1));
    }
    for (long n = 1; n <= 3; ++n) {
        auto base = named_instance("cube(" + std::to_string(n) + ")").structure.system;
        REQUIRE(find_corner(base).corner.size() == 1);
    }
}

TEST_CASE("the complement of a corner embeds isometrically", "[corner]") {
    auto base = named_instance("paper4").structure.system;
    auto rec = find_corner(base);
    std::set<SignVector> gone(rec.corner.begin(), rec.corner.end());
    std::vector<SignVector> kept;
    for (const auto& t : topes(base).vectors)
        if (!gone.count(t)) kept.push_back(t);
    REQUIRE_NOTHROW(TopeGraph::build(SignSystem::make(base.ground, kept)));
}

TEST_CASE("every lead variant restores the base after deletion", "[extend]") {
    auto base = named_instance("paper4").structure.system;
    for (ElementId lead : base.ground->ids())
        for (Sign s : {Sign::Plus, Sign::Minus}) {
            std::vector<std::pair<ElementId, Sign>> chain{{lead, s}};
            for (ElementId e : base.ground->ids())
                if (e != lead) chain.emplace_back(e, Sign::Plus);
            auto ext = extend_by_localization(base, Localization::lex(chain));
            auto back = delete_elements(ext.system, elem_bit(ext.element));
            REQUIRE(back.vectors == base.vectors);
        }
}

TEST_CASE("covector recovery is the identity on oriented matroids", "[recover]") {
    for (const char* key : {"paper4", "cycle(4)", "cube(3)", "unif(3,4)"}) {
        auto s = named_instance(key).structure;
        auto rec = covectors_from_topes(s.topes);
        REQUIRE(rec.classification.verdict == Verdict::OM);
        REQUIRE(rec.system.vectors == s.system.vectors);
    }
}

TEST_CASE("recovery rejects tope sets outside the axioms", "[recover]") {
    REQUIRE_THROWS_AS(covectors_from_topes(sys("+++\n--+\n-+-\n+--\n")), RecoveryFailed);
    REQUIRE_THROWS_AS(covectors_from_topes(SignSystem{}), EmptySystem);
    REQUIRE_THROWS_AS(covectors_from_topes(sys("+0\n-0\n")), Error);
}

TEST_CASE("corner peeling dismantles a cycle", "[peel]") {
    auto base = named_instance("cycle(3)").structure.system;
    auto stages = com_corner_peeling(base);
    REQUIRE(stages.size() == 5);
    std::set<SignVector> seen;
    size_t expected = topes(base).size();
    for (const auto& st : stages) {
        REQUIRE(st.topes_before.size() == expected);
        REQUIRE_FALSE(st.removed.empty());
        for (const auto& t : st.removed) REQUIRE(seen.insert(t).second);
        expected -= st.removed.size();
    }
    REQUIRE(expected == 0);
    REQUIRE(seen.size() == topes(base).size());
}

TEST_CASE("corner peeling handles a proper conditional system", "[peel]") {
    auto inst = named_instance("tri");
    auto aff = AffineOM::make(inst.structure.system, *inst.g);
    auto rec = covectors_from_topes(aff.projected_topes());
    REQUIRE(rec.classification.verdict == Verdict::COM_NOT_OM);
    auto stages = com_corner_peeling(rec.system);
    REQUIRE(stages.size() == 7);
    size_t removed = 0;
    for (const auto& st : stages) removed += st.removed.size();
    REQUIRE(removed == 7);
}

TEST_CASE("two squares glued at a vertex cannot be peeled", "[peel]") {
    auto t = sys("----\n+---\n-+--\n++--\n--+-\n---+\n--++\n");
    auto rec = covectors_from_topes(t);
    REQUIRE(rec.system.size() == 17);
    REQUIRE(rec.classification.verdict == Verdict::COM_NOT_OM);
    REQUIRE_THROWS_AS(com_corner_peeling(rec.system), NoPeelingFound);
}
