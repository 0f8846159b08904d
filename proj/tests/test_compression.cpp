#include <catch2/catch_amalgamated.hpp>

#include <bit>
#include <fstream>
#include <sstream>

#include "om/arrangements.hpp"
#include "om/compression.hpp"

using namespace om;
using Catch::Matchers::ContainsSubstring;

namespace {
ElemMask mk(std::initializer_list<ElementId> es) {
    ElemMask m = 0;
    for (ElementId e : es) m |= elem_bit(e);
    return m;
}

std::string slurp(const std::string& name) {
    std::ifstream in(std::string(FIXTURE_DIR) + "/" + name);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

CompressionScheme paper4_scheme() {
    auto s = named_instance("paper4").structure.system;
    return build_scheme(build_om_map(s));
}
}

TEST_CASE("realizable samples are the zeroed down topes", "[scheme]") {
    auto p = named_instance("paper4").structure.topes;
    REQUIRE(realizable_samples(p).size() == 65);
    REQUIRE(realizable_samples(named_instance("cube(2)").structure.topes).size() == 9);

    auto inst = named_instance("tri");
    auto aff = AffineOM::make(inst.structure.system, *inst.g).projected_topes();
    REQUIRE(realizable_samples(aff).size() == 26);

    auto one = parse_system("++\n").system;
    std::vector<std::string> toks;
    for (const auto& v : realizable_samples(one)) toks.push_back(v.render());
    REQUIRE(toks == std::vector<std::string>{"++", "+0", "0+", "00"});
    REQUIRE_THROWS_AS(realizable_samples(SignSystem{}), EmptySystem);
}

TEST_CASE("schemes built from maps pass their own verifier", "[scheme]") {
    for (const char* key : {"paper4", "cube(2)", "unif(3,4)"}) {
        auto st = named_instance(key).structure;
        auto scheme = build_scheme(build_om_map(st.system));
        auto rep = verify_scheme(st.topes, scheme, scheme.declared_size);
        INFO(key);
        for (const auto& f : rep.failures) INFO(f);
        REQUIRE(rep.ok());
        REQUIRE(rep.samples == realizable_samples(st.topes).size());
        REQUIRE(scheme.alpha.size() == rep.samples);
    }

    auto inst = named_instance("tri");
    auto aff = AffineOM::make(inst.structure.system, *inst.g).projected_topes();
    auto scheme = build_scheme(build_com_map(covectors_from_topes(aff).system));
    auto rep = verify_scheme(aff, scheme, 2);
    REQUIRE(rep.ok());
    REQUIRE(rep.samples == 26);
}

TEST_CASE("compression of the four line class", "[scheme]") {
    auto scheme = paper4_scheme();
    REQUIRE(scheme.declared_size == 2);
    auto g = scheme.universe;
    auto minus = SignVector::from_token(g, "----");
    REQUIRE(alpha(scheme, minus) == mk({0, 3}));
    REQUIRE(beta(scheme, mk({0, 3})) == minus);
    REQUIRE(alpha(scheme, SignVector::from_token(g, "0000")) == 0);
    REQUIRE_THROWS_AS(alpha(scheme, SignVector::from_token(g, "+-+0")), UnrealizableSample);
    REQUIRE_THROWS_AS(beta(scheme, mk({0, 1, 2})), UnknownImage);

    // images live inside the sample's support
    for (const auto& [tok, img] : scheme.alpha) {
        SignVector sample = SignVector::from_token(g, tok);
        REQUIRE((img & ~sample.support_mask()) == 0);
        REQUIRE(std::popcount(img) <= 2);
    }
}

TEST_CASE("the stored document is a valid scheme for the class", "[scheme]") {
    auto scheme = import_scheme(slurp("table1.json"));
    REQUIRE(scheme.declared_size == 2);
    REQUIRE(scheme.universe->ids() == std::vector<ElementId>{0, 1, 2, 3});
    REQUIRE(scheme.alpha.size() == 65);
    REQUIRE(scheme.beta.size() == 11);
    auto topes4 = named_instance("paper4").structure.topes;
    auto rep = verify_scheme(topes4, scheme, 2);
    for (const auto& f : rep.failures) INFO(f);
    REQUIRE(rep.ok());
    REQUIRE(rep.samples == 65);
}

TEST_CASE("single corrupted entries are reported", "[scheme]") {
    auto topes4 = named_instance("paper4").structure.topes;

    auto bad_beta = import_scheme(slurp("table1.json"));
    bad_beta.beta[mk({1, 2})] = SignVector::from_token(bad_beta.universe, "-+++");
    auto r1 = verify_scheme(topes4, bad_beta, 2);
    REQUIRE_FALSE(r1.ok());
    REQUIRE_THAT(r1.failures.front(),
                 ContainsSubstring("decompression of ++--") &&
                     ContainsSubstring("gives -+++") && ContainsSubstring("does not extend it"));

    auto bad_alpha = import_scheme(slurp("table1.json"));
    bad_alpha.alpha["+++0"] = mk({0, 3});
    auto r2 = verify_scheme(topes4, bad_alpha, 2);
    REQUIRE_FALSE(r2.ok());
    REQUIRE_THAT(r2.failures.front(), ContainsSubstring("leaves the support of +++0"));

    auto tight = import_scheme(slurp("table1.json"));
    auto r3 = verify_scheme(topes4, tight, 1);
    REQUIRE_FALSE(r3.ok());
    REQUIRE_THAT(r3.failures.front(), ContainsSubstring("exceeds the size bound 1"));

    auto wrong_class = verify_scheme(named_instance("cube(2)").structure.topes, tight, 2);
    REQUIRE_FALSE(wrong_class.ok());
    REQUIRE_THAT(wrong_class.failures.front(), ContainsSubstring("universe does not match"));
}

TEST_CASE("documents round trip byte for byte", "[scheme]") {
    auto scheme = paper4_scheme();
    std::string doc = export_scheme(scheme);
    auto back = import_scheme(doc);
    REQUIRE(back.universe->ids() == scheme.universe->ids());
    REQUIRE(back.declared_size == scheme.declared_size);
    REQUIRE(back.alpha == scheme.alpha);
    REQUIRE(back.beta == scheme.beta);
    REQUIRE(export_scheme(back) == doc);
    REQUIRE_THAT(doc, ContainsSubstring("\"universe\": [\n    1,\n    2,\n    3,\n    4\n  ]"));
}

TEST_CASE("malformed documents are rejected with context", "[scheme]") {
    REQUIRE_THROWS_AS(import_scheme("not json"), ParseError);
    REQUIRE_THROWS_AS(import_scheme("{}"), ParseError);
    REQUIRE_THROWS_AS(import_scheme(R"({"universe":[0],"size":1,"alpha":{},"beta":{}})"),
                      ParseError);
    REQUIRE_THROWS_MATCHES(
        import_scheme(R"({"universe":[1,2],"size":1,"alpha":{"++":[3]},"beta":{}})"), ParseError,
        Catch::Matchers::MessageMatches(ContainsSubstring("outside the universe")));
    REQUIRE_THROWS_MATCHES(
        import_scheme(R"({"universe":[1,2],"size":1,"alpha":{"+x":[1]},"beta":{}})"), ParseError,
        Catch::Matchers::MessageMatches(ContainsSubstring("sign")));
    REQUIRE_THROWS_MATCHES(
        import_scheme(R"({"universe":[1,2],"size":1,"alpha":{},"beta":{"1":"+0"}})"), ParseError,
        Catch::Matchers::MessageMatches(ContainsSubstring("not a full tope")));
    REQUIRE_THROWS_MATCHES(
        import_scheme(R"({"universe":[1,2],"size":1,"alpha":{"++":[1]},"beta":{"2":"++"}})"),
        ParseError,
        Catch::Matchers::MessageMatches(ContainsSubstring("no beta entry for the alpha image 1")));
    REQUIRE_THROWS_MATCHES(
        import_scheme(R"({"universe":[1,2],"size":1,"alpha":{},"beta":{"x":"++"}})"), ParseError,
        Catch::Matchers::MessageMatches(ContainsSubstring("comma-joined")));
}

TEST_CASE("schemes for every sample of a single tope", "[scheme]") {
    auto one = parse_system("++\n").system;
    auto m = build_com_map(covectors_from_topes(one).system);
    auto scheme = build_scheme(m);
    auto rep = verify_scheme(one, scheme, scheme.declared_size);
    REQUIRE(rep.ok());
    REQUIRE(rep.samples == 4);
    for (const auto& [tok, img] : scheme.alpha) REQUIRE(img == 0);
}
