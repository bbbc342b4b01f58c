#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "failprop/case_study.hpp"
#include "failprop/dsl.hpp"
#include "support/random_model.hpp"
#include "support/toys.hpp"

using namespace failprop;
using namespace failprop::tests;

TEST_CASE("parse_model: minimal source with one function") {
    Model m = parse_model(R"(
model mini
values { v0 v1 }
function F {
  out oF
  transfer oF.status = OK
}
)");
    CHECK(m.name == "mini");
    CHECK(m.functions.size() == 1);
    CHECK(m.values == std::vector<std::string>{"v0", "v1"});
    CHECK(validate_structure(m).empty());
}

TEST_CASE("parse_model: missing final else is rejected as non-total") {
    CHECK_THROWS_WITH_AS(parse_model(R"(
model bad
values { v0 }
function F {
  out oF
  transfer oF.status = {
    status = OK => OK
  }
}
)"),
                         doctest::Contains("total"), ParseError);
}

TEST_CASE("parse errors carry spans inside the input") {
    std::string text = "model m\nvalues { v0 }\nfunction F {\n  out oF\n  transfer oF.status = OK\n";
    try {
        parse_model(text + "  junk#\n}");
        FAIL("expected a parse error");
    } catch (const ParseError &e) {
        CHECK(e.span().line >= 1);
        CHECK(e.span().column >= 1);
        CHECK(e.span().line <= 7);
    }
}

TEST_CASE("property: every truncation of a valid source fails with an in-range span") {
    std::string text = serialize(baseline_lpv_model());
    for (size_t cut = 0; cut < text.size(); cut += 97) {
        std::string prefix = text.substr(0, cut);
        try {
            parse_model(prefix, "prefix.fprop");
        } catch (const ParseError &e) {
            size_t lines = 1;
            for (char c : prefix)
                lines += c == '\n';
            CHECK(e.span().line >= 1);
            CHECK(static_cast<size_t>(e.span().line) <= lines + 1);
            CHECK(e.span().column >= 1);
        } catch (const SemanticError &) {
            // a prefix can also be structurally incomplete; that is fine
        }
    }
}

TEST_CASE("parse_model surfaces semantic errors with spans") {
    std::string text = R"(
model bad
values { v0 }
function F {
  out oF
  transfer oF.status = OK
}
flow oF -> iNope
)";
    try {
        parse_model(text, "bad.fprop");
        FAIL("expected a semantic error");
    } catch (const SemanticError &e) {
        CHECK(e.span().valid());
        CHECK(std::string(e.what()).find("iNope") != std::string::npos);
    }
}

TEST_CASE("parse_assertion binds names against the model") {
    Model m = baseline_lpv_model();

    Assertion a = parse_assertion(
        m, "assert A { when ComputeLPV1.status = Lost and others OK and oSelection.value = v1 "
           "expect oSelected1.status = OK and oSelected2.status = OK and oSelected3.status = OK }");
    CHECK(a.name == "A");
    CHECK(a.hypothesis.others_ok);
    REQUIRE(a.hypothesis.function_status.size() == 1);
    CHECK(a.hypothesis.function_status[0].first == m.function("ComputeLPV1"));
    CHECK(a.hypothesis.function_status[0].second == Status::Lost);
    REQUIRE(a.hypothesis.port_filters.size() == 1); // oSelection is not a free input
    CHECK(a.hypothesis.port_filters[0].port == m.port("oSelection"));
    CHECK(a.conclusion.size() == 3);

    Assertion nominal = parse_assertion(m, "assert T { when others OK expect oSelected1.status = OK }");
    CHECK(nominal.hypothesis.others_ok);
    CHECK(nominal.hypothesis.function_status.empty());

    CHECK_THROWS_WITH_AS(
        parse_assertion(m, "assert bad { when others OK expect oFoo.status = OK }"),
        doctest::Contains("oFoo"), SemanticError);
}

TEST_CASE("parse_constraint: `all OK` and `others OK` are synonyms; except lists parse") {
    Model m = baseline_lpv_model();
    ScenarioConstraint all = parse_constraint(m, "all OK");
    ScenarioConstraint others = parse_constraint(m, "others OK");
    CHECK(all == others);
    CHECK(all.others_ok);

    ScenarioConstraint except = parse_constraint(m, "others OK except GPS, Galileo");
    REQUIRE(except.exempt.size() == 2);
    CHECK(except.exempt[0] == m.function("GPS"));
    CHECK(except.exempt[1] == m.function("Galileo"));

    ScenarioConstraint free_pin = parse_constraint(m, "iPilot.value = v1 and others OK");
    REQUIRE(free_pin.free_values.size() == 1);
    CHECK(free_pin.free_values[0].first == m.port("iPilot"));
}

TEST_CASE("parse_condition rejects functions and unknown ports") {
    Model m = baseline_lpv_model();
    auto cond = parse_condition(m, "oSelected1.status = OK and oReset1.value = v0");
    CHECK(cond.size() == 2);
    CHECK_THROWS_WITH_AS(parse_condition(m, "GPS.status = OK"),
                         doctest::Contains("ports"), SemanticError);
    CHECK_THROWS_AS(parse_condition(m, "oSelected1.status = Wrong"), SemanticError);
}

TEST_CASE("round-trip: toys and case-study models reach a serialize fixpoint") {
    std::vector<std::string> sources;
    sources.emplace_back(kSeriesChain);
    sources.emplace_back(kFreeLoop);
    sources.push_back(serialize(baseline_lpv_model()));
    sources.push_back(serialize(hardened_lpv_model()));
    for (const auto &text : sources) {
        Model first = parse_model(text);
        std::string canonical = serialize(first);
        Model second = parse_model(canonical);
        CHECK(structurally_equal(first, second));
        CHECK(serialize(second) == canonical);
    }
}

TEST_CASE("serialize is deterministic") {
    Model m = baseline_lpv_model();
    CHECK(serialize(m) == serialize(m));
}

TEST_CASE("property: random models round-trip through the DSL") {
    std::mt19937 rng(20240703);
    for (int i = 0; i < 60; ++i) {
        Model m = random_model(rng);
        std::string text = serialize(m);
        Model parsed = parse_model(text);
        CHECK(structurally_equal(m, parsed));
        CHECK(serialize(parsed) == text);
    }
}

TEST_CASE("parsing is deterministic") {
    std::string text = serialize(baseline_lpv_model());
    Model a = parse_model(text);
    Model b = parse_model(text);
    CHECK(structurally_equal(a, b));
}

TEST_CASE("comments and whitespace are ignored") {
    Model m = parse_model(R"(
// leading comment
model commented // trailing
values { v0 } // domain
function F { out oF
  transfer oF.status = OK // nominal
}
)");
    CHECK(m.name == "commented");
}
