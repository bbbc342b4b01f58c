#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "failprop/dsl.hpp"
#include "failprop/model.hpp"
#include "support/toys.hpp"

using namespace failprop;

namespace {

defs::ModelDefs minimal_defs() {
    defs::ModelDefs m;
    m.name = "mini";
    m.values = {"v0", "v1"};
    defs::Function f;
    f.name = "F";
    f.outputs.push_back({"oF", false, {}});
    defs::Transfer t;
    t.port = "oF";
    t.fallback = defs::own_status();
    f.transfers.push_back(t);
    m.functions.push_back(f);

    defs::Function g;
    g.name = "G";
    g.inputs.push_back({"iG", false, {}});
    g.outputs.push_back({"oG", false, {}});
    defs::Transfer tg;
    tg.port = "oG";
    tg.fallback = defs::port_status("iG");
    g.transfers.push_back(tg);
    m.functions.push_back(g);

    m.flows.push_back({"oF", "iG", {}});
    return m;
}

} // namespace

TEST_CASE("build_model accepts a minimal two-function chain") {
    Model m = build_model(minimal_defs());
    CHECK(m.functions.size() == 2);
    CHECK(m.ports.size() == 3);
    CHECK(m.flows.size() == 1);
    CHECK(validate_structure(m).empty());
    CHECK(m.port("oF") >= 0);
    CHECK(m.port("nope") == -1);
}

TEST_CASE("build_model rejects a port declared in two functions") {
    defs::ModelDefs m = minimal_defs();
    m.functions[1].inputs.push_back({"oF", false, {}});
    CHECK_THROWS_WITH_AS(build_model(m),
                         doctest::Contains("owned by two functions"), SemanticError);
}

TEST_CASE("build_model rejects dangling references") {
    defs::ModelDefs m = minimal_defs();
    m.flows.push_back({"oF", "iMissing", {}});
    CHECK_THROWS_WITH_AS(build_model(m), doctest::Contains("undeclared port"), SemanticError);
}

TEST_CASE("build_model rejects an input fed by two flows") {
    defs::ModelDefs m = minimal_defs();
    defs::Function h;
    h.name = "H";
    h.outputs.push_back({"oH", false, {}});
    defs::Transfer t;
    t.port = "oH";
    t.fallback = defs::own_status();
    h.transfers.push_back(t);
    m.functions.push_back(h);
    m.flows.push_back({"oH", "iG", {}});
    CHECK_THROWS_WITH_AS(build_model(m), doctest::Contains("two flows"), SemanticError);
}

TEST_CASE("build_model rejects an output without a status transfer") {
    defs::ModelDefs m = minimal_defs();
    m.functions[0].outputs.push_back({"oF2", false, {}});
    CHECK_THROWS_WITH_AS(build_model(m), doctest::Contains("lacks a status transfer"),
                         SemanticError);
}

TEST_CASE("build_model rejects a non-total transfer chain") {
    defs::ModelDefs m = minimal_defs();
    m.functions[0].transfers[0].fallback.reset();
    CHECK_THROWS_WITH_AS(build_model(m), doctest::Contains("not total"), SemanticError);
}

TEST_CASE("build_model rejects transfers referencing other functions' ports") {
    defs::ModelDefs m = minimal_defs();
    defs::Transfer t;
    t.port = "oF";
    t.targets_value = true;
    t.fallback = defs::port_value("iG"); // iG belongs to G, not F
    m.functions[0].transfers.push_back(t);
    CHECK_THROWS_WITH_AS(build_model(m), doctest::Contains("its own inputs"), SemanticError);
}

TEST_CASE("build_model rejects free flags on fed inputs and on outputs") {
    defs::ModelDefs m = minimal_defs();
    m.functions[1].inputs[0].free = true;
    CHECK_THROWS_WITH_AS(build_model(m), doctest::Contains("targeted by a flow"), SemanticError);

    defs::ModelDefs m2 = minimal_defs();
    m2.functions[0].outputs[0].free = true;
    CHECK_THROWS_WITH_AS(build_model(m2), doctest::Contains("cannot be free"), SemanticError);
}

TEST_CASE("build_model rejects mixed-sort comparisons") {
    defs::ModelDefs m = minimal_defs();
    auto &t = m.functions[1].transfers[0];
    defs::Branch b;
    b.guard = defs::eq(defs::port_status("iG"), defs::value_lit("v0"));
    b.result = defs::status_lit("OK");
    t.branches.push_back(b);
    CHECK_THROWS_WITH_AS(build_model(m), doctest::Contains("mixes a status term"), SemanticError);
}

TEST_CASE("build_model rejects an empty value domain") {
    defs::ModelDefs m = minimal_defs();
    m.values.clear();
    CHECK_THROWS_WITH_AS(build_model(m), doctest::Contains("no value domain"), SemanticError);
}

TEST_CASE("validate_structure flags flows from input ports") {
    // resolve_model leaves flow-direction rules to validate_structure
    defs::ModelDefs m = minimal_defs();
    m.flows.push_back({"iG", "iG", {}});
    Model resolved = resolve_model(m);
    auto violations = validate_structure(resolved);
    REQUIRE(!violations.empty());
    bool saw_source = false;
    for (const auto &v : violations)
        if (v.rule == "flow-source-output") {
            saw_source = true;
            CHECK(v.element == "iG");
            CHECK(v.message == "flow source must be an output port");
        }
    CHECK(saw_source);
}

TEST_CASE("validate_structure flags flows into output ports") {
    defs::ModelDefs m = minimal_defs();
    m.flows.push_back({"oG", "oF"});
    Model resolved = resolve_model(m);
    bool saw = false;
    for (const auto &v : validate_structure(resolved))
        if (v.rule == "flow-target-input")
            saw = true;
    CHECK(saw);
}

TEST_CASE("validate_structure is empty for the series chain") {
    Model m = parse_model(tests::kSeriesChain);
    CHECK(validate_structure(m).empty());
}

TEST_CASE("dependency_graph covers every port and orders the chain") {
    Model m = parse_model(tests::kSeriesChain);
    DependencyGraph g = dependency_graph(m);

    size_t node_count = 0;
    for (const auto &scc : g.sccs)
        node_count += scc.size();
    CHECK(node_count == m.ports.size());
    for (const auto &scc : g.sccs)
        CHECK(scc.size() == 1);

    // oF before iG before oG in condensation order
    std::vector<PortId> order;
    for (const auto &scc : g.sccs)
        order.push_back(scc[0]);
    auto pos = [&](PortId p) {
        return std::find(order.begin(), order.end(), p) - order.begin();
    };
    CHECK(pos(m.port("oF")) < pos(m.port("iG")));
    CHECK(pos(m.port("iG")) < pos(m.port("oG")));
}

TEST_CASE("dependency_graph: self-loop through a flow forms one SCC of size 2") {
    Model m = parse_model(tests::kFreeLoop);
    DependencyGraph g = dependency_graph(m);
    REQUIRE(g.sccs.size() == 1);
    CHECK(g.sccs[0].size() == 2);
}

TEST_CASE("structural equality ignores spans but not structure") {
    Model a = parse_model(tests::kSeriesChain, "a.fprop");
    Model b = parse_model(tests::kSeriesChain, "b.fprop");
    CHECK(structurally_equal(a, b));

    Model c = build_model(minimal_defs());
    CHECK(!structurally_equal(a, c));
}
