#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "failprop/case_study.hpp"
#include "failprop/dsl.hpp"
#include "failprop/semantics.hpp"
#include "support/oracle.hpp"
#include "support/random_model.hpp"
#include "support/toys.hpp"

using namespace failprop;
using namespace failprop::tests;

namespace {

Scenario all_ok(const Model &m) {
    Scenario s;
    s.function_status.assign(m.functions.size(), Status::OK);
    s.free_values.assign(m.free_ports.size(), m.default_value());
    return s;
}

// Builds an assignment environment for direct transfer evaluation.
struct Env {
    Assignment assignment;
    EvalEnv env;

    Env(const Model &m, Status own) {
        assignment.port_status.assign(m.ports.size(), Status::OK);
        assignment.port_value.assign(m.ports.size(), m.default_value());
        env.own_status = own;
        env.assignment = &assignment;
    }

    void set_status(const Model &m, const char *port, Status s) {
        assignment.port_status[m.port(port)] = s;
    }
    void set_value(const Model &m, const char *port, ValueId v) {
        assignment.port_value[m.port(port)] = v;
    }
};

} // namespace

TEST_CASE("eval: baseline LPV deviation follows the SBAS input when healthy") {
    Model m = baseline_lpv_model();
    const TransferExpr &expr = *m.status_transfer[m.port("oDeviation1")];

    Env env(m, Status::OK);
    env.set_status(m, "iSBAS1", Status::Err);
    CHECK(eval_status_expr(expr, env.env) == Status::Err);

    Env lost(m, Status::Lost);
    lost.set_status(m, "iSBAS1", Status::OK);
    CHECK(eval_status_expr(expr, lost.env) == Status::Lost);

    Env err(m, Status::Err);
    CHECK(eval_status_expr(expr, err.env) == Status::Err);
}

TEST_CASE("eval: acquire forwards the deviation chosen by the pilot") {
    Model m = baseline_lpv_model();
    const TransferExpr &expr = *m.status_transfer[m.port("oSelected1")];
    ValueId v1 = m.value("v1");

    Env env(m, Status::OK);
    env.set_value(m, "iSelection1", v1);
    env.set_status(m, "iDeviation21", Status::Lost);
    CHECK(eval_status_expr(expr, env.env) == Status::Lost);

    Env err(m, Status::Err);
    err.set_value(m, "iSelection1", v1);
    CHECK(eval_status_expr(expr, err.env) == Status::Err);

    Env v0_sel(m, Status::OK);
    v0_sel.set_status(m, "iDeviation11", Status::Err);
    v0_sel.set_status(m, "iDeviation21", Status::OK);
    CHECK(eval_status_expr(expr, v0_sel.env) == Status::Err);
}

TEST_CASE("eval: guards compose with and/or/not and !=") {
    Model m = parse_model(R"(
model guards
values { v0 v1 }
function F {
  in iA
  in iB
  out oF
  transfer oF.status = {
    not (iA.status = OK) and (iB.status = Err or iB.status = Lost) => Err
    iA.value != v1 => OK
    else Lost
  }
}
)");
    const TransferExpr &expr = *m.status_transfer[m.port("oF")];

    Env both_bad(m, Status::OK);
    both_bad.set_status(m, "iA", Status::Lost);
    both_bad.set_status(m, "iB", Status::Err);
    CHECK(eval_status_expr(expr, both_bad.env) == Status::Err);

    Env v0_a(m, Status::OK); // iA.value defaults to v0 != v1
    CHECK(eval_status_expr(expr, v0_a.env) == Status::OK);

    Env v1_a(m, Status::OK);
    v1_a.set_value(m, "iA", m.value("v1"));
    CHECK(eval_status_expr(expr, v1_a.env) == Status::Lost);
}

TEST_CASE("solve: acyclic chain propagates deterministically") {
    Model m = parse_model(kSeriesChain);

    auto solutions = solve(m, all_ok(m));
    REQUIRE(solutions.size() == 1);
    for (PortId p = 0; p < static_cast<PortId>(m.ports.size()); ++p)
        CHECK(solutions[0].port_status[p] == Status::OK);

    Scenario f_err = all_ok(m);
    f_err.function_status[m.function("F")] = Status::Err;
    solutions = solve(m, f_err);
    REQUIRE(solutions.size() == 1);
    CHECK(solutions[0].port_status[m.port("oG")] == Status::Err);
}

TEST_CASE("solve: unanchored loop admits one solution per status") {
    Model m = parse_model(kFreeLoop);
    auto solutions = solve(m, all_ok(m));
    CHECK(solutions.size() == 3); // OK, Err, Lost all consistent
    for (const auto &a : solutions)
        CHECK(a.port_status[m.port("iLoop")] == a.port_status[m.port("oLoop")]);
}

TEST_CASE("solve: anchored loop keeps only consistent candidates") {
    Model m = parse_model(kTwoPointLoop);
    auto solutions = solve(m, all_ok(m));
    REQUIRE(solutions.size() == 2);
    CHECK(solutions[0].port_status[m.port("oLoop")] == Status::OK);
    CHECK(solutions[1].port_status[m.port("oLoop")] == Status::Lost);
}

TEST_CASE("solve: contradictory loop yields the empty list") {
    Model m = parse_model(kContradictoryLoop);
    CHECK(solve(m, all_ok(m)).empty());
}

TEST_CASE("solve results match the brute-force oracle on the toys") {
    for (auto text : {kSeriesChain, kFreeLoop, kTwoPointLoop, kContradictoryLoop}) {
        Model m = parse_model(text);
        for_each_scenario(m, [&](const Scenario &s) {
            CHECK(solve(m, s) == brute_force_solve(m, s));
            return true;
        });
    }
}

TEST_CASE("solve is pure: repeated calls return identical ordered results") {
    Model m = parse_model(kTwoPointLoop);
    CHECK(solve(m, all_ok(m)) == solve(m, all_ok(m)));
}

TEST_CASE("solution_count_is_one: acyclic models are unique") {
    CHECK(solution_count_is_one(parse_model(kSeriesChain)).unique);
}

TEST_CASE("solution_count_is_one: unanchored loop is flagged with a witness") {
    auto result = solution_count_is_one(parse_model(kFreeLoop));
    CHECK(!result.unique);
    REQUIRE(result.witness.has_value());
    CHECK(result.witness_solutions == 3);
}

TEST_CASE("solution_count_is_one: contradictory loop witnesses zero solutions") {
    auto result = solution_count_is_one(parse_model(kContradictoryLoop));
    CHECK(!result.unique);
    CHECK(result.witness_solutions == 0);
}

TEST_CASE("scenario space: unconstrained sweep covers the full product") {
    Model m = parse_model(kSeriesChain); // 2 functions, no free inputs
    ScenarioSpace space(m, ScenarioConstraint{});
    CHECK(space.size() == 9);

    // canonical order: first scenario all OK, last all Lost
    Scenario first = space.at(0);
    CHECK(first.function_status[0] == Status::OK);
    CHECK(first.function_status[1] == Status::OK);
    Scenario last = space.at(8);
    CHECK(last.function_status[0] == Status::Lost);
    CHECK(last.function_status[1] == Status::Lost);
}

TEST_CASE("scenario space: max_failures bounds swept functions only") {
    Model m = parse_model(kSeriesChain);
    ScenarioSpace bounded(m, ScenarioConstraint{}, 1);
    CHECK(bounded.size() == 5); // all-OK, F in {Err,Lost}, G in {Err,Lost}

    ScenarioConstraint pin_f;
    pin_f.function_status.emplace_back(0, Status::Err);
    ScenarioSpace pinned(m, pin_f, 1);
    CHECK(pinned.size() == 3); // pinned failure is free of charge; G swept
}

TEST_CASE("scenario space: others OK pins everything not exempted") {
    Model m = parse_model(kSeriesChain);
    ScenarioConstraint c;
    c.others_ok = true;
    ScenarioSpace space(m, c);
    CHECK(space.size() == 1);

    c.exempt.push_back(1);
    ScenarioSpace exempted(m, c);
    CHECK(exempted.size() == 3);
}

TEST_CASE("scenario space: contradictory pins are unsatisfiable") {
    Model m = parse_model(kSeriesChain);
    ScenarioConstraint c;
    c.function_status.emplace_back(0, Status::OK);
    c.function_status.emplace_back(0, Status::Lost);
    ScenarioSpace space(m, c);
    CHECK(!space.satisfiable());
}

TEST_CASE("property: acyclic random models have exactly one solution per scenario") {
    std::mt19937 rng(20240701);
    RandomModelParams params;
    params.backward_percent = 100; // acyclic by construction
    for (int i = 0; i < 20; ++i) {
        Model m = random_model(rng, params);
        int checked = 0;
        for_each_scenario(m, [&](const Scenario &s) {
            auto solutions = solve(m, s);
            REQUIRE(solutions.size() == 1);
            CHECK(is_consistent(m, s, solutions[0]));
            return ++checked < 40; // sample the front of the space
        });
    }
}

TEST_CASE("property: solve equals brute force on random models (<= 8 ports)") {
    std::mt19937 rng(20240702);
    for (int i = 0; i < 25; ++i) {
        Model m = random_model(rng);
        int checked = 0;
        for_each_scenario(m, [&](const Scenario &s) {
            auto got = solve(m, s);
            auto want = brute_force_solve(m, s);
            REQUIRE(got == want);
            for (const auto &a : got)
                CHECK(is_consistent(m, s, a));
            return ++checked < 30;
        });
    }
}
