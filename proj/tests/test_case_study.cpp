#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "failprop/case_study.hpp"
#include "failprop/checker.hpp"
#include "failprop/dsl.hpp"
#include "support/oracle.hpp"

using namespace failprop;
using namespace failprop::tests;

namespace {

std::string models_dir() { return FAILPROP_MODELS_DIR; }

Model load_shipped(const std::string &name) {
    return load_model_file(models_dir() + "/" + name);
}

Status lpv1_status(const Model &m, Status own, Status sbas, Status rnav, Status baro) {
    Assignment a;
    a.port_status.assign(m.ports.size(), Status::OK);
    a.port_value.assign(m.ports.size(), m.default_value());
    a.port_status[m.port("iSBAS1")] = sbas;
    a.port_status[m.port("iRNAV1")] = rnav;
    a.port_status[m.port("iBaroAltimeter1")] = baro;
    EvalEnv env{own, &a, nullptr};
    return eval_status_expr(*m.status_transfer[m.port("oDeviation1")], env);
}

ValueId lpv1_alarm(const Model &m, Status own, Status sbas, Status rnav, Status baro) {
    Assignment a;
    a.port_status.assign(m.ports.size(), Status::OK);
    a.port_value.assign(m.ports.size(), m.default_value());
    a.port_status[m.port("iSBAS1")] = sbas;
    a.port_status[m.port("iRNAV1")] = rnav;
    a.port_status[m.port("iBaroAltimeter1")] = baro;
    EvalEnv env{own, &a, nullptr};
    return eval_value_expr(*m.value_transfer[m.port("LPV1_alarm")], env);
}

// Structural comparison of transfer expressions across two models,
// matching referenced ports by name.
bool terms_equal(const Model &ma, const Term &a, const Model &mb, const Term &b) {
    if (a.kind != b.kind)
        return false;
    switch (a.kind) {
    case Term::Kind::OwnStatus: return true;
    case Term::Kind::StatusLit: return a.status == b.status;
    case Term::Kind::ValueLit: return ma.values[a.value] == mb.values[b.value];
    default: return ma.port_name(a.port) == mb.port_name(b.port);
    }
}

bool guards_equal(const Model &ma, const Guard &a, const Model &mb, const Guard &b) {
    if (a.kind != b.kind || a.children.size() != b.children.size())
        return false;
    if (a.kind == Guard::Kind::Compare)
        return a.not_equal == b.not_equal && terms_equal(ma, a.lhs, mb, b.lhs) &&
               terms_equal(ma, a.rhs, mb, b.rhs);
    for (size_t i = 0; i < a.children.size(); ++i)
        if (!guards_equal(ma, a.children[i], mb, b.children[i]))
            return false;
    return true;
}

bool transfers_equal(const Model &ma, const TransferExpr &a, const Model &mb,
                     const TransferExpr &b) {
    if (a.kind != b.kind || a.branches.size() != b.branches.size())
        return false;
    for (size_t i = 0; i < a.branches.size(); ++i)
        if (!guards_equal(ma, a.branches[i].guard, mb, b.branches[i].guard) ||
            !terms_equal(ma, a.branches[i].result, mb, b.branches[i].result))
            return false;
    return terms_equal(ma, a.fallback, mb, b.fallback);
}

} // namespace

TEST_CASE("baseline model: shape and structural validity") {
    Model m = baseline_lpv_model();
    CHECK(m.functions.size() == 16);
    CHECK(validate_structure(m).empty());
    CHECK(m.values == std::vector<std::string>{"v0", "v1"});
    CHECK(m.free_ports.size() == 1);
    CHECK(m.free_ports[0] == m.port("iPilot"));
    CHECK(m.assertions.size() == 5);
}

TEST_CASE("hardened model: shape and structural validity") {
    Model m = hardened_lpv_model();
    CHECK(m.functions.size() == 20);
    CHECK(validate_structure(m).empty());
    CHECK(m.function("RNAV1") >= 0);
    CHECK(m.function("RNAV2") >= 0);
    CHECK(m.function("BaroAltimeter1") >= 0);
    CHECK(m.function("BaroAltimeter2") >= 0);
    CHECK(m.assertions.size() == 7);
}

TEST_CASE("baseline transfers: LPV deviation and acquire selection branches") {
    Model m = baseline_lpv_model();
    Assignment a;
    a.port_status.assign(m.ports.size(), Status::OK);
    a.port_value.assign(m.ports.size(), m.default_value());

    a.port_status[m.port("iSBAS1")] = Status::OK;
    EvalEnv ok{Status::OK, &a, nullptr};
    CHECK(eval_status_expr(*m.status_transfer[m.port("oDeviation1")], ok) == Status::OK);

    EvalEnv err{Status::Err, &a, nullptr};
    CHECK(eval_status_expr(*m.status_transfer[m.port("oSelected1")], err) == Status::Err);
}

TEST_CASE("hardened transfers: the documented branch values") {
    Model m = hardened_lpv_model();

    CHECK(lpv1_status(m, Status::OK, Status::Lost, Status::OK, Status::OK) == Status::OK);
    CHECK(lpv1_status(m, Status::OK, Status::Err, Status::OK, Status::OK) == Status::Lost);
    CHECK(lpv1_status(m, Status::OK, Status::OK, Status::Lost, Status::Lost) == Status::OK);
    CHECK(lpv1_status(m, Status::OK, Status::Lost, Status::Lost, Status::OK) == Status::Lost);
    CHECK(lpv1_status(m, Status::OK, Status::Lost, Status::Err, Status::OK) == Status::Err);
    CHECK(lpv1_status(m, Status::OK, Status::Err, Status::Lost, Status::OK) == Status::Err);
    CHECK(lpv1_status(m, Status::OK, Status::Err, Status::Err, Status::OK) == Status::Lost);
    CHECK(lpv1_status(m, Status::Lost, Status::OK, Status::OK, Status::OK) == Status::Lost);
    CHECK(lpv1_status(m, Status::Err, Status::OK, Status::OK, Status::OK) == Status::Err);

    ValueId v0 = m.value("v0"), v1 = m.value("v1");
    CHECK(lpv1_alarm(m, Status::OK, Status::Err, Status::OK, Status::OK) == v1);
    CHECK(lpv1_alarm(m, Status::OK, Status::Lost, Status::Lost, Status::OK) == v1);
    CHECK(lpv1_alarm(m, Status::OK, Status::Err, Status::Err, Status::OK) == v1);
    CHECK(lpv1_alarm(m, Status::OK, Status::OK, Status::OK, Status::OK) == v0);
    CHECK(lpv1_alarm(m, Status::OK, Status::Lost, Status::OK, Status::OK) == v0);
    CHECK(lpv1_alarm(m, Status::Lost, Status::Err, Status::OK, Status::OK) == v0);
}

TEST_CASE("nominal instance: all sources OK lights every display") {
    Model m = baseline_lpv_model();
    Scenario s;
    s.function_status.assign(m.functions.size(), Status::OK);
    s.free_values = {m.value("v1")};
    auto solutions = solve(m, s);
    REQUIRE(solutions.size() == 1);
    const Assignment &a = solutions[0];
    CHECK(is_consistent(m, s, a));
    for (const char *port : {"oSelected1", "oSelected2", "oSelected3"})
        CHECK(a.port_status[m.port(port)] == Status::OK);
    CHECK(a.port_value[m.port("oSelection")] == m.value("v1"));
}

TEST_CASE("GPS erroneous breaks some display in every pilot selection") {
    Model m = baseline_lpv_model();
    Scenario s;
    s.function_status.assign(m.functions.size(), Status::OK);
    s.function_status[m.function("GPS")] = Status::Err;
    for (ValueId pilot : {m.value("v0"), m.value("v1")}) {
        s.free_values = {pilot};
        auto solutions = solve(m, s);
        REQUIRE(solutions.size() == 1);
        bool some_display_bad = false;
        for (const char *port : {"oSelected1", "oSelected2", "oSelected3"})
            if (solutions[0].port_status[m.port(port)] != Status::OK)
                some_display_bad = true;
        CHECK(some_display_bad);
    }
}

TEST_CASE("both case-study models solve uniquely on every scenario shape") {
    CHECK(solution_count_is_one(baseline_lpv_model()).unique);
    CHECK(solution_count_is_one(hardened_lpv_model()).unique);
}

TEST_CASE("corpus: every expected verdict reproduces") {
    Model baseline = baseline_lpv_model();
    Model hardened = hardened_lpv_model();
    auto entries = corpus();
    CHECK(entries.size() == 13);

    for (const auto &entry : entries) {
        const Model &m = entry.model_id == "baseline" ? baseline : hardened;
        CAPTURE(entry.model_id);
        CAPTURE(entry.assertion);
        if (entry.assertion == "model_structure") {
            CHECK(validate_structure(m).empty() == (entry.expected == Outcome::Holds));
            continue;
        }
        const Assertion *a = nullptr;
        for (const auto &decl : m.assertions)
            if (decl.name == entry.assertion)
                a = &decl;
        REQUIRE(a != nullptr);
        CHECK(check(m, *a).outcome == entry.expected);
    }
}

TEST_CASE("corpus covers every declared assertion exactly once per model") {
    Model baseline = baseline_lpv_model();
    Model hardened = hardened_lpv_model();
    auto entries = corpus();
    for (const Model *m : {&baseline, &hardened}) {
        std::string id = m->name == "lpv_baseline" ? "baseline" : "hardened";
        for (const auto &a : m->assertions) {
            int count = 0;
            for (const auto &entry : entries)
                if (entry.model_id == id && entry.assertion == a.name)
                    ++count;
            CHECK(count == 1);
        }
    }
}

TEST_CASE("shipped .fprop files equal the programmatic constructors") {
    Model baseline_file = load_shipped("lpv_baseline.fprop");
    CHECK(structurally_equal(baseline_file, baseline_lpv_model()));

    Model hardened_file = load_shipped("lpv_hardened.fprop");
    CHECK(structurally_equal(hardened_file, hardened_lpv_model()));
}

TEST_CASE("hardened restricted to baseline functions differs only in the LPV transfers") {
    Model baseline = baseline_lpv_model();
    Model hardened = hardened_lpv_model();

    // every baseline function exists in the hardened model
    for (const auto &fn : baseline.functions)
        CHECK(hardened.function(fn.name) >= 0);

    for (const auto &fn : baseline.functions) {
        FunctionId hid = hardened.function(fn.name);
        const auto &hfn = hardened.functions[hid];
        bool is_lpv = fn.name == "ComputeLPV1" || fn.name == "ComputeLPV2";

        // port lists match by name except for the LPV processing inputs/outputs
        std::vector<std::string> base_ports, hard_ports;
        for (PortId p : fn.inputs)
            base_ports.push_back(baseline.port_name(p));
        for (PortId p : hfn.inputs)
            hard_ports.push_back(hardened.port_name(p));
        if (is_lpv) {
            CHECK(base_ports.size() == 1);
            CHECK(hard_ports.size() == 3);
            CHECK(std::find(hard_ports.begin(), hard_ports.end(), base_ports[0]) !=
                  hard_ports.end());
        } else {
            CHECK(base_ports == hard_ports);
        }

        // transfers of all non-LPV functions are identical modulo port ids
        if (!is_lpv) {
            for (PortId bp : fn.outputs) {
                PortId hp = hardened.port(baseline.port_name(bp));
                REQUIRE(hp >= 0);
                CHECK(transfers_equal(baseline, *baseline.status_transfer[bp], hardened,
                                      *hardened.status_transfer[hp]));
                REQUIRE(baseline.value_transfer[bp].has_value() ==
                        hardened.value_transfer[hp].has_value());
                if (baseline.value_transfer[bp])
                    CHECK(transfers_equal(baseline, *baseline.value_transfer[bp], hardened,
                                          *hardened.value_transfer[hp]));
            }
        } else {
            PortId bp = baseline.port(fn.name == "ComputeLPV1" ? "oDeviation1" : "oDeviation2");
            PortId hp = hardened.port(baseline.port_name(bp));
            CHECK(!transfers_equal(baseline, *baseline.status_transfer[bp], hardened,
                                   *hardened.status_transfer[hp]));
        }
    }

    // flows restricted to baseline ports coincide
    std::vector<std::pair<std::string, std::string>> base_flows, hard_flows;
    for (const auto &fl : baseline.flows)
        base_flows.emplace_back(baseline.port_name(fl.source), baseline.port_name(fl.target));
    for (const auto &fl : hardened.flows) {
        std::string src = hardened.port_name(fl.source);
        std::string dst = hardened.port_name(fl.target);
        if (baseline.port(src) >= 0 && baseline.port(dst) >= 0)
            hard_flows.emplace_back(src, dst);
    }
    CHECK(base_flows == hard_flows);
}
