#include "failprop/case_study.hpp"

#include <string>

namespace failprop {

namespace {

using defs::all_of;
using defs::any_of;
using defs::eq;
using defs::ne;
using defs::own_status;
using defs::port_status;
using defs::port_value;
using defs::status_lit;
using defs::value_lit;

defs::Transfer status_chain(std::string port, std::vector<defs::Branch> branches,
                            defs::Term fallback) {
    defs::Transfer t;
    t.port = std::move(port);
    t.targets_value = false;
    t.branches = std::move(branches);
    t.fallback = std::move(fallback);
    return t;
}

defs::Transfer value_chain(std::string port, std::vector<defs::Branch> branches,
                           defs::Term fallback) {
    defs::Transfer t = status_chain(std::move(port), std::move(branches), std::move(fallback));
    t.targets_value = true;
    return t;
}

defs::Branch when(defs::Guard guard, defs::Term result) {
    return {std::move(guard), std::move(result)};
}

// `status = OK => OK, status = Lost => Lost, else Err`: the output
// mirrors the function's own failure mode.
defs::Transfer passthrough_status(std::string port) {
    defs::Transfer t;
    t.port = std::move(port);
    t.targets_value = false;
    t.fallback = own_status();
    return t;
}

defs::Function source_function(std::string name, std::string output) {
    defs::Function f;
    f.name = std::move(name);
    f.outputs.push_back({output, false, {}});
    f.transfers.push_back(passthrough_status(output));
    return f;
}

// Pilot source selector: the selection value is a free input of the
// model (the crew), fanned out to the three displays.
defs::Function select_source() {
    defs::Function f;
    f.name = "SelectSource";
    f.inputs.push_back({"iPilot", true, {}});
    f.outputs.push_back({"oSelection", false, {}});
    f.transfers.push_back(passthrough_status("oSelection"));
    defs::Transfer v;
    v.port = "oSelection";
    v.targets_value = true;
    v.fallback = port_value("iPilot");
    f.transfers.push_back(v);
    return f;
}

// SBAS positioning consolidates both constellations. An erroneous
// signal against a healthy one is caught by the correlation and drops
// the output; an erroneous signal with the other constellation silent
// cannot be cross-checked and passes through undetected.
defs::Function compute_sbas(int i) {
    std::string n = std::to_string(i);
    std::string gps = "iGPS" + n, galileo = "iGalileo" + n, out = "oSBAS" + n;
    defs::Function f;
    f.name = "ComputeSBAS" + n;
    f.inputs.push_back({gps, false, {}});
    f.inputs.push_back({galileo, false, {}});
    f.outputs.push_back({out, false, {}});
    f.transfers.push_back(status_chain(
        out,
        {
            when(eq(own_status(), status_lit("Lost")), status_lit("Lost")),
            when(eq(own_status(), status_lit("Err")), status_lit("Err")),
            when(all_of({eq(port_status(gps), status_lit("Err")),
                         eq(port_status(galileo), status_lit("Lost"))}),
                 status_lit("Err")),
            when(all_of({eq(port_status(gps), status_lit("Lost")),
                         eq(port_status(galileo), status_lit("Err"))}),
                 status_lit("Err")),
            when(any_of({eq(port_status(gps), status_lit("Err")),
                         eq(port_status(galileo), status_lit("Err"))}),
                 status_lit("Lost")),
            when(all_of({eq(port_status(gps), status_lit("Lost")),
                         eq(port_status(galileo), status_lit("Lost"))}),
                 status_lit("Lost")),
        },
        status_lit("OK")));
    return f;
}

// Baseline LPV processing: deviation follows the SBAS input when the
// function is healthy.
defs::Function compute_lpv_baseline(int i) {
    std::string n = std::to_string(i);
    std::string sbas = "iSBAS" + n, out = "oDeviation" + n;
    defs::Function f;
    f.name = "ComputeLPV" + n;
    f.inputs.push_back({sbas, false, {}});
    f.outputs.push_back({out, false, {}});
    f.transfers.push_back(status_chain(
        out,
        {
            when(eq(own_status(), status_lit("OK")), port_status(sbas)),
            when(eq(own_status(), status_lit("Lost")), status_lit("Lost")),
        },
        status_lit("Err")));
    return f;
}

// Hardened LPV processing: SBAS data backed by RNAV and baro-altimeter,
// plus an alarm raised on inconsistency between the two sides.
defs::Function compute_lpv_hardened(int i) {
    std::string n = std::to_string(i);
    std::string sbas = "iSBAS" + n, rnav = "iRNAV" + n, baro = "iBaroAltimeter" + n;
    std::string out = "oDeviation" + n, alarm = "LPV" + n + "_alarm";
    defs::Function f;
    f.name = "ComputeLPV" + n;
    f.inputs.push_back({sbas, false, {}});
    f.inputs.push_back({rnav, false, {}});
    f.inputs.push_back({baro, false, {}});
    f.outputs.push_back({out, false, {}});
    f.outputs.push_back({alarm, false, {}});
    f.transfers.push_back(status_chain(
        out,
        {
            when(eq(own_status(), status_lit("Lost")), status_lit("Lost")),
            when(eq(own_status(), status_lit("Err")), status_lit("Err")),
            when(eq(port_status(sbas), status_lit("OK")), status_lit("OK")),
            when(all_of({eq(port_status(sbas), status_lit("Lost")),
                         eq(port_status(rnav), status_lit("OK")),
                         eq(port_status(baro), status_lit("OK"))}),
                 status_lit("OK")),
            when(all_of({eq(port_status(sbas), status_lit("Lost")),
                         any_of({eq(port_status(rnav), status_lit("Lost")),
                                 eq(port_status(baro), status_lit("Lost"))})}),
                 status_lit("Lost")),
            when(all_of({eq(port_status(sbas), status_lit("Lost")),
                         any_of({eq(port_status(rnav), status_lit("Err")),
                                 eq(port_status(baro), status_lit("Err"))})}),
                 status_lit("Err")),
            when(all_of({eq(port_status(sbas), status_lit("Err")),
                         any_of({eq(port_status(rnav), status_lit("Lost")),
                                 eq(port_status(baro), status_lit("Lost"))})}),
                 status_lit("Err")),
            when(all_of({eq(port_status(sbas), status_lit("Err")),
                         eq(port_status(rnav), status_lit("OK")),
                         eq(port_status(baro), status_lit("OK"))}),
                 status_lit("Lost")),
            when(all_of({eq(port_status(sbas), status_lit("Err")),
                         any_of({eq(port_status(rnav), status_lit("Err")),
                                 eq(port_status(baro), status_lit("Err"))})}),
                 status_lit("Lost")),
        },
        status_lit("Err")));
    f.transfers.push_back(passthrough_status(alarm));
    f.transfers.push_back(value_chain(
        alarm,
        {
            when(all_of({eq(own_status(), status_lit("OK")),
                         ne(port_status(sbas), status_lit("Lost")),
                         ne(port_status(rnav), status_lit("Lost")),
                         ne(port_status(baro), status_lit("Lost")),
                         any_of({eq(port_status(sbas), status_lit("Err")),
                                 eq(port_status(rnav), status_lit("Err")),
                                 eq(port_status(baro), status_lit("Err"))})}),
                 value_lit("v1")),
            when(all_of({eq(own_status(), status_lit("OK")),
                         eq(port_status(sbas), status_lit("Err")),
                         any_of({eq(port_status(rnav), status_lit("OK")),
                                 eq(port_status(baro), status_lit("OK"))})}),
                 value_lit("v1")),
            when(all_of({eq(own_status(), status_lit("OK")),
                         eq(port_status(sbas), status_lit("Lost")),
                         any_of({eq(port_status(rnav), status_lit("Lost")),
                                 eq(port_status(baro), status_lit("Lost"))})}),
                 value_lit("v1")),
        },
        value_lit("v0")));
    return f;
}

// Display acquisition: forwards the deviation chosen by the pilot
// selection (v0: LPV1, v1: LPV2).
defs::Function acquire(int i) {
    std::string n = std::to_string(i);
    std::string dev1 = "iDeviation1" + n, dev2 = "iDeviation2" + n, sel = "iSelection" + n;
    std::string out = "oSelected" + n;
    defs::Function f;
    f.name = "Acquire" + n;
    f.inputs.push_back({dev1, false, {}});
    f.inputs.push_back({dev2, false, {}});
    f.inputs.push_back({sel, false, {}});
    f.outputs.push_back({out, false, {}});
    f.transfers.push_back(status_chain(
        out,
        {
            when(all_of({eq(own_status(), status_lit("OK")), eq(port_value(sel), value_lit("v0"))}),
                 port_status(dev1)),
            when(all_of({eq(own_status(), status_lit("OK")), eq(port_value(sel), value_lit("v1"))}),
                 port_status(dev2)),
            when(eq(own_status(), status_lit("Lost")), status_lit("Lost")),
        },
        status_lit("Err")));
    return f;
}

// Per-display monitor: raises the discrepancy alarm when exactly one of
// the two LPV deviations it compares carries erroneous data.
defs::Function monitor(int i) {
    std::string n = std::to_string(i);
    std::string in1 = "iMonitor1" + n, in2 = "iMonitor2" + n, out = "oDiscrepancy" + n;
    defs::Function f;
    f.name = "Monitor" + n;
    f.inputs.push_back({in1, false, {}});
    f.inputs.push_back({in2, false, {}});
    f.outputs.push_back({out, false, {}});
    f.transfers.push_back(passthrough_status(out));
    f.transfers.push_back(value_chain(
        out,
        {
            when(all_of({eq(own_status(), status_lit("OK")),
                         eq(port_status(in1), status_lit("Err")),
                         ne(port_status(in2), status_lit("Err"))}),
                 value_lit("v1")),
            when(all_of({eq(own_status(), status_lit("OK")),
                         eq(port_status(in2), status_lit("Err")),
                         ne(port_status(in1), status_lit("Err"))}),
                 value_lit("v1")),
        },
        value_lit("v0")));
    return f;
}

// Display crosscheck: resets its own display when its data differs in
// status from both other displays' data.
defs::Function crosscheck(int i) {
    std::string n = std::to_string(i);
    int o1 = i == 1 ? 2 : 1;
    int o2 = i == 3 ? 2 : 3;
    std::string own = "iSelected" + n + n;
    std::string other1 = "iSelected" + std::to_string(o1) + n;
    std::string other2 = "iSelected" + std::to_string(o2) + n;
    std::string out = "oReset" + n;
    defs::Function f;
    f.name = "Crosscheck" + n;
    f.inputs.push_back({own, false, {}});
    f.inputs.push_back({other1, false, {}});
    f.inputs.push_back({other2, false, {}});
    f.outputs.push_back({out, false, {}});
    f.transfers.push_back(passthrough_status(out));
    f.transfers.push_back(value_chain(
        out,
        {
            when(all_of({eq(own_status(), status_lit("OK")),
                         ne(port_status(own), port_status(other1)),
                         ne(port_status(own), port_status(other2))}),
                 value_lit("v1")),
        },
        value_lit("v0")));
    return f;
}

void add_flow(defs::ModelDefs &m, std::string source, std::string target) {
    m.flows.push_back({std::move(source), std::move(target), {}});
}

defs::ConstraintAtom pin(std::string name, bool is_value, std::string literal) {
    return {std::move(name), is_value, std::move(literal), {}};
}

defs::ConclusionAtom expect(std::string port, bool is_value, std::string literal) {
    return {std::move(port), is_value, std::move(literal), {}};
}

defs::Assertion displays_ok_assertion(std::string name, std::vector<defs::ConstraintAtom> pins) {
    defs::Assertion a;
    a.name = std::move(name);
    defs::Constraint c;
    c.atoms = std::move(pins);
    c.others_ok = true;
    a.when = std::move(c);
    for (int i = 1; i <= 3; ++i)
        a.expect.push_back(expect("oSelected" + std::to_string(i), false, "OK"));
    return a;
}

defs::Assertion alarm_assertion(std::string name, std::vector<defs::ConstraintAtom> pins) {
    defs::Assertion a;
    a.name = std::move(name);
    defs::Constraint c;
    c.atoms = std::move(pins);
    c.others_ok = true;
    a.when = std::move(c);
    a.expect.push_back(expect("LPV1_alarm", true, "v1"));
    return a;
}

// Shared topology: sources, SBAS, displays, monitors, crosschecks. The
// LPV processing functions and their feeding flows differ per variant.
defs::ModelDefs lpv_common(const std::string &name) {
    defs::ModelDefs m;
    m.name = name;
    m.values = {"v0", "v1"};

    m.functions.push_back(select_source());
    m.functions.push_back(source_function("GPS", "oGPS"));
    m.functions.push_back(source_function("Galileo", "oGalileo"));
    m.functions.push_back(compute_sbas(1));
    m.functions.push_back(compute_sbas(2));
    return m;
}

void lpv_downstream(defs::ModelDefs &m) {
    for (int i = 1; i <= 3; ++i)
        m.functions.push_back(acquire(i));
    for (int i = 1; i <= 3; ++i)
        m.functions.push_back(monitor(i));
    for (int i = 1; i <= 3; ++i)
        m.functions.push_back(crosscheck(i));

    for (int i = 1; i <= 2; ++i) {
        std::string n = std::to_string(i);
        add_flow(m, "oGPS", "iGPS" + n);
        add_flow(m, "oGalileo", "iGalileo" + n);
        add_flow(m, "oSBAS" + n, "iSBAS" + n);
    }
    for (int i = 1; i <= 3; ++i) {
        std::string n = std::to_string(i);
        add_flow(m, "oSelection", "iSelection" + n);
        add_flow(m, "oDeviation1", "iDeviation1" + n);
        add_flow(m, "oDeviation2", "iDeviation2" + n);
        add_flow(m, "oDeviation1", "iMonitor1" + n);
        add_flow(m, "oDeviation2", "iMonitor2" + n);
        for (int j = 1; j <= 3; ++j)
            add_flow(m, "oSelected" + std::to_string(j),
                     "iSelected" + std::to_string(j) + n);
    }
}

std::vector<defs::Assertion> safety_assertions() {
    std::vector<defs::Assertion> out;
    out.push_back(displays_ok_assertion(
        "one_computer_lost",
        {pin("ComputeLPV1", false, "Lost"), pin("oSelection", true, "v1")}));

    defs::Assertion erroneous;
    erroneous.name = "one_computer_erroneous";
    {
        defs::Constraint c;
        c.atoms = {pin("ComputeLPV1", false, "Err")};
        c.others_ok = true;
        erroneous.when = std::move(c);
        for (int i = 1; i <= 3; ++i)
            erroneous.expect.push_back(expect("oDiscrepancy" + std::to_string(i), true, "v1"));
    }
    out.push_back(std::move(erroneous));

    defs::Assertion reset;
    reset.name = "one_display_erroneous";
    {
        defs::Constraint c;
        c.atoms = {pin("Acquire1", false, "Err")};
        c.others_ok = true;
        reset.when = std::move(c);
        reset.expect.push_back(expect("oReset1", true, "v1"));
    }
    out.push_back(std::move(reset));
    return out;
}

defs::Assertion attack1() {
    return displays_ok_assertion("one_satellite_corrupted", {pin("GPS", false, "Err")});
}

defs::Assertion attack2() {
    return displays_ok_assertion("one_satellite_lost", {pin("GPS", false, "Lost")});
}

} // namespace

Model baseline_lpv_model() {
    defs::ModelDefs m = lpv_common("lpv_baseline");
    m.functions.push_back(compute_lpv_baseline(1));
    m.functions.push_back(compute_lpv_baseline(2));
    lpv_downstream(m);

    for (auto &a : safety_assertions())
        m.assertions.push_back(std::move(a));
    m.assertions.push_back(attack1());
    m.assertions.push_back(attack2());
    return build_model(m);
}

Model hardened_lpv_model() {
    defs::ModelDefs m = lpv_common("lpv_hardened");
    m.functions.push_back(compute_lpv_hardened(1));
    m.functions.push_back(compute_lpv_hardened(2));
    for (int i = 1; i <= 2; ++i) {
        std::string n = std::to_string(i);
        m.functions.push_back(source_function("RNAV" + n, "oRNAV" + n));
        m.functions.push_back(source_function("BaroAltimeter" + n, "oBaroAltimeter" + n));
        add_flow(m, "oRNAV" + n, "iRNAV" + n);
        add_flow(m, "oBaroAltimeter" + n, "iBaroAltimeter" + n);
    }
    lpv_downstream(m);

    m.assertions.push_back(attack1());
    m.assertions.push_back(attack2());
    m.assertions.push_back(displays_ok_assertion(
        "RNAV_lost", {pin("RNAV1", false, "Lost"), pin("RNAV2", false, "Lost")}));
    m.assertions.push_back(alarm_assertion(
        "one_satellite_lost_one_satellite_corrupted",
        {pin("GPS", false, "Err"), pin("Galileo", false, "Lost")}));
    m.assertions.push_back(displays_ok_assertion(
        "one_satellite_lost_RNAV_lost",
        {pin("GPS", false, "Lost"), pin("RNAV1", false, "Lost")}));
    m.assertions.push_back(alarm_assertion(
        "one_satellite_corrupted_RNAV_lost",
        {pin("GPS", false, "Err"), pin("RNAV1", false, "Lost"), pin("RNAV2", false, "Lost")}));
    m.assertions.push_back(alarm_assertion(
        "one_satellite_corrupted_one_satellite_lost_RNAV_lost",
        {pin("GPS", false, "Err"), pin("Galileo", false, "Lost"), pin("RNAV1", false, "Lost"),
         pin("RNAV2", false, "Lost")}));
    return build_model(m);
}

std::vector<CorpusEntry> corpus() {
    return {
        {"baseline", "model_structure", Outcome::Holds, "structural rules"},
        {"baseline", "one_computer_lost", Outcome::Holds,
         "loss of one LPV computer with correct pilot selection"},
        {"baseline", "one_computer_erroneous", Outcome::Holds,
         "erroneous LPV computer raises the discrepancy alarm on all displays"},
        {"baseline", "one_display_erroneous", Outcome::Holds,
         "erroneous display resets itself"},
        {"baseline", "one_satellite_corrupted", Outcome::Fails,
         "fake GPS signal defeats the baseline architecture"},
        {"baseline", "one_satellite_lost", Outcome::Holds,
         "scrambled constellation survived via the other constellation"},
        {"hardened", "one_satellite_corrupted", Outcome::Holds,
         "fake GPS signal absorbed by RNAV/baro backup"},
        {"hardened", "one_satellite_lost", Outcome::Holds, "scrambled constellation"},
        {"hardened", "RNAV_lost", Outcome::Holds, "RNAV ground station neutralized"},
        {"hardened", "one_satellite_lost_one_satellite_corrupted", Outcome::Holds,
         "fake GPS plus scrambled Galileo raises the LPV alarm"},
        {"hardened", "one_satellite_lost_RNAV_lost", Outcome::Holds,
         "scrambled GPS plus one RNAV channel lost"},
        {"hardened", "one_satellite_corrupted_RNAV_lost", Outcome::Holds,
         "fake GPS plus RNAV lost raises the LPV alarm"},
        {"hardened", "one_satellite_corrupted_one_satellite_lost_RNAV_lost", Outcome::Holds,
         "fake GPS, scrambled Galileo and RNAV lost raises the LPV alarm"},
    };
}

} // namespace failprop
