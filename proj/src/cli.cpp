#include "failprop/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "failprop/dsl.hpp"

namespace failprop {

namespace {

struct LoadedModel {
    std::optional<Model> model;
    CmdResult failure; // meaningful when !model
};

// Shared front half of every command: read, parse, resolve, validate.
// Syntax and IO problems exit 2; structural findings exit 1 with a
// violation report.
LoadedModel load_for_command(const RunConfig &config) {
    LoadedModel out;
    std::ifstream in(config.model_path, std::ios::binary);
    if (!in) {
        out.failure = {kExitUsage, "", "failprop: cannot open '" + config.model_path + "'\n"};
        return out;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    defs::ModelDefs raw;
    try {
        raw = parse_model_defs(buf.str(), config.model_path);
    } catch (const ParseError &e) {
        out.failure = {kExitUsage, "", std::string(e.what()) + "\n"};
        return out;
    }
    Model model;
    try {
        model = resolve_model(raw);
    } catch (const SemanticError &e) {
        out.failure = {kExitFinding, "", std::string(e.what()) + "\n"};
        return out;
    }
    auto violations = validate_structure(model);
    if (!violations.empty()) {
        out.failure = {kExitFinding, render_violations(model, violations, config.format), ""};
        return out;
    }
    out.model = std::move(model);
    return out;
}

CheckOptions check_options(const RunConfig &config) {
    CheckOptions opts;
    opts.max_failures = config.max_failures;
    opts.counterexample_cap = config.counterexample_cap;
    opts.workers = config.workers;
    return opts;
}

} // namespace

int default_worker_count() {
    const char *env = std::getenv("FAILPROP_WORKERS");
    if (!env)
        return 1;
    int n = std::atoi(env);
    return n >= 1 ? n : 1;
}

CmdResult cmd_validate(const RunConfig &config) {
    LoadedModel loaded = load_for_command(config);
    if (!loaded.model)
        return loaded.failure;
    return {kExitOk, render_violations(*loaded.model, {}, config.format), ""};
}

CmdResult cmd_check(const RunConfig &config) {
    if (config.max_failures && *config.max_failures < 1)
        return {kExitUsage, "", "failprop: --max-failures must be >= 1\n"};
    LoadedModel loaded = load_for_command(config);
    if (!loaded.model)
        return loaded.failure;
    const Model &model = *loaded.model;

    std::vector<Verdict> verdicts;
    std::string warnings;
    try {
        if (config.assert_names.empty()) {
            verdicts = check_all(model, check_options(config));
        } else {
            for (const auto &name : config.assert_names) {
                if (name == "model_structure") {
                    Verdict v;
                    v.assertion = name;
                    v.outcome = Outcome::Holds; // load_for_command already validated
                    verdicts.push_back(std::move(v));
                    continue;
                }
                const Assertion *found = nullptr;
                for (const auto &a : model.assertions)
                    if (a.name == name)
                        found = &a;
                if (!found)
                    return {kExitUsage, "",
                            "failprop: unknown assertion '" + name + "' in model '" + model.name +
                                "'\n"};
                verdicts.push_back(check(model, *found, check_options(config)));
            }
        }
    } catch (const std::invalid_argument &e) {
        return {kExitUsage, "", std::string("failprop: ") + e.what() + "\n"};
    }

    for (const auto &a : model.assertions)
        if (!a.warning.empty())
            warnings += "warning: " + a.name + ": " + a.warning + "\n";
    for (const auto &v : verdicts)
        if (v.stats.empty_scenarios)
            warnings += "warning: " + v.assertion + ": " + std::to_string(v.stats.empty_scenarios) +
                        " scenario(s) admit no consistent assignment\n";
    if (config.timings)
        for (const auto &v : verdicts) {
            std::ostringstream t;
            t << "timing: " << v.assertion << ": " << v.stats.wall_ms << " ms\n";
            warnings += t.str();
        }

    bool all_hold = true;
    for (const auto &v : verdicts)
        if (v.outcome != Outcome::Holds)
            all_hold = false;
    return {all_hold ? kExitOk : kExitFinding, render_verdicts(model, verdicts, config.format),
            warnings};
}

CmdResult cmd_run(const RunConfig &config) {
    if (config.max_failures && *config.max_failures < 1)
        return {kExitUsage, "", "failprop: --max-failures must be >= 1\n"};
    LoadedModel loaded = load_for_command(config);
    if (!loaded.model)
        return loaded.failure;
    const Model &model = *loaded.model;

    ScenarioConstraint constraint;
    try {
        constraint = parse_constraint(model, config.where, "<where>");
    } catch (const Error &e) {
        return {kExitUsage, "", std::string(e.what()) + "\n"};
    }
    auto instance = run_instance(model, constraint, check_options(config));
    return {instance ? kExitOk : kExitFinding,
            render_instance(model, instance, config.where, config.format), ""};
}

CmdResult cmd_cutsets(const RunConfig &config) {
    LoadedModel loaded = load_for_command(config);
    if (!loaded.model)
        return loaded.failure;
    const Model &model = *loaded.model;

    if (config.max_order < 1)
        return {kExitUsage, "", "failprop: --max-order must be >= 1\n"};
    std::vector<PortEquality> condition;
    try {
        condition = parse_condition(model, config.condition, "<condition>");
    } catch (const Error &e) {
        return {kExitUsage, "", std::string(e.what()) + "\n"};
    }
    auto cutsets = minimal_cutsets(model, condition, config.max_order);
    bool single_point_of_failure = false;
    for (const auto &cs : cutsets)
        if (cs.failures.size() <= 1)
            single_point_of_failure = true;
    return {single_point_of_failure ? kExitFinding : kExitOk,
            render_cutsets(model, cutsets, config.condition, config.format), ""};
}

} // namespace failprop
