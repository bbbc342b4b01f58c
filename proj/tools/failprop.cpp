#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "failprop/cli.hpp"

namespace {

int emit(const failprop::CmdResult &result) {
    if (!result.out.empty())
        std::fputs(result.out.c_str(), stdout);
    if (!result.err.empty())
        std::fputs(result.err.c_str(), stderr);
    return result.exit_code;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"failprop: bounded model checker for dataflow architectures with "
                 "failure-mode propagation"};
    app.set_version_flag("--version", failprop::kToolVersion);
    app.require_subcommand(1);

    failprop::RunConfig config;
    config.workers = failprop::default_worker_count();

    std::string format = "text";
    bool exhaustive = false;
    int max_failures = 2;

    auto add_common = [&](CLI::App *cmd) {
        cmd->add_option("model", config.model_path, "path to a .fprop model file")->required();
        cmd->add_option("--format", format, "report format: text or json")
            ->check(CLI::IsMember({"text", "json"}));
        cmd->add_option("--workers", config.workers, "checker worker threads");
    };

    CLI::App *validate = app.add_subcommand("validate", "parse a model and check its structure");
    add_common(validate);

    CLI::App *check = app.add_subcommand("check", "check assertions against the model");
    add_common(check);
    check->add_option("--assert", config.assert_names,
                      "assertion name to check (repeatable; default: all)");
    check->add_option("--max-failures", max_failures,
                      "bound on simultaneous failures among unconstrained functions");
    check->add_flag("--exhaustive", exhaustive, "sweep the full scenario space");
    check->add_option("--max-counterexamples", config.counterexample_cap,
                      "counterexamples kept per assertion");
    check->add_flag("--timings", config.timings, "report per-assertion wall time on stderr");

    CLI::App *run = app.add_subcommand("run", "find one instance satisfying a constraint");
    add_common(run);
    run->add_option("--where", config.where, "scenario constraint, e.g. \"GPS.status = Err\"")
        ->required();
    run->add_option("--max-failures", max_failures,
                    "bound on simultaneous failures among unconstrained functions");
    run->add_flag("--exhaustive", exhaustive, "sweep the full scenario space");

    CLI::App *cutsets = app.add_subcommand("cutsets", "compute minimal cut sets for a condition");
    add_common(cutsets);
    cutsets
        ->add_option("--condition", config.condition,
                     "port condition, e.g. \"oSelected1.status = OK\"")
        ->required();
    cutsets->add_option("--max-order", config.max_order, "largest cut-set order to search");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : failprop::kExitUsage;
    }

    config.format = format == "json" ? failprop::ReportFormat::Json : failprop::ReportFormat::Text;
    config.max_failures = exhaustive ? std::nullopt : std::optional<int>(max_failures);
    if (config.workers < 1)
        config.workers = 1;

    if (validate->parsed())
        return emit(failprop::cmd_validate(config));
    if (check->parsed())
        return emit(failprop::cmd_check(config));
    if (run->parsed())
        return emit(failprop::cmd_run(config));
    return emit(failprop::cmd_cutsets(config));
}
