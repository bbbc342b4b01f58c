#pragma once

#include <optional>
#include <string>
#include <vector>

#include "failprop/report.hpp"

namespace failprop {

// Exit code contract: 0 all good, 1 property/finding failure,
// 2 usage/input error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFinding = 1;
inline constexpr int kExitUsage = 2;

struct RunConfig {
    std::string model_path;
    ReportFormat format = ReportFormat::Text;
    std::vector<std::string> assert_names; // empty: all assertions
    std::optional<int> max_failures = 2;   // nullopt: exhaustive sweep
    int counterexample_cap = 10;
    int workers = 1;
    bool timings = false;   // per-assertion wall time on the err channel
    std::string where;      // run
    std::string condition;  // cutsets
    int max_order = 2;      // cutsets
};

struct CmdResult {
    int exit_code = kExitOk;
    std::string out;
    std::string err;
};

CmdResult cmd_validate(const RunConfig &config);
CmdResult cmd_check(const RunConfig &config);
CmdResult cmd_run(const RunConfig &config);
CmdResult cmd_cutsets(const RunConfig &config);

// FAILPROP_WORKERS, or 1 when unset or unparsable.
int default_worker_count();

} // namespace failprop
