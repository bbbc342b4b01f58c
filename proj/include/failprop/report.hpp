#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "failprop/checker.hpp"
#include "failprop/model.hpp"
#include "failprop/semantics.hpp"

namespace failprop {

inline constexpr const char *kToolVersion = "0.1.0";

enum class ReportFormat { Text, Json };

// All renderers are deterministic: same inputs give byte-identical
// output. Timing data never appears in a report.

std::string render_violations(const Model &model, const std::vector<Violation> &violations,
                              ReportFormat format);

std::string render_verdicts(const Model &model, const std::vector<Verdict> &verdicts,
                            ReportFormat format);

std::string render_instance(const Model &model,
                            const std::optional<std::pair<Scenario, Assignment>> &instance,
                            const std::string &constraint_text, ReportFormat format);

std::string render_cutsets(const Model &model, const std::vector<CutSet> &cutsets,
                           const std::string &condition_text, ReportFormat format);

// Helpers shared by the renderers and the tests.
std::string scenario_to_string(const Model &model, const Scenario &scenario);
std::string port_equality_to_string(const Model &model, const PortEquality &eq);

} // namespace failprop
