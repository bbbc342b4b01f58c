#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "failprop/model.hpp"
#include "failprop/semantics.hpp"

namespace failprop {

enum class Outcome { Holds, Fails, Vacuous };

std::string_view to_string(Outcome o);

struct Counterexample {
    Scenario scenario;
    Assignment assignment;
    std::vector<std::size_t> violated; // indices into the assertion's conclusion
};

struct CheckStats {
    std::uint64_t scenarios_enumerated = 0;
    std::uint64_t solutions_examined = 0;
    std::uint64_t satisfying_pairs = 0;
    std::uint64_t counterexamples_total = 0; // before capping
    std::uint64_t empty_scenarios = 0;       // scenarios solve found inconsistent
    double wall_ms = 0.0;                     // not part of rendered reports
};

struct Verdict {
    std::string assertion;
    Outcome outcome = Outcome::Holds;
    std::vector<Counterexample> counterexamples; // empty iff Holds or Vacuous
    CheckStats stats;
};

struct CheckOptions {
    // Bound on non-OK statuses among swept functions; nullopt sweeps
    // exhaustively. Pinned failures never count against the bound.
    std::optional<int> max_failures = 2;
    int counterexample_cap = 10;
    int workers = 1;
};

// Enumerates the scenarios satisfying the hypothesis, solves each, and
// tests every (scenario, assignment) pair that satisfies the full
// hypothesis against the conclusion. Holds iff at least one pair exists
// and all pairs satisfy the conclusion; Vacuous iff no pair exists.
// Deterministic at any worker count.
Verdict check(const Model &model, const Assertion &assertion, const CheckOptions &options = {});

// One verdict per declared assertion, in declaration order, preceded by
// a synthetic "model_structure" verdict derived from
// validate_structure. Throws std::invalid_argument when the model
// declares no assertions.
std::vector<Verdict> check_all(const Model &model, const CheckOptions &options = {});

// First (canonical order) scenario/assignment pair satisfying the
// constraint, or nullopt.
std::optional<std::pair<Scenario, Assignment>>
run_instance(const Model &model, const ScenarioConstraint &constraint,
             const CheckOptions &options = {});

// A minimal combination of function failures sufficient to violate a
// condition for every free-input valuation.
struct CutSet {
    std::vector<std::pair<FunctionId, Status>> failures; // sorted by FunctionId
    bool operator==(const CutSet &) const = default;
};

// All minimal sets of at most max_order (function, non-OK status)
// failures such that, with every other function OK, every free-input
// valuation admits an assignment violating the condition. Sorted by
// order, then lexicographically over (function, status). Throws
// std::invalid_argument when max_order < 1.
std::vector<CutSet> minimal_cutsets(const Model &model, const std::vector<PortEquality> &condition,
                                    int max_order);

} // namespace failprop
