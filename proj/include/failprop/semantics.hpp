#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "failprop/model.hpp"

namespace failprop {

// One failure mode for every function plus a value for every free
// input; the enumeration variable of the whole analysis.
struct Scenario {
    std::vector<Status> function_status; // by FunctionId
    std::vector<ValueId> free_values;    // parallel to Model::free_ports
    bool operator==(const Scenario &) const = default;
};

// A total solution: status and value for every port, consistent with
// flow equality and the transfer functions.
struct Assignment {
    std::vector<Status> port_status; // by PortId
    std::vector<ValueId> port_value;
    bool operator==(const Assignment &) const = default;
};

// Canonical order: ports taken in name order, comparing status index
// then value index.
bool assignment_less(const Model &model, const Assignment &a, const Assignment &b);

// Evaluation environment for one transfer expression: the owning
// function's status plus the (possibly partial) port assignment.
struct EvalEnv {
    Status own_status = Status::OK;
    const Assignment *assignment = nullptr;
    const std::vector<bool> *defined = nullptr; // optional; enables engine-bug checks
};

// First branch whose guard holds; the trailing else guarantees
// totality. Throws std::logic_error on a reference to an undefined
// port (an engine bug, not a user error).
Status eval_status_expr(const TransferExpr &expr, const EvalEnv &env);
ValueId eval_value_expr(const TransferExpr &expr, const EvalEnv &env);
bool eval_guard(const Guard &guard, const EvalEnv &env);

// All port assignments satisfying flow equality and transfer
// consistency under the scenario. Evaluation proceeds SCC by SCC in
// condensation order; cyclic SCCs enumerate all joint (status, value)
// candidates and keep the consistent ones. The result is deduplicated
// and canonically ordered; an inconsistent cyclic SCC yields an empty
// list.
std::vector<Assignment> solve(const Model &model, const Scenario &scenario);
std::vector<Assignment> solve(const Model &model, const DependencyGraph &graph,
                              const Scenario &scenario);

struct SolutionUniqueness {
    bool unique = true;
    std::optional<Scenario> witness; // a scenario with 0 or >= 2 solutions
    std::size_t witness_solutions = 0;
};

// True iff every scenario yields exactly one assignment. Acyclic
// dependency graphs are unique by construction; models with cyclic
// SCCs are swept over their full scenario space (exponential; intended
// for small models).
SolutionUniqueness solution_count_is_one(const Model &model);

// ---- scenario enumeration ------------------------------------------------

// The scenarios satisfying the scenario-level part of a constraint, in
// canonical lexicographic order (functions in declaration order with
// OK < Err < Lost, then free inputs in declaration order with the
// declared value order). Constrained functions are fixed, others-OK
// functions are fixed to OK, remaining variables are swept.
// max_failures bounds the number of non-OK statuses among swept
// functions only; pinned failures never count against it.
class ScenarioSpace {
public:
    ScenarioSpace(const Model &model, const ScenarioConstraint &constraint,
                  std::optional<int> max_failures = std::nullopt);

    std::uint64_t size() const { return total_; }
    Scenario at(std::uint64_t rank) const;
    bool satisfiable() const { return satisfiable_; }

    // Checks the assignment-level residue of the constraint (port
    // equalities on non-free ports).
    bool pair_satisfies(const Assignment &assignment) const;

private:
    struct Var {
        bool is_function = false;
        std::int32_t index = 0;  // FunctionId or free-port slot
        std::int32_t fixed = -1; // fixed choice, or -1 when swept
        std::int32_t domain = 1; // swept domain size
    };

    const Model &model_;
    std::vector<Var> vars_;
    std::vector<PortEquality> filters_;
    std::vector<std::vector<std::uint64_t>> suffix_counts_; // [var][budget]
    int budget_ = 0;
    std::uint64_t total_ = 0;
    bool satisfiable_ = true;
};

} // namespace failprop
