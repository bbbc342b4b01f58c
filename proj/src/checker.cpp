#include "failprop/checker.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>
#include <thread>

namespace failprop {

std::string_view to_string(Outcome o) {
    switch (o) {
    case Outcome::Holds: return "Holds";
    case Outcome::Fails: return "Fails";
    case Outcome::Vacuous: return "Vacuous";
    }
    return "?";
}

namespace {

bool equality_holds(const PortEquality &eq, const Assignment &a) {
    return eq.is_value ? a.port_value[eq.port] == eq.value : a.port_status[eq.port] == eq.status;
}

struct WorkerResult {
    CheckStats stats;
    std::vector<Counterexample> counterexamples;
};

void check_range(const Model &model, const DependencyGraph &graph, const ScenarioSpace &space,
                 const std::vector<PortEquality> &conclusion, std::uint64_t lo, std::uint64_t hi,
                 int cap, WorkerResult &out) {
    for (std::uint64_t rank = lo; rank < hi; ++rank) {
        Scenario scenario = space.at(rank);
        ++out.stats.scenarios_enumerated;
        std::vector<Assignment> solutions = solve(model, graph, scenario);
        if (solutions.empty())
            ++out.stats.empty_scenarios;
        for (Assignment &a : solutions) {
            ++out.stats.solutions_examined;
            if (!space.pair_satisfies(a))
                continue;
            ++out.stats.satisfying_pairs;
            std::vector<std::size_t> violated;
            for (std::size_t i = 0; i < conclusion.size(); ++i)
                if (!equality_holds(conclusion[i], a))
                    violated.push_back(i);
            if (violated.empty())
                continue;
            ++out.stats.counterexamples_total;
            if (out.counterexamples.size() < static_cast<std::size_t>(cap))
                out.counterexamples.push_back({scenario, std::move(a), std::move(violated)});
        }
    }
}

} // namespace

Verdict check(const Model &model, const Assertion &assertion, const CheckOptions &options) {
    auto started = std::chrono::steady_clock::now();
    Verdict verdict;
    verdict.assertion = assertion.name;

    DependencyGraph graph = dependency_graph(model);
    ScenarioSpace space(model, assertion.hypothesis, options.max_failures);
    const std::uint64_t total = space.satisfiable() ? space.size() : 0;
    const int cap = std::max(options.counterexample_cap, 0);

    int workers = std::max(options.workers, 1);
    if (static_cast<std::uint64_t>(workers) > total)
        workers = total ? static_cast<int>(total) : 1;

    std::vector<WorkerResult> results(workers);
    if (workers == 1) {
        check_range(model, graph, space, assertion.conclusion, 0, total, cap, results[0]);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            std::uint64_t lo = total * w / workers;
            std::uint64_t hi = total * (w + 1) / workers;
            pool.emplace_back([&, lo, hi, w] {
                check_range(model, graph, space, assertion.conclusion, lo, hi, cap, results[w]);
            });
        }
        for (auto &t : pool)
            t.join();
    }

    for (WorkerResult &r : results) {
        verdict.stats.scenarios_enumerated += r.stats.scenarios_enumerated;
        verdict.stats.solutions_examined += r.stats.solutions_examined;
        verdict.stats.satisfying_pairs += r.stats.satisfying_pairs;
        verdict.stats.counterexamples_total += r.stats.counterexamples_total;
        verdict.stats.empty_scenarios += r.stats.empty_scenarios;
        for (Counterexample &ce : r.counterexamples)
            if (verdict.counterexamples.size() < static_cast<std::size_t>(cap))
                verdict.counterexamples.push_back(std::move(ce));
    }

    if (verdict.stats.satisfying_pairs == 0)
        verdict.outcome = Outcome::Vacuous;
    else
        verdict.outcome = verdict.stats.counterexamples_total ? Outcome::Fails : Outcome::Holds;
    verdict.stats.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
            .count();
    return verdict;
}

std::vector<Verdict> check_all(const Model &model, const CheckOptions &options) {
    if (model.assertions.empty())
        throw std::invalid_argument("model '" + model.name + "' declares no assertions");
    std::vector<Verdict> verdicts;
    Verdict structure;
    structure.assertion = "model_structure";
    structure.outcome = validate_structure(model).empty() ? Outcome::Holds : Outcome::Fails;
    verdicts.push_back(std::move(structure));
    for (const Assertion &a : model.assertions)
        verdicts.push_back(check(model, a, options));
    return verdicts;
}

std::optional<std::pair<Scenario, Assignment>>
run_instance(const Model &model, const ScenarioConstraint &constraint,
             const CheckOptions &options) {
    DependencyGraph graph = dependency_graph(model);
    ScenarioSpace space(model, constraint, options.max_failures);
    if (!space.satisfiable())
        return std::nullopt;
    for (std::uint64_t rank = 0; rank < space.size(); ++rank) {
        Scenario scenario = space.at(rank);
        for (Assignment &a : solve(model, graph, scenario))
            if (space.pair_satisfies(a))
                return std::make_pair(std::move(scenario), std::move(a));
    }
    return std::nullopt;
}

namespace {

// True when the failure set, with all other functions OK, admits a
// condition-violating assignment for every free-input valuation.
bool violates_condition(const Model &model, const DependencyGraph &graph,
                        const std::vector<std::pair<FunctionId, Status>> &failures,
                        const std::vector<PortEquality> &condition) {
    Scenario scenario;
    scenario.function_status.assign(model.functions.size(), Status::OK);
    for (const auto &[f, s] : failures)
        scenario.function_status[f] = s;
    scenario.free_values.assign(model.free_ports.size(), 0);

    const auto n_values = static_cast<ValueId>(model.values.size());
    for (;;) {
        bool violating_assignment = false;
        for (const Assignment &a : solve(model, graph, scenario)) {
            bool ok = true;
            for (const PortEquality &eq : condition)
                if (!equality_holds(eq, a)) {
                    ok = false;
                    break;
                }
            if (!ok) {
                violating_assignment = true;
                break;
            }
        }
        if (!violating_assignment)
            return false;

        // next free-input valuation
        std::size_t i = 0;
        for (; i < scenario.free_values.size(); ++i) {
            if (++scenario.free_values[i] < n_values)
                break;
            scenario.free_values[i] = 0;
        }
        if (i == scenario.free_values.size())
            return true;
    }
}

bool contains(const CutSet &small, const std::vector<std::pair<FunctionId, Status>> &big) {
    for (const auto &need : small.failures)
        if (std::find(big.begin(), big.end(), need) == big.end())
            return false;
    return true;
}

} // namespace

std::vector<CutSet> minimal_cutsets(const Model &model, const std::vector<PortEquality> &condition,
                                    int max_order) {
    if (max_order < 1)
        throw std::invalid_argument("max_order must be >= 1");
    DependencyGraph graph = dependency_graph(model);

    // The nominal system (no failures) already violating the condition
    // makes every non-empty set non-minimal.
    if (violates_condition(model, graph, {}, condition))
        return {CutSet{}};

    const auto n = static_cast<FunctionId>(model.functions.size());
    const Status non_ok[] = {Status::Err, Status::Lost};
    std::vector<CutSet> kept;

    std::vector<std::pair<FunctionId, Status>> candidate;
    std::vector<FunctionId> members;
    auto sweep_statuses = [&](auto &&self, std::size_t i) -> void {
        if (i == members.size()) {
            for (const CutSet &c : kept)
                if (c.failures.size() < candidate.size() && contains(c, candidate))
                    return;
            if (violates_condition(model, graph, candidate, condition))
                kept.push_back(CutSet{candidate});
            return;
        }
        for (Status s : non_ok) {
            candidate[i] = {members[i], s};
            self(self, i + 1);
        }
    };
    auto choose = [&](auto &&self, FunctionId next, int remaining) -> void {
        if (remaining == 0) {
            candidate.assign(members.size(), {});
            sweep_statuses(sweep_statuses, 0);
            return;
        }
        for (FunctionId f = next; f <= n - remaining; ++f) {
            members.push_back(f);
            self(self, f + 1, remaining - 1);
            members.pop_back();
        }
    };
    for (int order = 1; order <= max_order && order <= n; ++order) {
        members.clear();
        choose(choose, 0, order);
    }

    std::sort(kept.begin(), kept.end(), [](const CutSet &a, const CutSet &b) {
        if (a.failures.size() != b.failures.size())
            return a.failures.size() < b.failures.size();
        return a.failures < b.failures;
    });
    return kept;
}

} // namespace failprop
