#include "failprop/semantics.hpp"

#include <algorithm>
#include <stdexcept>

namespace failprop {

namespace {

void require_defined(const EvalEnv &env, PortId p) {
    if (env.defined && !(*env.defined)[p])
        throw std::logic_error("transfer evaluation read undefined port (engine bug)");
}

Status term_status(const Term &t, const EvalEnv &env) {
    switch (t.kind) {
    case Term::Kind::OwnStatus: return env.own_status;
    case Term::Kind::StatusLit: return t.status;
    case Term::Kind::PortStatus:
        require_defined(env, t.port);
        return env.assignment->port_status[t.port];
    default:
        throw std::logic_error("status term expected (engine bug)");
    }
}

ValueId term_value(const Term &t, const EvalEnv &env) {
    switch (t.kind) {
    case Term::Kind::ValueLit: return t.value;
    case Term::Kind::PortValue:
        require_defined(env, t.port);
        return env.assignment->port_value[t.port];
    default:
        throw std::logic_error("value term expected (engine bug)");
    }
}

bool is_status_term(const Term &t) {
    return t.kind == Term::Kind::OwnStatus || t.kind == Term::Kind::StatusLit ||
           t.kind == Term::Kind::PortStatus;
}

} // namespace

bool eval_guard(const Guard &g, const EvalEnv &env) {
    switch (g.kind) {
    case Guard::Kind::Compare: {
        bool equal = is_status_term(g.lhs) ? term_status(g.lhs, env) == term_status(g.rhs, env)
                                           : term_value(g.lhs, env) == term_value(g.rhs, env);
        return g.not_equal ? !equal : equal;
    }
    case Guard::Kind::And:
        for (const auto &c : g.children)
            if (!eval_guard(c, env))
                return false;
        return true;
    case Guard::Kind::Or:
        for (const auto &c : g.children)
            if (eval_guard(c, env))
                return true;
        return false;
    case Guard::Kind::Not:
        return !eval_guard(g.children.front(), env);
    }
    return false;
}

Status eval_status_expr(const TransferExpr &expr, const EvalEnv &env) {
    for (const auto &b : expr.branches)
        if (eval_guard(b.guard, env))
            return term_status(b.result, env);
    return term_status(expr.fallback, env);
}

ValueId eval_value_expr(const TransferExpr &expr, const EvalEnv &env) {
    for (const auto &b : expr.branches)
        if (eval_guard(b.guard, env))
            return term_value(b.result, env);
    return term_value(expr.fallback, env);
}

bool assignment_less(const Model &model, const Assignment &a, const Assignment &b) {
    for (PortId p : model.ports_by_name) {
        if (a.port_status[p] != b.port_status[p])
            return a.port_status[p] < b.port_status[p];
        if (a.port_value[p] != b.port_value[p])
            return a.port_value[p] < b.port_value[p];
    }
    return false;
}

namespace {

// Status and value an unfed input port takes: OK, and the scenario
// value for free inputs or the model default otherwise.
ValueId unfed_value(const Model &model, const Scenario &scenario, PortId p) {
    std::int32_t slot = model.free_index[p];
    return slot >= 0 ? scenario.free_values[slot] : model.default_value();
}

// Checks the defining equation of a single port against an assignment
// in which every dependency is already written.
bool port_consistent(const Model &model, const Scenario &scenario, PortId p,
                     const Assignment &a, const std::vector<bool> *defined) {
    const PortDecl &decl = model.ports[p];
    if (decl.direction == PortDirection::Input) {
        if (model.fed_by[p]) {
            PortId src = *model.fed_by[p];
            return a.port_status[p] == a.port_status[src] && a.port_value[p] == a.port_value[src];
        }
        return a.port_status[p] == Status::OK && a.port_value[p] == unfed_value(model, scenario, p);
    }
    EvalEnv env{scenario.function_status[decl.owner], &a, defined};
    if (a.port_status[p] != eval_status_expr(*model.status_transfer[p], env))
        return false;
    ValueId want = model.value_transfer[p] ? eval_value_expr(*model.value_transfer[p], env)
                                           : model.default_value();
    return a.port_value[p] == want;
}

} // namespace

std::vector<Assignment> solve(const Model &model, const DependencyGraph &graph,
                              const Scenario &scenario) {
    const size_t n_ports = model.ports.size();
    Assignment seed;
    seed.port_status.assign(n_ports, Status::OK);
    seed.port_value.assign(n_ports, model.default_value());
    std::vector<Assignment> partials{std::move(seed)};
    std::vector<bool> defined(n_ports, false);

    auto has_self_edge = [&](PortId p) {
        const auto &adj = graph.edges[p];
        return std::find(adj.begin(), adj.end(), p) != adj.end();
    };

    const std::int32_t n_values = static_cast<std::int32_t>(model.values.size());

    for (const auto &scc : graph.sccs) {
        if (scc.size() == 1 && !has_self_edge(scc[0])) {
            PortId p = scc[0];
            const PortDecl &decl = model.ports[p];
            for (Assignment &a : partials) {
                if (decl.direction == PortDirection::Input) {
                    if (model.fed_by[p]) {
                        PortId src = *model.fed_by[p];
                        a.port_status[p] = a.port_status[src];
                        a.port_value[p] = a.port_value[src];
                    } else {
                        a.port_status[p] = Status::OK;
                        a.port_value[p] = unfed_value(model, scenario, p);
                    }
                } else {
                    EvalEnv env{scenario.function_status[decl.owner], &a, &defined};
                    a.port_status[p] = eval_status_expr(*model.status_transfer[p], env);
                    a.port_value[p] = model.value_transfer[p]
                                          ? eval_value_expr(*model.value_transfer[p], env)
                                          : model.default_value();
                }
            }
            defined[p] = true;
            continue;
        }

        // Cyclic component: enumerate joint (status, value) candidates
        // for its ports and keep the consistent ones.
        for (PortId p : scc)
            defined[p] = true;
        std::vector<Assignment> extended;
        const size_t k = scc.size();
        std::vector<std::int32_t> sidx(k, 0), vidx(k, 0);
        for (Assignment base : partials) {
            std::fill(sidx.begin(), sidx.end(), 0);
            std::fill(vidx.begin(), vidx.end(), 0);
            while (true) {
                Assignment cand = base;
                for (size_t i = 0; i < k; ++i) {
                    cand.port_status[scc[i]] = kStatuses[sidx[i]];
                    cand.port_value[scc[i]] = vidx[i];
                }
                bool ok = true;
                for (PortId p : scc)
                    if (!port_consistent(model, scenario, p, cand, &defined)) {
                        ok = false;
                        break;
                    }
                if (ok)
                    extended.push_back(std::move(cand));

                // odometer over (status, value) pairs per port
                size_t i = 0;
                for (; i < k; ++i) {
                    if (++vidx[i] < n_values)
                        break;
                    vidx[i] = 0;
                    if (++sidx[i] < 3)
                        break;
                    sidx[i] = 0;
                }
                if (i == k)
                    break;
            }
        }
        partials = std::move(extended);
        if (partials.empty())
            return {};
    }

    std::sort(partials.begin(), partials.end(),
              [&](const Assignment &a, const Assignment &b) { return assignment_less(model, a, b); });
    partials.erase(std::unique(partials.begin(), partials.end()), partials.end());
    return partials;
}

std::vector<Assignment> solve(const Model &model, const Scenario &scenario) {
    return solve(model, dependency_graph(model), scenario);
}

SolutionUniqueness solution_count_is_one(const Model &model) {
    DependencyGraph graph = dependency_graph(model);
    bool cyclic = false;
    for (const auto &scc : graph.sccs) {
        if (scc.size() > 1) {
            cyclic = true;
            break;
        }
        const auto &adj = graph.edges[scc[0]];
        if (std::find(adj.begin(), adj.end(), scc[0]) != adj.end()) {
            cyclic = true;
            break;
        }
    }
    if (!cyclic)
        return {}; // acyclic evaluation is deterministic: exactly one solution

    ScenarioSpace space(model, ScenarioConstraint{});
    for (std::uint64_t rank = 0; rank < space.size(); ++rank) {
        Scenario s = space.at(rank);
        size_t n = solve(model, graph, s).size();
        if (n != 1)
            return {false, std::move(s), n};
    }
    return {};
}

// ---- ScenarioSpace --------------------------------------------------------

ScenarioSpace::ScenarioSpace(const Model &model, const ScenarioConstraint &constraint,
                             std::optional<int> max_failures)
    : model_(model), filters_(constraint.port_filters) {
    const auto n_functions = static_cast<std::int32_t>(model.functions.size());
    const auto n_values = static_cast<std::int32_t>(model.values.size());

    std::vector<std::int32_t> fixed_status(n_functions, -1);
    for (const auto &[f, s] : constraint.function_status) {
        auto idx = static_cast<std::int32_t>(s);
        if (fixed_status[f] >= 0 && fixed_status[f] != idx) {
            satisfiable_ = false;
            return;
        }
        fixed_status[f] = idx;
    }
    std::vector<bool> exempt(n_functions, false);
    for (FunctionId f : constraint.exempt)
        exempt[f] = true;

    std::vector<std::int32_t> fixed_value(model.free_ports.size(), -1);
    for (const auto &[p, v] : constraint.free_values) {
        std::int32_t slot = model.free_index[p];
        if (fixed_value[slot] >= 0 && fixed_value[slot] != v) {
            satisfiable_ = false;
            return;
        }
        fixed_value[slot] = v;
    }

    int swept_functions = 0;
    for (FunctionId f = 0; f < n_functions; ++f) {
        Var v;
        v.is_function = true;
        v.index = f;
        if (fixed_status[f] >= 0)
            v.fixed = fixed_status[f];
        else if (constraint.others_ok && !exempt[f])
            v.fixed = static_cast<std::int32_t>(Status::OK);
        else {
            v.domain = 3;
            ++swept_functions;
        }
        vars_.push_back(v);
    }
    for (size_t slot = 0; slot < model.free_ports.size(); ++slot) {
        Var v;
        v.index = static_cast<std::int32_t>(slot);
        if (fixed_value[slot] >= 0)
            v.fixed = fixed_value[slot];
        else
            v.domain = n_values;
        vars_.push_back(v);
    }

    budget_ = max_failures ? std::min(*max_failures, swept_functions) : swept_functions;
    if (budget_ < 0)
        budget_ = 0;

    // suffix_counts_[i][b]: completions of vars i.. with failure budget b.
    const size_t m = vars_.size();
    suffix_counts_.assign(m + 1, std::vector<std::uint64_t>(budget_ + 1, 0));
    for (int b = 0; b <= budget_; ++b)
        suffix_counts_[m][b] = 1;
    for (size_t i = m; i-- > 0;) {
        const Var &v = vars_[i];
        for (int b = 0; b <= budget_; ++b) {
            std::uint64_t count = 0;
            if (v.fixed >= 0) {
                count = suffix_counts_[i + 1][b];
            } else if (v.is_function) {
                count = suffix_counts_[i + 1][b]; // OK costs nothing
                if (b >= 1)
                    count += 2 * suffix_counts_[i + 1][b - 1]; // Err, Lost
            } else {
                count = static_cast<std::uint64_t>(v.domain) * suffix_counts_[i + 1][b];
            }
            suffix_counts_[i][b] = count;
        }
    }
    total_ = suffix_counts_[0][budget_];
}

Scenario ScenarioSpace::at(std::uint64_t rank) const {
    Scenario s;
    s.function_status.assign(model_.functions.size(), Status::OK);
    s.free_values.assign(model_.free_ports.size(), model_.default_value());
    int budget = budget_;
    for (size_t i = 0; i < vars_.size(); ++i) {
        const Var &v = vars_[i];
        std::int32_t choice = v.fixed;
        if (choice < 0) {
            std::int32_t domain = v.is_function ? 3 : v.domain;
            for (std::int32_t c = 0; c < domain; ++c) {
                int cost = (v.is_function && c != 0) ? 1 : 0;
                if (cost > budget)
                    continue; // not representable within the failure bound
                std::uint64_t block = suffix_counts_[i + 1][budget - cost];
                if (rank < block) {
                    choice = c;
                    budget -= cost;
                    break;
                }
                rank -= block;
            }
        }
        if (choice < 0)
            throw std::logic_error("scenario rank out of range (engine bug)");
        if (v.is_function)
            s.function_status[v.index] = kStatuses[choice];
        else
            s.free_values[v.index] = choice;
    }
    return s;
}

bool ScenarioSpace::pair_satisfies(const Assignment &assignment) const {
    for (const auto &f : filters_) {
        if (f.is_value) {
            if (assignment.port_value[f.port] != f.value)
                return false;
        } else if (assignment.port_status[f.port] != f.status) {
            return false;
        }
    }
    return true;
}

} // namespace failprop
