#include "failprop/model.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

namespace failprop {

std::string SourceSpan::to_string() const {
    if (!valid())
        return file.empty() ? std::string("<builtin>") : file;
    std::ostringstream os;
    os << (file.empty() ? "<input>" : file) << ':' << line << ':' << column;
    return os.str();
}

Error::Error(const std::string &message, SourceSpan span)
    : std::runtime_error(span.valid() ? span.to_string() + ": " + message : message),
      span_(std::move(span)) {}

ParseError::ParseError(const std::string &message, SourceSpan span, std::string expected)
    : Error(message, std::move(span)), expected_(std::move(expected)) {}

SemanticError::SemanticError(const std::string &message, SourceSpan span,
                             std::vector<Violation> violations)
    : Error(message, std::move(span)), violations_(std::move(violations)) {}

std::string_view to_string(Status s) {
    switch (s) {
    case Status::OK: return "OK";
    case Status::Err: return "Err";
    case Status::Lost: return "Lost";
    }
    return "?";
}

std::optional<Status> status_from_string(std::string_view text) {
    if (text == "OK") return Status::OK;
    if (text == "Err") return Status::Err;
    if (text == "Lost") return Status::Lost;
    return std::nullopt;
}

PortId Model::port(std::string_view name) const {
    auto it = port_ids.find(std::string(name));
    return it == port_ids.end() ? -1 : it->second;
}

FunctionId Model::function(std::string_view name) const {
    auto it = function_ids.find(std::string(name));
    return it == function_ids.end() ? -1 : it->second;
}

ValueId Model::value(std::string_view name) const {
    auto it = value_ids.find(std::string(name));
    return it == value_ids.end() ? -1 : it->second;
}

namespace {

const char *kReserved[] = {"model", "values", "function", "in",     "out",    "free",
                           "transfer", "flow", "assert",  "when",   "expect", "others",
                           "all",      "except", "and",   "or",     "not",    "else",
                           "status",   "value",  "OK",    "Err",    "Lost"};

bool is_reserved(const std::string &name) {
    for (const char *w : kReserved)
        if (name == w)
            return true;
    return false;
}

bool is_identifier(const std::string &name) {
    if (name.empty())
        return false;
    if (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_')
        return false;
    for (char c : name)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
            return false;
    return true;
}

[[noreturn]] void fail(const std::string &message, const SourceSpan &span) {
    throw SemanticError(message, span);
}

void check_name(const std::string &name, const char *what, const SourceSpan &span) {
    if (!is_identifier(name))
        fail(std::string(what) + " name '" + name + "' is not a valid identifier", span);
    if (is_reserved(name))
        fail(std::string(what) + " name '" + name + "' is a reserved word", span);
}

// Binding context for one function's transfer expressions: references
// are limited to the owning function's status and its own input ports.
struct TransferScope {
    const Model &model;
    const FunctionDecl &fn;

    bool is_own_input(PortId p) const {
        return std::find(fn.inputs.begin(), fn.inputs.end(), p) != fn.inputs.end();
    }
};

enum class TermSort { StatusSort, ValueSort };

Term bind_term(const TransferScope &scope, const defs::Term &raw) {
    Term t;
    switch (raw.kind) {
    case defs::Term::Kind::OwnStatus:
        t.kind = Term::Kind::OwnStatus;
        return t;
    case defs::Term::Kind::PortStatus:
    case defs::Term::Kind::PortValue: {
        PortId p = scope.model.port(raw.text);
        if (p < 0)
            fail("unknown port '" + raw.text + "'", raw.span);
        if (!scope.is_own_input(p))
            fail("transfer for function '" + scope.fn.name + "' may only reference its own inputs; '" +
                     raw.text + "' is not one",
                 raw.span);
        t.kind = raw.kind == defs::Term::Kind::PortStatus ? Term::Kind::PortStatus
                                                          : Term::Kind::PortValue;
        t.port = p;
        return t;
    }
    case defs::Term::Kind::StatusLit: {
        auto s = status_from_string(raw.text);
        if (!s)
            fail("unknown status literal '" + raw.text + "'", raw.span);
        t.kind = Term::Kind::StatusLit;
        t.status = *s;
        return t;
    }
    case defs::Term::Kind::ValueLit: {
        ValueId v = scope.model.value(raw.text);
        if (v < 0)
            fail("unknown value literal or port '" + raw.text + "'", raw.span);
        t.kind = Term::Kind::ValueLit;
        t.value = v;
        return t;
    }
    }
    fail("malformed term", raw.span);
}

TermSort sort_of(const Term &t) {
    switch (t.kind) {
    case Term::Kind::OwnStatus:
    case Term::Kind::PortStatus:
    case Term::Kind::StatusLit:
        return TermSort::StatusSort;
    default:
        return TermSort::ValueSort;
    }
}

Guard bind_guard(const TransferScope &scope, const defs::Guard &raw) {
    Guard g;
    switch (raw.kind) {
    case defs::Guard::Kind::Compare: {
        g.kind = Guard::Kind::Compare;
        g.lhs = bind_term(scope, raw.lhs);
        g.rhs = bind_term(scope, raw.rhs);
        g.not_equal = raw.not_equal;
        if (sort_of(g.lhs) != sort_of(g.rhs))
            fail("comparison mixes a status term with a value term", raw.span);
        return g;
    }
    case defs::Guard::Kind::And: g.kind = Guard::Kind::And; break;
    case defs::Guard::Kind::Or: g.kind = Guard::Kind::Or; break;
    case defs::Guard::Kind::Not: g.kind = Guard::Kind::Not; break;
    }
    if (raw.children.empty())
        fail("boolean connective without operands", raw.span);
    for (const auto &c : raw.children)
        g.children.push_back(bind_guard(scope, c));
    return g;
}

TransferExpr bind_transfer(const TransferScope &scope, const defs::Transfer &raw, PortId target) {
    TransferExpr expr;
    expr.kind = raw.targets_value ? TransferExpr::Kind::Value : TransferExpr::Kind::Status;
    expr.target = target;
    if (!raw.fallback)
        fail("transfer chain for '" + raw.port + "' is not total: missing final else", raw.span);
    TermSort want = raw.targets_value ? TermSort::ValueSort : TermSort::StatusSort;
    auto check_result = [&](const Term &t, const SourceSpan &span) {
        if (sort_of(t) != want)
            fail(std::string("transfer for '") + raw.port + "." +
                     (raw.targets_value ? "value" : "status") + "' yields a " +
                     (want == TermSort::StatusSort ? "value" : "status") + " term",
                 span);
    };
    for (const auto &b : raw.branches) {
        Branch branch;
        branch.guard = bind_guard(scope, b.guard);
        branch.result = bind_term(scope, b.result);
        check_result(branch.result, b.result.span);
        expr.branches.push_back(std::move(branch));
    }
    expr.fallback = bind_term(scope, *raw.fallback);
    check_result(expr.fallback, raw.fallback->span);
    return expr;
}

void collect_port_refs(const Guard &g, std::vector<PortId> &out) {
    if (g.kind == Guard::Kind::Compare) {
        for (const Term *t : {&g.lhs, &g.rhs})
            if (t->kind == Term::Kind::PortStatus || t->kind == Term::Kind::PortValue)
                out.push_back(t->port);
        return;
    }
    for (const auto &c : g.children)
        collect_port_refs(c, out);
}

void collect_port_refs(const TransferExpr &e, std::vector<PortId> &out) {
    for (const auto &b : e.branches) {
        collect_port_refs(b.guard, out);
        if (b.result.kind == Term::Kind::PortStatus || b.result.kind == Term::Kind::PortValue)
            out.push_back(b.result.port);
    }
    if (e.fallback.kind == Term::Kind::PortStatus || e.fallback.kind == Term::Kind::PortValue)
        out.push_back(e.fallback.port);
}

} // namespace

ScenarioConstraint bind_constraint(const Model &model, const defs::Constraint &raw) {
    ScenarioConstraint c;
    c.others_ok = raw.others_ok;
    for (const auto &atom : raw.atoms) {
        FunctionId f = model.function(atom.name);
        PortId p = model.port(atom.name);
        if (f >= 0) {
            if (atom.is_value)
                fail("functions carry no value; '" + atom.name + ".value' is meaningless", atom.span);
            auto s = status_from_string(atom.literal);
            if (!s)
                fail("unknown status literal '" + atom.literal + "'", atom.span);
            c.function_status.emplace_back(f, *s);
        } else if (p >= 0) {
            PortEquality eq;
            eq.port = p;
            eq.is_value = atom.is_value;
            if (atom.is_value) {
                ValueId v = model.value(atom.literal);
                if (v < 0)
                    fail("unknown value literal '" + atom.literal + "'", atom.span);
                eq.value = v;
                if (model.free_index[p] >= 0) {
                    c.free_values.emplace_back(p, v);
                    continue;
                }
            } else {
                auto s = status_from_string(atom.literal);
                if (!s)
                    fail("unknown status literal '" + atom.literal + "'", atom.span);
                eq.status = *s;
            }
            c.port_filters.push_back(eq);
        } else {
            fail("reference to undeclared port or function '" + atom.name + "'", atom.span);
        }
    }
    for (const auto &name : raw.exempt) {
        FunctionId f = model.function(name);
        if (f < 0)
            fail("'others OK except' names unknown function '" + name + "'", raw.span);
        c.exempt.push_back(f);
    }
    return c;
}

std::vector<PortEquality> bind_condition(const Model &model,
                                         const std::vector<defs::ConclusionAtom> &raw) {
    std::vector<PortEquality> out;
    for (const auto &atom : raw) {
        PortId p = model.port(atom.port);
        if (p < 0) {
            if (model.function(atom.port) >= 0)
                fail("'" + atom.port + "' is a function; conclusions may only constrain ports",
                     atom.span);
            fail("reference to undeclared port '" + atom.port + "'", atom.span);
        }
        PortEquality eq;
        eq.port = p;
        eq.is_value = atom.is_value;
        if (atom.is_value) {
            ValueId v = model.value(atom.literal);
            if (v < 0)
                fail("unknown value literal '" + atom.literal + "'", atom.span);
            eq.value = v;
        } else {
            auto s = status_from_string(atom.literal);
            if (!s)
                fail("unknown status literal '" + atom.literal + "'", atom.span);
            eq.status = *s;
        }
        out.push_back(eq);
    }
    if (out.empty())
        fail("empty conclusion", {});
    return out;
}

namespace {

// Cheap scenario-level satisfiability check: contradictory pins on the
// same function or the same free input.
std::string hypothesis_warning(const Model &model, const ScenarioConstraint &c) {
    for (size_t i = 0; i < c.function_status.size(); ++i)
        for (size_t j = i + 1; j < c.function_status.size(); ++j)
            if (c.function_status[i].first == c.function_status[j].first &&
                c.function_status[i].second != c.function_status[j].second)
                return "hypothesis is unsatisfiable: contradictory status constraints on function '" +
                       model.function_name(c.function_status[i].first) + "'";
    for (size_t i = 0; i < c.free_values.size(); ++i)
        for (size_t j = i + 1; j < c.free_values.size(); ++j)
            if (c.free_values[i].first == c.free_values[j].first &&
                c.free_values[i].second != c.free_values[j].second)
                return "hypothesis is unsatisfiable: contradictory value constraints on free input '" +
                       model.port_name(c.free_values[i].first) + "'";
    for (size_t i = 0; i < c.port_filters.size(); ++i)
        for (size_t j = i + 1; j < c.port_filters.size(); ++j) {
            const auto &a = c.port_filters[i];
            const auto &b = c.port_filters[j];
            if (a.port == b.port && a.is_value == b.is_value &&
                (a.is_value ? a.value != b.value : a.status != b.status))
                return "hypothesis is unsatisfiable: contradictory constraints on port '" +
                       model.port_name(a.port) + "'";
        }
    return "";
}

} // namespace

Assertion bind_assertion(const Model &model, const defs::Assertion &raw) {
    check_name(raw.name, "assertion", raw.span);
    if (raw.name == "model_structure")
        fail("assertion name 'model_structure' is reserved for the structural check", raw.span);
    Assertion a;
    a.name = raw.name;
    a.span = raw.span;
    if (raw.when)
        a.hypothesis = bind_constraint(model, *raw.when);
    a.conclusion = bind_condition(model, raw.expect);
    a.warning = hypothesis_warning(model, a.hypothesis);
    return a;
}

Model resolve_model(const defs::ModelDefs &raw) {
    Model m;
    check_name(raw.name, "model", {});
    m.name = raw.name;

    if (raw.values.empty())
        fail("model declares no value domain", {});
    for (const auto &v : raw.values) {
        check_name(v, "value", {});
        if (!m.value_ids.emplace(v, static_cast<ValueId>(m.values.size())).second)
            fail("duplicate value '" + v + "'", {});
        m.values.push_back(v);
    }

    // Functions and ports.
    for (const auto &rf : raw.functions) {
        check_name(rf.name, "function", rf.span);
        FunctionId fid = static_cast<FunctionId>(m.functions.size());
        if (!m.function_ids.emplace(rf.name, fid).second)
            fail("duplicate function '" + rf.name + "'", rf.span);
        FunctionDecl fn;
        fn.name = rf.name;
        fn.span = rf.span;
        auto add_port = [&](const defs::Port &rp, PortDirection dir) {
            check_name(rp.name, "port", rp.span);
            if (m.function_ids.count(rp.name))
                fail("port '" + rp.name + "' clashes with a function name", rp.span);
            PortId pid = static_cast<PortId>(m.ports.size());
            if (!m.port_ids.emplace(rp.name, pid).second)
                fail("port '" + rp.name + "' owned by two functions (duplicate declaration)", rp.span);
            if (rp.free && dir == PortDirection::Output)
                fail("output port '" + rp.name + "' cannot be free", rp.span);
            m.ports.push_back({rp.name, dir, fid, rp.free, rp.span});
            (dir == PortDirection::Input ? fn.inputs : fn.outputs).push_back(pid);
            return pid;
        };
        for (const auto &rp : rf.inputs)
            add_port(rp, PortDirection::Input);
        for (const auto &rp : rf.outputs)
            add_port(rp, PortDirection::Output);
        m.functions.push_back(std::move(fn));
    }
    for (const auto &fn : m.functions)
        if (m.port_ids.count(fn.name))
            fail("function '" + fn.name + "' clashes with a port name", fn.span);

    // Flows, canonical (source name, target name) order.
    for (const auto &rf : raw.flows) {
        PortId s = m.port(rf.source);
        if (s < 0)
            fail("flow references undeclared port '" + rf.source + "'", rf.span);
        PortId t = m.port(rf.target);
        if (t < 0)
            fail("flow references undeclared port '" + rf.target + "'", rf.span);
        m.flows.push_back({s, t, rf.span});
    }
    std::sort(m.flows.begin(), m.flows.end(), [&](const Flow &a, const Flow &b) {
        const std::string &an = m.ports[a.source].name, &bn = m.ports[b.source].name;
        if (an != bn)
            return an < bn;
        return m.ports[a.target].name < m.ports[b.target].name;
    });
    m.flows.erase(std::unique(m.flows.begin(), m.flows.end(),
                              [](const Flow &a, const Flow &b) {
                                  return a.source == b.source && a.target == b.target;
                              }),
                  m.flows.end());

    m.fed_by.assign(m.ports.size(), std::nullopt);
    for (const auto &fl : m.flows)
        if (!m.fed_by[fl.target]) // extra feeders are reported by validate_structure
            m.fed_by[fl.target] = fl.source;

    // Free flags are only meaningful on unfed inputs.
    for (PortId p = 0; p < static_cast<PortId>(m.ports.size()); ++p) {
        if (m.ports[p].free && m.fed_by[p])
            fail("free input '" + m.ports[p].name + "' is targeted by a flow", m.ports[p].span);
    }
    m.free_index.assign(m.ports.size(), -1);
    for (PortId p = 0; p < static_cast<PortId>(m.ports.size()); ++p)
        if (m.ports[p].free) {
            m.free_index[p] = static_cast<std::int32_t>(m.free_ports.size());
            m.free_ports.push_back(p);
        }

    // Transfers.
    m.status_transfer.assign(m.ports.size(), std::nullopt);
    m.value_transfer.assign(m.ports.size(), std::nullopt);
    for (size_t fi = 0; fi < raw.functions.size(); ++fi) {
        const auto &rf = raw.functions[fi];
        const FunctionDecl &fn = m.functions[fi];
        TransferScope scope{m, fn};
        for (const auto &rt : rf.transfers) {
            PortId target = m.port(rt.port);
            if (target < 0)
                fail("transfer targets undeclared port '" + rt.port + "'", rt.span);
            bool own_output =
                std::find(fn.outputs.begin(), fn.outputs.end(), target) != fn.outputs.end();
            if (!own_output)
                fail("transfer target '" + rt.port + "' is not an output of function '" + fn.name +
                         "'",
                     rt.span);
            auto &slot = rt.targets_value ? m.value_transfer[target] : m.status_transfer[target];
            if (slot)
                fail("duplicate transfer for '" + rt.port +
                         (rt.targets_value ? ".value'" : ".status'"),
                     rt.span);
            slot = bind_transfer(scope, rt, target);
        }
    }
    for (PortId p = 0; p < static_cast<PortId>(m.ports.size()); ++p)
        if (m.ports[p].direction == PortDirection::Output && !m.status_transfer[p])
            fail("output port '" + m.ports[p].name + "' lacks a status transfer", m.ports[p].span);

    m.ports_by_name.resize(m.ports.size());
    for (PortId p = 0; p < static_cast<PortId>(m.ports.size()); ++p)
        m.ports_by_name[p] = p;
    std::sort(m.ports_by_name.begin(), m.ports_by_name.end(),
              [&](PortId a, PortId b) { return m.ports[a].name < m.ports[b].name; });

    // Assertions bind last: they may reference any port or function.
    for (const auto &ra : raw.assertions) {
        for (const auto &existing : m.assertions)
            if (existing.name == ra.name)
                fail("duplicate assertion '" + ra.name + "'", ra.span);
        m.assertions.push_back(bind_assertion(m, ra));
    }
    return m;
}

std::vector<Violation> validate_structure(const Model &model) {
    std::vector<Violation> out;

    // (a) every port belongs to exactly one function
    std::vector<int> owners(model.ports.size(), 0);
    for (FunctionId f = 0; f < static_cast<FunctionId>(model.functions.size()); ++f) {
        const auto &fn = model.functions[f];
        for (PortId p : fn.inputs)
            ++owners[p];
        for (PortId p : fn.outputs)
            ++owners[p];
    }
    for (PortId p = 0; p < static_cast<PortId>(model.ports.size()); ++p) {
        if (owners[p] == 1)
            continue;
        out.push_back({"port-single-owner", model.ports[p].name,
                       owners[p] == 0 ? "port belongs to no function"
                                      : "port owned by two functions",
                       model.ports[p].span});
    }

    // (b) flows go from output ports to input ports
    for (const auto &fl : model.flows) {
        if (model.ports[fl.source].direction != PortDirection::Output)
            out.push_back({"flow-source-output", model.ports[fl.source].name,
                           "flow source must be an output port", fl.span});
        if (model.ports[fl.target].direction != PortDirection::Input)
            out.push_back({"flow-target-input", model.ports[fl.target].name,
                           "flow target must be an input port", fl.span});
    }

    // (c) each input port is the target of at most one flow
    std::vector<int> incoming(model.ports.size(), 0);
    for (const auto &fl : model.flows)
        ++incoming[fl.target];
    for (PortId p = 0; p < static_cast<PortId>(model.ports.size()); ++p)
        if (incoming[p] > 1)
            out.push_back({"flow-single-target", model.ports[p].name,
                           "input targeted by two flows", model.ports[p].span});
    return out;
}

Model build_model(const defs::ModelDefs &raw) {
    Model m = resolve_model(raw);
    auto violations = validate_structure(m);
    if (!violations.empty()) {
        std::ostringstream os;
        os << "model '" << m.name << "' violates " << violations.size() << " structural rule"
           << (violations.size() == 1 ? "" : "s");
        for (const auto &v : violations)
            os << "\n  " << v.message << " (" << v.element << ")";
        throw SemanticError(os.str(), {}, std::move(violations));
    }
    return m;
}

bool structurally_equal(const Model &a, const Model &b) {
    if (a.name != b.name || a.values != b.values)
        return false;
    if (a.ports.size() != b.ports.size() || a.functions.size() != b.functions.size() ||
        a.flows.size() != b.flows.size() || a.assertions.size() != b.assertions.size())
        return false;
    for (size_t i = 0; i < a.ports.size(); ++i) {
        const auto &pa = a.ports[i], &pb = b.ports[i];
        if (pa.name != pb.name || pa.direction != pb.direction || pa.owner != pb.owner ||
            pa.free != pb.free)
            return false;
    }
    for (size_t i = 0; i < a.functions.size(); ++i) {
        const auto &fa = a.functions[i], &fb = b.functions[i];
        if (fa.name != fb.name || fa.inputs != fb.inputs || fa.outputs != fb.outputs)
            return false;
    }
    for (size_t i = 0; i < a.flows.size(); ++i)
        if (a.flows[i].source != b.flows[i].source || a.flows[i].target != b.flows[i].target)
            return false;
    if (a.status_transfer != b.status_transfer || a.value_transfer != b.value_transfer)
        return false;
    for (size_t i = 0; i < a.assertions.size(); ++i) {
        const auto &xa = a.assertions[i], &xb = b.assertions[i];
        if (xa.name != xb.name || !(xa.hypothesis == xb.hypothesis) ||
            xa.conclusion != xb.conclusion)
            return false;
    }
    return true;
}

namespace {

struct TarjanState {
    const std::vector<std::vector<PortId>> &edges;
    std::vector<int> index, lowlink;
    std::vector<bool> on_stack;
    std::vector<PortId> stack;
    std::vector<std::vector<PortId>> sccs;
    int counter = 0;

    explicit TarjanState(const std::vector<std::vector<PortId>> &e)
        : edges(e), index(e.size(), -1), lowlink(e.size(), 0), on_stack(e.size(), false) {}

    void visit(PortId v) {
        index[v] = lowlink[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
        for (PortId w : edges[v]) {
            if (index[w] < 0) {
                visit(w);
                lowlink[v] = std::min(lowlink[v], lowlink[w]);
            } else if (on_stack[w]) {
                lowlink[v] = std::min(lowlink[v], index[w]);
            }
        }
        if (lowlink[v] == index[v]) {
            std::vector<PortId> scc;
            PortId w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                scc.push_back(w);
            } while (w != v);
            std::sort(scc.begin(), scc.end());
            sccs.push_back(std::move(scc));
        }
    }
};

} // namespace

DependencyGraph dependency_graph(const Model &model) {
    DependencyGraph g;
    g.edges.assign(model.ports.size(), {});
    for (const auto &fl : model.flows)
        g.edges[fl.source].push_back(fl.target);
    for (PortId p = 0; p < static_cast<PortId>(model.ports.size()); ++p) {
        std::vector<PortId> refs;
        if (model.status_transfer[p])
            collect_port_refs(*model.status_transfer[p], refs);
        if (model.value_transfer[p])
            collect_port_refs(*model.value_transfer[p], refs);
        std::sort(refs.begin(), refs.end());
        refs.erase(std::unique(refs.begin(), refs.end()), refs.end());
        for (PortId in : refs)
            g.edges[in].push_back(p);
    }
    for (auto &adj : g.edges) {
        std::sort(adj.begin(), adj.end());
        adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    }

    TarjanState tarjan(g.edges);
    for (PortId p = 0; p < static_cast<PortId>(model.ports.size()); ++p)
        if (tarjan.index[p] < 0)
            tarjan.visit(p);
    // Tarjan emits components children-first; reverse for a topological
    // order of the condensation.
    std::reverse(tarjan.sccs.begin(), tarjan.sccs.end());
    g.sccs = std::move(tarjan.sccs);
    return g;
}

} // namespace failprop
