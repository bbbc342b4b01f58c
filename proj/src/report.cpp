#include "failprop/report.hpp"

#include <sstream>

#include <json.hpp>

namespace failprop {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json json_header(const Model &model, const char *command) {
    ordered_json j;
    j["tool_version"] = kToolVersion;
    j["model"] = model.name;
    j["command"] = command;
    j["results"] = ordered_json::array();
    return j;
}

std::string dump(const ordered_json &j) { return j.dump(2) + "\n"; }

ordered_json scenario_json(const Model &model, const Scenario &s) {
    ordered_json statuses;
    for (FunctionId f = 0; f < static_cast<FunctionId>(model.functions.size()); ++f)
        statuses[model.function_name(f)] = to_string(s.function_status[f]);
    ordered_json free_values;
    for (size_t i = 0; i < model.free_ports.size(); ++i)
        free_values[model.port_name(model.free_ports[i])] = model.values[s.free_values[i]];
    ordered_json j;
    j["function_status"] = std::move(statuses);
    j["free_values"] = std::move(free_values);
    return j;
}

ordered_json assignment_json(const Model &model, const Assignment &a) {
    ordered_json j;
    for (PortId p = 0; p < static_cast<PortId>(model.ports.size()); ++p) {
        ordered_json port;
        port["status"] = to_string(a.port_status[p]);
        port["value"] = model.values[a.port_value[p]];
        j[model.port_name(p)] = std::move(port);
    }
    return j;
}

void assignment_text(std::ostream &os, const Model &model, const Assignment &a,
                     const std::string &indent) {
    for (PortId p = 0; p < static_cast<PortId>(model.ports.size()); ++p)
        os << indent << model.port_name(p) << ": " << to_string(a.port_status[p]) << ' '
           << model.values[a.port_value[p]] << '\n';
}

} // namespace

std::string scenario_to_string(const Model &model, const Scenario &s) {
    std::ostringstream os;
    bool any = false;
    for (FunctionId f = 0; f < static_cast<FunctionId>(model.functions.size()); ++f) {
        if (s.function_status[f] == Status::OK)
            continue;
        os << (any ? ", " : "") << model.function_name(f) << '='
           << to_string(s.function_status[f]);
        any = true;
    }
    if (!any)
        os << "all functions OK";
    else
        os << "; others OK";
    for (size_t i = 0; i < model.free_ports.size(); ++i)
        os << "; " << model.port_name(model.free_ports[i]) << '=' << model.values[s.free_values[i]];
    return std::move(os).str();
}

std::string port_equality_to_string(const Model &model, const PortEquality &eq) {
    std::ostringstream os;
    os << model.port_name(eq.port);
    if (eq.is_value)
        os << ".value = " << model.values[eq.value];
    else
        os << ".status = " << to_string(eq.status);
    return std::move(os).str();
}

std::string render_violations(const Model &model, const std::vector<Violation> &violations,
                              ReportFormat format) {
    if (format == ReportFormat::Json) {
        ordered_json j = json_header(model, "validate");
        for (const auto &v : violations) {
            ordered_json entry;
            entry["rule"] = v.rule;
            entry["element"] = v.element;
            entry["message"] = v.message;
            if (v.span.valid())
                entry["location"] = v.span.to_string();
            j["results"].push_back(std::move(entry));
        }
        j["valid"] = violations.empty();
        return dump(j);
    }
    std::ostringstream os;
    if (violations.empty()) {
        os << "model " << model.name << ": structure OK (" << model.functions.size()
           << " functions, " << model.ports.size() << " ports, " << model.flows.size()
           << " flows)\n";
        return std::move(os).str();
    }
    for (const auto &v : violations)
        os << v.span.to_string() << ": " << v.message << " [" << v.rule << "] (" << v.element
           << ")\n";
    return std::move(os).str();
}

std::string render_verdicts(const Model &model, const std::vector<Verdict> &verdicts,
                            ReportFormat format) {
    if (format == ReportFormat::Json) {
        ordered_json j = json_header(model, "check");
        for (const auto &v : verdicts) {
            ordered_json entry;
            entry["assertion"] = v.assertion;
            entry["outcome"] = to_string(v.outcome);
            ordered_json stats;
            stats["scenarios_enumerated"] = v.stats.scenarios_enumerated;
            stats["solutions_examined"] = v.stats.solutions_examined;
            stats["satisfying_pairs"] = v.stats.satisfying_pairs;
            stats["counterexamples_total"] = v.stats.counterexamples_total;
            stats["empty_scenarios"] = v.stats.empty_scenarios;
            entry["statistics"] = std::move(stats);
            if (!v.counterexamples.empty()) {
                ordered_json ces = ordered_json::array();
                for (const auto &ce : v.counterexamples) {
                    ordered_json c;
                    c["scenario"] = scenario_json(model, ce.scenario);
                    ordered_json violated = ordered_json::array();
                    // indices refer to the bound assertion's conclusion
                    const Assertion *a = nullptr;
                    for (const auto &decl : model.assertions)
                        if (decl.name == v.assertion)
                            a = &decl;
                    for (std::size_t idx : ce.violated)
                        if (a)
                            violated.push_back(port_equality_to_string(model, a->conclusion[idx]));
                    c["violated"] = std::move(violated);
                    c["assignment"] = assignment_json(model, ce.assignment);
                    ces.push_back(std::move(c));
                }
                entry["counterexamples"] = std::move(ces);
            }
            j["results"].push_back(std::move(entry));
        }
        return dump(j);
    }

    std::ostringstream os;
    os << "model " << model.name << ": " << verdicts.size() << " check"
       << (verdicts.size() == 1 ? "" : "s") << '\n';
    for (const auto &v : verdicts) {
        os << v.assertion << ": " << to_string(v.outcome);
        if (v.assertion != "model_structure")
            os << "  (scenarios=" << v.stats.scenarios_enumerated
               << " solutions=" << v.stats.solutions_examined
               << " pairs=" << v.stats.satisfying_pairs;
        if (v.stats.counterexamples_total)
            os << " counterexamples=" << v.stats.counterexamples_total;
        if (v.assertion != "model_structure")
            os << ')';
        os << '\n';
        const Assertion *a = nullptr;
        for (const auto &decl : model.assertions)
            if (decl.name == v.assertion)
                a = &decl;
        for (size_t i = 0; i < v.counterexamples.size(); ++i) {
            const auto &ce = v.counterexamples[i];
            os << "  counterexample " << i + 1 << ":\n";
            os << "    scenario: " << scenario_to_string(model, ce.scenario) << '\n';
            for (std::size_t idx : ce.violated)
                if (a)
                    os << "    violated: " << port_equality_to_string(model, a->conclusion[idx])
                       << '\n';
            os << "    ports:\n";
            assignment_text(os, model, ce.assignment, "      ");
        }
    }
    return std::move(os).str();
}

std::string render_instance(const Model &model,
                            const std::optional<std::pair<Scenario, Assignment>> &instance,
                            const std::string &constraint_text, ReportFormat format) {
    if (format == ReportFormat::Json) {
        ordered_json j = json_header(model, "run");
        j["where"] = constraint_text;
        if (instance) {
            ordered_json entry;
            entry["scenario"] = scenario_json(model, instance->first);
            entry["assignment"] = assignment_json(model, instance->second);
            j["results"].push_back(std::move(entry));
        }
        j["found"] = instance.has_value();
        return dump(j);
    }
    std::ostringstream os;
    if (!instance) {
        os << "no instance\n";
        return std::move(os).str();
    }
    os << "instance of " << model.name << " where " << constraint_text << '\n';
    os << "  scenario: " << scenario_to_string(model, instance->first) << '\n';
    os << "  ports:\n";
    assignment_text(os, model, instance->second, "    ");
    return std::move(os).str();
}

std::string render_cutsets(const Model &model, const std::vector<CutSet> &cutsets,
                           const std::string &condition_text, ReportFormat format) {
    if (format == ReportFormat::Json) {
        ordered_json j = json_header(model, "cutsets");
        j["condition"] = condition_text;
        for (const auto &cs : cutsets) {
            ordered_json entry;
            entry["order"] = cs.failures.size();
            ordered_json members = ordered_json::array();
            for (const auto &[f, s] : cs.failures) {
                ordered_json member;
                member["function"] = model.function_name(f);
                member["status"] = to_string(s);
                members.push_back(std::move(member));
            }
            entry["members"] = std::move(members);
            j["results"].push_back(std::move(entry));
        }
        return dump(j);
    }
    std::ostringstream os;
    os << "minimal cut sets of " << model.name << " violating: " << condition_text << '\n';
    if (cutsets.empty()) {
        os << "  none\n";
        return std::move(os).str();
    }
    for (const auto &cs : cutsets) {
        os << "  order " << cs.failures.size() << ": {";
        for (size_t i = 0; i < cs.failures.size(); ++i) {
            if (i)
                os << ", ";
            os << model.function_name(cs.failures[i].first) << ':'
               << to_string(cs.failures[i].second);
        }
        os << "}\n";
    }
    return std::move(os).str();
}

} // namespace failprop
