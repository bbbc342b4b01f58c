#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "failprop/case_study.hpp"
#include "failprop/checker.hpp"
#include "failprop/dsl.hpp"
#include "failprop/model.hpp"
#include "failprop/report.hpp"
#include "failprop/semantics.hpp"

namespace py = pybind11;
using namespace failprop;

namespace {

py::dict scenario_dict(const Model &m, const Scenario &s) {
    py::dict statuses;
    for (FunctionId f = 0; f < static_cast<FunctionId>(m.functions.size()); ++f)
        statuses[py::str(m.function_name(f))] = std::string(to_string(s.function_status[f]));
    py::dict free_values;
    for (size_t i = 0; i < m.free_ports.size(); ++i)
        free_values[py::str(m.port_name(m.free_ports[i]))] = m.values[s.free_values[i]];
    py::dict out;
    out["function_status"] = statuses;
    out["free_values"] = free_values;
    return out;
}

py::dict assignment_dict(const Model &m, const Assignment &a) {
    py::dict out;
    for (PortId p = 0; p < static_cast<PortId>(m.ports.size()); ++p) {
        py::dict port;
        port["status"] = std::string(to_string(a.port_status[p]));
        port["value"] = m.values[a.port_value[p]];
        out[py::str(m.port_name(p))] = port;
    }
    return out;
}

py::dict verdict_dict(const Model &m, const Verdict &v) {
    py::dict out;
    out["assertion"] = v.assertion;
    out["outcome"] = std::string(to_string(v.outcome));
    py::dict stats;
    stats["scenarios_enumerated"] = v.stats.scenarios_enumerated;
    stats["solutions_examined"] = v.stats.solutions_examined;
    stats["satisfying_pairs"] = v.stats.satisfying_pairs;
    stats["counterexamples_total"] = v.stats.counterexamples_total;
    stats["empty_scenarios"] = v.stats.empty_scenarios;
    out["statistics"] = stats;
    const Assertion *decl = nullptr;
    for (const auto &a : m.assertions)
        if (a.name == v.assertion)
            decl = &a;
    py::list ces;
    for (const auto &ce : v.counterexamples) {
        py::dict c;
        c["scenario"] = scenario_dict(m, ce.scenario);
        c["assignment"] = assignment_dict(m, ce.assignment);
        py::list violated;
        for (std::size_t idx : ce.violated)
            if (decl)
                violated.append(port_equality_to_string(m, decl->conclusion[idx]));
        c["violated"] = violated;
        ces.append(c);
    }
    out["counterexamples"] = ces;
    return out;
}

Scenario scenario_from_dicts(const Model &m, const py::dict &functions,
                             const py::dict &free_values) {
    Scenario s;
    s.function_status.assign(m.functions.size(), Status::OK);
    s.free_values.assign(m.free_ports.size(), m.default_value());
    for (auto item : functions) {
        FunctionId f = m.function(item.first.cast<std::string>());
        if (f < 0)
            throw py::value_error("unknown function '" + item.first.cast<std::string>() + "'");
        auto status = status_from_string(item.second.cast<std::string>());
        if (!status)
            throw py::value_error("unknown status '" + item.second.cast<std::string>() + "'");
        s.function_status[f] = *status;
    }
    for (auto item : free_values) {
        PortId p = m.port(item.first.cast<std::string>());
        if (p < 0 || m.free_index[p] < 0)
            throw py::value_error("'" + item.first.cast<std::string>() + "' is not a free input");
        ValueId v = m.value(item.second.cast<std::string>());
        if (v < 0)
            throw py::value_error("unknown value '" + item.second.cast<std::string>() + "'");
        s.free_values[m.free_index[p]] = v;
    }
    return s;
}

CheckOptions options_from_args(std::optional<int> max_failures, bool exhaustive, int cap,
                               int workers) {
    CheckOptions opts;
    opts.max_failures = exhaustive ? std::nullopt : max_failures;
    opts.counterexample_cap = cap;
    opts.workers = workers;
    return opts;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "failprop: bounded model checker for dataflow architectures with "
              "failure-mode propagation";
    m.attr("__version__") = kToolVersion;

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<SemanticError>(m, "SemanticError", PyExc_ValueError);

    py::class_<Model>(m, "Model")
        .def_property_readonly("name", [](const Model &self) { return self.name; })
        .def_property_readonly("values", [](const Model &self) { return self.values; })
        .def_property_readonly("functions",
                               [](const Model &self) {
                                   std::vector<std::string> names;
                                   for (const auto &f : self.functions)
                                       names.push_back(f.name);
                                   return names;
                               })
        .def_property_readonly("ports",
                               [](const Model &self) {
                                   py::list out;
                                   for (const auto &p : self.ports) {
                                       py::dict d;
                                       d["name"] = p.name;
                                       d["direction"] = p.direction == PortDirection::Input
                                                            ? "in"
                                                            : "out";
                                       d["function"] = self.function_name(p.owner);
                                       d["free"] = p.free;
                                       out.append(d);
                                   }
                                   return out;
                               })
        .def_property_readonly("assertions",
                               [](const Model &self) {
                                   std::vector<std::string> names;
                                   for (const auto &a : self.assertions)
                                       names.push_back(a.name);
                                   return names;
                               })
        .def("__eq__",
             [](const Model &self, const Model &other) { return structurally_equal(self, other); })
        .def("__repr__", [](const Model &self) {
            return "<failprop.Model '" + self.name + "': " +
                   std::to_string(self.functions.size()) + " functions, " +
                   std::to_string(self.ports.size()) + " ports>";
        });

    m.def("parse_model", [](const std::string &text, const std::string &filename) {
              return parse_model(text, filename);
          },
          py::arg("text"), py::arg("filename") = "<string>");
    m.def("load_model_file", &load_model_file, py::arg("path"));
    m.def("serialize", &serialize, py::arg("model"));

    m.def("validate_structure", [](const Model &model) {
        py::list out;
        for (const auto &v : validate_structure(model)) {
            py::dict d;
            d["rule"] = v.rule;
            d["element"] = v.element;
            d["message"] = v.message;
            out.append(d);
        }
        return out;
    });

    m.def("sccs", [](const Model &model) {
        py::list out;
        for (const auto &scc : dependency_graph(model).sccs) {
            py::list names;
            for (PortId p : scc)
                names.append(model.port_name(p));
            out.append(names);
        }
        return out;
    });

    m.def("solve",
          [](const Model &model, const py::dict &functions, const py::dict &free_values) {
              Scenario s = scenario_from_dicts(model, functions, free_values);
              py::list out;
              for (const auto &a : solve(model, s))
                  out.append(assignment_dict(model, a));
              return out;
          },
          py::arg("model"), py::arg("function_status"), py::arg("free_values") = py::dict());

    m.def("solution_count_is_one", [](const Model &model) {
        auto r = solution_count_is_one(model);
        py::dict out;
        out["unique"] = r.unique;
        if (r.witness) {
            out["witness"] = scenario_dict(model, *r.witness);
            out["witness_solutions"] = r.witness_solutions;
        }
        return out;
    });

    m.def("check",
          [](const Model &model, const std::optional<std::string> &assertion,
             std::optional<int> max_failures, bool exhaustive, int cap, int workers) {
              CheckOptions opts = options_from_args(max_failures, exhaustive, cap, workers);
              py::list out;
              if (assertion) {
                  for (const auto &a : model.assertions)
                      if (a.name == *assertion) {
                          out.append(verdict_dict(model, check(model, a, opts)));
                          return out;
                      }
                  throw py::value_error("unknown assertion '" + *assertion + "'");
              }
              for (const auto &v : check_all(model, opts))
                  out.append(verdict_dict(model, v));
              return out;
          },
          py::arg("model"), py::arg("assertion") = std::nullopt, py::arg("max_failures") = 2,
          py::arg("exhaustive") = false, py::arg("max_counterexamples") = 10,
          py::arg("workers") = 1);

    m.def("run_instance",
          [](const Model &model, const std::string &where, std::optional<int> max_failures,
             bool exhaustive) -> py::object {
              ScenarioConstraint c = parse_constraint(model, where, "<where>");
              CheckOptions opts = options_from_args(max_failures, exhaustive, 10, 1);
              auto instance = run_instance(model, c, opts);
              if (!instance)
                  return py::none();
              py::dict out;
              out["scenario"] = scenario_dict(model, instance->first);
              out["assignment"] = assignment_dict(model, instance->second);
              return out;
          },
          py::arg("model"), py::arg("where"), py::arg("max_failures") = 2,
          py::arg("exhaustive") = false);

    m.def("minimal_cutsets",
          [](const Model &model, const std::string &condition, int max_order) {
              auto sets = minimal_cutsets(model, parse_condition(model, condition, "<condition>"),
                                          max_order);
              py::list out;
              for (const auto &cs : sets) {
                  py::list members;
                  for (const auto &[f, s] : cs.failures)
                      members.append(py::make_tuple(model.function_name(f),
                                                    std::string(to_string(s))));
                  out.append(members);
              }
              return out;
          },
          py::arg("model"), py::arg("condition"), py::arg("max_order") = 2);

    m.def("baseline_lpv_model", &baseline_lpv_model);
    m.def("hardened_lpv_model", &hardened_lpv_model);
    m.def("corpus", [] {
        py::list out;
        for (const auto &e : corpus()) {
            py::dict d;
            d["model"] = e.model_id;
            d["assertion"] = e.assertion;
            d["expected"] = std::string(to_string(e.expected));
            d["description"] = e.description;
            out.append(d);
        }
        return out;
    });
}
