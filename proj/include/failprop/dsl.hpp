#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "failprop/model.hpp"

namespace failprop {

// Parses .fprop text into raw declarations; throws ParseError with a
// span on lexical and syntax errors.
defs::ModelDefs parse_model_defs(std::string_view text, std::string_view filename = "<input>");

// parse_model_defs + build_model: the result passes validate_structure.
// Throws ParseError or SemanticError.
Model parse_model(std::string_view text, std::string_view filename = "<input>");

// Parses a single `assert NAME { ... }` block bound against a model.
Assertion parse_assertion(const Model &model, std::string_view text,
                          std::string_view filename = "<input>");

// Parses a bare when-clause constraint, e.g. `GPS.status = Err and others OK`.
ScenarioConstraint parse_constraint(const Model &model, std::string_view text,
                                    std::string_view filename = "<input>");

// Parses a conjunction of port equalities, e.g. `oSelected1.status = OK`.
std::vector<PortEquality> parse_condition(const Model &model, std::string_view text,
                                          std::string_view filename = "<input>");

// Canonical text for a model: declaration order for functions and
// assertions, flows sorted by (source, target). Deterministic;
// parse_model(serialize(m)) is structurally equal to m.
std::string serialize(const Model &model);

// Reads and parses a .fprop file; throws Error on IO failure.
Model load_model_file(const std::string &path);

} // namespace failprop
