#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "failprop/defs.hpp"
#include "failprop/errors.hpp"

namespace failprop {

// Dysfunctional status of a function or port. OK: nominal, Err:
// undetected erroneous data, Lost: no data produced.
enum class Status : std::uint8_t { OK = 0, Err = 1, Lost = 2 };

inline constexpr std::array<Status, 3> kStatuses{Status::OK, Status::Err, Status::Lost};

std::string_view to_string(Status s);
std::optional<Status> status_from_string(std::string_view text);

using FunctionId = std::int32_t;
using PortId = std::int32_t;
using ValueId = std::int32_t; // index into Model::values

enum class PortDirection : std::uint8_t { Input, Output };

struct PortDecl {
    std::string name;
    PortDirection direction = PortDirection::Input;
    FunctionId owner = -1;
    bool free = false; // inputs with no incoming flow only
    SourceSpan span;
};

struct FunctionDecl {
    std::string name;
    std::vector<PortId> inputs;
    std::vector<PortId> outputs;
    SourceSpan span;
};

// One-to-many connection; both endpoints share status and value.
struct Flow {
    PortId source = -1;
    PortId target = -1;
    SourceSpan span;
};

// ---- resolved transfer expressions ----------------------------------

struct Term {
    enum class Kind : std::uint8_t { OwnStatus, PortStatus, PortValue, StatusLit, ValueLit };
    Kind kind = Kind::StatusLit;
    PortId port = -1;
    Status status = Status::OK;
    ValueId value = -1;
    bool operator==(const Term &) const = default;
};

struct Guard {
    enum class Kind : std::uint8_t { Compare, And, Or, Not };
    Kind kind = Kind::Compare;
    std::vector<Guard> children;
    Term lhs, rhs;
    bool not_equal = false;
    bool operator==(const Guard &) const = default;
};

struct Branch {
    Guard guard;
    Term result;
    bool operator==(const Branch &) const = default;
};

// Guarded conditional chain. Branches are tested top to bottom; the
// fallback makes the chain total.
struct TransferExpr {
    enum class Kind : std::uint8_t { Status, Value };
    Kind kind = Kind::Status;
    PortId target = -1;
    std::vector<Branch> branches;
    Term fallback;
    bool operator==(const TransferExpr &) const = default;
};

// ---- assertions -------------------------------------------------------

struct PortEquality {
    PortId port = -1;
    bool is_value = false;
    Status status = Status::OK;
    ValueId value = -1;
    bool operator==(const PortEquality &) const = default;
};

// Conjunction of scenario-level constraints. Equalities on ports that
// are not free inputs constrain the solved assignment (they filter
// scenario/assignment pairs) rather than the scenario enumeration.
struct ScenarioConstraint {
    std::vector<std::pair<FunctionId, Status>> function_status;
    std::vector<std::pair<PortId, ValueId>> free_values; // pins on free inputs
    std::vector<PortEquality> port_filters;
    bool others_ok = false;
    std::vector<FunctionId> exempt; // explicit `except` entries
    bool operator==(const ScenarioConstraint &) const = default;
};

struct Assertion {
    std::string name;
    ScenarioConstraint hypothesis;
    std::vector<PortEquality> conclusion;
    std::string warning; // non-empty when the hypothesis is unsatisfiable
    SourceSpan span;
};

// ---- model -------------------------------------------------------------

// Immutable after build_model; safe to share read-only across workers.
struct Model {
    std::string name;
    std::vector<std::string> values; // declared value domain, first member is the default
    std::vector<PortDecl> ports;     // PortId = index
    std::vector<FunctionDecl> functions;
    std::vector<Flow> flows;         // canonical order: (source name, target name)

    // Per-port transfers; only output ports have entries. Status
    // transfers are mandatory, value transfers optional.
    std::vector<std::optional<TransferExpr>> status_transfer;
    std::vector<std::optional<TransferExpr>> value_transfer;

    std::vector<Assertion> assertions;

    // Lookup caches, filled by the binder.
    std::unordered_map<std::string, PortId> port_ids;
    std::unordered_map<std::string, FunctionId> function_ids;
    std::unordered_map<std::string, ValueId> value_ids;
    std::vector<std::optional<PortId>> fed_by; // input port -> feeding flow source
    std::vector<PortId> free_ports;            // declaration order
    std::vector<std::int32_t> free_index;      // port -> index into free_ports, or -1
    std::vector<PortId> ports_by_name;         // name-sorted, for canonical ordering

    PortId port(std::string_view name) const;
    FunctionId function(std::string_view name) const;
    ValueId value(std::string_view name) const;
    ValueId default_value() const { return 0; }
    const std::string &port_name(PortId p) const { return ports[p].name; }
    const std::string &function_name(FunctionId f) const { return functions[f].name; }
};

// Structural equality; ignores source spans and lookup caches.
bool structurally_equal(const Model &a, const Model &b);

// Resolve raw declarations into a Model without enforcing the flow
// structure rules. Throws SemanticError on unresolvable names,
// duplicates, kind mismatches, non-total transfer chains, free flags on
// fed inputs and outputs lacking a status transfer.
Model resolve_model(const defs::ModelDefs &raw);

// resolve_model + validate_structure; throws SemanticError listing the
// violations when the model is not structurally sound.
Model build_model(const defs::ModelDefs &raw);

// Checks: (a) every port belongs to exactly one function, (b) flows run
// from output ports to input ports, (c) every input port has at most
// one incoming flow. Empty result means the model is well-formed.
std::vector<Violation> validate_structure(const Model &model);

Assertion bind_assertion(const Model &model, const defs::Assertion &raw);
ScenarioConstraint bind_constraint(const Model &model, const defs::Constraint &raw);
std::vector<PortEquality> bind_condition(const Model &model,
                                         const std::vector<defs::ConclusionAtom> &raw);

// ---- dependency graph ---------------------------------------------------

struct DependencyGraph {
    std::vector<std::vector<PortId>> edges; // adjacency, indexed by port
    std::vector<std::vector<PortId>> sccs;  // topological order of the condensation
};

// Nodes are ports; edges are flow source->target plus input->output
// within a function whenever the output's transfer references that
// input.
DependencyGraph dependency_graph(const Model &model);

} // namespace failprop
