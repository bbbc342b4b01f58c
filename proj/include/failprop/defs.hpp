#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "failprop/errors.hpp"

// Unresolved model declarations, as produced by the parser or built
// programmatically. build_model() binds names and enforces the rules.
namespace failprop::defs {

struct Term {
    enum class Kind { OwnStatus, PortStatus, PortValue, StatusLit, ValueLit };
    Kind kind = Kind::StatusLit;
    std::string text; // port name or literal spelling
    SourceSpan span;
};

struct Guard {
    enum class Kind { Compare, And, Or, Not };
    Kind kind = Kind::Compare;
    std::vector<Guard> children; // And/Or: >= 2, Not: exactly 1
    Term lhs, rhs;               // Compare only
    bool not_equal = false;      // Compare: != instead of =
    SourceSpan span;
};

struct Branch {
    Guard guard;
    Term result;
};

struct Transfer {
    std::string port;          // target output port
    bool targets_value = false; // false: .status, true: .value
    std::vector<Branch> branches;
    std::optional<Term> fallback; // absent chain is rejected as non-total
    SourceSpan span;
};

struct Port {
    std::string name;
    bool free = false; // inputs only: value becomes a scenario variable
    SourceSpan span;
};

struct Function {
    std::string name;
    std::vector<Port> inputs;
    std::vector<Port> outputs;
    std::vector<Transfer> transfers;
    SourceSpan span;
};

struct Flow {
    std::string source;
    std::string target;
    SourceSpan span;
};

struct ConstraintAtom {
    std::string name;      // function or port
    bool is_value = false; // X.value = lit vs X.status = lit
    std::string literal;
    SourceSpan span;
};

struct Constraint {
    std::vector<ConstraintAtom> atoms;
    bool others_ok = false;
    std::vector<std::string> exempt; // `others OK except A, B`
    SourceSpan span;
};

struct ConclusionAtom {
    std::string port;
    bool is_value = false;
    std::string literal;
    SourceSpan span;
};

struct Assertion {
    std::string name;
    std::optional<Constraint> when;
    std::vector<ConclusionAtom> expect;
    SourceSpan span;
};

struct ModelDefs {
    std::string name;
    std::vector<std::string> values;
    std::vector<Function> functions;
    std::vector<Flow> flows;
    std::vector<Assertion> assertions;
};

// Construction helpers for programmatic model building.

inline Term own_status() { return {Term::Kind::OwnStatus, "", {}}; }
inline Term port_status(std::string port) { return {Term::Kind::PortStatus, std::move(port), {}}; }
inline Term port_value(std::string port) { return {Term::Kind::PortValue, std::move(port), {}}; }
inline Term status_lit(std::string s) { return {Term::Kind::StatusLit, std::move(s), {}}; }
inline Term value_lit(std::string v) { return {Term::Kind::ValueLit, std::move(v), {}}; }

inline Guard eq(Term l, Term r) {
    Guard g;
    g.kind = Guard::Kind::Compare;
    g.lhs = std::move(l);
    g.rhs = std::move(r);
    return g;
}

inline Guard ne(Term l, Term r) {
    Guard g = eq(std::move(l), std::move(r));
    g.not_equal = true;
    return g;
}

inline Guard all_of(std::vector<Guard> gs) {
    Guard g;
    g.kind = Guard::Kind::And;
    g.children = std::move(gs);
    return g;
}

inline Guard any_of(std::vector<Guard> gs) {
    Guard g;
    g.kind = Guard::Kind::Or;
    g.children = std::move(gs);
    return g;
}

inline Guard negate(Guard inner) {
    Guard g;
    g.kind = Guard::Kind::Not;
    g.children.push_back(std::move(inner));
    return g;
}

} // namespace failprop::defs
