#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <set>

#include "planexec/model.hpp"

namespace planexec::kb {

using pddl::Condition;
using pddl::Effect;
using pddl::GroundAtom;
using pddl::GroundFluent;
using pddl::ObjectName;
using pddl::TypeName;

/// Immutable snapshot of the problem state: instances, ground predicates,
/// fluent values and the goal. Closed world: an atom not stored is false.
struct KnowledgeState {
    std::map<ObjectName, TypeName> instances;
    std::set<GroundAtom> atoms;
    std::map<GroundFluent, double> fluents;
    Condition goal;  // ground conjunction; empty = vacuously satisfied

    bool has_atom(const GroundAtom& a) const { return atoms.count(a) > 0; }
};

/// Evaluates a ground condition against a state. Reading an unset fluent
/// throws EvaluationError (surfacing modeling bugs instead of defaulting).
bool evaluate(const Condition& c, const KnowledgeState& s);
double evaluate_expr(const pddl::NumericExpr& e, const KnowledgeState& s);

/// Applies a ground effect: deletes before adds; numeric right-hand sides
/// evaluate against the pre-state.
KnowledgeState apply(const Effect& e, KnowledgeState s);

/// The Problem Expert: a mutable store validated against the domain on every
/// write. Single-writer/multi-reader: mutations are serialized, reads hand
/// out immutable snapshots.
class KnowledgeBase {
public:
    explicit KnowledgeBase(pddl::Domain domain);

    const pddl::Domain& domain() const { return domain_; }

    /// Idempotent for an identical (name, type); duplicate names with a
    /// different type are rejected.
    void add_instance(const ObjectName& name, const TypeName& type);
    /// Fails while any atom, fluent or the goal still references the instance.
    void remove_instance(const ObjectName& name);

    void add_atom(const GroundAtom& atom);
    /// Returns false when the atom was not present (no-op).
    bool remove_atom(const GroundAtom& atom);
    void set_fluent(const GroundFluent& fluent, double value);
    bool remove_fluent(const GroundFluent& fluent);

    void set_goal(const Condition& goal);
    void clear_goal();
    bool is_goal_satisfied() const;

    /// Validates and applies a ground effect (the Executor's runtime path).
    void apply_effect(const Effect& effect);

    /// Seeds instances, init atoms, fluents and goal from a parsed problem.
    void load(const pddl::Problem& problem);

    KnowledgeState snapshot() const;
    std::uint64_t version() const;

private:
    void validate_atom(const KnowledgeState& s, const GroundAtom& atom) const;
    void validate_fluent(const KnowledgeState& s, const GroundFluent& fluent) const;
    void validate_condition(const KnowledgeState& s, const Condition& c) const;
    TypeName object_type_in(const KnowledgeState& s, const ObjectName& obj) const;
    void bump() { ++version_; }

    pddl::Domain domain_;
    KnowledgeState state_;
    std::uint64_t version_ = 0;
    mutable std::mutex mutex_;
};

}  // namespace planexec::kb
