#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "planexec/names.hpp"

namespace planexec::pddl {

/// A term is either a schema variable or a concrete object.
using Term = std::variant<Variable, ObjectName>;

bool is_object(const Term& t);
const ObjectName& object_of(const Term& t);  // throws ValidationError if variable

struct TypedParam {
    Variable var;
    TypeName type;

    auto operator<=>(const TypedParam&) const = default;
};

struct PredicateDef {
    PredicateName name;
    std::vector<TypedParam> params;

    auto operator<=>(const PredicateDef&) const = default;
};

/// Numeric fluent declaration. Values are reals.
struct FunctionDef {
    FunctionName name;
    std::vector<TypedParam> params;

    auto operator<=>(const FunctionDef&) const = default;
};

struct Atom {
    PredicateName pred;
    std::vector<Term> args;

    bool is_ground() const;
    auto operator<=>(const Atom&) const = default;
};

struct FluentRef {
    FunctionName fn;
    std::vector<Term> args;

    bool is_ground() const;
    auto operator<=>(const FluentRef&) const = default;
};

/// Fully ground predicate instance; the knowledge base's currency.
struct GroundAtom {
    PredicateName pred;
    std::vector<ObjectName> args;

    auto operator<=>(const GroundAtom&) const = default;
};

struct GroundFluent {
    FunctionName fn;
    std::vector<ObjectName> args;

    auto operator<=>(const GroundFluent&) const = default;
};

GroundAtom to_ground(const Atom& a);        // throws ValidationError on variables
Atom to_atom(const GroundAtom& g);
GroundFluent to_ground(const FluentRef& f);
FluentRef to_fluent_ref(const GroundFluent& g);

enum class ArithOp { Add, Sub, Mul, Div };

/// Immutable arithmetic expression over constants and fluent terms.
/// Copies are cheap (shared structure).
class NumericExpr {
public:
    enum class Kind { Constant, Fluent, Binary };

    NumericExpr();  // constant 0
    static NumericExpr constant(double v);
    static NumericExpr fluent(FluentRef ref);
    static NumericExpr binary(ArithOp op, NumericExpr lhs, NumericExpr rhs);

    Kind kind() const;
    double value() const;              // Constant only
    const FluentRef& fluent_ref() const;  // Fluent only
    ArithOp op() const;                // Binary only
    NumericExpr lhs() const;           // Binary only; shares structure
    NumericExpr rhs() const;

    bool is_ground() const;
    bool operator==(const NumericExpr& other) const;

private:
    struct Node;
    explicit NumericExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

enum class CompareOp { Lt, Le, Eq, Ge, Gt };

struct Comparison {
    CompareOp op;
    NumericExpr lhs;
    NumericExpr rhs;

    bool operator==(const Comparison&) const = default;
};

struct Literal {
    Atom atom;
    bool negated = false;

    auto operator<=>(const Literal&) const = default;
};

/// Conjunctive condition in negation normal form: the supported subset has
/// no disjunction and `not` applies to atoms only, so any condition tree
/// flattens to one conjunction of literals and numeric comparisons.
struct Condition {
    std::vector<Literal> literals;
    std::vector<Comparison> comparisons;

    bool empty() const { return literals.empty() && comparisons.empty(); }
    bool is_ground() const;

    bool operator==(const Condition&) const = default;
};

enum class NumericOpKind { Assign, Increase, Decrease };

struct NumericEffect {
    NumericOpKind kind;
    FluentRef target;
    NumericExpr value;

    bool operator==(const NumericEffect&) const = default;
};

struct Effect {
    std::vector<Atom> adds;
    std::vector<Atom> dels;
    std::vector<NumericEffect> numeric;

    bool empty() const { return adds.empty() && dels.empty() && numeric.empty(); }
    bool is_ground() const;

    bool operator==(const Effect&) const = default;
};

/// `(= ?duration <constant | fluent-term>)`.
struct Duration {
    NumericExpr expr;

    bool operator==(const Duration&) const = default;
};

struct DurativeAction {
    ActionName name;
    std::vector<TypedParam> params;
    Duration duration;
    Condition cond_start;
    Condition cond_overall;
    Condition cond_end;
    Effect eff_start;
    Effect eff_end;

    bool operator==(const DurativeAction&) const = default;
};

enum class Requirement { Strips, Typing, DurativeActions, Fluents, NegativePreconditions };

std::string requirement_keyword(Requirement r);
std::optional<Requirement> requirement_from_keyword(std::string_view kw);

/// The root type every hierarchy hangs off.
const TypeName& object_type();

struct Domain {
    std::string name;
    std::set<Requirement> requirements;
    /// child -> parent, rooted at `object` (which is implicit and never a key).
    std::map<TypeName, TypeName> type_parents;
    /// Declaration order of types, for printing.
    std::vector<TypeName> type_order;
    std::vector<std::pair<ObjectName, TypeName>> constants;
    std::vector<PredicateDef> predicates;
    std::vector<FunctionDef> functions;
    std::vector<DurativeAction> actions;

    bool type_known(const TypeName& t) const;
    /// True when `t` equals `ancestor` or descends from it.
    bool is_subtype(const TypeName& t, const TypeName& ancestor) const;
    const PredicateDef* find_predicate(const PredicateName& n) const;
    const FunctionDef* find_function(const FunctionName& n) const;
    const DurativeAction* find_action(const ActionName& n) const;
    std::optional<TypeName> constant_type(const ObjectName& n) const;

    bool operator==(const Domain&) const = default;
};

struct Instance {
    ObjectName name;
    TypeName type;

    auto operator<=>(const Instance&) const = default;
};

/// Parsed problem file: object declarations, initial ground state, goal.
struct Problem {
    std::string name;
    std::string domain_name;
    std::vector<Instance> objects;
    std::vector<GroundAtom> init_atoms;
    std::vector<std::pair<GroundFluent, double>> init_fluents;
    Condition goal;

    bool operator==(const Problem&) const = default;
};

}  // namespace planexec::pddl
