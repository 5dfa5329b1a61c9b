#include "planexec/grounding.hpp"

#include <functional>
#include <map>

#include "planexec/errors.hpp"

namespace planexec::planner {
namespace {

using pddl::Atom;
using pddl::Condition;
using pddl::Effect;
using pddl::FluentRef;
using pddl::NumericExpr;
using pddl::ObjectName;
using pddl::Term;
using pddl::Variable;

using Binding = std::map<Variable, ObjectName>;

Term subst_term(const Term& t, const Binding& b) {
    if (const auto* v = std::get_if<Variable>(&t)) {
        auto it = b.find(*v);
        if (it == b.end()) throw ValidationError("unbound variable '?" + v->name + "'");
        return it->second;
    }
    return t;
}

Atom subst_atom(const Atom& a, const Binding& b) {
    Atom out{a.pred, {}};
    out.args.reserve(a.args.size());
    for (const auto& t : a.args) out.args.push_back(subst_term(t, b));
    return out;
}

FluentRef subst_fluent(const FluentRef& f, const Binding& b) {
    FluentRef out{f.fn, {}};
    out.args.reserve(f.args.size());
    for (const auto& t : f.args) out.args.push_back(subst_term(t, b));
    return out;
}

NumericExpr subst_expr(const NumericExpr& e, const Binding& b) {
    switch (e.kind()) {
        case NumericExpr::Kind::Constant: return e;
        case NumericExpr::Kind::Fluent: return NumericExpr::fluent(subst_fluent(e.fluent_ref(), b));
        case NumericExpr::Kind::Binary:
            return NumericExpr::binary(e.op(), subst_expr(e.lhs(), b), subst_expr(e.rhs(), b));
    }
    return e;
}

Condition subst_condition(const Condition& c, const Binding& b) {
    Condition out;
    for (const auto& l : c.literals) out.literals.push_back({subst_atom(l.atom, b), l.negated});
    for (const auto& cmp : c.comparisons)
        out.comparisons.push_back({cmp.op, subst_expr(cmp.lhs, b), subst_expr(cmp.rhs, b)});
    return out;
}

Effect subst_effect(const Effect& e, const Binding& b) {
    Effect out;
    for (const auto& a : e.adds) out.adds.push_back(subst_atom(a, b));
    for (const auto& d : e.dels) out.dels.push_back(subst_atom(d, b));
    for (const auto& n : e.numeric)
        out.numeric.push_back({n.kind, subst_fluent(n.target, b), subst_expr(n.value, b)});
    return out;
}

}  // namespace

GroundedAction ground_action(const pddl::Domain& domain, const kb::KnowledgeState& state,
                             const pddl::ActionName& name,
                             const std::vector<pddl::ObjectName>& args) {
    const pddl::DurativeAction* schema = domain.find_action(name);
    if (!schema) throw ValidationError("unknown action '" + name.str() + "'");
    if (schema->params.size() != args.size())
        throw ValidationError("action '" + name.str() + "' expects " +
                              std::to_string(schema->params.size()) + " arguments, got " +
                              std::to_string(args.size()));
    Binding binding;
    for (size_t i = 0; i < args.size(); ++i) {
        auto it = state.instances.find(args[i]);
        if (it == state.instances.end())
            throw ValidationError("unknown object '" + args[i].str() + "'");
        if (!domain.is_subtype(it->second, schema->params[i].type))
            throw ValidationError("argument " + std::to_string(i + 1) + " of " +
                                  grounded_signature(name, args) + " has type '" +
                                  it->second.str() + "', expected '" +
                                  schema->params[i].type.str() + "'");
        binding[schema->params[i].var] = args[i];
    }
    GroundedAction out;
    out.name = name;
    out.args = args;
    out.duration = subst_expr(schema->duration.expr, binding);
    out.cond_start = subst_condition(schema->cond_start, binding);
    out.cond_overall = subst_condition(schema->cond_overall, binding);
    out.cond_end = subst_condition(schema->cond_end, binding);
    out.eff_start = subst_effect(schema->eff_start, binding);
    out.eff_end = subst_effect(schema->eff_end, binding);
    return out;
}

std::vector<GroundedAction> ground_all(const pddl::Domain& domain,
                                       const kb::KnowledgeState& state) {
    // Objects per type, deterministic order from the instance map.
    std::vector<GroundedAction> out;
    for (const auto& schema : domain.actions) {
        std::vector<std::vector<ObjectName>> candidates(schema.params.size());
        for (size_t i = 0; i < schema.params.size(); ++i)
            for (const auto& [obj, type] : state.instances)
                if (domain.is_subtype(type, schema.params[i].type))
                    candidates[i].push_back(obj);

        std::vector<ObjectName> args(schema.params.size());
        std::function<void(size_t)> expand = [&](size_t i) {
            if (i == schema.params.size()) {
                out.push_back(ground_action(domain, state, schema.name, args));
                return;
            }
            for (const auto& obj : candidates[i]) {
                args[i] = obj;
                expand(i + 1);
            }
        };
        bool feasible = true;
        for (const auto& c : candidates) feasible = feasible && !c.empty();
        if (feasible && !schema.params.empty()) expand(0);
        if (schema.params.empty()) out.push_back(ground_action(domain, state, schema.name, {}));
    }
    return out;
}

std::string grounded_signature(const pddl::ActionName& name,
                               const std::vector<pddl::ObjectName>& args) {
    std::string out = "(" + name.str();
    for (const auto& a : args) out += " " + a.str();
    return out + ")";
}

std::string grounded_signature(const GroundedAction& a) {
    return grounded_signature(a.name, a.args);
}

}  // namespace planexec::planner
