#include "planexec/knowledge.hpp"

#include "planexec/errors.hpp"
#include "planexec/printer.hpp"

namespace planexec::kb {

using pddl::CompareOp;
using pddl::NumericExpr;
using pddl::NumericOpKind;

bool evaluate(const Condition& c, const KnowledgeState& s) {
    for (const auto& l : c.literals) {
        const bool present = s.has_atom(pddl::to_ground(l.atom));
        if (present == l.negated) return false;
    }
    for (const auto& cmp : c.comparisons) {
        const double lhs = evaluate_expr(cmp.lhs, s);
        const double rhs = evaluate_expr(cmp.rhs, s);
        bool ok = false;
        switch (cmp.op) {
            case CompareOp::Lt: ok = lhs < rhs; break;
            case CompareOp::Le: ok = lhs <= rhs; break;
            case CompareOp::Eq: ok = lhs == rhs; break;
            case CompareOp::Ge: ok = lhs >= rhs; break;
            case CompareOp::Gt: ok = lhs > rhs; break;
        }
        if (!ok) return false;
    }
    return true;
}

double evaluate_expr(const NumericExpr& e, const KnowledgeState& s) {
    switch (e.kind()) {
        case NumericExpr::Kind::Constant:
            return e.value();
        case NumericExpr::Kind::Fluent: {
            auto it = s.fluents.find(pddl::to_ground(e.fluent_ref()));
            if (it == s.fluents.end())
                throw EvaluationError("fluent " +
                                      pddl::print_ground_fluent(pddl::to_ground(e.fluent_ref())) +
                                      " has no value");
            return it->second;
        }
        case NumericExpr::Kind::Binary: {
            const double lhs = evaluate_expr(e.lhs(), s);
            const double rhs = evaluate_expr(e.rhs(), s);
            switch (e.op()) {
                case pddl::ArithOp::Add: return lhs + rhs;
                case pddl::ArithOp::Sub: return lhs - rhs;
                case pddl::ArithOp::Mul: return lhs * rhs;
                case pddl::ArithOp::Div:
                    if (rhs == 0.0) throw EvaluationError("division by zero");
                    return lhs / rhs;
            }
            break;
        }
    }
    throw EvaluationError("malformed numeric expression");
}

KnowledgeState apply(const Effect& e, KnowledgeState s) {
    // Numeric right-hand sides read the pre-state.
    std::vector<std::pair<GroundFluent, double>> writes;
    writes.reserve(e.numeric.size());
    for (const auto& n : e.numeric) {
        const GroundFluent target = pddl::to_ground(n.target);
        const double rhs = evaluate_expr(n.value, s);
        switch (n.kind) {
            case NumericOpKind::Assign:
                writes.emplace_back(target, rhs);
                break;
            case NumericOpKind::Increase:
            case NumericOpKind::Decrease: {
                auto it = s.fluents.find(target);
                if (it == s.fluents.end())
                    throw EvaluationError("fluent " + pddl::print_ground_fluent(target) +
                                          " has no value");
                writes.emplace_back(target, n.kind == NumericOpKind::Increase ? it->second + rhs
                                                                              : it->second - rhs);
                break;
            }
        }
    }
    for (const auto& d : e.dels) s.atoms.erase(pddl::to_ground(d));
    for (const auto& a : e.adds) s.atoms.insert(pddl::to_ground(a));
    for (const auto& [target, value] : writes) s.fluents[target] = value;
    return s;
}

KnowledgeBase::KnowledgeBase(pddl::Domain domain) : domain_(std::move(domain)) {
    for (const auto& [obj, type] : domain_.constants) state_.instances[obj] = type;
}

TypeName KnowledgeBase::object_type_in(const KnowledgeState& s, const ObjectName& obj) const {
    auto it = s.instances.find(obj);
    if (it == s.instances.end())
        throw ValidationError("unknown object '" + obj.str() + "'");
    return it->second;
}

void KnowledgeBase::validate_atom(const KnowledgeState& s, const GroundAtom& atom) const {
    const pddl::PredicateDef* def = domain_.find_predicate(atom.pred);
    if (!def) throw ValidationError("unknown predicate '" + atom.pred.str() + "'");
    if (def->params.size() != atom.args.size())
        throw ValidationError("predicate '" + atom.pred.str() + "' expects " +
                              std::to_string(def->params.size()) + " arguments, got " +
                              std::to_string(atom.args.size()));
    for (size_t i = 0; i < atom.args.size(); ++i) {
        TypeName t = object_type_in(s, atom.args[i]);
        if (!domain_.is_subtype(t, def->params[i].type))
            throw ValidationError("argument " + std::to_string(i + 1) + " of " +
                                  pddl::print_ground_atom(atom) + " has type '" + t.str() +
                                  "', expected '" + def->params[i].type.str() + "'");
    }
}

void KnowledgeBase::validate_fluent(const KnowledgeState& s, const GroundFluent& fluent) const {
    const pddl::FunctionDef* def = domain_.find_function(fluent.fn);
    if (!def) throw ValidationError("unknown function '" + fluent.fn.str() + "'");
    if (def->params.size() != fluent.args.size())
        throw ValidationError("function '" + fluent.fn.str() + "' expects " +
                              std::to_string(def->params.size()) + " arguments, got " +
                              std::to_string(fluent.args.size()));
    for (size_t i = 0; i < fluent.args.size(); ++i) {
        TypeName t = object_type_in(s, fluent.args[i]);
        if (!domain_.is_subtype(t, def->params[i].type))
            throw ValidationError("argument " + std::to_string(i + 1) + " of " +
                                  pddl::print_ground_fluent(fluent) + " has type '" + t.str() +
                                  "', expected '" + def->params[i].type.str() + "'");
    }
}

void KnowledgeBase::validate_condition(const KnowledgeState& s, const Condition& c) const {
    if (!c.is_ground()) throw ValidationError("condition is not ground");
    for (const auto& l : c.literals) validate_atom(s, pddl::to_ground(l.atom));
    std::function<void(const NumericExpr&)> check_expr = [&](const NumericExpr& e) {
        switch (e.kind()) {
            case NumericExpr::Kind::Constant: return;
            case NumericExpr::Kind::Fluent:
                validate_fluent(s, pddl::to_ground(e.fluent_ref()));
                return;
            case NumericExpr::Kind::Binary:
                check_expr(e.lhs());
                check_expr(e.rhs());
                return;
        }
    };
    for (const auto& cmp : c.comparisons) {
        check_expr(cmp.lhs);
        check_expr(cmp.rhs);
    }
}

void KnowledgeBase::add_instance(const ObjectName& name, const TypeName& type) {
    std::lock_guard lock(mutex_);
    if (!domain_.type_known(type))
        throw ValidationError("unknown type '" + type.str() + "'");
    auto it = state_.instances.find(name);
    if (it != state_.instances.end()) {
        if (it->second != type)
            throw ValidationError("instance '" + name.str() + "' already declared with type '" +
                                  it->second.str() + "'");
        return;  // idempotent
    }
    state_.instances[name] = type;
    bump();
}

void KnowledgeBase::remove_instance(const ObjectName& name) {
    std::lock_guard lock(mutex_);
    if (!state_.instances.count(name))
        throw ValidationError("unknown instance '" + name.str() + "'");
    if (domain_.constant_type(name))
        throw ValidationError("'" + name.str() + "' is a domain constant and cannot be removed");
    auto references = [&](const std::vector<ObjectName>& args) {
        for (const auto& a : args)
            if (a == name) return true;
        return false;
    };
    for (const auto& atom : state_.atoms)
        if (references(atom.args))
            throw ValidationError("instance '" + name.str() + "' is referenced by " +
                                  pddl::print_ground_atom(atom));
    for (const auto& [fluent, _] : state_.fluents)
        if (references(fluent.args))
            throw ValidationError("instance '" + name.str() + "' is referenced by " +
                                  pddl::print_ground_fluent(fluent));
    for (const auto& l : state_.goal.literals)
        if (references(pddl::to_ground(l.atom).args))
            throw ValidationError("instance '" + name.str() + "' is referenced by the goal");
    std::function<bool(const NumericExpr&)> expr_refs = [&](const NumericExpr& e) {
        switch (e.kind()) {
            case NumericExpr::Kind::Constant: return false;
            case NumericExpr::Kind::Fluent:
                return references(pddl::to_ground(e.fluent_ref()).args);
            case NumericExpr::Kind::Binary: return expr_refs(e.lhs()) || expr_refs(e.rhs());
        }
        return false;
    };
    for (const auto& cmp : state_.goal.comparisons)
        if (expr_refs(cmp.lhs) || expr_refs(cmp.rhs))
            throw ValidationError("instance '" + name.str() + "' is referenced by the goal");
    state_.instances.erase(name);
    bump();
}

void KnowledgeBase::add_atom(const GroundAtom& atom) {
    std::lock_guard lock(mutex_);
    validate_atom(state_, atom);
    if (state_.atoms.insert(atom).second) bump();
}

bool KnowledgeBase::remove_atom(const GroundAtom& atom) {
    std::lock_guard lock(mutex_);
    const bool removed = state_.atoms.erase(atom) > 0;
    if (removed) bump();
    return removed;
}

void KnowledgeBase::set_fluent(const GroundFluent& fluent, double value) {
    std::lock_guard lock(mutex_);
    validate_fluent(state_, fluent);
    state_.fluents[fluent] = value;
    bump();
}

bool KnowledgeBase::remove_fluent(const GroundFluent& fluent) {
    std::lock_guard lock(mutex_);
    const bool removed = state_.fluents.erase(fluent) > 0;
    if (removed) bump();
    return removed;
}

void KnowledgeBase::set_goal(const Condition& goal) {
    std::lock_guard lock(mutex_);
    validate_condition(state_, goal);
    state_.goal = goal;
    bump();
}

void KnowledgeBase::clear_goal() {
    std::lock_guard lock(mutex_);
    state_.goal = Condition{};
    bump();
}

bool KnowledgeBase::is_goal_satisfied() const {
    std::lock_guard lock(mutex_);
    return evaluate(state_.goal, state_);
}

void KnowledgeBase::apply_effect(const Effect& effect) {
    std::lock_guard lock(mutex_);
    if (!effect.is_ground()) throw ValidationError("effect is not ground");
    for (const auto& a : effect.adds) validate_atom(state_, pddl::to_ground(a));
    for (const auto& d : effect.dels) validate_atom(state_, pddl::to_ground(d));
    for (const auto& n : effect.numeric) validate_fluent(state_, pddl::to_ground(n.target));
    state_ = apply(effect, std::move(state_));
    bump();
}

void KnowledgeBase::load(const pddl::Problem& problem) {
    for (const auto& o : problem.objects) add_instance(o.name, o.type);
    for (const auto& a : problem.init_atoms) add_atom(a);
    for (const auto& [f, v] : problem.init_fluents) set_fluent(f, v);
    if (!problem.goal.empty()) set_goal(problem.goal);
}

KnowledgeState KnowledgeBase::snapshot() const {
    std::lock_guard lock(mutex_);
    return state_;
}

std::uint64_t KnowledgeBase::version() const {
    std::lock_guard lock(mutex_);
    return version_;
}

}  // namespace planexec::kb
