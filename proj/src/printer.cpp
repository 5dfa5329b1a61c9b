#include "planexec/printer.hpp"

#include <fmt/format.h>

#include <sstream>

namespace planexec::pddl {
namespace {

std::string print_term(const Term& t) {
    if (const auto* v = std::get_if<Variable>(&t)) return "?" + v->name;
    return std::get<ObjectName>(t).str();
}

std::string print_params(const std::vector<TypedParam>& params) {
    std::string out;
    for (const auto& p : params)
        out += fmt::format(" ?{} - {}", p.var.name, p.type.str());
    return out;
}

std::string print_fluent_ref(const FluentRef& f) {
    std::string out = "(" + f.fn.str();
    for (const auto& t : f.args) out += " " + print_term(t);
    return out + ")";
}

const char* compare_op_text(CompareOp op) {
    switch (op) {
        case CompareOp::Lt: return "<";
        case CompareOp::Le: return "<=";
        case CompareOp::Eq: return "=";
        case CompareOp::Ge: return ">=";
        case CompareOp::Gt: return ">";
    }
    return "?";
}

const char* arith_op_text(ArithOp op) {
    switch (op) {
        case ArithOp::Add: return "+";
        case ArithOp::Sub: return "-";
        case ArithOp::Mul: return "*";
        case ArithOp::Div: return "/";
    }
    return "?";
}

std::string print_literal(const Literal& l) {
    if (l.negated) return "(not " + print_atom(l.atom) + ")";
    return print_atom(l.atom);
}

std::string print_comparison(const Comparison& c) {
    return fmt::format("({} {} {})", compare_op_text(c.op), print_numeric_expr(c.lhs),
                       print_numeric_expr(c.rhs));
}

const char* numeric_op_text(NumericOpKind k) {
    switch (k) {
        case NumericOpKind::Assign: return "assign";
        case NumericOpKind::Increase: return "increase";
        case NumericOpKind::Decrease: return "decrease";
    }
    return "?";
}

// Anchored clause list for a condition, e.g. "(at start (p ?x))".
void append_anchored_condition(std::string& out, const char* anchor, const Condition& c) {
    for (const auto& l : c.literals)
        out += fmt::format("\n      ({} {})", anchor, print_literal(l));
    for (const auto& cmp : c.comparisons)
        out += fmt::format("\n      ({} {})", anchor, print_comparison(cmp));
}

void append_anchored_effect(std::string& out, const char* anchor, const Effect& e) {
    for (const auto& d : e.dels)
        out += fmt::format("\n      ({} (not {}))", anchor, print_atom(d));
    for (const auto& a : e.adds)
        out += fmt::format("\n      ({} {})", anchor, print_atom(a));
    for (const auto& n : e.numeric)
        out += fmt::format("\n      ({} ({} {} {}))", anchor, numeric_op_text(n.kind),
                           print_fluent_ref(n.target), print_numeric_expr(n.value));
}

}  // namespace

std::string format_number(double v) { return fmt::format("{}", v); }

std::string print_atom(const Atom& a) {
    std::string out = "(" + a.pred.str();
    for (const auto& t : a.args) out += " " + print_term(t);
    return out + ")";
}

std::string print_ground_atom(const GroundAtom& a) { return print_atom(to_atom(a)); }

std::string print_ground_fluent(const GroundFluent& f) {
    return print_fluent_ref(to_fluent_ref(f));
}

std::string print_numeric_expr(const NumericExpr& e) {
    switch (e.kind()) {
        case NumericExpr::Kind::Constant: return format_number(e.value());
        case NumericExpr::Kind::Fluent: return print_fluent_ref(e.fluent_ref());
        case NumericExpr::Kind::Binary:
            return fmt::format("({} {} {})", arith_op_text(e.op()), print_numeric_expr(e.lhs()),
                               print_numeric_expr(e.rhs()));
    }
    return "0";
}

std::string print_condition(const Condition& c) {
    std::string out = "(and";
    for (const auto& l : c.literals) out += " " + print_literal(l);
    for (const auto& cmp : c.comparisons) out += " " + print_comparison(cmp);
    return out + ")";
}

std::string print_effect_clause(const Effect& e) {
    std::string out = "(and";
    for (const auto& d : e.dels) out += " (not " + print_atom(d) + ")";
    for (const auto& a : e.adds) out += " " + print_atom(a);
    for (const auto& n : e.numeric)
        out += fmt::format(" ({} {} {})", numeric_op_text(n.kind), print_fluent_ref(n.target),
                           print_numeric_expr(n.value));
    return out + ")";
}

std::string print_predicate_def(const PredicateDef& p) {
    return "(" + p.name.str() + print_params(p.params) + ")";
}

std::string print_function_def(const FunctionDef& f) {
    return "(" + f.name.str() + print_params(f.params) + ")";
}

std::string print_action(const DurativeAction& a) {
    std::string out = fmt::format("  (:durative-action {}\n", a.name.str());
    std::string params = print_params(a.params);
    if (!params.empty()) params.erase(0, 1);  // drop leading space
    out += "    :parameters (" + params + ")\n";
    out += "    :duration (= ?duration " + print_numeric_expr(a.duration.expr) + ")\n";
    out += "    :condition (and";
    append_anchored_condition(out, "at start", a.cond_start);
    append_anchored_condition(out, "over all", a.cond_overall);
    append_anchored_condition(out, "at end", a.cond_end);
    out += ")\n";
    out += "    :effect (and";
    append_anchored_effect(out, "at start", a.eff_start);
    append_anchored_effect(out, "at end", a.eff_end);
    out += "))";
    return out;
}

std::string print_domain(const Domain& d) {
    std::ostringstream out;
    out << "(define (domain " << d.name << ")\n";
    if (!d.requirements.empty()) {
        out << "  (:requirements";
        for (const auto& r : d.requirements) out << " " << requirement_keyword(r);
        out << ")\n";
    }
    if (!d.type_order.empty()) {
        out << "  (:types";
        for (const auto& t : d.type_order)
            out << "\n    " << t.str() << " - " << d.type_parents.at(t).str();
        out << ")\n";
    }
    if (!d.constants.empty()) {
        out << "  (:constants";
        for (const auto& [obj, type] : d.constants)
            out << "\n    " << obj.str() << " - " << type.str();
        out << ")\n";
    }
    if (!d.predicates.empty()) {
        out << "  (:predicates";
        for (const auto& p : d.predicates) out << "\n    " << print_predicate_def(p);
        out << ")\n";
    }
    if (!d.functions.empty()) {
        out << "  (:functions";
        for (const auto& f : d.functions) out << "\n    " << print_function_def(f);
        out << ")\n";
    }
    for (const auto& a : d.actions) out << print_action(a) << "\n";
    out << ")\n";
    return out.str();
}

std::string print_problem(const Problem& p) {
    std::ostringstream out;
    out << "(define (problem " << (p.name.empty() ? "p" : p.name) << ")\n";
    out << "  (:domain " << p.domain_name << ")\n";
    out << "  (:objects";
    for (const auto& o : p.objects) out << "\n    " << o.name.str() << " - " << o.type.str();
    out << ")\n";
    out << "  (:init";
    for (const auto& a : p.init_atoms) out << "\n    " << print_ground_atom(a);
    for (const auto& [f, v] : p.init_fluents)
        out << "\n    (= " << print_ground_fluent(f) << " " << format_number(v) << ")";
    out << ")\n";
    out << "  (:goal " << print_condition(p.goal) << ")\n";
    out << ")\n";
    return out.str();
}

}  // namespace planexec::pddl
