#include "planexec/model.hpp"

#include <algorithm>
#include <cctype>

#include "planexec/errors.hpp"

namespace planexec::pddl {

bool is_valid_name(std::string_view s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s.front()))) return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '-' || c == '_';
    });
}

std::string normalize_name(std::string_view s) {
    if (!is_valid_name(s)) {
        throw ParseError("invalid identifier '" + std::string(s) +
                         "' (letters, digits, '-', '_'; must start with a letter)");
    }
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

Variable::Variable(std::string_view s) {
    if (!s.empty() && s.front() == '?') s.remove_prefix(1);
    name = normalize_name(s);
}

bool is_object(const Term& t) { return std::holds_alternative<ObjectName>(t); }

const ObjectName& object_of(const Term& t) {
    if (const auto* obj = std::get_if<ObjectName>(&t)) return *obj;
    throw ValidationError("term '?" + std::get<Variable>(t).name + "' is not ground");
}

bool Atom::is_ground() const {
    return std::all_of(args.begin(), args.end(), is_object);
}

bool FluentRef::is_ground() const {
    return std::all_of(args.begin(), args.end(), is_object);
}

GroundAtom to_ground(const Atom& a) {
    GroundAtom g{a.pred, {}};
    g.args.reserve(a.args.size());
    for (const auto& t : a.args) g.args.push_back(object_of(t));
    return g;
}

Atom to_atom(const GroundAtom& g) {
    Atom a{g.pred, {}};
    a.args.reserve(g.args.size());
    for (const auto& o : g.args) a.args.emplace_back(o);
    return a;
}

GroundFluent to_ground(const FluentRef& f) {
    GroundFluent g{f.fn, {}};
    g.args.reserve(f.args.size());
    for (const auto& t : f.args) g.args.push_back(object_of(t));
    return g;
}

FluentRef to_fluent_ref(const GroundFluent& g) {
    FluentRef f{g.fn, {}};
    f.args.reserve(g.args.size());
    for (const auto& o : g.args) f.args.emplace_back(o);
    return f;
}

struct NumericExpr::Node {
    Kind kind;
    double value = 0.0;
    FluentRef fluent;
    ArithOp op = ArithOp::Add;
    std::shared_ptr<const Node> lhs, rhs;
};

NumericExpr::NumericExpr() : node_(std::make_shared<Node>(Node{Kind::Constant, 0.0, {}, ArithOp::Add, nullptr, nullptr})) {}

NumericExpr NumericExpr::constant(double v) {
    return NumericExpr(std::make_shared<Node>(Node{Kind::Constant, v, {}, ArithOp::Add, nullptr, nullptr}));
}

NumericExpr NumericExpr::fluent(FluentRef ref) {
    return NumericExpr(std::make_shared<Node>(Node{Kind::Fluent, 0.0, std::move(ref), ArithOp::Add, nullptr, nullptr}));
}

NumericExpr NumericExpr::binary(ArithOp op, NumericExpr lhs, NumericExpr rhs) {
    return NumericExpr(std::make_shared<Node>(Node{Kind::Binary, 0.0, {}, op, lhs.node_, rhs.node_}));
}

NumericExpr::Kind NumericExpr::kind() const { return node_->kind; }
double NumericExpr::value() const { return node_->value; }
const FluentRef& NumericExpr::fluent_ref() const { return node_->fluent; }
ArithOp NumericExpr::op() const { return node_->op; }

NumericExpr NumericExpr::lhs() const { return NumericExpr(node_->lhs); }
NumericExpr NumericExpr::rhs() const { return NumericExpr(node_->rhs); }

bool NumericExpr::is_ground() const {
    switch (node_->kind) {
        case Kind::Constant: return true;
        case Kind::Fluent: return node_->fluent.is_ground();
        case Kind::Binary:
            return NumericExpr(node_->lhs).is_ground() && NumericExpr(node_->rhs).is_ground();
    }
    return false;
}

bool NumericExpr::operator==(const NumericExpr& other) const {
    const Node& a = *node_;
    const Node& b = *other.node_;
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Kind::Constant: return a.value == b.value;
        case Kind::Fluent: return a.fluent == b.fluent;
        case Kind::Binary:
            return a.op == b.op && NumericExpr(a.lhs) == NumericExpr(b.lhs) &&
                   NumericExpr(a.rhs) == NumericExpr(b.rhs);
    }
    return false;
}

bool Condition::is_ground() const {
    for (const auto& l : literals)
        if (!l.atom.is_ground()) return false;
    for (const auto& c : comparisons)
        if (!c.lhs.is_ground() || !c.rhs.is_ground()) return false;
    return true;
}

bool Effect::is_ground() const {
    for (const auto& a : adds)
        if (!a.is_ground()) return false;
    for (const auto& d : dels)
        if (!d.is_ground()) return false;
    for (const auto& n : numeric)
        if (!n.target.is_ground() || !n.value.is_ground()) return false;
    return true;
}

std::string requirement_keyword(Requirement r) {
    switch (r) {
        case Requirement::Strips: return ":strips";
        case Requirement::Typing: return ":typing";
        case Requirement::DurativeActions: return ":durative-actions";
        case Requirement::Fluents: return ":fluents";
        case Requirement::NegativePreconditions: return ":negative-preconditions";
    }
    return "";
}

std::optional<Requirement> requirement_from_keyword(std::string_view kw) {
    if (kw == ":strips") return Requirement::Strips;
    if (kw == ":typing") return Requirement::Typing;
    if (kw == ":durative-actions") return Requirement::DurativeActions;
    if (kw == ":fluents" || kw == ":numeric-fluents") return Requirement::Fluents;
    if (kw == ":negative-preconditions") return Requirement::NegativePreconditions;
    return std::nullopt;
}

const TypeName& object_type() {
    static const TypeName t("object");
    return t;
}

bool Domain::type_known(const TypeName& t) const {
    return t == object_type() || type_parents.count(t) > 0;
}

bool Domain::is_subtype(const TypeName& t, const TypeName& ancestor) const {
    TypeName cur = t;
    while (true) {
        if (cur == ancestor) return true;
        if (cur == object_type()) return false;
        auto it = type_parents.find(cur);
        if (it == type_parents.end()) return false;
        cur = it->second;
    }
}

const PredicateDef* Domain::find_predicate(const PredicateName& n) const {
    for (const auto& p : predicates)
        if (p.name == n) return &p;
    return nullptr;
}

const FunctionDef* Domain::find_function(const FunctionName& n) const {
    for (const auto& f : functions)
        if (f.name == n) return &f;
    return nullptr;
}

const DurativeAction* Domain::find_action(const ActionName& n) const {
    for (const auto& a : actions)
        if (a.name == n) return &a;
    return nullptr;
}

std::optional<TypeName> Domain::constant_type(const ObjectName& n) const {
    for (const auto& [obj, type] : constants)
        if (obj == n) return type;
    return std::nullopt;
}

}  // namespace planexec::pddl
