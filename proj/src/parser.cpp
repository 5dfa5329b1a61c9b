#include "planexec/parser.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <map>
#include <set>

#include "planexec/errors.hpp"

namespace planexec::pddl {
namespace {

// ---------------------------------------------------------------------------
// S-expression reader
// ---------------------------------------------------------------------------

struct SExpr {
    // Leaf when text non-empty, list otherwise.
    std::string text;
    std::vector<SExpr> items;
    int line = 0;
    int col = 0;

    bool is_leaf() const { return !text.empty(); }
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    struct Token {
        enum class Kind { LParen, RParen, Symbol, Eof } kind;
        std::string text;
        int line;
        int col;
    };

    Token next() {
        skip_ws_and_comments();
        if (pos_ >= src_.size()) return {Token::Kind::Eof, "", line_, col_};
        char c = src_[pos_];
        if (c == '(') {
            Token t{Token::Kind::LParen, "(", line_, col_};
            advance();
            return t;
        }
        if (c == ')') {
            Token t{Token::Kind::RParen, ")", line_, col_};
            advance();
            return t;
        }
        int sl = line_, sc = col_;
        std::string text;
        while (pos_ < src_.size()) {
            c = src_[pos_];
            if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ';')
                break;
            text.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
            advance();
        }
        return {Token::Kind::Symbol, std::move(text), sl, sc};
    }

private:
    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_ws_and_comments() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == ';') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    std::string_view src_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Reader {
public:
    explicit Reader(std::string_view src) : lexer_(src) { tok_ = lexer_.next(); }

    SExpr read() {
        using K = Lexer::Token::Kind;
        if (tok_.kind == K::Eof) throw ParseError("unexpected end of input", tok_.line, tok_.col);
        if (tok_.kind == K::RParen) throw ParseError("unexpected ')'", tok_.line, tok_.col);
        if (tok_.kind == K::Symbol) {
            SExpr e{tok_.text, {}, tok_.line, tok_.col};
            if (e.text.empty())
                throw ParseError("empty token", tok_.line, tok_.col);
            tok_ = lexer_.next();
            return e;
        }
        SExpr list{"", {}, tok_.line, tok_.col};
        tok_ = lexer_.next();
        while (tok_.kind != K::RParen) {
            if (tok_.kind == K::Eof)
                throw ParseError("missing ')'", list.line, list.col);
            list.items.push_back(read());
        }
        tok_ = lexer_.next();
        return list;
    }

    bool at_eof() const { return tok_.kind == Lexer::Token::Kind::Eof; }

private:
    Lexer lexer_;
    Lexer::Token tok_;
};

[[noreturn]] void fail(const SExpr& at, const std::string& msg) {
    throw ParseError(msg, at.line, at.col);
}

const SExpr& expect_list(const SExpr& e, const char* what) {
    if (e.is_leaf()) fail(e, std::string("expected ") + what + ", got '" + e.text + "'");
    return e;
}

std::string expect_leaf(const SExpr& e, const char* what) {
    if (!e.is_leaf()) fail(e, std::string("expected ") + what);
    return e.text;
}

bool is_number(const std::string& s) {
    if (s.empty()) return false;
    char* end = nullptr;
    std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

double to_number(const SExpr& e) {
    std::string s = expect_leaf(e, "number");
    if (!is_number(s)) fail(e, "expected number, got '" + s + "'");
    return std::strtod(s.c_str(), nullptr);
}

// Parses a typed list like `a b - t c d - u e` into (name, type) pairs.
// Untyped trailing entries default to `object`.
template <typename MakeEntry>
void parse_typed_list(const std::vector<SExpr>& items, size_t begin, MakeEntry&& make) {
    std::vector<const SExpr*> pending;
    for (size_t i = begin; i < items.size(); ++i) {
        const std::string text = expect_leaf(items[i], "name in typed list");
        if (text == "-") {
            if (pending.empty()) fail(items[i], "dangling '-' in typed list");
            if (i + 1 >= items.size()) fail(items[i], "missing type after '-'");
            const SExpr& type_tok = items[++i];
            TypeName type(expect_leaf(type_tok, "type name"));
            for (const SExpr* p : pending) make(*p, type);
            pending.clear();
        } else {
            pending.push_back(&items[i]);
        }
    }
    for (const SExpr* p : pending) make(*p, object_type());
}

std::vector<TypedParam> parse_params(const SExpr& list) {
    std::vector<TypedParam> params;
    std::set<Variable> seen;
    parse_typed_list(expect_list(list, "parameter list").items, 0,
                     [&](const SExpr& tok, const TypeName& type) {
                         if (tok.text.front() != '?')
                             fail(tok, "parameter '" + tok.text + "' must start with '?'");
                         Variable v(tok.text);
                         if (!seen.insert(v).second)
                             fail(tok, "duplicate parameter '?" + v.name + "'");
                         params.push_back({v, type});
                     });
    return params;
}

// ---------------------------------------------------------------------------
// Semantic checking context
// ---------------------------------------------------------------------------

struct Scope {
    const Domain* domain = nullptr;  // set once declarations are read
    // Variables in scope with their types; empty for ground contexts.
    std::map<Variable, TypeName> vars;
    // Known objects (constants and, for problems, declared objects).
    std::map<ObjectName, TypeName> objects;
    bool ground_only = false;

    TypeName term_type(const SExpr& tok, const Term& t) const {
        if (const auto* v = std::get_if<Variable>(&t)) {
            auto it = vars.find(*v);
            if (it == vars.end()) fail(tok, "unbound variable '?" + v->name + "'");
            return it->second;
        }
        const auto& obj = std::get<ObjectName>(t);
        auto it = objects.find(obj);
        if (it == objects.end()) fail(tok, "unknown object '" + obj.str() + "'");
        return it->second;
    }
};

Term parse_term(const SExpr& tok, const Scope& scope) {
    std::string text = expect_leaf(tok, "term");
    if (text.front() == '?') {
        if (scope.ground_only) fail(tok, "variable '" + text + "' not allowed here");
        return Variable(text);
    }
    return ObjectName(text);
}

void check_arity_and_types(const SExpr& at, const std::vector<TypedParam>& params,
                           const std::vector<Term>& args, const std::vector<const SExpr*>& toks,
                           const Scope& scope, const std::string& what) {
    if (args.size() != params.size())
        fail(at, what + ": expected " + std::to_string(params.size()) + " arguments, got " +
                     std::to_string(args.size()));
    for (size_t i = 0; i < args.size(); ++i) {
        TypeName t = scope.term_type(*toks[i], args[i]);
        if (!scope.domain->is_subtype(t, params[i].type))
            fail(*toks[i], what + ": argument " + std::to_string(i + 1) + " has type '" +
                               t.str() + "', expected '" + params[i].type.str() + "'");
    }
}

Atom parse_atom(const SExpr& e, const Scope& scope) {
    const auto& list = expect_list(e, "atom");
    if (list.items.empty()) fail(e, "empty atom");
    PredicateName pred(expect_leaf(list.items[0], "predicate name"));
    const PredicateDef* def = scope.domain->find_predicate(pred);
    if (!def) fail(list.items[0], "undeclared predicate '" + pred.str() + "'");
    Atom atom{pred, {}};
    std::vector<const SExpr*> toks;
    for (size_t i = 1; i < list.items.size(); ++i) {
        atom.args.push_back(parse_term(list.items[i], scope));
        toks.push_back(&list.items[i]);
    }
    check_arity_and_types(e, def->params, atom.args, toks, scope, "predicate '" + pred.str() + "'");
    return atom;
}

FluentRef parse_fluent_ref(const SExpr& e, const Scope& scope) {
    const auto& list = expect_list(e, "fluent");
    if (list.items.empty()) fail(e, "empty fluent");
    FunctionName fn(expect_leaf(list.items[0], "function name"));
    const FunctionDef* def = scope.domain->find_function(fn);
    if (!def) fail(list.items[0], "undeclared function '" + fn.str() + "'");
    FluentRef ref{fn, {}};
    std::vector<const SExpr*> toks;
    for (size_t i = 1; i < list.items.size(); ++i) {
        ref.args.push_back(parse_term(list.items[i], scope));
        toks.push_back(&list.items[i]);
    }
    check_arity_and_types(e, def->params, ref.args, toks, scope, "function '" + fn.str() + "'");
    return ref;
}

NumericExpr parse_numeric_expr(const SExpr& e, const Scope& scope) {
    if (e.is_leaf()) return NumericExpr::constant(to_number(e));
    if (e.items.empty()) fail(e, "empty numeric expression");
    const std::string head = e.items[0].is_leaf() ? e.items[0].text : "";
    ArithOp op;
    if (head == "+") op = ArithOp::Add;
    else if (head == "-") op = ArithOp::Sub;
    else if (head == "*") op = ArithOp::Mul;
    else if (head == "/") op = ArithOp::Div;
    else return NumericExpr::fluent(parse_fluent_ref(e, scope));
    if (e.items.size() != 3) fail(e, "arithmetic operator '" + head + "' takes two operands");
    return NumericExpr::binary(op, parse_numeric_expr(e.items[1], scope),
                               parse_numeric_expr(e.items[2], scope));
}

std::optional<CompareOp> compare_op(const std::string& s) {
    if (s == "<") return CompareOp::Lt;
    if (s == "<=") return CompareOp::Le;
    if (s == "=") return CompareOp::Eq;
    if (s == ">=") return CompareOp::Ge;
    if (s == ">") return CompareOp::Gt;
    return std::nullopt;
}

// Flattens a condition tree (and / not / atom / comparison) into `out`.
void parse_condition_into(const SExpr& e, const Scope& scope, Condition& out) {
    const auto& list = expect_list(e, "condition");
    if (list.items.empty()) return;  // `()` treated as empty conjunction
    if (!list.items[0].is_leaf()) fail(e, "expected condition");
    const std::string& head = list.items[0].text;
    if (head == "and") {
        for (size_t i = 1; i < list.items.size(); ++i)
            parse_condition_into(list.items[i], scope, out);
        return;
    }
    if (head == "not") {
        if (list.items.size() != 2) fail(e, "'not' takes one argument");
        // Negation applies to atoms only (negation normal form).
        out.literals.push_back({parse_atom(list.items[1], scope), true});
        return;
    }
    if (auto op = compare_op(head)) {
        if (list.items.size() != 3) fail(e, "comparison takes two operands");
        out.comparisons.push_back({*op, parse_numeric_expr(list.items[1], scope),
                                   parse_numeric_expr(list.items[2], scope)});
        return;
    }
    out.literals.push_back({parse_atom(e, scope), false});
}

Condition parse_condition(const SExpr& e, const Scope& scope) {
    Condition c;
    parse_condition_into(e, scope, c);
    return c;
}

void parse_effect_into(const SExpr& e, const Scope& scope, Effect& out) {
    const auto& list = expect_list(e, "effect");
    if (list.items.empty()) return;
    if (!list.items[0].is_leaf()) fail(e, "expected effect");
    const std::string& head = list.items[0].text;
    if (head == "and") {
        for (size_t i = 1; i < list.items.size(); ++i) parse_effect_into(list.items[i], scope, out);
        return;
    }
    if (head == "not") {
        if (list.items.size() != 2) fail(e, "'not' takes one argument");
        out.dels.push_back(parse_atom(list.items[1], scope));
        return;
    }
    if (head == "assign" || head == "increase" || head == "decrease") {
        if (list.items.size() != 3) fail(e, "'" + head + "' takes a fluent and an expression");
        NumericOpKind kind = head == "assign"   ? NumericOpKind::Assign
                             : head == "increase" ? NumericOpKind::Increase
                                                  : NumericOpKind::Decrease;
        out.numeric.push_back({kind, parse_fluent_ref(list.items[1], scope),
                               parse_numeric_expr(list.items[2], scope)});
        return;
    }
    out.adds.push_back(parse_atom(e, scope));
}

void check_effect_consistent(const SExpr& at, const Effect& eff, const std::string& where) {
    for (const auto& a : eff.adds)
        for (const auto& d : eff.dels)
            if (a == d)
                fail(at, where + ": atom added and deleted in the same effect set");
}

Duration parse_duration(const SExpr& e, const Scope& scope) {
    const auto& list = expect_list(e, "duration constraint");
    if (list.items.size() != 3 || !list.items[0].is_leaf() || list.items[0].text != "=" ||
        !list.items[1].is_leaf() || list.items[1].text != "?duration")
        fail(e, "duration must have the form (= ?duration <constant | fluent>)");
    const SExpr& val = list.items[2];
    if (val.is_leaf()) {
        double d = to_number(val);
        if (d <= 0) fail(val, "duration must be positive");
        return Duration{NumericExpr::constant(d)};
    }
    return Duration{NumericExpr::fluent(parse_fluent_ref(val, scope))};
}

// :condition body: conjunction of (at start ...) / (over all ...) / (at end ...)
void parse_durative_condition(const SExpr& e, const Scope& scope, DurativeAction& action) {
    const auto& list = expect_list(e, "durative condition");
    if (list.items.empty()) return;
    if (list.items[0].is_leaf() && list.items[0].text == "and") {
        for (size_t i = 1; i < list.items.size(); ++i)
            parse_durative_condition(list.items[i], scope, action);
        return;
    }
    if (list.items.size() == 3 && list.items[0].is_leaf()) {
        const std::string& a = list.items[0].text;
        const std::string b = list.items[1].is_leaf() ? list.items[1].text : "";
        if (a == "at" && b == "start") {
            parse_condition_into(list.items[2], scope, action.cond_start);
            return;
        }
        if (a == "over" && b == "all") {
            parse_condition_into(list.items[2], scope, action.cond_overall);
            return;
        }
        if (a == "at" && b == "end") {
            parse_condition_into(list.items[2], scope, action.cond_end);
            return;
        }
    }
    fail(e, "expected (at start ...), (over all ...) or (at end ...)");
}

void parse_durative_effect(const SExpr& e, const Scope& scope, DurativeAction& action) {
    const auto& list = expect_list(e, "durative effect");
    if (list.items.empty()) return;
    if (list.items[0].is_leaf() && list.items[0].text == "and") {
        for (size_t i = 1; i < list.items.size(); ++i)
            parse_durative_effect(list.items[i], scope, action);
        return;
    }
    if (list.items.size() == 3 && list.items[0].is_leaf() && list.items[0].text == "at") {
        const std::string b = list.items[1].is_leaf() ? list.items[1].text : "";
        if (b == "start") {
            parse_effect_into(list.items[2], scope, action.eff_start);
            return;
        }
        if (b == "end") {
            parse_effect_into(list.items[2], scope, action.eff_end);
            return;
        }
    }
    fail(e, "expected (at start ...) or (at end ...)");
}

}  // namespace

// ---------------------------------------------------------------------------
// parse_domain
// ---------------------------------------------------------------------------

Domain parse_domain(std::string_view text) {
    Reader reader(text);
    const SExpr root = reader.read();
    const auto& top = expect_list(root, "(define ...)");
    if (top.items.size() < 2 || !top.items[0].is_leaf() || top.items[0].text != "define")
        fail(root, "expected (define (domain ...) ...)");
    const auto& head = expect_list(top.items[1], "(domain NAME)");
    if (head.items.size() != 2 || expect_leaf(head.items[0], "keyword") != "domain")
        fail(top.items[1], "expected (domain NAME)");
    Domain domain;
    domain.name = normalize_name(expect_leaf(head.items[1], "domain name"));

    Scope scope;
    scope.domain = &domain;

    for (size_t si = 2; si < top.items.size(); ++si) {
        const auto& sect = expect_list(top.items[si], "domain section");
        if (sect.items.empty() || !sect.items[0].is_leaf())
            fail(top.items[si], "expected domain section");
        const std::string& kw = sect.items[0].text;

        if (kw == ":requirements") {
            for (size_t i = 1; i < sect.items.size(); ++i) {
                const std::string r = expect_leaf(sect.items[i], "requirement");
                auto req = requirement_from_keyword(r);
                if (!req) fail(sect.items[i], "unknown requirement '" + r + "'");
                domain.requirements.insert(*req);
            }
        } else if (kw == ":types") {
            parse_typed_list(sect.items, 1, [&](const SExpr& tok, const TypeName& parent) {
                TypeName child(tok.text);
                if (child == object_type()) return;  // redeclaring the root is a no-op
                auto it = domain.type_parents.find(child);
                if (it != domain.type_parents.end() && it->second != parent)
                    fail(tok, "type '" + child.str() + "' redeclared with a different parent");
                if (it == domain.type_parents.end()) {
                    domain.type_parents[child] = parent;
                    domain.type_order.push_back(child);
                }
                // Parents used before their own declaration become children of `object`.
                if (parent != object_type() && !domain.type_parents.count(parent)) {
                    domain.type_parents[parent] = object_type();
                    domain.type_order.push_back(parent);
                }
            });
            // Cycle check: every chain must terminate at `object`.
            for (const auto& [child, parent] : domain.type_parents) {
                TypeName cur = child;
                size_t steps = 0;
                while (cur != object_type()) {
                    auto it = domain.type_parents.find(cur);
                    if (it == domain.type_parents.end())
                        throw ParseError("type '" + cur.str() + "' has undeclared parent chain");
                    cur = it->second;
                    if (++steps > domain.type_parents.size())
                        throw ParseError("type hierarchy contains a cycle involving '" +
                                         child.str() + "'");
                }
            }
        } else if (kw == ":constants") {
            parse_typed_list(sect.items, 1, [&](const SExpr& tok, const TypeName& type) {
                if (!domain.type_known(type))
                    fail(tok, "constant '" + tok.text + "' has undeclared type '" + type.str() + "'");
                ObjectName obj(tok.text);
                auto existing = domain.constant_type(obj);
                if (existing && *existing != type)
                    fail(tok, "constant '" + obj.str() + "' redeclared with a different type");
                if (!existing) domain.constants.emplace_back(obj, type);
            });
        } else if (kw == ":predicates") {
            for (size_t i = 1; i < sect.items.size(); ++i) {
                const auto& p = expect_list(sect.items[i], "predicate declaration");
                if (p.items.empty()) fail(sect.items[i], "empty predicate declaration");
                PredicateDef def;
                def.name = PredicateName(expect_leaf(p.items[0], "predicate name"));
                std::set<Variable> seen;
                parse_typed_list(p.items, 1, [&](const SExpr& tok, const TypeName& type) {
                    if (tok.text.front() != '?') fail(tok, "predicate parameters must be variables");
                    if (!domain.type_known(type))
                        fail(tok, "parameter type '" + type.str() + "' not declared");
                    Variable v(tok.text);
                    if (!seen.insert(v).second) fail(tok, "duplicate parameter '?" + v.name + "'");
                    def.params.push_back({v, type});
                });
                const PredicateDef* prev = domain.find_predicate(def.name);
                if (prev) {
                    if (*prev != def)
                        fail(sect.items[i], "predicate '" + def.name.str() +
                                                "' redeclared with a different signature");
                } else {
                    domain.predicates.push_back(std::move(def));
                }
            }
        } else if (kw == ":functions") {
            for (size_t i = 1; i < sect.items.size(); ++i) {
                const auto& f = expect_list(sect.items[i], "function declaration");
                if (f.items.empty()) fail(sect.items[i], "empty function declaration");
                FunctionDef def;
                def.name = FunctionName(expect_leaf(f.items[0], "function name"));
                std::set<Variable> seen;
                parse_typed_list(f.items, 1, [&](const SExpr& tok, const TypeName& type) {
                    if (tok.text.front() != '?') fail(tok, "function parameters must be variables");
                    if (!domain.type_known(type))
                        fail(tok, "parameter type '" + type.str() + "' not declared");
                    Variable v(tok.text);
                    if (!seen.insert(v).second) fail(tok, "duplicate parameter '?" + v.name + "'");
                    def.params.push_back({v, type});
                });
                const FunctionDef* prev = domain.find_function(def.name);
                if (prev) {
                    if (*prev != def)
                        fail(sect.items[i], "function '" + def.name.str() +
                                                "' redeclared with a different signature");
                } else {
                    domain.functions.push_back(std::move(def));
                }
            }
        } else if (kw == ":durative-action") {
            if (sect.items.size() < 2) fail(top.items[si], "missing action name");
            DurativeAction action;
            action.name = ActionName(expect_leaf(sect.items[1], "action name"));
            if (domain.find_action(action.name))
                fail(sect.items[1], "duplicate action '" + action.name.str() + "'");

            // Read :keyword value pairs.
            std::map<std::string, const SExpr*> fields;
            for (size_t i = 2; i + 1 < sect.items.size(); i += 2) {
                const std::string key = expect_leaf(sect.items[i], "action field keyword");
                fields[key] = &sect.items[i + 1];
            }
            auto* params_e = fields.count(":parameters") ? fields[":parameters"] : nullptr;
            if (!params_e) fail(top.items[si], "action missing :parameters");
            action.params = parse_params(*params_e);
            for (const auto& p : action.params)
                if (!domain.type_known(p.type))
                    fail(*params_e, "parameter type '" + p.type.str() + "' not declared");

            Scope action_scope = scope;
            for (const auto& p : action.params) action_scope.vars[p.var] = p.type;
            for (const auto& [obj, type] : domain.constants) action_scope.objects[obj] = type;

            if (!fields.count(":duration")) fail(top.items[si], "action missing :duration");
            action.duration = parse_duration(*fields[":duration"], action_scope);
            if (fields.count(":condition"))
                parse_durative_condition(*fields[":condition"], action_scope, action);
            if (fields.count(":effect"))
                parse_durative_effect(*fields[":effect"], action_scope, action);

            check_effect_consistent(sect, action.eff_start,
                                    "action '" + action.name.str() + "' at-start effect");
            check_effect_consistent(sect, action.eff_end,
                                    "action '" + action.name.str() + "' at-end effect");

            domain.actions.push_back(std::move(action));
        } else {
            fail(top.items[si], "unsupported domain section '" + kw + "'");
        }
    }
    return domain;
}

// ---------------------------------------------------------------------------
// parse_problem
// ---------------------------------------------------------------------------

Problem parse_problem(std::string_view text, const Domain& domain) {
    Reader reader(text);
    const SExpr root = reader.read();
    const auto& top = expect_list(root, "(define ...)");
    if (top.items.size() < 2 || !top.items[0].is_leaf() || top.items[0].text != "define")
        fail(root, "expected (define (problem ...) ...)");
    const auto& head = expect_list(top.items[1], "(problem NAME)");
    if (head.items.size() != 2 || expect_leaf(head.items[0], "keyword") != "problem")
        fail(top.items[1], "expected (problem NAME)");

    Problem problem;
    problem.name = normalize_name(expect_leaf(head.items[1], "problem name"));

    Scope scope;
    scope.domain = &domain;
    scope.ground_only = true;
    for (const auto& [obj, type] : domain.constants) scope.objects[obj] = type;

    for (size_t si = 2; si < top.items.size(); ++si) {
        const auto& sect = expect_list(top.items[si], "problem section");
        if (sect.items.empty() || !sect.items[0].is_leaf())
            fail(top.items[si], "expected problem section");
        const std::string& kw = sect.items[0].text;

        if (kw == ":domain") {
            if (sect.items.size() != 2) fail(top.items[si], ":domain takes one name");
            problem.domain_name = normalize_name(expect_leaf(sect.items[1], "domain name"));
            if (problem.domain_name != domain.name)
                fail(sect.items[1], "problem references domain '" + problem.domain_name +
                                        "', loaded domain is '" + domain.name + "'");
        } else if (kw == ":objects") {
            parse_typed_list(sect.items, 1, [&](const SExpr& tok, const TypeName& type) {
                if (!domain.type_known(type))
                    fail(tok, "object '" + tok.text + "' has unknown type '" + type.str() + "'");
                ObjectName obj(tok.text);
                auto it = scope.objects.find(obj);
                if (it != scope.objects.end()) {
                    if (it->second != type)
                        fail(tok, "object '" + obj.str() + "' redeclared with a different type");
                    return;
                }
                scope.objects[obj] = type;
                problem.objects.push_back({obj, type});
            });
        } else if (kw == ":init") {
            for (size_t i = 1; i < sect.items.size(); ++i) {
                const auto& entry = expect_list(sect.items[i], "init entry");
                if (!entry.items.empty() && entry.items[0].is_leaf() && entry.items[0].text == "=") {
                    if (entry.items.size() != 3) fail(sect.items[i], "numeric init takes (= (f ...) v)");
                    FluentRef ref = parse_fluent_ref(entry.items[1], scope);
                    problem.init_fluents.emplace_back(to_ground(ref), to_number(entry.items[2]));
                } else {
                    problem.init_atoms.push_back(to_ground(parse_atom(sect.items[i], scope)));
                }
            }
        } else if (kw == ":goal") {
            if (sect.items.size() != 2) fail(top.items[si], ":goal takes one condition");
            problem.goal = parse_condition(sect.items[1], scope);
        } else {
            fail(top.items[si], "unsupported problem section '" + kw + "'");
        }
    }
    return problem;
}

// ---------------------------------------------------------------------------
// Fragment parsers (terminal)
// ---------------------------------------------------------------------------

Condition parse_condition_text(std::string_view text) {
    Reader reader(text);
    const SExpr e = reader.read();
    // The shell validates against the knowledge base afterwards; here a schema-free
    // scope accepts any predicate/function names and resolves them later.
    // A permissive domain is synthesized from the fragment itself.
    // Simplest correct route: parse structurally without a domain.
    Condition out;
    struct Walk {
        static void condition(const SExpr& e, Condition& out) {
            if (e.is_leaf()) fail(e, "expected condition");
            if (e.items.empty()) return;
            if (!e.items[0].is_leaf()) fail(e, "expected condition");
            const std::string& head = e.items[0].text;
            if (head == "and") {
                for (size_t i = 1; i < e.items.size(); ++i) condition(e.items[i], out);
                return;
            }
            if (head == "not") {
                if (e.items.size() != 2) fail(e, "'not' takes one argument");
                out.literals.push_back({atom(e.items[1]), true});
                return;
            }
            if (auto op = compare_op(head)) {
                if (e.items.size() != 3) fail(e, "comparison takes two operands");
                out.comparisons.push_back({*op, expr(e.items[1]), expr(e.items[2])});
                return;
            }
            out.literals.push_back({atom(e), false});
        }
        static Atom atom(const SExpr& e) {
            if (e.is_leaf() || e.items.empty()) fail(e, "expected atom");
            Atom a{PredicateName(expect_leaf(e.items[0], "predicate name")), {}};
            for (size_t i = 1; i < e.items.size(); ++i) a.args.push_back(term(e.items[i]));
            return a;
        }
        static Term term(const SExpr& e) {
            std::string t = expect_leaf(e, "term");
            if (t.front() == '?') return Variable(t);
            return ObjectName(t);
        }
        static NumericExpr expr(const SExpr& e) {
            if (e.is_leaf()) return NumericExpr::constant(to_number(e));
            if (e.items.empty()) fail(e, "empty expression");
            const std::string head = e.items[0].is_leaf() ? e.items[0].text : "";
            ArithOp op;
            if (head == "+") op = ArithOp::Add;
            else if (head == "-") op = ArithOp::Sub;
            else if (head == "*") op = ArithOp::Mul;
            else if (head == "/") op = ArithOp::Div;
            else {
                FluentRef ref{FunctionName(expect_leaf(e.items[0], "function name")), {}};
                for (size_t i = 1; i < e.items.size(); ++i) ref.args.push_back(term(e.items[i]));
                return NumericExpr::fluent(ref);
            }
            if (e.items.size() != 3) fail(e, "arithmetic operator takes two operands");
            return NumericExpr::binary(op, expr(e.items[1]), expr(e.items[2]));
        }
    };
    Walk::condition(e, out);
    return out;
}

GroundAtom parse_ground_atom_text(std::string_view text) {
    Reader reader(text);
    const SExpr e = reader.read();
    if (e.is_leaf() || e.items.empty()) fail(e, "expected (predicate args...)");
    GroundAtom g{PredicateName(expect_leaf(e.items[0], "predicate name")), {}};
    for (size_t i = 1; i < e.items.size(); ++i)
        g.args.push_back(ObjectName(expect_leaf(e.items[i], "object name")));
    return g;
}

std::pair<GroundFluent, double> parse_ground_fluent_text(std::string_view text,
                                                         bool value_required) {
    Reader reader(text);
    const SExpr e = reader.read();
    const SExpr* ref = &e;
    double value = 0.0;
    bool has_value = false;
    if (!e.is_leaf() && !e.items.empty() && e.items[0].is_leaf() && e.items[0].text == "=") {
        if (e.items.size() != 3) fail(e, "expected (= (function args...) value)");
        ref = &e.items[1];
        value = to_number(e.items[2]);
        has_value = true;
    }
    if (value_required && !has_value) fail(e, "expected (= (function args...) value)");
    if (ref->is_leaf() || ref->items.empty()) fail(*ref, "expected (function args...)");
    GroundFluent g{FunctionName(expect_leaf(ref->items[0], "function name")), {}};
    for (size_t i = 1; i < ref->items.size(); ++i)
        g.args.push_back(ObjectName(expect_leaf(ref->items[i], "object name")));
    return {g, value};
}

}  // namespace planexec::pddl
