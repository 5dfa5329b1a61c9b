#include "planexec/merge.hpp"

#include "planexec/errors.hpp"

namespace planexec::pddl {

Domain merge_domains(const std::vector<Domain>& domains) {
    if (domains.empty()) throw ValidationError("merge_domains: no domains given");
    Domain out = domains.front();
    for (size_t i = 1; i < domains.size(); ++i) {
        const Domain& d = domains[i];
        out.requirements.insert(d.requirements.begin(), d.requirements.end());
        for (const auto& t : d.type_order) {
            const TypeName& parent = d.type_parents.at(t);
            auto it = out.type_parents.find(t);
            if (it == out.type_parents.end()) {
                out.type_parents[t] = parent;
                out.type_order.push_back(t);
            } else if (it->second != parent) {
                throw ValidationError("merge conflict: type '" + t.str() +
                                      "' declared with parents '" + it->second.str() +
                                      "' and '" + parent.str() + "'");
            }
        }
        for (const auto& [obj, type] : d.constants) {
            auto existing = out.constant_type(obj);
            if (!existing) {
                out.constants.emplace_back(obj, type);
            } else if (*existing != type) {
                throw ValidationError("merge conflict: constant '" + obj.str() +
                                      "' declared with types '" + existing->str() + "' and '" +
                                      type.str() + "'");
            }
        }
        for (const auto& p : d.predicates) {
            const PredicateDef* existing = out.find_predicate(p.name);
            if (!existing) {
                out.predicates.push_back(p);
            } else if (*existing != p) {
                throw ValidationError("merge conflict: predicate '" + p.name.str() +
                                      "' redefined with a different signature");
            }
        }
        for (const auto& f : d.functions) {
            const FunctionDef* existing = out.find_function(f.name);
            if (!existing) {
                out.functions.push_back(f);
            } else if (*existing != f) {
                throw ValidationError("merge conflict: function '" + f.name.str() +
                                      "' redefined with a different signature");
            }
        }
        for (const auto& a : d.actions) {
            const DurativeAction* existing = out.find_action(a.name);
            if (!existing) {
                out.actions.push_back(a);
            } else if (!(*existing == a)) {
                throw ValidationError("merge conflict: action '" + a.name.str() +
                                      "' redefined with a different signature or body");
            }
        }
    }
    return out;
}

}  // namespace planexec::pddl
