#pragma once

#include <vector>

#include "planexec/model.hpp"

namespace planexec::pddl {

/// Unions types, constants, predicates, functions and actions of several
/// domains into one. Identical re-declarations are idempotent; redefining a
/// name with a different signature or body raises ValidationError naming the
/// offender. The merged domain keeps the first domain's name.
Domain merge_domains(const std::vector<Domain>& domains);

}  // namespace planexec::pddl
