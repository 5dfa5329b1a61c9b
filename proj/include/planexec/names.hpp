#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace planexec::pddl {

/// Checks and canonicalizes a PDDL identifier: letters, digits, `-`, `_`,
/// starting with a letter. Identifiers are case-insensitive; the canonical
/// form is lower case. Throws ParseError on violation.
std::string normalize_name(std::string_view s);

bool is_valid_name(std::string_view s);

/// Strongly typed identifier. The tag keeps object, type, predicate,
/// function and action names from mixing up in signatures.
template <typename Tag>
class Name {
public:
    Name() = default;
    explicit Name(std::string_view s) : value_(normalize_name(s)) {}

    const std::string& str() const { return value_; }
    bool empty() const { return value_.empty(); }

    auto operator<=>(const Name&) const = default;

private:
    std::string value_;
};

struct TypeTag;
struct ObjectTag;
struct PredicateTag;
struct FunctionTag;
struct ActionTag;

using TypeName = Name<TypeTag>;
using ObjectName = Name<ObjectTag>;
using PredicateName = Name<PredicateTag>;
using FunctionName = Name<FunctionTag>;
using ActionName = Name<ActionTag>;

/// A `?variable`. Stored without the leading question mark, lower case.
struct Variable {
    std::string name;

    Variable() = default;
    explicit Variable(std::string_view s);

    auto operator<=>(const Variable&) const = default;
};

}  // namespace planexec::pddl
