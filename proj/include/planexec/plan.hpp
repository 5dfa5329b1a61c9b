#pragma once

#include <optional>
#include <string>
#include <vector>

#include "planexec/model.hpp"

namespace planexec::planner {

using pddl::ActionName;
using pddl::ObjectName;

struct PlanItem {
    double time = 0.0;      // start timestamp, seconds
    ActionName action;
    std::vector<ObjectName> args;
    double duration = 0.0;  // positive

    bool operator==(const PlanItem&) const = default;
};

/// Timestamped grounded actions, sorted by time (ties allowed).
struct Plan {
    std::vector<PlanItem> items;

    bool empty() const { return items.empty(); }
    size_t size() const { return items.size(); }

    bool operator==(const Plan&) const = default;
};

struct SolverSpec {
    enum class Kind { Builtin, External };
    Kind kind = Kind::Builtin;

    // External solver contract: the executable is invoked with the domain and
    // problem file paths substituted into the argument template; the plan is
    // read back from stdout or from {output}.
    std::string executable;
    std::vector<std::string> args_template{"{domain}", "{problem}"};  // {domain} {problem} {output}
    bool read_output_file = false;
    double timeout_s = 15.0;

    static SolverSpec builtin() { return {}; }
};

/// Parses a plan in either dialect:
///   (a)  `<time>\t(<action> <args...>)`
///   (b)  `<time>: (<action> <args...>)  [<duration>]`
/// Items missing a bracketed duration get one inferred: the gap to the next
/// strictly greater timestamp; the final timestamp group uses the plan's
/// modal gap. Actions are validated against the domain.
Plan parse_plan_file(std::string_view text, const pddl::Domain& domain);

/// Prints dialect (b), three decimals: `0.000: (move rb1 a b)  [5.000]`.
std::string print_plan(const Plan& plan);

/// Quantizes a timeline value to a microsecond grid. Plan files carry
/// millisecond-granular stamps; snapping sums keeps `start + duration` of one
/// item exactly comparable with the stamp of the next.
double snap_time(double t);

}  // namespace planexec::planner
