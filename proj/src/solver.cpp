#include "planexec/solver.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/stat.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <queue>
#include <set>

#include "planexec/errors.hpp"
#include "planexec/grounding.hpp"
#include "planexec/printer.hpp"

namespace planexec::planner {
namespace {

// ---------------------------------------------------------------------------
// Builtin solver: classical relaxation of the durative model (all conditions
// checked at start, start and end effects applied atomically), greedy
// best-first on the unsatisfied-goal count. Ties break on the candidate
// action's earliest finish time against the prefix schedule, then on the
// lexicographic grounded signature, which keeps plans deterministic and
// spreads independent subgoals across idle objects (robots).
// ---------------------------------------------------------------------------

using Mask = std::vector<std::uint64_t>;

void mask_set(Mask& m, int bit) { m[bit >> 6] |= (std::uint64_t{1} << (bit & 63)); }
bool mask_test(const Mask& m, int bit) {
    return (m[bit >> 6] >> (bit & 63)) & 1;
}

struct CompiledAction {
    int index;
    std::string signature;
    std::vector<int> pre_pos, pre_neg;     // condition atoms (start ∪ overall ∪ end)
    std::vector<int> add_bits, del_bits;   // start+end effects, start first
    std::vector<int> del_start, del_end, add_start, add_end;
    double duration;
    const GroundedAction* full;
};

struct SearchNode {
    Mask state;
    int parent = -1;
    int action = -1;  // CompiledAction index
};

// Schedule approximation used only for tie-breaking: when each atom became
// true and until when it is required by already-scheduled actions. Rebuilt by
// replaying a node's action chain, which keeps search nodes small.
struct Schedule {
    std::map<int, double> avail;
    std::map<int, double> locked;

    double place(const CompiledAction& ca) const {
        double start = 0.0;
        for (int b : ca.pre_pos) {
            auto it = avail.find(b);
            if (it != avail.end()) start = std::max(start, it->second);
        }
        for (int b : ca.del_bits) {
            auto it = locked.find(b);
            if (it != locked.end()) start = std::max(start, it->second);
        }
        return start;
    }

    void commit(const CompiledAction& ca) {
        const double start = place(ca);
        const double finish = start + ca.duration;
        for (int b : ca.del_start) avail.erase(b);
        for (int b : ca.add_start) avail[b] = start;
        for (int b : ca.del_end) avail.erase(b);
        for (int b : ca.add_end) avail[b] = finish;
        for (int b : ca.pre_pos) {
            auto [it, _] = locked.emplace(b, 0.0);
            it->second = std::max(it->second, finish);
        }
    }
};

int count_unsatisfied(const Mask& state, const std::vector<int>& goal_pos,
                      const std::vector<int>& goal_neg) {
    int h = 0;
    for (int b : goal_pos)
        if (!mask_test(state, b)) ++h;
    for (int b : goal_neg)
        if (mask_test(state, b)) ++h;
    return h;
}

void collect_condition_atoms(const pddl::Condition& c, bool& has_numeric,
                             std::vector<pddl::GroundAtom>& pos, std::vector<pddl::GroundAtom>& neg) {
    if (!c.comparisons.empty()) has_numeric = true;
    for (const auto& l : c.literals)
        (l.negated ? neg : pos).push_back(pddl::to_ground(l.atom));
}

std::optional<Plan> solve_builtin(const pddl::Domain& domain, const kb::KnowledgeState& init) {
    // The baseline search is classical: numeric conditions are out of scope.
    for (const auto& a : domain.actions) {
        if (!a.cond_start.comparisons.empty() || !a.cond_overall.comparisons.empty() ||
            !a.cond_end.comparisons.empty())
            throw SolverError("builtin solver does not support numeric conditions (action '" +
                              a.name.str() + "')");
    }
    if (!init.goal.comparisons.empty())
        throw SolverError("builtin solver does not support numeric goals");

    std::vector<GroundedAction> grounded = ground_all(domain, init);

    // Atom interning. Seed with init, goal and every effect/condition atom.
    std::map<pddl::GroundAtom, int> atom_ids;
    auto intern = [&](const pddl::GroundAtom& a) {
        auto [it, inserted] = atom_ids.emplace(a, static_cast<int>(atom_ids.size()));
        return it->second;
    };

    // Static pruning: predicates untouched by any effect are evaluated against
    // the initial state and unsatisfiable groundings dropped.
    std::set<pddl::PredicateName> dynamic_preds;
    for (const auto& g : grounded) {
        for (const auto& e : {g.eff_start, g.eff_end}) {
            for (const auto& a : e.adds) dynamic_preds.insert(a.pred);
            for (const auto& d : e.dels) dynamic_preds.insert(d.pred);
        }
    }

    std::vector<CompiledAction> actions;
    std::vector<GroundedAction> kept;
    kept.reserve(grounded.size());
    for (auto& g : grounded) {
        bool has_numeric = false;
        std::vector<pddl::GroundAtom> pos, neg;
        collect_condition_atoms(g.cond_start, has_numeric, pos, neg);
        collect_condition_atoms(g.cond_overall, has_numeric, pos, neg);
        collect_condition_atoms(g.cond_end, has_numeric, pos, neg);

        bool statically_false = false;
        for (const auto& a : pos)
            if (!dynamic_preds.count(a.pred) && !init.atoms.count(a)) statically_false = true;
        for (const auto& a : neg)
            if (!dynamic_preds.count(a.pred) && init.atoms.count(a)) statically_false = true;
        if (statically_false) continue;
        kept.push_back(std::move(g));
    }
    grounded = std::move(kept);

    for (size_t i = 0; i < grounded.size(); ++i) {
        const auto& g = grounded[i];
        CompiledAction ca;
        ca.signature = grounded_signature(g);
        bool has_numeric = false;
        std::vector<pddl::GroundAtom> pos, neg;
        collect_condition_atoms(g.cond_start, has_numeric, pos, neg);
        collect_condition_atoms(g.cond_overall, has_numeric, pos, neg);
        collect_condition_atoms(g.cond_end, has_numeric, pos, neg);
        for (const auto& a : pos) ca.pre_pos.push_back(intern(a));
        for (const auto& a : neg) ca.pre_neg.push_back(intern(a));
        for (const auto& d : g.eff_start.dels) {
            const int bit = intern(pddl::to_ground(d));
            ca.del_bits.push_back(bit);
            ca.del_start.push_back(bit);
        }
        for (const auto& a : g.eff_start.adds) {
            const int bit = intern(pddl::to_ground(a));
            ca.add_bits.push_back(bit);
            ca.add_start.push_back(bit);
        }
        for (const auto& d : g.eff_end.dels) {
            const int bit = intern(pddl::to_ground(d));
            ca.del_bits.push_back(bit);
            ca.del_end.push_back(bit);
        }
        for (const auto& a : g.eff_end.adds) {
            const int bit = intern(pddl::to_ground(a));
            ca.add_bits.push_back(bit);
            ca.add_end.push_back(bit);
        }
        // Nominal duration for schedule tie-breaking; fluent-valued durations
        // fall back to 1 when unset in the initial state.
        double dur = 1.0;
        try {
            dur = kb::evaluate_expr(g.duration, init);
        } catch (const EvaluationError&) {
        }
        ca.duration = dur > 0 ? dur : 1.0;
        ca.full = &grounded[i];
        actions.push_back(std::move(ca));
    }
    std::vector<int> goal_pos, goal_neg;
    for (const auto& l : init.goal.literals) {
        int bit = intern(pddl::to_ground(l.atom));
        (l.negated ? goal_neg : goal_pos).push_back(bit);
    }
    for (const auto& a : init.atoms) intern(a);

    // Deterministic expansion order.
    std::vector<int> action_order(actions.size());
    for (size_t i = 0; i < actions.size(); ++i) action_order[i] = static_cast<int>(i);
    std::sort(action_order.begin(), action_order.end(),
              [&](int a, int b) { return actions[a].signature < actions[b].signature; });
    for (size_t i = 0; i < actions.size(); ++i) actions[i].index = static_cast<int>(i);

    const size_t words = (atom_ids.size() + 63) / 64;
    Mask init_mask(words, 0);
    for (const auto& a : init.atoms) {
        auto it = atom_ids.find(a);
        if (it != atom_ids.end()) mask_set(init_mask, it->second);
    }

    std::vector<SearchNode> nodes;
    nodes.push_back({init_mask, -1, -1});

    struct OpenEntry {
        int h;
        double finish;           // candidate's scheduled end against its prefix
        const std::string* signature;  // candidate grounded signature
        std::uint64_t seq;
        int node;
        bool operator>(const OpenEntry& o) const {
            if (h != o.h) return h > o.h;
            if (finish != o.finish) return finish > o.finish;
            if (*signature != *o.signature) return *signature > *o.signature;
            return seq > o.seq;
        }
    };
    static const std::string kRootSig;
    std::priority_queue<OpenEntry, std::vector<OpenEntry>, std::greater<>> open;
    std::set<Mask> closed;
    std::uint64_t seq = 0;
    open.push({count_unsatisfied(init_mask, goal_pos, goal_neg), 0.0, &kRootSig, seq++, 0});

    Schedule init_schedule;
    for (const auto& a : init.atoms) init_schedule.avail[atom_ids[a]] = 0.0;

    int expansions = 0;
    int goal_node = -1;
    while (!open.empty()) {
        OpenEntry top = open.top();
        open.pop();
        const int node_id = top.node;
        if (!closed.insert(nodes[node_id].state).second) continue;
        if (top.h == 0) {
            goal_node = node_id;
            break;
        }
        if (++expansions > detail::kNodeBudget)
            throw SolverError(fmt::format("builtin solver exhausted its node budget ({})",
                                          detail::kNodeBudget));

        // Rebuild the prefix schedule by replaying the action chain; nodes
        // themselves stay small.
        Schedule schedule = init_schedule;
        {
            std::vector<int> chain;
            for (int n = node_id; nodes[n].parent >= 0; n = nodes[n].parent)
                chain.push_back(nodes[n].action);
            for (auto it = chain.rbegin(); it != chain.rend(); ++it)
                schedule.commit(actions[*it]);
        }

        for (int ai : action_order) {
            const CompiledAction& ca = actions[ai];
            const Mask& state = nodes[node_id].state;
            bool applicable = true;
            for (int b : ca.pre_pos)
                if (!mask_test(state, b)) {
                    applicable = false;
                    break;
                }
            if (applicable)
                for (int b : ca.pre_neg)
                    if (mask_test(state, b)) {
                        applicable = false;
                        break;
                    }
            if (!applicable) continue;

            Mask succ_state = state;
            for (int b : ca.del_bits) succ_state[b >> 6] &= ~(std::uint64_t{1} << (b & 63));
            for (int b : ca.add_bits) mask_set(succ_state, b);
            if (closed.count(succ_state)) continue;

            const double finish = schedule.place(ca) + ca.duration;
            const int h = count_unsatisfied(succ_state, goal_pos, goal_neg);
            nodes.push_back({std::move(succ_state), node_id, ai});
            open.push({h, finish, &ca.signature, seq++, static_cast<int>(nodes.size()) - 1});
        }
    }

    if (goal_node < 0) return std::nullopt;  // search space exhausted: no plan

    std::vector<int> chosen;
    for (int n = goal_node; nodes[n].parent >= 0; n = nodes[n].parent)
        chosen.push_back(nodes[n].action);
    std::reverse(chosen.begin(), chosen.end());

    // Sequential emission: each item starts one epsilon after its predecessor
    // finishes, matching the cadence external planners emit. Durations come
    // from the live state so fluent-valued durations track numeric effects.
    Plan plan;
    kb::KnowledgeState state = init;
    double t = 0.0;
    for (size_t i = 0; i < chosen.size(); ++i) {
        const GroundedAction& g = *actions[chosen[i]].full;
        PlanItem item;
        item.time = snap_time(t);
        item.action = g.name;
        item.args = g.args;
        item.duration = snap_time(kb::evaluate_expr(g.duration, state));
        if (item.duration <= 0)
            throw SolverError("action " + grounded_signature(g) + " has non-positive duration");
        state = kb::apply(g.eff_start, std::move(state));
        state = kb::apply(g.eff_end, std::move(state));
        t += item.duration + detail::kEpsilon;
        plan.items.push_back(std::move(item));
    }

    ValidationReport check = validate_plan(domain, init, plan);
    if (!check.ok())
        throw SolverError("builtin solver produced an invalid plan: " + check.violation->detail);
    return plan;
}

// ---------------------------------------------------------------------------
// External solver invocation
// ---------------------------------------------------------------------------

std::string substitute(const std::string& tmpl, const std::string& domain_path,
                       const std::string& problem_path, const std::string& output_path) {
    std::string out = tmpl;
    auto replace_all = [&](const std::string& key, const std::string& value) {
        size_t pos = 0;
        while ((pos = out.find(key, pos)) != std::string::npos) {
            out.replace(pos, key.size(), value);
            pos += value.size();
        }
    };
    replace_all("{domain}", domain_path);
    replace_all("{problem}", problem_path);
    replace_all("{output}", output_path);
    return out;
}

std::optional<Plan> solve_external(const pddl::Domain& domain, const kb::KnowledgeState& init,
                                   const SolverSpec& spec) {
    namespace fs = std::filesystem;
    if (spec.executable.empty()) throw SolverError("external solver: no executable configured");
    // PATH-less resolution: the executable must exist as given.
    if (spec.executable.find('/') != std::string::npos && !fs::exists(spec.executable))
        throw SolverError("external solver not found: " + spec.executable);

    char tmpl[] = "/tmp/planexec-solver-XXXXXX";
    char* dir = mkdtemp(tmpl);
    if (!dir) throw SolverError("external solver: cannot create temp dir");
    const std::string domain_path = std::string(dir) + "/domain.pddl";
    const std::string problem_path = std::string(dir) + "/problem.pddl";
    const std::string output_path = std::string(dir) + "/plan.out";

    {
        std::ofstream d(domain_path);
        d << pddl::print_domain(domain);
        pddl::Problem problem;
        problem.name = "generated";
        problem.domain_name = domain.name;
        for (const auto& [obj, type] : init.instances)
            if (!domain.constant_type(obj)) problem.objects.push_back({obj, type});
        problem.init_atoms.assign(init.atoms.begin(), init.atoms.end());
        for (const auto& [f, v] : init.fluents) problem.init_fluents.emplace_back(f, v);
        problem.goal = init.goal;
        std::ofstream p(problem_path);
        p << pddl::print_problem(problem);
    }

    std::vector<std::string> argv_store;
    argv_store.push_back(spec.executable);
    for (const auto& a : spec.args_template)
        argv_store.push_back(substitute(a, domain_path, problem_path, output_path));
    std::vector<char*> argv;
    for (auto& s : argv_store) argv.push_back(s.data());
    argv.push_back(nullptr);

    int pipefd[2];
    if (pipe(pipefd) != 0) throw SolverError("external solver: pipe failed");
    pid_t pid = fork();
    if (pid < 0) throw SolverError("external solver: fork failed");
    if (pid == 0) {
        dup2(pipefd[1], STDOUT_FILENO);
        close(pipefd[0]);
        close(pipefd[1]);
        execvp(argv[0], argv.data());
        _exit(127);
    }
    close(pipefd[1]);

    std::string stdout_text;
    const auto deadline = std::chrono::steady_clock::now() +
                          std::chrono::milliseconds(static_cast<long>(spec.timeout_s * 1000));
    char buf[4096];
    bool timed_out = false;
    while (true) {
        const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                              deadline - std::chrono::steady_clock::now())
                              .count();
        if (left <= 0) {
            timed_out = true;
            break;
        }
        struct pollfd pfd{pipefd[0], POLLIN, 0};
        int pr = poll(&pfd, 1, static_cast<int>(std::min<long>(left, 200)));
        if (pr < 0) break;
        if (pr == 0) continue;
        ssize_t n = read(pipefd[0], buf, sizeof buf);
        if (n <= 0) break;
        stdout_text.append(buf, static_cast<size_t>(n));
    }
    close(pipefd[0]);
    if (timed_out) {
        kill(pid, SIGKILL);
        waitpid(pid, nullptr, 0);
        throw SolverError(fmt::format("external solver timed out after {}s", spec.timeout_s));
    }
    int status = 0;
    waitpid(pid, &status, 0);
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
        if (WIFEXITED(status) && WEXITSTATUS(status) == 127)
            throw SolverError("external solver not found: " + spec.executable);
        throw SolverError(fmt::format("external solver exited with status {}",
                                      WIFEXITED(status) ? WEXITSTATUS(status) : -1));
    }

    std::string plan_text = stdout_text;
    if (spec.read_output_file) {
        std::ifstream in(output_path);
        if (!in) throw SolverError("external solver produced no output file");
        plan_text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    // Tolerate solver chatter: keep lines that look like plan items.
    std::string filtered;
    std::istringstream lines(plan_text);
    std::string line;
    while (std::getline(lines, line)) {
        size_t first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        if (std::isdigit(static_cast<unsigned char>(line[first])) || line[first] == '.')
            filtered += line + "\n";
    }
    if (filtered.empty()) {
        // An external solver may legitimately report unsolvability.
        if (plan_text.find("no plan") != std::string::npos ||
            plan_text.find("unsolvable") != std::string::npos)
            return std::nullopt;
        throw SolverError("external solver output contained no plan lines");
    }
    try {
        return parse_plan_file(filtered, domain);
    } catch (const ParseError& e) {
        throw SolverError(std::string("cannot parse external solver output: ") + e.what());
    }
}

}  // namespace

std::optional<Plan> solve(const pddl::Domain& domain, const kb::KnowledgeState& state,
                          const SolverSpec& solver) {
    if (kb::evaluate(state.goal, state)) return Plan{};  // satisfied: empty plan, not no-plan
    if (solver.kind == SolverSpec::Kind::External) return solve_external(domain, state, solver);
    return solve_builtin(domain, state);
}

}  // namespace planexec::planner
