// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Each criterion pins its thresholds and runtime budget.

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "../common/graph_oracle.hpp"
#include "planexec/auction_machines.hpp"
#include "planexec/auction_runtime.hpp"
#include "planexec/executor.hpp"
#include "planexec/fixtures.hpp"
#include "planexec/parser.hpp"
#include "planexec/printer.hpp"
#include "planexec/sim.hpp"
#include "planexec/solver.hpp"
#include "planexec/terminal.hpp"

using namespace planexec;
using namespace planexec::pddl;

namespace {

struct CriterionFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define EXPECT(cond)                                                                   \
    do {                                                                               \
        if (!(cond)) throw CriterionFailure("expectation failed: " #cond);             \
    } while (0)

#define EXPECT_MSG(cond, ...)                                                          \
    do {                                                                               \
        if (!(cond))                                                                   \
            throw CriterionFailure(fmt::format("expectation failed: " #cond " ({})",   \
                                               fmt::format(__VA_ARGS__)));             \
    } while (0)

// ---------------------------------------------------------------------------
// 1. Demo-plan pipeline: 21-line plan -> graph -> 3 roots, converging
//    assembles.
// ---------------------------------------------------------------------------
void criterion_1() {
    const Domain domain = parse_domain(fixtures::assembly_domain_pddl());
    kb::KnowledgeBase base(domain);
    base.load(parse_problem(fixtures::assembly_problem_pddl(), domain));
    const planner::Plan plan = planner::parse_plan_file(fixtures::assembly_plan_text(), domain);
    EXPECT(plan.size() == 21);

    const graph::PlanGraph g = graph::build_graph(plan, domain, base.snapshot());
    const auto r = graph::roots(g);
    EXPECT_MSG(r.size() == 3, "roots = {}", r.size());
    for (int idx : r) {
        EXPECT(g.nodes[static_cast<size_t>(idx)].t_start == 0.0);
        EXPECT(g.nodes[static_cast<size_t>(idx)].item.action.str() == "move");
    }
    int assembles = 0;
    for (const auto& node : g.nodes) {
        if (node.item.action.str() != "assemble") continue;
        ++assembles;
        EXPECT_MSG(g.in_degree(node.index) >= 3, "assemble node {} in-degree {}", node.index,
                   g.in_degree(node.index));
    }
    EXPECT(assembles == 3);
}

// ---------------------------------------------------------------------------
// 2. Establisher edges equal the brute-force oracle on 200 random solver
//    plans of <= 8 actions.
// ---------------------------------------------------------------------------
void criterion_2() {
    static const Domain domain = parse_domain(fixtures::cooking_domain_pddl());
    std::mt19937_64 rng(202);
    std::uniform_int_distribution<int> robots(1, 2), pick(0, 2), coin(0, 1);
    int checked = 0;
    std::uint64_t attempt = 0;
    while (checked < 200) {
        ++attempt;
        EXPECT_MSG(attempt < 4000, "generator stalled after {} plans", checked);
        kb::KnowledgeBase base(domain);
        base.load(parse_problem(fixtures::cooking_problem_pddl(robots(rng)), domain));
        if (coin(rng))
            base.add_atom({PredicateName("ingredient_ready"),
                           {ObjectName("pasta"), ObjectName("kitchen")}});
        Condition goal;
        std::set<std::string> dishes;
        dishes.insert(fixtures::cooking_dishes()[static_cast<size_t>(pick(rng))]);
        if (coin(rng)) dishes.insert(fixtures::cooking_dishes()[static_cast<size_t>(pick(rng))]);
        for (const auto& d : dishes)
            goal.literals.push_back(
                {Atom{PredicateName("dish_prepared"), {ObjectName(d)}}, false});
        base.set_goal(goal);

        const auto init = base.snapshot();
        const auto plan = planner::solve(domain, init);
        if (!plan || plan->empty() || plan->size() > 8) continue;
        const auto g = graph::build_graph(*plan, domain, init);
        EXPECT_MSG(
            testing::establisher_edges(g) == testing::establisher_oracle(*plan, domain, init),
            "edge mismatch on plan #{}", checked);
        ++checked;
    }
}

// ---------------------------------------------------------------------------
// 3. BT parallel optimality: virtual-time makespan equals the longest path
//    (unit durations) within two ticks, over 100 random DAG plans.
// ---------------------------------------------------------------------------
void criterion_3() {
    std::mt19937_64 rng(303);
    std::uniform_int_distribution<int> n_nodes(2, 10);
    std::uniform_int_distribution<int> percent(0, 99);

    for (int round = 0; round < 100; ++round) {
        const int n = n_nodes(rng);
        std::vector<std::pair<int, int>> dag_edges;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (percent(rng) < 30) dag_edges.emplace_back(i, j);

        // Synthesize a domain realizing the DAG: one zero-arity predicate per
        // edge, one action per node requiring its in-edges and producing its
        // out-edges.
        Domain domain;
        domain.name = "dag";
        domain.requirements = {Requirement::DurativeActions};
        for (const auto& [i, j] : dag_edges) {
            PredicateDef def;
            def.name = PredicateName(fmt::format("e_{}_{}", i, j));
            domain.predicates.push_back(def);
        }
        for (int i = 0; i < n; ++i) {
            DurativeAction a;
            a.name = ActionName(fmt::format("a{}", i));
            a.duration = Duration{NumericExpr::constant(1.0)};
            for (const auto& [u, v] : dag_edges) {
                if (v == i)
                    a.cond_start.literals.push_back(
                        {Atom{PredicateName(fmt::format("e_{}_{}", u, v)), {}}, false});
                if (u == i)
                    a.eff_end.adds.push_back({PredicateName(fmt::format("e_{}_{}", u, v)), {}});
            }
            domain.actions.push_back(a);
        }

        planner::Plan plan;
        double t = 0;
        for (int i = 0; i < n; ++i) {
            planner::PlanItem item;
            item.time = planner::snap_time(t);
            item.action = ActionName(fmt::format("a{}", i));
            item.duration = 1.0;
            plan.items.push_back(item);
            t += 1.0 + 0.001;
        }

        // Longest path in actions (each node weighs one unit).
        std::vector<int> depth(static_cast<size_t>(n), 1);
        for (int i = 0; i < n; ++i)
            for (const auto& [u, v] : dag_edges)
                if (v == i)
                    depth[static_cast<size_t>(i)] = std::max(
                        depth[static_cast<size_t>(i)], depth[static_cast<size_t>(u)] + 1);
        const int longest = *std::max_element(depth.begin(), depth.end());

        VirtualClock clock;
        auction::InProcessHub hub(clock);
        kb::KnowledgeBase base(domain);
        executor::Executor exec(base, hub, clock, {});
        std::vector<std::unique_ptr<auction::ActionPerformer>> performers;
        for (int i = 0; i < n; ++i) {
            auction::PerformerSpec spec;
            spec.performer_id = fmt::format("p{}", i);
            spec.action = ActionName(fmt::format("a{}", i));
            performers.push_back(std::make_unique<auction::ActionPerformer>(
                hub, clock, spec, [&clock](std::shared_ptr<auction::WorkHandle> h) {
                    clock.schedule(1.0, [h] { h->finish(true); });
                }));
        }
        exec.execute_plan(plan);
        clock.run_while_pending([&] { return !exec.running(); });
        EXPECT_MSG(exec.status().state == executor::RunState::Succeeded, "round {}", round);
        const double makespan = clock.now();
        EXPECT_MSG(std::abs(makespan - longest) <= 0.2 + 1e-9,
                   "round {}: makespan {} vs longest path {}", round, makespan, longest);
    }
}

// ---------------------------------------------------------------------------
// 4. Protocol safety and liveness under an exhaustive delivery-order
//    enumeration (per-sender FIFO channels, timers fired at quiescence).
// ---------------------------------------------------------------------------
namespace protocol_check {

using namespace planexec::auction;

struct Scenario {
    std::vector<PerformerSpec> performers;
    struct Auction {
        std::string client_id;
        std::uint64_t seq;
        ActionName action;
        std::vector<ObjectName> args;
    };
    std::vector<Auction> auctions;
};

struct World {
    std::vector<ClientMachine> clients;
    std::vector<PerformerMachine> performers;
    // One FIFO channel per (sender endpoint, recipient endpoint); endpoints
    // are clients first, then performers.
    std::map<std::pair<int, int>, std::deque<AuctionMessage>> channels;
    std::vector<int> retries_left;

    std::string key() const {
        std::string k;
        for (const auto& c : clients)
            k += fmt::format("C{}:{};", to_string(c.state()), c.performer_id());
        for (const auto& p : performers)
            k += fmt::format("P{}:{}:{};", to_string(p.state()), p.client(), p.seq());
        for (const auto& r : retries_left) k += fmt::format("r{};", r);
        for (const auto& [ch, q] : channels) {
            if (q.empty()) continue;
            k += fmt::format("[{}>{}]", ch.first, ch.second);
            for (const auto& m : q) k += encode(m);
        }
        return k;
    }
};

struct Checker {
    Scenario scenario;
    int endpoint_count = 0;
    std::vector<std::string> endpoint_ids;  // clients first, then performers
    std::set<std::string> visited;
    long states = 0;

    // The hub hands every record to every endpoint; deliveries an endpoint
    // provably ignores (wrong recipient, broadcasts to clients) cannot change
    // its machine state, so eliding them keeps the model sound while taming
    // the interleaving count.
    void publish(World& w, int from, const AuctionMessage& m) {
        const int n_clients = static_cast<int>(scenario.auctions.size());
        for (int e = 0; e < endpoint_count; ++e) {
            if (e == from) continue;
            const bool is_client = e < n_clients;
            bool relevant = m.recipient == endpoint_ids[static_cast<size_t>(e)];
            if (m.recipient == kBroadcast) relevant = !is_client;
            if (relevant) w.channels[{from, e}].push_back(m);
        }
    }

    void pump_client(World& w, int ci, MachineOutputs&& out) {
        for (const auto& m : out.send) {
            if (m.type == MsgType::Confirm &&
                w.clients[static_cast<size_t>(ci)].state() != ClientState::Confirmed)
                throw CriterionFailure("CONFIRM sent outside the confirmed transition");
            publish(w, ci, m);
        }
    }

    void pump_performer(World& w, int pi, MachineOutputs&& out) {
        auto& machine = w.performers[static_cast<size_t>(pi)];
        const int endpoint = static_cast<int>(scenario.auctions.size()) + pi;
        for (const auto& m : out.send) publish(w, endpoint, m);
        if (out.start_work) {
            if (machine.state() != PerformerState::Active)
                throw CriterionFailure("work started while not ACTIVE");
            // Instant success; the FINISH still interleaves with everything.
            auto fin = machine.work_finished(true);
            for (const auto& m : fin.send) publish(w, endpoint, m);
        }
    }

    // Checked in every reachable state: no auction is served by two ACTIVE
    // performers, and a client that confirmed holds exactly one performer.
    void check_state(const World& w) {
        std::map<std::pair<std::string, std::uint64_t>, int> active_per_auction;
        for (const auto& p : w.performers)
            if (p.state() == PerformerState::Active)
                if (++active_per_auction[{p.client(), p.seq()}] > 1)
                    throw CriterionFailure("two performers ACTIVE on one auction");
    }

    void explore(const World& w) {
        ++states;
        if (states > 2000000) throw CriterionFailure("state space exploded");
        check_state(w);

        bool any_delivery = false;
        for (const auto& [ch, q] : w.channels) {
            if (q.empty()) continue;
            any_delivery = true;
            World next = w;
            AuctionMessage m = next.channels[ch].front();
            next.channels[ch].pop_front();
            const int to = ch.second;
            const int n_clients = static_cast<int>(scenario.auctions.size());
            if (to < n_clients) {
                auto out = next.clients[static_cast<size_t>(to)].on_message(m);
                pump_client(next, to, std::move(out));
            } else {
                auto out = next.performers[static_cast<size_t>(to - n_clients)].on_message(m);
                pump_performer(next, to - n_clients, std::move(out));
            }
            if (visited.insert(next.key()).second) explore(next);
        }
        if (any_delivery) return;

        // Quiescent: fire the first pending retry, if any.
        for (size_t ci = 0; ci < w.clients.size(); ++ci) {
            if (w.clients[ci].state() != ClientState::Auctioning) continue;
            if (w.retries_left[ci] == 0)
                throw CriterionFailure(
                    fmt::format("liveness: auction {} still unconfirmed after retries", ci));
            World next = w;
            next.retries_left[ci]--;
            auto out = next.clients[ci].on_retry_timer();
            pump_client(next, static_cast<int>(ci), std::move(out));
            if (visited.insert(next.key()).second) explore(next);
            return;
        }

        // Terminal: every auction completed (confirm + finish).
        for (size_t ci = 0; ci < w.clients.size(); ++ci)
            if (w.clients[ci].state() != ClientState::Done)
                throw CriterionFailure(
                    fmt::format("liveness: auction {} never completed", ci));
    }

    long run() {
        World w;
        endpoint_count = static_cast<int>(scenario.auctions.size() + scenario.performers.size());
        for (const auto& a : scenario.auctions)
            w.clients.emplace_back(a.client_id, a.seq, a.action, a.args);
        for (const auto& p : scenario.performers) w.performers.emplace_back(p);
        w.retries_left.assign(scenario.auctions.size(), 2);
        for (const auto& a : scenario.auctions) endpoint_ids.push_back(a.client_id);
        for (const auto& p : scenario.performers) endpoint_ids.push_back(p.performer_id);
        for (size_t ci = 0; ci < w.clients.size(); ++ci)
            pump_client(w, static_cast<int>(ci), w.clients[ci].start());
        visited.insert(w.key());
        explore(w);
        return states;
    }
};

}  // namespace protocol_check

void criterion_4() {
    using namespace protocol_check;
    using planexec::auction::PerformerSpec;

    auto performer = [](const std::string& id, const char* action,
                        std::vector<std::string> constraints = {}) {
        PerformerSpec spec;
        spec.performer_id = id;
        spec.action = ActionName(action);
        spec.constraints = std::move(constraints);
        return spec;
    };
    auto auction_for = [](const std::string& client, std::uint64_t seq, const char* action,
                          std::vector<std::string> args) {
        Scenario::Auction a;
        a.client_id = client;
        a.seq = seq;
        a.action = ActionName(action);
        for (const auto& s : args) a.args.emplace_back(s);
        return a;
    };

    long explored = 0;
    {
        // One auction, three performers, exactly one matching specialization.
        Checker c;
        c.scenario.performers = {performer("p1", "move", {"rb1"}),
                                 performer("p2", "move", {"rb2"}),
                                 performer("p3", "move", {"rb3"})};
        c.scenario.auctions = {auction_for("exec-a", 1, "move", {"rb2", "x", "y"})};
        explored += c.run();
    }
    {
        // One auction, three unspecialized performers racing to bid.
        Checker c;
        c.scenario.performers = {performer("p1", "move"), performer("p2", "move"),
                                 performer("p3", "move")};
        c.scenario.auctions = {auction_for("exec-a", 1, "move", {"rb1", "x", "y"})};
        explored += c.run();
    }
    {
        // Two concurrent auctions, two performers.
        Checker c;
        c.scenario.performers = {performer("p1", "move"), performer("p2", "move")};
        c.scenario.auctions = {auction_for("exec-a", 1, "move", {"rb1", "x", "y"}),
                               auction_for("exec-b", 1, "move", {"rb2", "y", "z"})};
        explored += c.run();
    }
    {
        // Two auctions contending for a single performer: retries provide the
        // liveness.
        Checker c;
        c.scenario.performers = {performer("p1", "move")};
        c.scenario.auctions = {auction_for("exec-a", 1, "move", {"rb1", "x", "y"}),
                               auction_for("exec-b", 1, "move", {"rb1", "y", "z"})};
        explored += c.run();
    }
    {
        // Three performers, two auctions, mixed specialization.
        Checker c;
        c.scenario.performers = {performer("p1", "move", {"rb1"}), performer("p2", "move"),
                                 performer("p3", "cook")};
        c.scenario.auctions = {auction_for("exec-a", 1, "move", {"rb1", "x", "y"}),
                               auction_for("exec-b", 1, "cook", {"rb2", "d", "i", "z"})};
        explored += c.run();
    }
    EXPECT_MSG(explored > 1000, "suspiciously small state space: {}", explored);
    std::printf("        (protocol checker explored %ld states)\n", explored);
}

// ---------------------------------------------------------------------------
// 5. Codec round-trip on 10,000 random messages plus the golden record.
// ---------------------------------------------------------------------------
void criterion_5() {
    using namespace planexec::auction;
    AuctionMessage golden;
    golden.type = MsgType::Request;
    golden.sender = "exec-1";
    golden.recipient = "*";
    golden.action = ActionName("move");
    golden.args = {ObjectName("rb1"), ObjectName("a"), ObjectName("b")};
    golden.seq = 7;
    EXPECT(encode(golden) == "PS2A1\tREQUEST\texec-1\t*\tmove\trb1,a,b\t7\t0\t0\t\n");

    std::mt19937_64 rng(505);
    std::uniform_int_distribution<int> type(0, 6), n_args(0, 4), word(0, 25), len(1, 10);
    std::uniform_real_distribution<double> completion(0.0, 1.0);
    auto name = [&] {
        std::string s;
        for (int i = 0, n = len(rng); i < n; ++i) s += static_cast<char>('a' + word(rng));
        return s;
    };
    int mismatches = 0;
    for (int i = 0; i < 10000; ++i) {
        AuctionMessage m;
        m.type = static_cast<MsgType>(type(rng));
        m.sender = name();
        m.recipient = type(rng) == 0 ? "*" : name();
        m.action = ActionName(name());
        for (int a = 0, n = n_args(rng); a < n; ++a) m.args.emplace_back(name());
        m.seq = rng();
        m.completion = completion(rng);
        m.success = type(rng) % 2 == 0;
        m.status_text = type(rng) < 3 ? "" : name() + " " + name();
        if (!(decode(encode(m)) == m)) ++mismatches;
    }
    EXPECT_MSG(mismatches == 0, "{} mismatches", mismatches);
}

// ---------------------------------------------------------------------------
// 6. Desk-scale reproduction of the simulated-experiment trends.
// ---------------------------------------------------------------------------
void criterion_6() {
    sim::SimConfig cfg;
    cfg.seed = 42;
    cfg.horizon_s = 2000;
    cfg.battery_period_s = 300;

    cfg.robots = 1;
    const sim::Metrics one = sim::run_experiment(cfg);
    cfg.robots = 3;
    const sim::Metrics three = sim::run_experiment(cfg);

    std::printf("        1 robot : eff %.2f%%, dishes %d, replans %d, fails %d\n", one.efficiency,
                one.dishes, one.replans, one.fails);
    std::printf("        3 robots: eff %.2f%%, dishes %d, replans %d, fails %d\n",
                three.efficiency, three.dishes, three.replans, three.fails);

    EXPECT_MSG(one.fails == 0, "1-robot fails = {}", one.fails);
    EXPECT_MSG(one.efficiency >= 90.0, "1-robot efficiency = {}", one.efficiency);
    EXPECT_MSG(three.fails == 0, "3-robot fails = {}", three.fails);
    EXPECT_MSG(three.efficiency >= 150.0, "3-robot efficiency = {}", three.efficiency);
    EXPECT_MSG(three.dishes >= static_cast<int>(std::ceil(1.5 * one.dishes)),
               "dishes {} vs 1.5 x {}", three.dishes, one.dishes);
    EXPECT_MSG(one.replans >= 1 && three.replans >= 1, "replans {} / {}", one.replans,
               three.replans);
}

// ---------------------------------------------------------------------------
// 7. Robustness soak: 20 seeds x 2000 s, zero failures in total.
// ---------------------------------------------------------------------------
void criterion_7() {
    int total_fails = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        sim::SimConfig cfg;
        cfg.seed = seed;
        cfg.robots = static_cast<int>(seed % 3) + 1;
        cfg.horizon_s = 2000;
        cfg.battery_period_s = 300;
        const sim::Metrics m = sim::run_experiment(cfg);
        total_fails += m.fails;
    }
    EXPECT_MSG(total_fails == 0, "total fails = {}", total_fails);
}

// ---------------------------------------------------------------------------
// 8. Durative semantics end to end.
// ---------------------------------------------------------------------------
void criterion_8() {
    const Domain domain = parse_domain(fixtures::cooking_domain_pddl());

    auto make_goal = [](const char* dish) {
        Condition goal;
        goal.literals.push_back(
            {Atom{PredicateName("dish_prepared"), {ObjectName(dish)}}, false});
        return goal;
    };

    // (a) at-start effects visible before the execution starts.
    {
        VirtualClock clock;
        auction::InProcessHub hub(clock);
        kb::KnowledgeBase base(domain);
        base.load(parse_problem(fixtures::cooking_problem_pddl(1), domain));
        executor::Executor exec(base, hub, clock, {});

        bool transport_saw_start_effects = false;
        std::vector<std::unique_ptr<auction::ActionPerformer>> performers;
        for (const auto& schema : domain.actions) {
            auction::PerformerSpec spec;
            spec.performer_id = "r2d2_" + schema.name.str();
            spec.action = schema.name;
            spec.constraints = {"r2d2"};
            performers.push_back(std::make_unique<auction::ActionPerformer>(
                hub, clock, spec, [&](std::shared_ptr<auction::WorkHandle> h) {
                    if (h->action().str() == "transport") {
                        // The robot already left the pick-up zone and is no
                        // longer free: at-start effects landed before the
                        // execution request went out.
                        const auto snap = base.snapshot();
                        transport_saw_start_effects =
                            !snap.has_atom({PredicateName("robot_at"),
                                            {ObjectName("r2d2"), h->args()[2]}}) &&
                            !snap.has_atom({PredicateName("free"), {ObjectName("r2d2")}});
                    }
                    h->finish(true);
                }));
        }
        base.set_goal(make_goal("cake"));
        exec.execute_goal();
        clock.run_while_pending([&] { return !exec.running(); });
        EXPECT(exec.status().state == executor::RunState::Succeeded);
        EXPECT(transport_saw_start_effects);
    }

    // (b) at-end effects apply only on success; aborted start effects remain.
    {
        VirtualClock clock;
        auction::InProcessHub hub(clock);
        kb::KnowledgeBase base(domain);
        base.load(parse_problem(fixtures::cooking_problem_pddl(1), domain));
        executor::Executor exec(base, hub, clock, {});
        std::vector<std::unique_ptr<auction::ActionPerformer>> performers;
        for (const auto& schema : domain.actions) {
            auction::PerformerSpec spec;
            spec.performer_id = "r2d2_" + schema.name.str();
            spec.action = schema.name;
            spec.constraints = {"r2d2"};
            const bool failing = schema.name.str() == "cook";
            performers.push_back(std::make_unique<auction::ActionPerformer>(
                hub, clock, spec, [failing](std::shared_ptr<auction::WorkHandle> h) {
                    h->finish(!failing, failing ? "burnt" : "");
                }));
        }
        base.set_goal(make_goal("cake"));
        exec.execute_goal();
        clock.run_while_pending([&] { return !exec.running(); });
        EXPECT(exec.status().state == executor::RunState::Failed);
        // The failing cook's at-end effect never landed.
        EXPECT(!base.snapshot().has_atom(
            {PredicateName("dish_prepared"), {ObjectName("cake")}}));
        // Its at-start effect (ingredient consumed) is retained and visible.
        EXPECT(!base.snapshot().has_atom({PredicateName("ingredient_ready"),
                                          {ObjectName("cake_mix"), ObjectName("kitchen")}}));
        EXPECT(exec.status().failure_reason.find("cook") != std::string::npos);
    }

    // (c) over-all violation mid-execution fails the plan at the root.
    {
        VirtualClock clock;
        auction::InProcessHub hub(clock);
        kb::KnowledgeBase base(domain);
        base.load(parse_problem(fixtures::cooking_problem_pddl(1), domain));
        executor::Executor exec(base, hub, clock, {});
        std::vector<std::unique_ptr<auction::ActionPerformer>> performers;
        for (const auto& schema : domain.actions) {
            auction::PerformerSpec spec;
            spec.performer_id = "r2d2_" + schema.name.str();
            spec.action = schema.name;
            spec.constraints = {"r2d2"};
            performers.push_back(std::make_unique<auction::ActionPerformer>(
                hub, clock, spec, [&clock](std::shared_ptr<auction::WorkHandle> h) {
                    const double duration = h->action().str() == "cook" ? 21.0 : 5.0;
                    auto id = clock.schedule(duration, [h] { h->finish(true); });
                    h->on_cancel([&clock, id] { clock.cancel(id); });
                }));
        }
        base.set_goal(make_goal("cake"));
        exec.execute_goal();
        // The cook starts after two 5 s actions; yank the robot mid-cook.
        clock.schedule(15.0, [&] {
            base.remove_atom(
                {PredicateName("robot_at"), {ObjectName("r2d2"), ObjectName("kitchen")}});
        });
        clock.run_while_pending([&] { return !exec.running(); });
        EXPECT(exec.status().state == executor::RunState::Failed);
        EXPECT_MSG(exec.status().failure_reason.find("over-all") != std::string::npos,
                   "reason: {}", exec.status().failure_reason);
    }

    // (d) after cancel, no FEEDBACK later than one feedback period.
    {
        VirtualClock clock;
        auction::InProcessHub hub(clock);
        std::ostringstream hub_log;
        hub.tee_to(&hub_log);
        kb::KnowledgeBase base(domain);
        base.load(parse_problem(fixtures::cooking_problem_pddl(1), domain));
        executor::Executor exec(base, hub, clock, {});
        std::vector<std::unique_ptr<auction::ActionPerformer>> performers;
        for (const auto& schema : domain.actions) {
            auction::PerformerSpec spec;
            spec.performer_id = "r2d2_" + schema.name.str();
            spec.action = schema.name;
            spec.constraints = {"r2d2"};
            performers.push_back(std::make_unique<auction::ActionPerformer>(
                hub, clock, spec, [&clock](std::shared_ptr<auction::WorkHandle> h) {
                    auto id = clock.schedule(600.0, [h] { h->finish(true); });
                    h->on_cancel([&clock, id] { clock.cancel(id); });
                }));
        }
        base.set_goal(make_goal("cake"));
        exec.execute_goal();
        clock.run_until(2.3);
        EXPECT(exec.cancel());
        const double cancel_time = clock.now();
        clock.run_until(cancel_time + 30.0);

        std::istringstream lines(hub_log.str());
        std::string line;
        double last_feedback = -1;
        bool saw_feedback = false;
        while (std::getline(lines, line)) {
            const size_t tab = line.find('\t');
            const double t = std::strtod(line.substr(0, tab).c_str(), nullptr);
            const auto m = auction::decode(line.substr(tab + 1) + "\n");
            if (m.type == auction::MsgType::Feedback) {
                last_feedback = t;
                saw_feedback = true;
            }
        }
        EXPECT(saw_feedback);
        EXPECT_MSG(last_feedback <= cancel_time + 0.5, "feedback at {} after cancel at {}",
                   last_feedback, cancel_time);
    }
}

// ---------------------------------------------------------------------------
// 9. Scripted terminal session: byte-identical SUCCESS transcript.
// ---------------------------------------------------------------------------
void criterion_9() {
    const char* script =
        "set instance r2d2 robot\n"
        "set instance kitchen zone\n"
        "set instance cake_zone zone\n"
        "set instance recharge_station zone\n"
        "set instance cake dish\n"
        "set instance cake_mix ingredient\n"
        "set predicate (robot_at r2d2 kitchen)\n"
        "set predicate (free r2d2)\n"
        "set predicate (battery_ok r2d2)\n"
        "set predicate (cooking_zone kitchen)\n"
        "set predicate (recharge_zone recharge_station)\n"
        "set predicate (ingredient_at cake_mix cake_zone)\n"
        "set predicate (ingredient_for cake_mix cake)\n"
        "set function (= (battery_level r2d2) 100)\n"
        "set goal (and (dish_prepared cake))\n"
        "get plan\n"
        "run\n"
        "quit\n";

    auto transcript = [&] {
        terminal::TerminalOptions opt;
        opt.interactive_prompt = false;
        opt.seed = 7;
        std::istringstream in(script);
        std::ostringstream out;
        const int rc =
            terminal::repl_with_sources(in, out, opt, {fixtures::cooking_domain_pddl()}, {});
        EXPECT_MSG(rc == 0, "terminal exit code {}", rc);
        return out.str();
    };
    const std::string first = transcript();
    const std::string second = transcript();
    EXPECT_MSG(first.find("SUCCESS") != std::string::npos, "transcript:\n{}", first);
    EXPECT(first.find("finished_ok") != std::string::npos);
    EXPECT(first == second);
}

struct Criterion {
    int number;
    const char* title;
    double budget_s;
    std::function<void()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "demo plan pipeline: 21 items, 3 roots, converging assembles", 1.0, criterion_1},
        {2, "graph establishers equal the brute-force oracle (200 plans)", 30.0, criterion_2},
        {3, "BT makespan = longest path +- 2 ticks (100 random DAGs)", 30.0, criterion_3},
        {4, "auction protocol safety and liveness (exhaustive orders)", 60.0, criterion_4},
        {5, "wire codec: golden record and 10k round-trips", 30.0, criterion_5},
        {6, "kitchen experiment trends (1 vs 3 robots, battery replans)", 120.0, criterion_6},
        {7, "robustness soak: 20 seeds x 2000 s, zero failures", 600.0, criterion_7},
        {8, "durative semantics: start/end effects, over-all abort, cancel", 30.0, criterion_8},
        {9, "scripted terminal session, byte-identical transcripts", 30.0, criterion_9},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        std::string error;
        try {
            c.run();
        } catch (const std::exception& e) {
            error = e.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (error.empty() && elapsed > c.budget_s)
            error = fmt::format("runtime {:.2f}s exceeded the {:.0f}s budget", elapsed, c.budget_s);
        if (error.empty()) {
            std::printf("PASS  criterion %d: %s (%.2f s)\n", c.number, c.title, elapsed);
        } else {
            std::printf("FAIL  criterion %d: %s (%.2f s)\n      %s\n", c.number, c.title, elapsed,
                        error.c_str());
            ++failures;
        }
        std::fflush(stdout);
    }
    if (failures) std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
