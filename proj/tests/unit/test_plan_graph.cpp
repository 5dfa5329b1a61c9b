#include <doctest.h>

#include <algorithm>
#include <random>

#include "planexec/errors.hpp"
#include "planexec/fixtures.hpp"
#include "planexec/parser.hpp"
#include "planexec/plan_graph.hpp"
#include "planexec/solver.hpp"

#include "../common/graph_oracle.hpp"

using namespace planexec;
using namespace planexec::pddl;
using namespace planexec::planner;
using namespace planexec::graph;

namespace {

struct AssemblyGraph {
    Domain domain;
    kb::KnowledgeState init;
    Plan plan;
    PlanGraph g;

    AssemblyGraph() {
        domain = parse_domain(fixtures::assembly_domain_pddl());
        kb::KnowledgeBase base(domain);
        base.load(parse_problem(fixtures::assembly_problem_pddl(), domain));
        init = base.snapshot();
        plan = parse_plan_file(fixtures::assembly_plan_text(), domain);
        g = build_graph(plan, domain, init);
    }
};


Plan random_valid_cooking_plan(std::mt19937_64& rng, Domain& domain_out,
                               kb::KnowledgeState& init_out) {
    static const Domain domain = parse_domain(fixtures::cooking_domain_pddl());
    std::uniform_int_distribution<int> robots(1, 2), n_dishes(1, 2), pick(0, 2), coin(0, 1);
    kb::KnowledgeBase base(domain);
    base.load(parse_problem(fixtures::cooking_problem_pddl(robots(rng)), domain));
    if (coin(rng))
        base.add_atom({PredicateName("ingredient_ready"),
                       {ObjectName("pasta"), ObjectName("kitchen")}});
    Condition goal;
    std::set<std::string> chosen;
    for (int i = 0; i < n_dishes(rng); ++i)
        chosen.insert(fixtures::cooking_dishes()[static_cast<size_t>(pick(rng))]);
    for (const auto& d : chosen)
        goal.literals.push_back({Atom{PredicateName("dish_prepared"), {ObjectName(d)}}, false});
    base.set_goal(goal);
    domain_out = domain;
    init_out = base.snapshot();
    const auto plan = solve(domain, init_out);
    REQUIRE(plan.has_value());
    return *plan;
}

}  // namespace

TEST_CASE("assembly graph: roots are exactly the three t=0 moves") {
    AssemblyGraph fx;
    CHECK(fx.g.nodes.size() == 21);
    const auto r = roots(fx.g);
    REQUIRE(r.size() == 3);
    for (int idx : r) {
        CHECK(fx.g.nodes[static_cast<size_t>(idx)].t_start == 0.0);
        CHECK(fx.g.nodes[static_cast<size_t>(idx)].item.action.str() == "move");
    }
}

TEST_CASE("assembly graph: every assemble converges with one edge per transport") {
    AssemblyGraph fx;
    for (const auto& node : fx.g.nodes) {
        if (node.item.action.str() != "assemble") continue;
        CHECK(fx.g.in_degree(node.index) >= 3);
    }
    // The first assemble (car_1) takes an establisher edge from each of the
    // three t=5.001 transports.
    const int first_assemble = 6;
    REQUIRE(fx.g.nodes[first_assemble].item.action.str() == "assemble");
    std::set<int> transport_producers;
    for (const auto& e : fx.g.edges)
        if (e.to == first_assemble && e.reason == EdgeReason::Establishes &&
            fx.g.nodes[static_cast<size_t>(e.from)].item.action.str() == "transport")
            transport_producers.insert(e.from);
    CHECK(transport_producers == std::set<int>{3, 4, 5});
}

TEST_CASE("single-action plan with initially satisfied conditions has no edges") {
    Domain domain = parse_domain(fixtures::assembly_domain_pddl());
    kb::KnowledgeBase base(domain);
    base.load(parse_problem(fixtures::assembly_problem_pddl(), domain));
    const Plan plan =
        parse_plan_file("0.000: (move rb1 assembly_zone wheels_zone)  [5.000]\n", domain);
    const PlanGraph g = build_graph(plan, domain, base.snapshot());
    CHECK(g.nodes.size() == 1);
    CHECK(g.edges.empty());
    CHECK(roots(g).size() == 1);
}

TEST_CASE("an unsupported condition atom raises a graph error") {
    Domain domain = parse_domain(fixtures::assembly_domain_pddl());
    kb::KnowledgeBase base(domain);
    base.load(parse_problem(fixtures::assembly_problem_pddl(), domain));
    // rb1 is at assembly_zone, not wheels_zone: no establisher, not in init.
    const Plan plan =
        parse_plan_file("0.000: (move rb1 wheels_zone assembly_zone)  [5.000]\n", domain);
    CHECK_THROWS_AS(build_graph(plan, domain, base.snapshot()), planexec::GraphError);
}

TEST_CASE("flows enumerate maximal root-to-sink paths") {
    AssemblyGraph fx;
    const auto all = flows(fx.g);
    CHECK(all.size() >= 3);
    for (const auto& path : all) {
        REQUIRE(!path.empty());
        CHECK(fx.g.in_degree(path.front()) == 0);
        CHECK(fx.g.successors(path.back()).empty());
        for (size_t i = 0; i + 1 < path.size(); ++i)
            CHECK(fx.g.successors(path[i]).count(path[i + 1]) == 1);
    }

    // Linear chain: exactly one flow of length 3.
    Domain domain = parse_domain(fixtures::assembly_domain_pddl());
    kb::KnowledgeBase base(domain);
    base.load(parse_problem(fixtures::assembly_problem_pddl(), domain));
    const Plan chain = parse_plan_file(
        "0.000: (move rb1 assembly_zone wheels_zone)  [5.000]\n"
        "5.001: (move rb1 wheels_zone body_car_zone)  [5.000]\n"
        "10.002: (move rb1 body_car_zone steerwheel_zone)  [5.000]\n",
        domain);
    const PlanGraph g = build_graph(chain, domain, base.snapshot());
    const auto chain_flows = flows(g);
    REQUIRE(chain_flows.size() == 1);
    CHECK(chain_flows[0] == std::vector<int>{0, 1, 2});
}

TEST_CASE("diamond graph yields two flows") {
    // Build a diamond from cooking: one transport feeding two structures is
    // synthetic here, so use a hand-made graph instead.
    PlanGraph g;
    for (int i = 0; i < 4; ++i) {
        PlanNode n;
        n.index = i;
        n.t_start = i == 0 ? 0 : (i == 3 ? 2 : 1);
        n.t_end = n.t_start + 1;
        g.nodes.push_back(n);
    }
    const GroundAtom a{PredicateName("p"), {}};
    g.edges.insert({0, 1, EdgeReason::Establishes, a, false});
    g.edges.insert({0, 2, EdgeReason::Establishes, a, false});
    g.edges.insert({1, 3, EdgeReason::Establishes, a, false});
    g.edges.insert({2, 3, EdgeReason::Establishes, a, false});
    const auto out = flows(g);
    REQUIRE(out.size() == 2);
    CHECK(out[0] == std::vector<int>{0, 1, 3});
    CHECK(out[1] == std::vector<int>{0, 2, 3});

    const std::string dot = to_dot(g);
    size_t arrows = 0, pos = 0;
    while ((pos = dot.find("->", pos)) != std::string::npos) {
        ++arrows;
        pos += 2;
    }
    CHECK(arrows == 4);  // 4 nodes, 4 edges
}

TEST_CASE("to_dot renders every node and edge deterministically") {
    AssemblyGraph fx;
    const std::string dot = to_dot(fx.g);
    for (int i = 0; i < 21; ++i)
        CHECK(dot.find("n" + std::to_string(i) + " [") != std::string::npos);
    CHECK(to_dot(fx.g) == dot);

    PlanGraph empty_edges;
    for (int i = 0; i < 3; ++i) {
        PlanNode n;
        n.index = i;
        n.t_end = 1;
        empty_edges.nodes.push_back(n);
    }
    const std::string d2 = to_dot(empty_edges);
    CHECK(d2.find("->") == std::string::npos);
}

TEST_CASE("establisher edges match the simulation oracle on the demo plan") {
    AssemblyGraph fx;
    CHECK(testing::establisher_edges(fx.g) ==
          testing::establisher_oracle(fx.plan, fx.domain, fx.init));
}

TEST_CASE("graph properties over randomized solver plans") {
    std::mt19937_64 rng(31);
    for (int round = 0; round < 30; ++round) {
        Domain domain;
        kb::KnowledgeState init;
        const Plan plan = random_valid_cooking_plan(rng, domain, init);
        if (plan.empty()) continue;
        const PlanGraph g = build_graph(plan, domain, init);

        // Acyclicity comes from build_graph's internal check; verify edge-time
        // monotonicity: producer effect time <= consumer requirement end.
        for (const auto& e : g.edges) {
            const auto& from = g.nodes[static_cast<size_t>(e.from)];
            const auto& to = g.nodes[static_cast<size_t>(e.to)];
            if (e.reason == EdgeReason::Establishes)
                CHECK(from.t_start <= to.t_end);
            else
                CHECK(to.t_start >= from.t_start);
        }

        // Oracle equivalence on small plans.
        if (plan.size() <= 8)
            CHECK(testing::establisher_edges(g) == testing::establisher_oracle(plan, domain, init));

        // Execution-order sufficiency: any topological execution passes the
        // condition checks with effects applied in topological order.
        std::map<int, std::set<int>> preds;
        for (const auto& e : g.edges) preds[e.to].insert(e.from);
        std::vector<int> order;
        std::set<int> done;
        while (order.size() < g.nodes.size()) {
            for (const auto& n : g.nodes) {
                if (done.count(n.index)) continue;
                bool ready = true;
                for (int p : preds[n.index]) ready = ready && done.count(p);
                if (ready) {
                    order.push_back(n.index);
                    done.insert(n.index);
                }
            }
        }
        kb::KnowledgeState state = init;
        for (int idx : order) {
            const auto& action = g.nodes[static_cast<size_t>(idx)].action;
            CHECK(kb::evaluate(action.cond_start, state));
            state = kb::apply(action.eff_start, state);
            CHECK(kb::evaluate(action.cond_overall, state));
            CHECK(kb::evaluate(action.cond_end, state));
            state = kb::apply(action.eff_end, state);
        }
        CHECK(kb::evaluate(init.goal, state));
    }
}
