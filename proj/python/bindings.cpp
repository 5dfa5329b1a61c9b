#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "planexec/auction.hpp"
#include "planexec/errors.hpp"
#include "planexec/executor.hpp"
#include "planexec/fixtures.hpp"
#include "planexec/merge.hpp"
#include "planexec/parser.hpp"
#include "planexec/printer.hpp"
#include "planexec/sim.hpp"
#include "planexec/solver.hpp"
#include "planexec/terminal.hpp"

namespace py = pybind11;
using namespace planexec;

namespace {

std::vector<pddl::ObjectName> to_objects(const std::vector<std::string>& names) {
    std::vector<pddl::ObjectName> out;
    out.reserve(names.size());
    for (const auto& n : names) out.emplace_back(n);
    return out;
}

std::vector<std::string> from_objects(const std::vector<pddl::ObjectName>& names) {
    std::vector<std::string> out;
    out.reserve(names.size());
    for (const auto& n : names) out.push_back(n.str());
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "PDDL 2.1 planning and execution stack: parser, solver, plan "
              "dependency graphs, behavior-tree execution, action auctions and "
              "the kitchen experiment harness.";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<EvaluationError>(m, "EvaluationError", PyExc_ValueError);
    py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
    py::register_exception<GraphError>(m, "GraphError", PyExc_RuntimeError);
    py::register_exception<CodecError>(m, "CodecError", PyExc_ValueError);

    // --- PDDL model -----------------------------------------------------
    py::class_<pddl::Domain>(m, "Domain")
        .def_readonly("name", &pddl::Domain::name)
        .def_property_readonly("actions",
                               [](const pddl::Domain& d) {
                                   std::vector<std::string> names;
                                   for (const auto& a : d.actions) names.push_back(a.name.str());
                                   return names;
                               })
        .def_property_readonly("predicates",
                               [](const pddl::Domain& d) {
                                   std::vector<std::string> names;
                                   for (const auto& p : d.predicates)
                                       names.push_back(p.name.str());
                                   return names;
                               })
        .def("__eq__", [](const pddl::Domain& a, const pddl::Domain& b) { return a == b; })
        .def("__repr__", [](const pddl::Domain& d) {
            return "<Domain '" + d.name + "', " + std::to_string(d.actions.size()) + " actions>";
        });

    py::class_<pddl::Problem>(m, "Problem")
        .def_readonly("name", &pddl::Problem::name)
        .def_property_readonly("objects",
                               [](const pddl::Problem& p) {
                                   std::vector<std::pair<std::string, std::string>> out;
                                   for (const auto& o : p.objects)
                                       out.emplace_back(o.name.str(), o.type.str());
                                   return out;
                               })
        .def("__repr__", [](const pddl::Problem& p) {
            return "<Problem '" + p.name + "', " + std::to_string(p.objects.size()) +
                   " objects>";
        });

    m.def("parse_domain", [](const std::string& text) { return pddl::parse_domain(text); },
          py::arg("text"));
    m.def("parse_problem",
          [](const std::string& text, const pddl::Domain& d) {
              return pddl::parse_problem(text, d);
          },
          py::arg("text"), py::arg("domain"));
    m.def("print_domain", &pddl::print_domain, py::arg("domain"));
    m.def("print_problem", &pddl::print_problem, py::arg("problem"));
    m.def("merge_domains", &pddl::merge_domains, py::arg("domains"));

    // --- Knowledge base ---------------------------------------------------
    py::class_<kb::KnowledgeBase>(m, "KnowledgeBase")
        .def(py::init<pddl::Domain>(), py::arg("domain"))
        .def("load", &kb::KnowledgeBase::load, py::arg("problem"))
        .def("add_instance",
             [](kb::KnowledgeBase& self, const std::string& name, const std::string& type) {
                 self.add_instance(pddl::ObjectName(name), pddl::TypeName(type));
             })
        .def("remove_instance",
             [](kb::KnowledgeBase& self, const std::string& name) {
                 self.remove_instance(pddl::ObjectName(name));
             })
        .def("add_atom",
             [](kb::KnowledgeBase& self, const std::string& pred,
                const std::vector<std::string>& args) {
                 self.add_atom({pddl::PredicateName(pred), to_objects(args)});
             })
        .def("remove_atom",
             [](kb::KnowledgeBase& self, const std::string& pred,
                const std::vector<std::string>& args) {
                 return self.remove_atom({pddl::PredicateName(pred), to_objects(args)});
             })
        .def("has_atom",
             [](const kb::KnowledgeBase& self, const std::string& pred,
                const std::vector<std::string>& args) {
                 return self.snapshot().has_atom({pddl::PredicateName(pred), to_objects(args)});
             })
        .def("set_fluent",
             [](kb::KnowledgeBase& self, const std::string& fn,
                const std::vector<std::string>& args, double value) {
                 self.set_fluent({pddl::FunctionName(fn), to_objects(args)}, value);
             })
        .def("set_goal",
             [](kb::KnowledgeBase& self, const std::string& condition_text) {
                 self.set_goal(pddl::parse_condition_text(condition_text));
             },
             py::arg("condition"), "Goal from PDDL text, e.g. '(and (p a b))'")
        .def("clear_goal", &kb::KnowledgeBase::clear_goal)
        .def("is_goal_satisfied", &kb::KnowledgeBase::is_goal_satisfied)
        .def_property_readonly("instances", [](const kb::KnowledgeBase& self) {
            std::vector<std::pair<std::string, std::string>> out;
            for (const auto& [obj, type] : self.snapshot().instances)
                out.emplace_back(obj.str(), type.str());
            return out;
        })
        .def_property_readonly("atoms", [](const kb::KnowledgeBase& self) {
            std::vector<std::string> out;
            for (const auto& atom : self.snapshot().atoms)
                out.push_back(pddl::print_ground_atom(atom));
            return out;
        });

    // --- Plans and the solver ----------------------------------------------
    py::class_<planner::PlanItem>(m, "PlanItem")
        .def_readonly("time", &planner::PlanItem::time)
        .def_readonly("duration", &planner::PlanItem::duration)
        .def_property_readonly("action",
                               [](const planner::PlanItem& i) { return i.action.str(); })
        .def_property_readonly("args",
                               [](const planner::PlanItem& i) { return from_objects(i.args); })
        .def("__repr__", [](const planner::PlanItem& i) {
            return planner::print_plan(planner::Plan{{i}});
        });

    py::class_<planner::Plan>(m, "Plan")
        .def_property_readonly("items", [](const planner::Plan& p) { return p.items; })
        .def("__len__", [](const planner::Plan& p) { return p.size(); })
        .def("__str__", [](const planner::Plan& p) { return planner::print_plan(p); });

    m.def("solve",
          [](const pddl::Domain& domain, const kb::KnowledgeBase& base)
              -> std::optional<planner::Plan> {
              return planner::solve(domain, base.snapshot());
          },
          py::arg("domain"), py::arg("kb"),
          "Returns the plan, an empty plan for a satisfied goal, or None when "
          "no plan exists.");
    m.def("parse_plan_file",
          [](const std::string& text, const pddl::Domain& d) {
              return planner::parse_plan_file(text, d);
          },
          py::arg("text"), py::arg("domain"));
    m.def("print_plan", &planner::print_plan, py::arg("plan"));
    m.def("validate_plan",
          [](const pddl::Domain& domain, const kb::KnowledgeBase& base,
             const planner::Plan& plan) -> std::optional<std::string> {
              const auto report = planner::validate_plan(domain, base.snapshot(), plan);
              if (report.ok()) return std::nullopt;
              return report.violation->detail;
          },
          py::arg("domain"), py::arg("kb"), py::arg("plan"),
          "None when the plan is valid, otherwise the first violation.");

    // --- Plan graph -------------------------------------------------------
    py::class_<graph::PlanGraph>(m, "PlanGraph")
        .def_property_readonly("node_count",
                               [](const graph::PlanGraph& g) { return g.nodes.size(); })
        .def_property_readonly("edges",
                               [](const graph::PlanGraph& g) {
                                   std::vector<std::tuple<int, int, std::string>> out;
                                   for (const auto& e : g.edges)
                                       out.emplace_back(
                                           e.from, e.to,
                                           e.reason == graph::EdgeReason::Establishes
                                               ? "establishes"
                                               : "orders");
                                   return out;
                               })
        .def("roots", [](const graph::PlanGraph& g) { return graph::roots(g); })
        .def("flows", [](const graph::PlanGraph& g) { return graph::flows(g); })
        .def("to_dot", [](const graph::PlanGraph& g) { return graph::to_dot(g); });

    m.def("build_graph",
          [](const planner::Plan& plan, const pddl::Domain& domain,
             const kb::KnowledgeBase& base) {
              return graph::build_graph(plan, domain, base.snapshot());
          },
          py::arg("plan"), py::arg("domain"), py::arg("kb"));

    // --- Wire codec ---------------------------------------------------------
    m.def("encode_message",
          [](const std::string& type, const std::string& sender, const std::string& recipient,
             const std::string& action, const std::vector<std::string>& args, std::uint64_t seq,
             double completion, bool success, const std::string& status_text) {
              auction::AuctionMessage msg;
              for (int i = 0; i < 7; ++i)
                  if (auction::msg_type_name(static_cast<auction::MsgType>(i)) == type)
                      msg.type = static_cast<auction::MsgType>(i);
              msg.sender = sender;
              msg.recipient = recipient;
              msg.action = pddl::ActionName(action);
              msg.args = to_objects(args);
              msg.seq = seq;
              msg.completion = completion;
              msg.success = success;
              msg.status_text = status_text;
              return py::bytes(auction::encode(msg));
          },
          py::arg("type"), py::arg("sender"), py::arg("recipient") = "*", py::arg("action") = "",
          py::arg("args") = std::vector<std::string>{}, py::arg("seq") = 0,
          py::arg("completion") = 0.0, py::arg("success") = false, py::arg("status_text") = "");
    m.def("decode_message", [](const py::bytes& record) {
        const auto m2 = auction::decode(std::string(record));
        py::dict out;
        out["type"] = auction::msg_type_name(m2.type);
        out["sender"] = m2.sender;
        out["recipient"] = m2.recipient;
        out["action"] = m2.action.str();
        out["args"] = from_objects(m2.args);
        out["seq"] = m2.seq;
        out["completion"] = m2.completion;
        out["success"] = m2.success;
        out["status_text"] = m2.status_text;
        return out;
    });

    // --- Simulation harness ---------------------------------------------
    py::class_<sim::SimConfig>(m, "SimConfig")
        .def(py::init([](int robots, const std::string& profile, double horizon,
                         double battery_period, std::uint64_t seed, const std::string& hub_log,
                         const std::string& status_log, const std::string& dot_dir) {
                 sim::SimConfig cfg;
                 cfg.robots = robots;
                 cfg.profile = profile == "real" ? sim::SimConfig::Profile::Realistic
                                                 : sim::SimConfig::Profile::Simulated;
                 cfg.horizon_s = horizon;
                 cfg.battery_period_s = battery_period;
                 cfg.seed = seed;
                 cfg.hub_log_path = hub_log;
                 cfg.status_log_path = status_log;
                 cfg.dot_dir = dot_dir;
                 return cfg;
             }),
             py::arg("robots") = 1, py::arg("profile") = "sim", py::arg("horizon") = 2000.0,
             py::arg("battery_period") = 300.0, py::arg("seed") = 42, py::arg("hub_log") = "",
             py::arg("status_log") = "", py::arg("dot_dir") = "")
        .def_readwrite("robots", &sim::SimConfig::robots)
        .def_readwrite("horizon_s", &sim::SimConfig::horizon_s)
        .def_readwrite("battery_period_s", &sim::SimConfig::battery_period_s)
        .def_readwrite("seed", &sim::SimConfig::seed);

    py::class_<sim::Metrics>(m, "Metrics")
        .def_readonly("total_time", &sim::Metrics::total_time)
        .def_readonly("plans", &sim::Metrics::plans)
        .def_readonly("actions", &sim::Metrics::actions)
        .def_readonly("efficiency", &sim::Metrics::efficiency)
        .def_readonly("fails", &sim::Metrics::fails)
        .def_readonly("replans", &sim::Metrics::replans)
        .def_readonly("dishes", &sim::Metrics::dishes)
        .def("__eq__", [](const sim::Metrics& a, const sim::Metrics& b) { return a == b; })
        .def("__repr__", [](const sim::Metrics& x) {
            std::ostringstream out;
            out << "<Metrics time=" << x.total_time << " plans=" << x.plans
                << " actions=" << x.actions << " efficiency=" << x.efficiency
                << " fails=" << x.fails << " replans=" << x.replans << " dishes=" << x.dishes
                << ">";
            return out.str();
        });

    m.def("run_experiment", &sim::run_experiment, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
    m.def("export_metrics", &sim::export_metrics, py::arg("metrics"), py::arg("path"));

    // --- Terminal (scripted) ------------------------------------------------
    m.def("run_shell",
          [](const std::vector<std::string>& domain_texts, const std::string& problem_text,
             const std::string& commands) {
              terminal::TerminalOptions opt;
              opt.interactive_prompt = false;
              std::istringstream in(commands);
              std::ostringstream out;
              std::optional<std::string> problem;
              if (!problem_text.empty()) problem = problem_text;
              const int rc = terminal::repl_with_sources(in, out, opt, domain_texts, problem);
              return py::make_tuple(rc, out.str());
          },
          py::arg("domains"), py::arg("problem") = "", py::arg("commands") = "",
          "Runs shell commands against in-memory domain/problem texts; returns "
          "(exit_code, transcript).");

    // --- Bundled fixtures ---------------------------------------------------
    py::module_ fx = m.def_submodule("fixtures", "Bundled demo domains and plans");
    fx.def("cooking_domain", [] { return planexec::fixtures::cooking_domain_pddl(); });
    fx.def("cooking_problem",
           [](int robots) { return planexec::fixtures::cooking_problem_pddl(robots); },
           py::arg("robots") = 1);
    fx.def("assembly_domain", [] { return planexec::fixtures::assembly_domain_pddl(); });
    fx.def("assembly_problem", [] { return planexec::fixtures::assembly_problem_pddl(); });
    fx.def("assembly_plan", [] { return planexec::fixtures::assembly_plan_text(); });
}
