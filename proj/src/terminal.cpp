#include "planexec/terminal.hpp"

#include <fmt/format.h>

#include <fstream>
#include <iostream>
#include <sstream>

#include "planexec/auction_runtime.hpp"
#include "planexec/errors.hpp"
#include "planexec/executor.hpp"
#include "planexec/merge.hpp"
#include "planexec/parser.hpp"
#include "planexec/printer.hpp"

namespace planexec::terminal {
namespace {

using executor::RunState;

std::vector<std::string> split_words(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> words;
    std::string w;
    while (in >> w) words.push_back(w);
    return words;
}

// Joins words[from..] back for parenthesized fragments.
std::string rest_of(const std::vector<std::string>& words, size_t from) {
    std::string out;
    for (size_t i = from; i < words.size(); ++i) {
        if (i > from) out += " ";
        out += words[i];
    }
    return out;
}

class Shell {
public:
    Shell(std::ostream& out, const TerminalOptions& opt, pddl::Domain domain,
          std::optional<pddl::Problem> problem)
        : out_(out), opt_(opt), hub_(clock_), kb_(std::move(domain)) {
        if (problem) kb_.load(*problem);
        executor::ExecutorConfig cfg;
        cfg.exec_id = "shell-exec";
        exec_ = std::make_unique<executor::Executor>(kb_, hub_, clock_, cfg);
        exec_->on_status([this](const executor::PlanRunStatus& s) { on_status(s); });
        if (opt_.auto_performers) register_auto_performers();
    }

    int run(std::istream& in) {
        std::string line;
        while (true) {
            if (opt_.interactive_prompt) {
                out_ << "> ";
                out_.flush();
            }
            if (!std::getline(in, line)) break;
            if (!handle_line(line)) break;  // quit
        }
        return run_result();
    }

    int run_result() const { return errors_ ? 1 : 0; }

    // Returns false on `quit`.
    bool handle_line(const std::string& raw) {
        const auto words = split_words(raw);
        if (words.empty()) return true;
        if (!words[0].empty() && words[0][0] == '#') return true;  // comment
        try {
            return dispatch(words);
        } catch (const std::exception& e) {
            error(e.what());
            return true;
        }
    }

private:
    void error(const std::string& msg) {
        out_ << "ERROR: " << msg << "\n";
        ++errors_;
    }

    void usage() {
        out_ << "commands:\n"
                "  get domain | get problem [instances|predicates|functions|goals]\n"
                "  get model action <name> | get model predicate <name>\n"
                "  get plan | get performers\n"
                "  set instance <name> <type> | remove instance <name>\n"
                "  set predicate (<p> <args...>) | remove predicate (<p> <args...>)\n"
                "  set function (= (<f> <args...>) <value>) | remove function (<f> <args...>)\n"
                "  set goal <condition> | remove goal\n"
                "  run | cancel | source <file> | quit\n";
    }

    void register_auto_performers() {
        for (const auto& schema : kb_.domain().actions) {
            auction::PerformerSpec spec;
            spec.performer_id = "auto_" + schema.name.str();
            spec.action = schema.name;
            auto work = [this](std::shared_ptr<auction::WorkHandle> h) {
                double d = 1.0;
                try {
                    const auto grounded = planner::ground_action(kb_.domain(), kb_.snapshot(),
                                                                 h->action(), h->args());
                    d = kb::evaluate_expr(grounded.duration, kb_.snapshot());
                } catch (const std::exception&) {
                }
                auto timers = std::make_shared<std::vector<Reactor::TimerId>>();
                for (int q = 1; q <= 3; ++q)
                    timers->push_back(
                        clock_.schedule(d * q / 4.0, [h, q] { h->progress(q / 4.0); }));
                timers->push_back(clock_.schedule(d, [h] { h->finish(true); }));
                h->on_cancel([this, timers] {
                    for (auto id : *timers) clock_.cancel(id);
                });
            };
            performers_.push_back(
                std::make_unique<auction::ActionPerformer>(hub_, clock_, spec, work));
        }
    }

    void on_status(const executor::PlanRunStatus& s) {
        if (!monitoring_) return;
        // One line per per-action state change.
        for (size_t i = 0; i < s.actions.size(); ++i) {
            const auto& a = s.actions[i];
            const auto key = std::make_pair(a.phase, a.completion);
            if (i < last_seen_.size() && last_seen_[i] == key) continue;
            if (i >= last_seen_.size()) last_seen_.resize(s.actions.size());
            last_seen_[i] = key;
            out_ << fmt::format("[{:.3f}] {} {} {:.0f}%\n", clock_.now(),
                                planner::grounded_signature(a.item.action, a.item.args),
                                bt::to_string(a.phase), a.completion * 100.0);
        }
    }

    bool dispatch(const std::vector<std::string>& words) {
        const std::string& verb = words[0];
        if (verb == "quit" || verb == "exit") return false;
        if (verb == "get") return do_get(words), true;
        if (verb == "set") return do_set(words), true;
        if (verb == "remove") return do_remove(words), true;
        if (verb == "run") return do_run(), true;
        if (verb == "cancel") return do_cancel(), true;
        if (verb == "source") {
            if (words.size() != 2) {
                error("usage: source <file>");
                return true;
            }
            std::ifstream file(words[1]);
            if (!file) {
                error("cannot open " + words[1]);
                return true;
            }
            std::string line;
            while (std::getline(file, line))
                if (!handle_line(line)) return false;
            return true;
        }
        error("unknown command '" + verb + "'");
        usage();
        return true;
    }

    void do_get(const std::vector<std::string>& words) {
        if (words.size() < 2) {
            error("usage: get domain|problem|model|plan|performers");
            return;
        }
        const std::string& what = words[1];
        const auto snap = kb_.snapshot();
        if (what == "domain") {
            out_ << pddl::print_domain(kb_.domain());
        } else if (what == "problem") {
            const std::string section = words.size() > 2 ? words[2] : "";
            if (section.empty() || section == "instances")
                for (const auto& [obj, type] : snap.instances)
                    out_ << obj.str() << " - " << type.str() << "\n";
            if (section.empty() || section == "predicates")
                for (const auto& atom : snap.atoms) out_ << pddl::print_ground_atom(atom) << "\n";
            if (section.empty() || section == "functions")
                for (const auto& [fl, v] : snap.fluents)
                    out_ << "(= " << pddl::print_ground_fluent(fl) << " "
                         << pddl::format_number(v) << ")\n";
            if (section.empty() || section == "goals")
                out_ << pddl::print_condition(snap.goal) << "\n";
        } else if (what == "model") {
            if (words.size() != 4) {
                error("usage: get model action|predicate <name>");
                return;
            }
            if (words[2] == "action") {
                const auto* a = kb_.domain().find_action(pddl::ActionName(words[3]));
                if (!a) {
                    error("unknown action '" + words[3] + "'");
                    return;
                }
                out_ << pddl::print_action(*a) << "\n";
            } else if (words[2] == "predicate") {
                const auto* p = kb_.domain().find_predicate(pddl::PredicateName(words[3]));
                if (!p) {
                    error("unknown predicate '" + words[3] + "'");
                    return;
                }
                out_ << pddl::print_predicate_def(*p) << "\n";
            } else {
                error("usage: get model action|predicate <name>");
            }
        } else if (what == "plan") {
            const auto plan = planner::solve(kb_.domain(), snap);
            if (!plan)
                out_ << "no plan found\n";
            else if (plan->empty())
                out_ << "empty plan\n";
            else
                out_ << planner::print_plan(*plan);
        } else if (what == "performers") {
            for (const auto& p : performers_)
                out_ << p->spec().performer_id << " " << p->spec().action.str() << " "
                     << auction::to_string(p->state()) << "\n";
        } else {
            error("unknown get target '" + what + "'");
        }
    }

    void do_set(const std::vector<std::string>& words) {
        if (words.size() < 2) {
            error("usage: set instance|predicate|function|goal ...");
            return;
        }
        const std::string& what = words[1];
        if (what == "instance") {
            if (words.size() != 4) {
                error("usage: set instance <name> <type>");
                return;
            }
            kb_.add_instance(pddl::ObjectName(words[2]), pddl::TypeName(words[3]));
        } else if (what == "predicate") {
            kb_.add_atom(pddl::parse_ground_atom_text(rest_of(words, 2)));
        } else if (what == "function") {
            auto [fluent, value] = pddl::parse_ground_fluent_text(rest_of(words, 2), true);
            kb_.set_fluent(fluent, value);
        } else if (what == "goal") {
            kb_.set_goal(pddl::parse_condition_text(rest_of(words, 2)));
        } else {
            error("unknown set target '" + what + "'");
        }
    }

    void do_remove(const std::vector<std::string>& words) {
        if (words.size() < 2) {
            error("usage: remove instance|predicate|function|goal ...");
            return;
        }
        const std::string& what = words[1];
        if (what == "instance") {
            if (words.size() != 3) {
                error("usage: remove instance <name>");
                return;
            }
            kb_.remove_instance(pddl::ObjectName(words[2]));
        } else if (what == "predicate") {
            if (!kb_.remove_atom(pddl::parse_ground_atom_text(rest_of(words, 2))))
                out_ << "not present\n";
        } else if (what == "function") {
            auto [fluent, _] = pddl::parse_ground_fluent_text(rest_of(words, 2), false);
            if (!kb_.remove_fluent(fluent)) out_ << "not present\n";
        } else if (what == "goal") {
            kb_.clear_goal();
        } else {
            error("unknown remove target '" + what + "'");
        }
    }

    void do_run() {
        monitoring_ = true;
        last_seen_.clear();
        try {
            exec_->execute_goal();
        } catch (const std::exception& e) {
            monitoring_ = false;
            error(e.what());
            return;
        }
        clock_.run_while_pending([this] { return !exec_->running(); });
        monitoring_ = false;
        const auto status = exec_->status();
        if (status.state == RunState::Succeeded)
            out_ << "SUCCESS\n";
        else
            out_ << "FAILURE: " << (status.failure_reason.empty() ? "unknown" : status.failure_reason)
                 << "\n";
        if (status.state != RunState::Succeeded) ++errors_;
    }

    void do_cancel() {
        if (!exec_->cancel()) out_ << "no plan executing\n";
    }

    std::ostream& out_;
    TerminalOptions opt_;
    VirtualClock clock_;
    auction::InProcessHub hub_;
    kb::KnowledgeBase kb_;
    std::unique_ptr<executor::Executor> exec_;
    std::vector<std::unique_ptr<auction::ActionPerformer>> performers_;
    bool monitoring_ = false;
    std::vector<std::pair<bt::Phase, double>> last_seen_;
    int errors_ = 0;
};

int run_shell(std::istream& in, std::ostream& out, const TerminalOptions& options,
              const std::vector<std::string>& domain_texts,
              const std::optional<std::string>& problem_text) {
    if (domain_texts.empty()) {
        out << "ERROR: no domain loaded (pass at least one domain file)\n";
        return 2;
    }
    pddl::Domain domain;
    std::optional<pddl::Problem> problem;
    try {
        std::vector<pddl::Domain> domains;
        for (const auto& text : domain_texts) domains.push_back(pddl::parse_domain(text));
        domain = pddl::merge_domains(domains);
        if (problem_text) problem = pddl::parse_problem(*problem_text, domain);
    } catch (const std::exception& e) {
        out << "ERROR: " << e.what() << "\n";
        return 2;
    }

    Shell shell(out, options, std::move(domain), std::move(problem));
    if (!options.commands.empty()) {
        for (const auto& c : options.commands)
            if (!shell.handle_line(c)) break;
        return shell.run_result();
    }
    if (options.script) {
        std::ifstream file(*options.script);
        if (!file) {
            out << "ERROR: cannot open script " << *options.script << "\n";
            return 2;
        }
        std::string line;
        while (std::getline(file, line))
            if (!shell.handle_line(line)) break;
        return shell.run_result();
    }
    return shell.run(in);
}

}  // namespace

int repl(std::istream& in, std::ostream& out, const TerminalOptions& options) {
    std::vector<std::string> domain_texts;
    for (const auto& path : options.domain_files) {
        std::ifstream file(path);
        if (!file) {
            out << "ERROR: cannot open domain " << path << "\n";
            return 2;
        }
        domain_texts.emplace_back(std::istreambuf_iterator<char>(file),
                                  std::istreambuf_iterator<char>());
    }
    std::optional<std::string> problem_text;
    if (options.problem_file) {
        std::ifstream file(*options.problem_file);
        if (!file) {
            out << "ERROR: cannot open problem " << *options.problem_file << "\n";
            return 2;
        }
        problem_text.emplace(std::istreambuf_iterator<char>(file),
                             std::istreambuf_iterator<char>());
    }
    return run_shell(in, out, options, domain_texts, problem_text);
}

int repl_with_sources(std::istream& in, std::ostream& out, const TerminalOptions& options,
                      const std::vector<std::string>& domain_texts,
                      const std::optional<std::string>& problem_text) {
    return run_shell(in, out, options, domain_texts, problem_text);
}

}  // namespace planexec::terminal
