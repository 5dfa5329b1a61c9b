#include <CLI11.hpp>

#include <iostream>

#include "planexec/terminal.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Interactive shell for knowledge management and plan execution"};

    planexec::terminal::TerminalOptions opt;
    std::string problem, script;

    app.add_option("--domain", opt.domain_files, "PDDL domain file (repeat to merge)")
        ->required()
        ->check(CLI::ExistingFile);
    app.add_option("--problem", problem, "PDDL problem file")->check(CLI::ExistingFile);
    app.add_option("--script", script, "Run commands from this file and exit");
    app.add_option("--command", opt.commands, "Run this command and exit (repeatable)");
    app.add_option("--seed", opt.seed, "Random seed")->capture_default_str();
    app.add_flag("--no-prompt,!--prompt", [&](std::int64_t) { opt.interactive_prompt = false; },
                 "Suppress the interactive prompt");
    bool no_performers = false;
    app.add_flag("--no-auto-performers", no_performers,
                 "Do not register built-in simulated performers");

    CLI11_PARSE(app, argc, argv);
    if (!problem.empty()) opt.problem_file = problem;
    if (!script.empty()) opt.script = script;
    if (no_performers) opt.auto_performers = false;
    if (opt.script || !opt.commands.empty()) opt.interactive_prompt = false;

    return planexec::terminal::repl(std::cin, std::cout, opt);
}
