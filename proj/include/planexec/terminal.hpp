#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace planexec::terminal {

struct TerminalOptions {
    std::vector<std::string> domain_files;  // merged in order
    std::optional<std::string> problem_file;
    std::optional<std::string> script;      // run commands from a file, then exit
    std::vector<std::string> commands;      // run these commands, then exit
    std::uint64_t seed = 0;
    bool interactive_prompt = true;         // print "> " prompts
    /// Auto-register one simulated performer per domain action (durations from
    /// the action declarations, virtual clock).
    bool auto_performers = true;
};

/// Line-oriented operator shell over a live knowledge base, planner and
/// executor. Returns the process exit code: 0 on clean quit/EOF, nonzero
/// when a script command failed.
int repl(std::istream& in, std::ostream& out, const TerminalOptions& options);

/// Parses domain/problem texts instead of files (testing convenience).
int repl_with_sources(std::istream& in, std::ostream& out, const TerminalOptions& options,
                      const std::vector<std::string>& domain_texts,
                      const std::optional<std::string>& problem_text);

}  // namespace planexec::terminal
