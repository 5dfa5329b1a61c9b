#pragma once

#include <stdexcept>
#include <string>

namespace planexec {

/// Lexical or semantic error in PDDL or plan-file input. Carries the
/// 1-based source position when known (0 = unknown).
class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, int line = 0, int column = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ":" +
                                            std::to_string(column) + ": " + message
                                      : message),
          line_(line),
          column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

/// A value failed validation against the domain (unknown name, arity or
/// type mismatch, referenced instance, ...).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Condition/effect evaluation failed, e.g. reading an unset fluent.
class EvaluationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Plan solver failure: missing executable, nonzero exit, unparseable
/// output, exhausted node budget. Distinct from the no-plan outcome.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Plan graph construction failure (unsupported condition, cycle).
class GraphError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed wire record or unsupported protocol version.
class CodecError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Transport is down or was shut down.
class TransportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace planexec
