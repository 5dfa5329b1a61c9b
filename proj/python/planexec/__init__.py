"""PDDL 2.1 planning and execution stack.

Parser, baseline solver, plan dependency graphs, behavior-tree execution,
the action-auction protocol codec and the kitchen experiment harness.
"""

from planexec._core import (  # noqa: F401
    CodecError,
    Domain,
    EvaluationError,
    GraphError,
    KnowledgeBase,
    Metrics,
    ParseError,
    Plan,
    PlanGraph,
    PlanItem,
    Problem,
    SimConfig,
    SolverError,
    ValidationError,
    build_graph,
    decode_message,
    encode_message,
    export_metrics,
    fixtures,
    merge_domains,
    parse_domain,
    parse_plan_file,
    parse_problem,
    print_domain,
    print_plan,
    print_problem,
    run_experiment,
    run_shell,
    solve,
    validate_plan,
)

__all__ = [
    "CodecError",
    "Domain",
    "EvaluationError",
    "GraphError",
    "KnowledgeBase",
    "Metrics",
    "ParseError",
    "Plan",
    "PlanGraph",
    "PlanItem",
    "Problem",
    "SimConfig",
    "SolverError",
    "ValidationError",
    "build_graph",
    "decode_message",
    "encode_message",
    "export_metrics",
    "fixtures",
    "merge_domains",
    "parse_domain",
    "parse_plan_file",
    "parse_problem",
    "print_domain",
    "print_plan",
    "print_problem",
    "run_experiment",
    "run_shell",
    "solve",
    "validate_plan",
]

__version__ = "0.1.0"
