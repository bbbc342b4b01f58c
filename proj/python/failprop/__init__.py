"""Bounded model checker for dataflow architectures with failure-mode
propagation: parse .fprop models, solve propagation constraints, check
assertions, and compute minimal cut sets."""

from ._core import (
    Model,
    ParseError,
    SemanticError,
    __version__,
    baseline_lpv_model,
    check,
    corpus,
    hardened_lpv_model,
    load_model_file,
    minimal_cutsets,
    parse_model,
    run_instance,
    sccs,
    serialize,
    solution_count_is_one,
    solve,
    validate_structure,
)

__all__ = [
    "Model",
    "ParseError",
    "SemanticError",
    "__version__",
    "baseline_lpv_model",
    "check",
    "corpus",
    "hardened_lpv_model",
    "load_model_file",
    "minimal_cutsets",
    "parse_model",
    "run_instance",
    "sccs",
    "serialize",
    "solution_count_is_one",
    "solve",
    "validate_structure",
]
