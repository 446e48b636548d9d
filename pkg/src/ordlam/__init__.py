"""Lambda-calculus engine built on an occurrence-ordered nameless term
representation with exact environments, plus classical baselines and a
benchmark harness."""

from .machine import (
    apply_value,
    evaluate,
    normalize_by_evaluation,
    print_value,
    whnf,
)
from .named import FuelExhausted, alpha_eq, normalize, parse_surface, print_surface
from .ordered import parse_closed, to_ordered

__version__ = "0.1.0"

__all__ = [
    "FuelExhausted",
    "alpha_eq",
    "apply_value",
    "evaluate",
    "normalize",
    "normalize_by_evaluation",
    "parse_closed",
    "parse_surface",
    "print_surface",
    "print_value",
    "to_ordered",
    "whnf",
]
