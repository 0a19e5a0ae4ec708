from .parser import (
    ProblemFile,
    parse,
    parse_expression,
    parse_form,
)
from .runner import Report, run_check, reproduce, bundled_fixture_names

__all__ = [
    "ProblemFile",
    "parse",
    "parse_expression",
    "parse_form",
    "Report",
    "run_check",
    "reproduce",
    "bundled_fixture_names",
]
