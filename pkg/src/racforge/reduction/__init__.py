"""3-SAT to straight-line RAC drawing reduction."""
from .cnf import Assignment, CnfFormula, all_satisfying, parse_dimacs, satisfies
from .gadgets import GadgetLabels, compile_formula, extract_assignment, synthesize_drawing

compile = compile_formula  # noqa: A001 - public name used by the CLI and docs

__all__ = [
    "Assignment", "CnfFormula", "GadgetLabels", "all_satisfying", "compile", "compile_formula",
    "extract_assignment", "parse_dimacs", "satisfies", "synthesize_drawing",
]
