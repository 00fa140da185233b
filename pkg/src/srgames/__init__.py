"""Semiring semantics for first-order logic: evaluation, Ehrenfeucht-Fraisse style
games, characteristic formulas and decision procedures for m-equivalence."""

from .equiv import EquivVerdict, decide_equiv, find_separator
from .games import GameResult, solve_bijection, solve_counting, solve_ef, solve_hom_game, solve_unbounded
from .interp import Interpretation, Vocabulary, load_interpretation, parse_interpretation
from .logic import evaluate, parse_formula, print_formula
from .semiring import INF, parse_semiring

__version__ = "0.1.0"

__all__ = [
    "EquivVerdict", "decide_equiv", "find_separator", "GameResult", "solve_bijection", "solve_counting",
    "solve_ef", "solve_hom_game", "solve_unbounded", "Interpretation", "Vocabulary", "load_interpretation",
    "parse_interpretation", "evaluate", "parse_formula", "print_formula", "INF", "parse_semiring",
]
