"""Exact solver and analysis toolkit for Scoring Nim.

Scoring Nim is Nim where each stone taken scores one point and taking the
last stone scores an extra bonus N. The payoff of a position, as a
function of N, is computed exactly for all N at once.
"""

from .core import DisplayPosition, Move, Position, apply_move, canonicalize, in_P_minus, in_P_plus, legal_moves, nim_sum
from .plf import PiecewisePayoff, breakpoints, evaluate, extremum_on, max_many
from .solver import SolveCache, asymptotics, brute_force_payoff, payoff, payoff_at

__all__ = [
    "DisplayPosition",
    "Move",
    "PiecewisePayoff",
    "Position",
    "SolveCache",
    "apply_move",
    "asymptotics",
    "breakpoints",
    "brute_force_payoff",
    "canonicalize",
    "evaluate",
    "extremum_on",
    "in_P_minus",
    "in_P_plus",
    "legal_moves",
    "max_many",
    "nim_sum",
    "payoff",
    "payoff_at",
]

__version__ = "0.1.0"
