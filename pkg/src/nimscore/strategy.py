"""Optimal moves, optimal play lines, and how the best move depends on N."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import plf
from .core import DisplayPosition, Move, Position, distinct_children, legal_moves
from .errors import InternalError, InvalidInputError
from .plf import PiecewisePayoff, Rational
from .solver import SolveCache, payoff

FIRST = "First"
SECOND = "Second"


@dataclass(frozen=True)
class MoveChoice:
    """An optimal child with every (pile, take) that reaches it."""

    child: Position
    moves: tuple[Move, ...]

    @property
    def move(self) -> Move:
        return self.moves[0]


def _is_infinite(n) -> bool:
    return isinstance(n, float) and math.isinf(n)


def candidate_functions(p: Position, cache: SolveCache | None = None):
    """``(move, child, N -> stones taken - f_N(child))`` per distinct child."""
    total = p.total
    return [
        (m, c, plf.constant_minus(total - c.total, payoff(c, cache)))
        for m, c in distinct_children(p)
    ]


def optimal_moves(p: Position, n, cache: SolveCache | None = None) -> list[MoveChoice]:
    """Children attaining the maximum at bonus ``n``.

    ``n`` may be a rational or ``float('inf')``/``-inf``; the infinite cases
    are decided by comparing tails, not by arithmetic on infinity.
    """
    if p.is_terminal:
        raise InvalidInputError("no moves from the terminal position")
    f = payoff(p, cache)
    best = set()
    for _, c, g in candidate_functions(p, cache):
        if _is_infinite(n):
            if _tail_equal(g, f, "right" if n > 0 else "left"):
                best.add(c)
        elif plf.evaluate(g, n) == plf.evaluate(f, n):
            best.add(c)
    if not best:
        raise InternalError(f"no move attains the payoff of {p} at N={n}")
    grouped: dict[Position, list[Move]] = {}
    for m, c in legal_moves(p):
        if c in best:
            grouped.setdefault(c, []).append(m)
    return [MoveChoice(c, tuple(ms)) for c, ms in sorted(grouped.items(), key=lambda kv: kv[0].piles)]


def _tail_equal(g: PiecewisePayoff, f: PiecewisePayoff, side: str) -> bool:
    if side == "right":
        m = max(g.hi, f.hi)
        return g.right_slope == f.right_slope and g.at(m) == f.at(m)
    m = min(g.lo, f.lo)
    return g.left_slope == f.left_slope and g.at(m) == f.at(m)


@dataclass(frozen=True)
class PlayLine:
    """One optimal game from a start position to the end."""

    n: Fraction
    positions: tuple[DisplayPosition, ...]
    moves: tuple[tuple[int, int], ...]  # (display pile index, take)
    movers: tuple[str, ...]
    first_score: Fraction
    second_score: Fraction

    @property
    def payoff(self) -> Fraction:
        return self.first_score - self.second_score

    @property
    def last_taker(self) -> str | None:
        return self.movers[-1] if self.movers else None

    @property
    def canonical(self) -> tuple[Position, ...]:
        return tuple(q.canonical() for q in self.positions)


def choose_move(q: DisplayPosition, n: Rational, cache: SolveCache | None = None) -> tuple[int, int]:
    """Deterministic optimal move in display coordinates.

    Ties go to the lexicographically smallest canonical child, then the
    smallest pile index, then the smallest take.
    """
    best_key, best = None, None
    for i, take, child in q.moves():
        c = child.canonical()
        value = take - plf.evaluate(payoff(c, cache), n)
        key = (-value, c.piles, i, take)
        if best_key is None or key < best_key:
            best_key, best = key, (i, take)
    if best is None:
        raise InvalidInputError("no moves from the terminal position")
    return best


def best_line(p, n: Rational, cache: SolveCache | None = None) -> PlayLine:
    """Both players follow :func:`choose_move` until the piles are empty.

    ``p`` may be a :class:`Position` or a :class:`DisplayPosition`; the line
    is reported in the latter's pile order.
    """
    q = p if isinstance(p, DisplayPosition) else DisplayPosition(p.piles)
    n = Fraction(n)
    positions = [q]
    moves, movers = [], []
    scores = [Fraction(0), Fraction(0)]
    turn = 0
    while q.canonical().piles:
        i, take = choose_move(q, n, cache)
        q = q.apply(i, take)
        scores[turn] += take
        positions.append(q)
        moves.append((i, take))
        movers.append(FIRST if turn == 0 else SECOND)
        turn ^= 1
    # the player who did not move last is 'turn'; the other took the last stone
    scores[turn ^ 1] += n
    return PlayLine(n, tuple(positions), tuple(moves), tuple(movers), scores[0], scores[1])


def who_takes_last(p: Position, n, cache: SolveCache | None = None) -> str:
    """Which player takes the last stone under optimal play at non-integer N."""
    if p.is_terminal:
        raise InvalidInputError("nobody moves from the terminal position")
    f = payoff(p, cache)
    if _is_infinite(n):
        slope = f.right_slope if n > 0 else -f.left_slope
        return FIRST if slope == 1 else SECOND
    n = Fraction(n)
    if n.denominator == 1:
        raise InvalidInputError("who takes the last stone can be ambiguous at integer N")
    who = FIRST if plf.slope_at(f, n) == 1 else SECOND
    line = best_line(p, n, cache)
    if line.last_taker != who:
        raise InternalError(f"slope says {who} takes the last stone but optimal play says {line.last_taker}")
    return who


@dataclass(frozen=True)
class Region:
    """A piece of the N-axis; ``None`` bounds mean infinite."""

    lower: int | None
    upper: int | None
    lower_closed: bool
    upper_closed: bool
    moves: tuple[Position, ...]

    def contains(self, n: Rational) -> bool:
        if self.lower is not None and (n < self.lower or (n == self.lower and not self.lower_closed)):
            return False
        if self.upper is not None and (n > self.upper or (n == self.upper and not self.upper_closed)):
            return False
        return True

    def midpoint(self) -> Fraction:
        if self.lower is None and self.upper is None:
            return Fraction(0)
        if self.lower is None:
            return Fraction(self.upper) - Fraction(1, 2)
        if self.upper is None:
            return Fraction(self.lower) + Fraction(1, 2)
        return Fraction(self.lower + self.upper, 2)


@dataclass(frozen=True)
class StrategyProfile:
    """How the set of optimal first moves varies with N.

    ``regions`` partition the real line exactly (points and open pieces).
    ``table`` is the closed-interval view used in tables: maximal
    positive-length stretches with their optimal moves, adjacent rows
    sharing endpoints. ``attainment`` maps each child to the closed
    intervals on which moving there is optimal.
    """

    position: Position
    regions: tuple[Region, ...]
    table: tuple[tuple[int | None, int | None, tuple[Position, ...]], ...]
    attainment: dict[Position, tuple[tuple[int | None, int | None], ...]]
    representatives: dict[Position, Move]


def strategy_intervals(p: Position, cache: SolveCache | None = None) -> StrategyProfile:
    if p.is_terminal:
        raise InvalidInputError("no moves from the terminal position")
    f = payoff(p, cache)
    cands = candidate_functions(p, cache)
    lo = min([f.lo] + [g.lo for _, _, g in cands]) - 1
    hi = max([f.hi] + [g.hi for _, _, g in cands]) + 1
    half = Fraction(1, 2)

    def argmax(n) -> tuple[Position, ...]:
        target = plf.evaluate(f, n)
        return tuple(c for _, c, g in cands if plf.evaluate(g, n) == target)

    # Elementary pieces in order: ("open", a, b) or ("point", n, n).
    # Every candidate is affine beyond [lo, hi], so one probe per tail suffices.
    pieces = [("open", None, lo, argmax(lo - half))]
    for n in range(lo, hi + 1):
        pieces.append(("point", n, n, argmax(n)))
        if n < hi:
            pieces.append(("open", n, n + 1, argmax(n + half)))
    pieces.append(("open", hi, None, argmax(hi + half)))

    regions: list[Region] = []
    for kind, a, b, moves in pieces:
        closed = kind == "point"
        if regions and regions[-1].moves == moves:
            last = regions[-1]
            regions[-1] = Region(last.lower, b, last.lower_closed, closed, moves)
        else:
            regions.append(Region(a, b, closed, closed, moves))

    table: list[list] = []
    for kind, a, b, moves in pieces:
        if kind != "open":
            continue
        if table and table[-1][2] == moves:
            table[-1][1] = b
        else:
            table.append([a, b, moves])

    attainment: dict[Position, list[list]] = {}
    for _, c, _ in cands:
        runs: list[list] = []
        prev_in = False
        for kind, a, b, moves in pieces:
            inside = c in moves
            if inside and prev_in:
                runs[-1][1] = b
            elif inside:
                runs.append([a, b])
            prev_in = inside
        if runs:
            attainment[c] = runs

    return StrategyProfile(
        position=p,
        regions=tuple(regions),
        table=tuple((a, b, m) for a, b, m in table),
        attainment={c: tuple((a, b) for a, b in runs) for c, runs in attainment.items()},
        representatives={c: m for m, c, _ in cands},
    )
