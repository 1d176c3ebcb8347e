"""Explicit payoff formulas, a pattern dispatcher, and a sweep verifier.

The constructors here are built from the function algebra (constants,
absolute values, maxima) and never consult the solver, so comparing them
against :func:`nimscore.solver.payoff` is a genuine cross-check.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from . import plf
from .core import Position, enumerate_positions
from .errors import InvalidInputError
from .plf import PiecewisePayoff, Rational, absolute, add_constant, affine, constant_minus, max_many
from .solver import SolveCache, payoff

TAGS = (
    "Terminal",
    "OnePile",
    "TwoPileOne",
    "TwoPileEqual",
    "TwoPileGeneral",
    "PairStrip",
    "SymmetricPairs",
    "ThreeEqualPair",
    "XY1-i",
    "XY1-ii",
    "XY1-iii",
)


@dataclass(frozen=True)
class FormulaTag:
    name: str
    params: tuple[tuple[str, int], ...] = ()

    def __str__(self) -> str:
        if not self.params:
            return self.name
        return f"{self.name}[{', '.join(f'{k}={v}' for k, v in self.params)}]"


def _one_plus_abs() -> PiecewisePayoff:
    # |1+N|
    return absolute(affine(1, 1))


def one_pile(x: int) -> PiecewisePayoff:
    if x < 1:
        raise InvalidInputError("one_pile needs x >= 1")
    if x == 1:
        return affine(1, 1)
    return add_constant(_one_plus_abs(), x - 1)


def two_pile(x: int, y: int) -> PiecewisePayoff:
    if not x >= y >= 1:
        raise InvalidInputError(f"two_pile needs x >= y >= 1, got ({x},{y})")
    if x == y == 1:
        return affine(0, -1)
    if y == 1:
        return add_constant(absolute(affine(0, 1)), x - 1)
    if x == y:
        return constant_minus(1, _one_plus_abs())
    return add_constant(absolute(constant_minus(1, _one_plus_abs())), x - y)


def strip_pairs_of_ones(p: Position) -> Position:
    ones = p.piles.count(1)
    drop = ones - ones % 2
    if not drop:
        return p
    return Position(p.piles[: len(p.piles) - drop])


def symmetric_pairs(p: Position) -> PiecewisePayoff | None:
    counts = Counter(p.piles)
    if not p.piles or any(c % 2 for c in counts.values()) or max(p.piles) < 2:
        return None
    return constant_minus(1, _one_plus_abs())


def greedy_value(p: Position, n: Rational) -> Fraction:
    """Payoff when both sides grab the largest pile, valid for -1 <= N <= 0."""
    n = Fraction(n)
    if not -1 <= n <= 0:
        raise InvalidInputError(f"greedy formula only holds for -1 <= N <= 0, got {n}")
    if p.is_terminal:
        raise InvalidInputError("greedy formula needs a non-terminal position")
    piles = p.piles
    if len(piles) % 2:
        return sum(piles[0::2]) - sum(piles[1::2]) + n
    return sum(piles[0::2]) - sum(piles[1::2]) - n


def three_equal_pair(x: int, z: int) -> PiecewisePayoff:
    """Payoff of (x, x, z) in any pile order."""
    if x < 1 or z < 1:
        raise InvalidInputError("three_equal_pair needs positive piles")
    if x == z == 1:
        return affine(1, 1)
    return add_constant(_one_plus_abs(), z - 1)


def F(k: int) -> PiecewisePayoff:
    """Zig-zag with value 2 at the even integers -(2k-2)..(2k-2)."""
    if k < 1:
        raise InvalidInputError("F needs k >= 1")
    return max_many(
        constant_minus(2, absolute(affine(-j, 1))) for j in range(-(2 * k - 2), 2 * k - 1, 2)
    )


def xy1(x: int, y: int) -> PiecewisePayoff:
    """Payoff of (x, y, 1) for x > y >= 2."""
    if not x > y >= 2:
        raise InvalidInputError(f"xy1 needs x > y >= 2, got ({x},{y})")
    k = y // 2
    abs_n = absolute(affine(0, 1))
    if y % 2 == 0:
        if x == y + 1:
            return F(k)
        return add_constant(max_many([F(k), add_constant(abs_n, -2 * k)]), x - 2 * k - 1)
    return add_constant(max_many([F(k), add_constant(abs_n, -(2 * k - 2))]), x - 2 * k - 2)


def _xy1_tag(x: int, y: int) -> FormulaTag:
    k = y // 2
    if y % 2 == 0:
        name = "XY1-i" if x == y + 1 else "XY1-ii"
    else:
        name = "XY1-iii"
    return FormulaTag(name, (("x", x), ("y", y), ("k", k)))


def _matches(p: Position) -> list[tuple[PiecewisePayoff, FormulaTag]]:
    """All formulas whose precondition fits ``p`` as given (no stripping)."""
    piles = p.piles
    n = len(piles)
    out = []
    if n == 0:
        out.append((plf.terminal_payoff(), FormulaTag("Terminal")))
    if n == 1:
        out.append((one_pile(piles[0]), FormulaTag("OnePile", (("x", piles[0]),))))
    if n == 2:
        x, y = piles
        if y == 1:
            name = "TwoPileOne"
        elif x == y:
            name = "TwoPileEqual"
        else:
            name = "TwoPileGeneral"
        out.append((two_pile(x, y), FormulaTag(name, (("x", x), ("y", y)))))
    sym = symmetric_pairs(p)
    if sym is not None:
        out.append((sym, FormulaTag("SymmetricPairs")))
    if n == 3:
        a, b, c = piles
        if a == b or b == c:
            x, z = (a, c) if a == b else (b, a)
            out.append((three_equal_pair(x, z), FormulaTag("ThreeEqualPair", (("x", x), ("z", z)))))
        if c == 1 and a > b >= 2:
            out.append((xy1(a, b), _xy1_tag(a, b)))
    return out


def dispatch(p: Position) -> tuple[PiecewisePayoff, FormulaTag] | None:
    """The first matching closed form after removing pairs of 1-piles.

    Order: terminal, one pile, two piles, symmetric pairs, (x,x,z) in any
    order, then (x,y,1) with x > y >= 2. Returns ``None`` when the position
    has no known closed form.
    """
    stripped = strip_pairs_of_ones(p)
    found = _matches(stripped)
    if not found:
        return None
    f, tag = found[0]
    if stripped != p:
        tag = FormulaTag(tag.name, tag.params + (("stripped_pairs", (len(p) - len(stripped)) // 2),))
    return f, tag


def applicable_formulas(p: Position) -> list[tuple[PiecewisePayoff, FormulaTag]]:
    """Every formula that applies to ``p`` or to ``p`` with 1-pairs removed.

    Overlapping patterns all appear here so a sweep can check that they agree.
    """
    stripped = strip_pairs_of_ones(p)
    seen = set()
    out = []
    for f, tag in _matches(stripped) + (_matches(p) if stripped != p else []):
        if tag.name not in seen:
            seen.add(tag.name)
            out.append((f, tag))
    return out


@dataclass
class VerificationReport:
    max_total: int
    positions_checked: int = 0
    tag_counts: dict[str, int] = field(default_factory=dict)
    mismatches: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_dict(self) -> dict:
        return {
            "max_total": self.max_total,
            "positions_checked": self.positions_checked,
            "tags": dict(sorted(self.tag_counts.items())),
            "mismatches": self.mismatches,
        }

    def summary(self) -> str:
        lines = [f"closed forms, |p| <= {self.max_total}: {self.positions_checked} positions"]
        for name, count in sorted(self.tag_counts.items()):
            lines.append(f"  {name:<15} {count}")
        lines.append(f"{len(self.mismatches)} mismatches")
        return "\n".join(lines)


def verify_closed_forms(max_total: int, cache: SolveCache | None = None) -> VerificationReport:
    """Compare every applicable formula against the solver for ``1 <= |p| <= max_total``."""
    report = VerificationReport(max_total)
    counts: Counter[str] = Counter()
    for p in enumerate_positions(max_total, min_total=1):
        formulas = applicable_formulas(p)
        stripped = strip_pairs_of_ones(p)
        if not formulas and stripped == p:
            continue
        report.positions_checked += 1
        exact = payoff(p, cache)
        if stripped != p:
            counts["PairStrip"] += 1
            if payoff(stripped, cache) != exact:
                report.mismatches.append(
                    {"position": p.text(), "tag": "PairStrip", "detail": f"differs from {stripped.text()}"}
                )
        for f, tag in formulas:
            counts[tag.name] += 1
            if f != exact:
                report.mismatches.append(
                    {
                        "position": p.text(),
                        "tag": str(tag),
                        "expected": plf.to_dict(exact),
                        "formula": plf.to_dict(f),
                    }
                )
    report.tag_counts = dict(counts)
    return report


GREEDY_GRID = tuple(Fraction(k, 4) for k in range(-4, 1))


def verify_greedy(max_total: int, cache: SolveCache | None = None) -> dict:
    """Check the largest-pile formula on ``N in {-1, -3/4, ..., 0}``."""
    from .solver import payoff_at

    checked = 0
    mismatches = []
    for p in enumerate_positions(max_total, min_total=1):
        for n in GREEDY_GRID:
            checked += 1
            want, got = payoff_at(p, n, cache), greedy_value(p, n)
            if want != got:
                mismatches.append(
                    {"position": p.text(), "n": plf.format_rational(n),
                     "solver": plf.format_rational(want), "greedy": plf.format_rational(got)}
                )
    return {"max_total": max_total, "evaluations": checked, "mismatches": mismatches}
