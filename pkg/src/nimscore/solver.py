"""Exact payoff functions via memoized recursion over canonical positions.

The memo key is the position alone: each entry is the whole payoff
function of N, so a single solve answers every bonus value.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

from . import plf
from .core import Position, distinct_children, enumerate_positions, in_P_minus, in_P_plus
from .errors import CacheFormatError, InternalError, OracleBoundError, PayoffFormatError, ResourceLimitError
from .plf import PiecewisePayoff, Rational

DEFAULT_MAX_POSITIONS = 5_000_000
DEFAULT_ORACLE_MAX_TOTAL = 24
CACHE_HEADER = "nimscore-cache v1"


@dataclass
class SolveCache:
    """Memo of solved positions. Safe to share between threads."""

    max_positions: int = DEFAULT_MAX_POSITIONS
    entries: dict[Position, PiecewisePayoff] = field(default_factory=dict)
    hits: int = 0
    misses: int = 0
    _lock: threading.RLock = field(default_factory=threading.RLock, repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, p: Position) -> bool:
        return p in self.entries

    def stats(self) -> dict:
        return {"entries": len(self.entries), "hits": self.hits, "misses": self.misses}


_default_cache = SolveCache()


def default_cache() -> SolveCache:
    return _default_cache


def payoff(p: Position, cache: SolveCache | None = None) -> PiecewisePayoff:
    """The exact payoff function of ``p`` for every real N."""
    cache = _default_cache if cache is None else cache
    with cache._lock:
        hit = cache.entries.get(p)
        if hit is not None:
            cache.hits += 1
            return hit
        cache.misses += 1
        # Iterative post-order walk: single piles can be deep.
        stack = [p]
        while stack:
            q = stack[-1]
            if q in cache.entries:
                stack.pop()
                continue
            children = distinct_children(q)
            pending = [c for _, c in children if c not in cache.entries]
            if pending:
                stack.extend(pending)
                continue
            stack.pop()
            if len(cache.entries) >= cache.max_positions:
                raise ResourceLimitError(
                    f"solving {p} needs more than {cache.max_positions} cached positions"
                )
            cache.entries[q] = _solve_one(q, children, cache.entries)
        return cache.entries[p]


def _solve_one(q: Position, children, table) -> PiecewisePayoff:
    if q.is_terminal:
        return plf.terminal_payoff()
    total = q.total
    return plf.max_of_differences((total - c.total, table[c]) for _, c in children)


def payoff_at(p: Position, n: Rational, cache: SolveCache | None = None) -> Fraction:
    return plf.evaluate(payoff(p, cache), n)


def brute_force_payoff(p: Position, n: Rational, max_total: int = DEFAULT_ORACLE_MAX_TOTAL) -> Fraction:
    """Plain minimax at one fixed N; shares nothing with :func:`payoff`.

    Used as a verification oracle, so it is deliberately naive.
    """
    piles = tuple(sorted((x for x in p.piles if x), reverse=True))
    if sum(piles) > max_total:
        raise OracleBoundError(f"oracle limited to {max_total} stones, got {sum(piles)}")
    return _minimax(piles, Fraction(n))


@lru_cache(maxsize=1 << 20)
def _minimax(piles: tuple[int, ...], n: Fraction) -> Fraction:
    if not piles:
        return -n
    best = None
    for i, size in enumerate(piles):
        for take in range(1, size + 1):
            rest = list(piles)
            rest[i] -= take
            child = tuple(sorted((x for x in rest if x), reverse=True))
            v = take - _minimax(child, n)
            if best is None or v > best:
                best = v
    return best


@dataclass(frozen=True)
class Asymptotics:
    """Affine tails of a payoff for large |N|.

    For ``N >= right_threshold`` the payoff is ``c_plus - N`` when the
    position is a normal-play P-position, else ``c_plus + N``; on the left
    (``N <= left_threshold``) it is ``c_minus + N`` for misère P-positions,
    else ``c_minus - N``.
    """

    c_plus: int
    in_P_plus: bool
    c_minus: int
    in_P_minus: bool
    right_threshold: int
    left_threshold: int
    window: tuple[int, int]

    def right_formula(self) -> str:
        return _affine_text(self.c_plus, -1 if self.in_P_plus else 1)

    def left_formula(self) -> str:
        return _affine_text(self.c_minus, 1 if self.in_P_minus else -1)


def _affine_text(c: int, slope: int) -> str:
    lead = "N" if slope == 1 else "-N"
    return f"{lead}{c:+d}" if c else lead


def asymptotics(p: Position, cache: SolveCache | None = None) -> Asymptotics:
    if p.is_terminal:
        raise ValueError("asymptotics need a non-terminal position")
    f = payoff(p, cache)
    total = p.total
    plus, minus = in_P_plus(p), in_P_minus(p)
    if (f.right_slope == -1) != plus:
        raise InternalError(f"right tail slope {f.right_slope} contradicts P+ membership of {p}")
    if (f.left_slope == 1) != minus:
        raise InternalError(f"left tail slope {f.left_slope} contradicts P- membership of {p}")
    c_plus = f.at(total) + total if plus else f.at(total) - total
    c_minus = f.at(-total) + total if minus else f.at(-total) - total
    return Asymptotics(
        c_plus=c_plus,
        in_P_plus=plus,
        c_minus=c_minus,
        in_P_minus=minus,
        right_threshold=total - 2,
        left_threshold=-total,
        window=(f.lo, f.hi),
    )


def save_cache(cache: SolveCache, path: str | Path) -> None:
    with cache._lock:
        items = sorted(cache.entries.items(), key=lambda kv: kv[0].sort_key())
    lines = [CACHE_HEADER] + [f"{p.text()}\t{plf.to_json(f)}" for p, f in items]
    Path(path).write_text("\n".join(lines) + "\n")


def load_cache(path: str | Path, max_positions: int = DEFAULT_MAX_POSITIONS) -> SolveCache:
    cache = SolveCache(max_positions=max_positions)
    text = Path(path).read_text()
    if not text.strip():
        return cache
    lines = text.splitlines()
    if lines[0].strip() != CACHE_HEADER:
        raise CacheFormatError(f"unsupported cache header {lines[0]!r}, expected {CACHE_HEADER!r}", 1)
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        pos_text, sep, payload = line.partition("\t")
        if not sep:
            raise CacheFormatError("expected <position>TAB<payoff json>", lineno)
        try:
            p = Position.parse(pos_text)
            f = plf.from_json(payload)
        except (PayoffFormatError, ValueError) as e:
            raise CacheFormatError(str(e), lineno) from None
        if (f.parity() - p.total) % 2:
            raise CacheFormatError(f"payoff parity does not match {p}", lineno)
        cache.entries[p] = f
    return cache


def oracle_grid(p: Position) -> list[Fraction]:
    """Half-integers in ``[-2|p|, 2|p|]``."""
    t = p.total
    return [Fraction(k, 2) for k in range(-4 * t, 4 * t + 1)]


def verify_oracle(max_total: int, cache: SolveCache | None = None) -> dict:
    """Compare :func:`payoff_at` with the minimax oracle for ``1 <= |p| <= max_total``."""
    checked = 0
    mismatches = []
    for p in enumerate_positions(max_total, min_total=1):
        f = payoff(p, cache)
        for n in oracle_grid(p):
            checked += 1
            fast, slow = plf.evaluate(f, n), brute_force_payoff(p, n, max_total=max(max_total, DEFAULT_ORACLE_MAX_TOTAL))
            if fast != slow:
                mismatches.append(
                    {"position": p.text(), "n": plf.format_rational(n),
                     "solver": plf.format_rational(fast), "oracle": plf.format_rational(slow)}
                )
    return {"max_total": max_total, "evaluations": checked, "mismatches": mismatches}
