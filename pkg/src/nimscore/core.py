"""Positions, moves, Nim-sum and P-position sets."""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from operator import xor
from typing import Iterable, Iterator

from .errors import IllegalMoveError, InvalidInputError

MAX_PILE = 2**32 - 1
MAX_PILES = 64


@dataclass(frozen=True, order=True)
class Position:
    """Canonical game state: nonzero piles in non-increasing order.

    Build instances with :func:`canonicalize` (or :meth:`parse`); the
    constructor trusts its input.
    """

    piles: tuple[int, ...] = ()

    @property
    def total(self) -> int:
        return sum(self.piles)

    @property
    def is_terminal(self) -> bool:
        return not self.piles

    def __len__(self) -> int:
        return len(self.piles)

    def __iter__(self) -> Iterator[int]:
        return iter(self.piles)

    def __str__(self) -> str:
        return format_piles(self.piles)

    def text(self) -> str:
        """Plain ``5,4,2`` form; the terminal position renders as ``0``."""
        return ",".join(map(str, self.piles)) or "0"

    @classmethod
    def parse(cls, text: str) -> Position:
        return canonicalize(parse_piles(text))

    def sort_key(self) -> tuple:
        return (self.total, self.piles)


@dataclass(frozen=True)
class Move:
    pile_index: int
    take: int


def format_piles(piles: Iterable[int]) -> str:
    return "(" + ",".join(map(str, piles)) + ")"


def parse_piles(text: str) -> list[int]:
    """Parse ``5,4,2`` (optionally parenthesized) into a list of ints."""
    body = text.strip()
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
    if not body.strip():
        return []
    out = []
    for i, tok in enumerate(body.split(",")):
        tok = tok.strip()
        try:
            out.append(int(tok))
        except ValueError:
            raise InvalidInputError(f"bad pile size {tok!r} at entry {i} of {text!r}") from None
    return out


def canonicalize(raw: Iterable[int]) -> Position:
    raw = list(raw)
    if len(raw) > MAX_PILES:
        raise InvalidInputError(f"at most {MAX_PILES} piles supported, got {len(raw)}")
    for x in raw:
        if isinstance(x, bool) or not isinstance(x, int):
            raise InvalidInputError(f"pile sizes must be integers, got {x!r}")
        if x < 0:
            raise InvalidInputError(f"negative pile size {x}")
        if x > MAX_PILE:
            raise InvalidInputError(f"pile size {x} exceeds {MAX_PILE}")
    return Position(tuple(sorted((x for x in raw if x), reverse=True)))


def apply_move(p: Position, m: Move) -> Position:
    if not 0 <= m.pile_index < len(p.piles):
        raise IllegalMoveError(f"no pile {m.pile_index} in {p}")
    pile = p.piles[m.pile_index]
    if not 1 <= m.take <= pile:
        raise IllegalMoveError(f"cannot take {m.take} from a pile of {pile}")
    piles = list(p.piles)
    piles[m.pile_index] -= m.take
    return canonicalize(piles)


def legal_moves(p: Position) -> list[tuple[Move, Position]]:
    """Every (pile, take) pair, one entry per pair, in index-then-take order."""
    return [
        (Move(i, t), apply_move(p, Move(i, t)))
        for i, size in enumerate(p.piles)
        for t in range(1, size + 1)
    ]


def distinct_children(p: Position) -> list[tuple[Move, Position]]:
    """One representative move per distinct child position.

    The representative is the smallest pile index, then the smallest take.
    Children are returned in ascending lexicographic order.
    """
    seen: dict[tuple[int, ...], Move] = {}
    piles = p.piles
    for i, size in enumerate(piles):
        if i and piles[i - 1] == size:
            continue  # equal piles give the same children; keep the lower index
        for t in range(1, size + 1):
            rest = list(piles)
            rest[i] -= t
            # trusted input: skip validation in canonicalize
            child = tuple(sorted((x for x in rest if x), reverse=True))
            seen.setdefault(child, Move(i, t))
    return [(seen[c], Position(c)) for c in sorted(seen)]


def nim_sum(p: Position) -> int:
    return reduce(xor, p.piles, 0)


def in_P_plus(p: Position) -> bool:
    """Normal-play P-position (mover loses when taking last stone wins)."""
    return nim_sum(p) == 0


def in_P_minus(p: Position) -> bool:
    """Misère-play P-position."""
    if any(x >= 2 for x in p.piles):
        return nim_sum(p) == 0
    return p.total % 2 == 1


@dataclass(frozen=True)
class DisplayPosition:
    """Piles in user-entered order, zeros kept. Used only at I/O boundaries."""

    piles: tuple[int, ...]

    @classmethod
    def parse(cls, text: str) -> DisplayPosition:
        piles = parse_piles(text)
        canonicalize(piles)  # validation only
        return cls(tuple(piles))

    def canonical(self) -> Position:
        return canonicalize(self.piles)

    def __str__(self) -> str:
        return format_piles(self.piles)

    def to_canonical_index(self, display_index: int) -> int:
        return self._order().index(display_index)

    def to_display_index(self, canonical_index: int) -> int:
        return self._order()[canonical_index]

    def _order(self) -> list[int]:
        # display indices of nonzero piles, arranged in canonical order
        nz = [i for i, x in enumerate(self.piles) if x]
        return sorted(nz, key=lambda i: -self.piles[i])

    def apply(self, display_index: int, take: int) -> DisplayPosition:
        if not 0 <= display_index < len(self.piles):
            raise IllegalMoveError(f"no pile {display_index} in {self}")
        pile = self.piles[display_index]
        if not 1 <= take <= pile:
            raise IllegalMoveError(f"cannot take {take} from a pile of {pile}")
        piles = list(self.piles)
        piles[display_index] -= take
        return DisplayPosition(tuple(piles))

    def moves(self) -> list[tuple[int, int, DisplayPosition]]:
        """All (display_index, take, child) triples."""
        return [
            (i, t, self.apply(i, t))
            for i, size in enumerate(self.piles)
            for t in range(1, size + 1)
        ]


def enumerate_positions(max_total: int, min_total: int = 0) -> Iterator[Position]:
    """Every canonical position with ``min_total <= total <= max_total``.

    Ordered by total, then lexicographically by piles.
    """
    for n in range(min_total, max_total + 1):
        for part in sorted(_partitions(n, n)):
            yield Position(part)


def _partitions(n: int, largest: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest
