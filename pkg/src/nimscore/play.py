"""Interactive terminal game against the optimal engine."""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

from .core import DisplayPosition
from .errors import IllegalMoveError
from .plf import format_rational
from .solver import SolveCache, payoff_at
from .strategy import choose_move


class QuitGame(Exception):
    pass


def play(
    start: DisplayPosition,
    n: Fraction,
    human_first: bool,
    read: Callable[[str], str] | None = None,
    write: Callable[[str], None] | None = None,
    cache: SolveCache | None = None,
) -> dict:
    """Run one game. Returns final scores; raises :class:`QuitGame` on ``q`` or EOF.

    The human enters ``pile take`` with 0-based pile indices in the order
    the position was given.
    """
    read = read or input
    write = write or print
    q = start
    scores = {"human": Fraction(0), "engine": Fraction(0)}
    human_turn = human_first
    last = None
    write(f"Scoring Nim from {start} with bonus N={format_rational(n)}; you move {'first' if human_first else 'second'}.")
    while q.canonical().piles:
        write(f"position {q}   you {format_rational(scores['human'])}   engine {format_rational(scores['engine'])}")
        if human_turn:
            i, take = _ask(q, read, write)
            who = "human"
        else:
            i, take = choose_move(q, n, cache)
            who = "engine"
            write(f"engine takes {take} from pile {i}")
        q = q.apply(i, take)
        scores[who] += take
        last = who
        human_turn = not human_turn

    if last is not None:
        scores[last] += n
    diff = scores["human"] - scores["engine"]
    canonical = start.canonical()
    best = payoff_at(canonical, n, cache)
    achievable = best if human_first else -best
    write(f"game over: you {format_rational(scores['human'])}, engine {format_rational(scores['engine'])}"
          + (f" ({'you' if last == 'human' else 'engine'} took the last stone)" if last else ""))
    write(f"your payoff {format_rational(diff)}; optimal play would have given you {format_rational(achievable)}")
    return {"human": scores["human"], "engine": scores["engine"], "payoff": diff, "achievable": achievable}


def _ask(q: DisplayPosition, read, write) -> tuple[int, int]:
    while True:
        try:
            raw = read("your move (pile take, q to quit): ")
        except EOFError:
            raise QuitGame from None
        raw = raw.strip()
        if raw.lower() in ("q", "quit", "exit"):
            raise QuitGame
        parts = raw.replace(",", " ").split()
        try:
            i, take = (int(x) for x in parts)
            q.apply(i, take)
        except (ValueError, IllegalMoveError) as e:
            write(f"invalid move {raw!r}: {e}" if isinstance(e, IllegalMoveError) else f"enter two integers, got {raw!r}")
            continue
        return i, take
