"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 verification mismatch, 3 resource limit.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from decimal import Decimal, localcontext
from fractions import Fraction
from pathlib import Path

from . import closedform, plf, render, solver, strategy
from .core import DisplayPosition, Position, nim_sum
from .errors import CacheFormatError, InvalidInputError, NimScoreError, ResourceLimitError
from .plf import format_rational
from .play import QuitGame, play

EXIT_OK, EXIT_USAGE, EXIT_MISMATCH, EXIT_RESOURCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def decimal_text(q: Fraction, digits: int = 12) -> str:
    with localcontext() as ctx:
        ctx.prec = digits
        d = Decimal(q.numerator) / Decimal(q.denominator)
    text = format(d.normalize(), "f")
    return text if Fraction(text) == q else text + "..."


def parse_bonus(text: str, allow_inf: bool = False):
    t = text.strip().lower()
    if t in ("+inf", "inf", "-inf"):
        if not allow_inf:
            raise InvalidInputError("infinite N is only accepted by moves, intervals and who-last")
        return -math.inf if t.startswith("-") else math.inf
    return plf.parse_rational(text)


def bonus_text(n) -> str:
    if isinstance(n, float):
        return "+inf" if n > 0 else "-inf"
    return format_rational(n)


def _emit(args, data: dict, text: str) -> None:
    if args.json:
        print(json.dumps(data, sort_keys=True, indent=2))
    else:
        print(text)


def _display_child(disp: DisplayPosition, move) -> DisplayPosition:
    return disp.apply(disp.to_display_index(move.pile_index), move.take)


# --- commands -----------------------------------------------------------


def cmd_eval(args, cache) -> int:
    disp = DisplayPosition.parse(args.position)
    n = parse_bonus(args.n)
    value = solver.payoff_at(disp.canonical(), n, cache)
    text = format_rational(value)
    if value.denominator != 1:
        text += f" ({decimal_text(value)})"
    _emit(
        args,
        {"position": list(disp.piles), "n": format_rational(n), "value": format_rational(value),
         "decimal": decimal_text(value)},
        text,
    )
    return EXIT_OK


def cmd_plf(args, cache) -> int:
    disp = DisplayPosition.parse(args.position)
    p = disp.canonical()
    f = solver.payoff(p, cache)
    bps = plf.breakpoints(f)
    data = {
        "position": list(disp.piles),
        "payoff": plf.to_dict(f),
        "breakpoints": [[n, v] for n, v in bps],
        "tails": {"left": plf.tail_formula(f, "left"), "right": plf.tail_formula(f, "right")},
    }
    lines = [f"f_N{disp}   |p|={p.total}   nim-sum={nim_sum(p)}", plf.to_json(f)]
    if bps:
        lines.append("breakpoints:")
        lines.append(f"  {'N':>6}  {'f(N)':>6}")
        lines += [f"  {n:>6}  {v:>6}" for n, v in bps]
    else:
        lines.append("no breakpoints (affine)")
    lines.append(f"left tail:  f = {plf.tail_formula(f, 'left')} for N <= {f.lo}")
    lines.append(f"right tail: f = {plf.tail_formula(f, 'right')} for N >= {f.hi}")
    if not p.is_terminal:
        a = solver.asymptotics(p, cache)
        data["asymptotics"] = {
            "c_plus": a.c_plus, "in_P_plus": a.in_P_plus, "right_threshold": a.right_threshold,
            "c_minus": a.c_minus, "in_P_minus": a.in_P_minus, "left_threshold": a.left_threshold,
        }
        lines.append(
            f"c+ = {a.c_plus} ({'in' if a.in_P_plus else 'not in'} P+: f = {a.right_formula()} for N >= {a.right_threshold})"
        )
        lines.append(
            f"c- = {a.c_minus} ({'in' if a.in_P_minus else 'not in'} P-: f = {a.left_formula()} for N <= {a.left_threshold})"
        )
    _emit(args, data, "\n".join(lines))
    return EXIT_OK


def cmd_moves(args, cache) -> int:
    disp = DisplayPosition.parse(args.position)
    p = disp.canonical()
    n = parse_bonus(args.n, allow_inf=True)
    choices = strategy.optimal_moves(p, n, cache)
    rows = []
    for ch in choices:
        child = _display_child(disp, ch.move)
        rows.append({"child": list(child.piles), "pile": disp.to_display_index(ch.move.pile_index),
                     "take": ch.move.take})
    data = {"position": list(disp.piles), "n": bonus_text(n), "moves": rows}
    if not isinstance(n, float):
        data["value"] = format_rational(solver.payoff_at(p, n, cache))
    lines = [f"{DisplayPosition(tuple(r['child']))}   pile {r['pile']}, take {r['take']}" for r in rows]
    _emit(args, data, "\n".join(lines))
    return EXIT_OK


def cmd_line(args, cache) -> int:
    disp = DisplayPosition.parse(args.position)
    n = parse_bonus(args.n)
    line = strategy.best_line(disp, n, cache)
    data = {
        "position": list(disp.piles),
        "n": format_rational(n),
        "positions": [list(q.piles) for q in line.positions],
        "moves": [{"pile": i, "take": t, "mover": who} for (i, t), who in zip(line.moves, line.movers)],
        "first_score": format_rational(line.first_score),
        "second_score": format_rational(line.second_score),
        "payoff": format_rational(line.payoff),
        "last_taker": line.last_taker,
    }
    text = " -> ".join(str(q) for q in line.positions)
    text += (f"\nfirst {format_rational(line.first_score)}, second {format_rational(line.second_score)}, "
             f"payoff {format_rational(line.payoff)}")
    _emit(args, data, text)
    return EXIT_OK


def _bound_text(b, side: str):
    if b is None:
        return "-inf" if side == "lo" else "+inf"
    return b


def _when(lo, hi) -> str:
    if lo is None and hi is None:
        return "for all N"
    if lo is None:
        return f"N <= {hi}"
    if hi is None:
        return f"{lo} <= N"
    if lo == hi:
        return f"N = {lo}"
    return f"{lo} <= N <= {hi}"


def cmd_intervals(args, cache) -> int:
    disp = DisplayPosition.parse(args.position)
    p = disp.canonical()
    prof = strategy.strategy_intervals(p, cache)
    names = {c: _display_child(disp, m) for c, m in prof.representatives.items()}
    rows = list(prof.table)
    if args.n is not None:
        n = parse_bonus(args.n, allow_inf=True)
        rows = [r for r in rows if _row_contains(r, n)]
    data = {
        "position": list(disp.piles),
        "regions": [
            {"from": _bound_text(a, "lo"), "to": _bound_text(b, "hi"), "moves": [list(names[c].piles) for c in m]}
            for a, b, m in rows
        ],
        "partition": [
            {"from": _bound_text(r.lower, "lo"), "to": _bound_text(r.upper, "hi"),
             "closed": [r.lower_closed, r.upper_closed], "moves": [list(names[c].piles) for c in r.moves]}
            for r in prof.regions
        ],
        "attainment": {
            str(names[c]): [[_bound_text(a, "lo"), _bound_text(b, "hi")] for a, b in iv]
            for c, iv in sorted(prof.attainment.items(), key=lambda kv: kv[0].piles)
        },
    }
    lines = [f"Moves to {' or '.join(str(names[c]) for c in m)} when {_when(a, b)}" for a, b, m in rows]
    _emit(args, data, "\n".join(lines))
    return EXIT_OK


def _row_contains(row, n) -> bool:
    a, b, _ = row
    return (a is None or n >= a) and (b is None or n <= b)


def cmd_who_last(args, cache) -> int:
    disp = DisplayPosition.parse(args.position)
    n = parse_bonus(args.n, allow_inf=True)
    who = strategy.who_takes_last(disp.canonical(), n, cache)
    _emit(args, {"position": list(disp.piles), "n": bonus_text(n), "last_taker": who}, who)
    return EXIT_OK


def cmd_verify(args, cache) -> int:
    oracle_max = args.oracle_max if args.oracle_max is not None else min(args.max_total, 12)
    closed = closedform.verify_closed_forms(args.max_total, cache)
    oracle = solver.verify_oracle(oracle_max, cache)
    greedy = closedform.verify_greedy(args.max_total, cache)
    total = len(closed.mismatches) + len(oracle["mismatches"]) + len(greedy["mismatches"])
    data = {"closed_forms": closed.to_dict(), "oracle": oracle, "greedy": greedy, "mismatches": total}
    text = "\n".join([
        closed.summary(),
        f"oracle, |p| <= {oracle_max}: {oracle['evaluations']} evaluations, {len(oracle['mismatches'])} mismatches",
        f"greedy, |p| <= {args.max_total}: {greedy['evaluations']} evaluations, {len(greedy['mismatches'])} mismatches",
        f"{total} mismatches",
    ])
    _emit(args, data, text)
    return EXIT_OK if total == 0 else EXIT_MISMATCH


def cmd_plot(args, cache) -> int:
    disp = DisplayPosition.parse(args.position)
    p = disp.canonical()
    f = solver.payoff(p, cache)
    lo = plf.parse_rational(args.lo) if args.lo is not None else Fraction(-p.total - 2)
    hi = plf.parse_rational(args.hi) if args.hi is not None else Fraction(p.total + 2)
    overlay = None
    if args.overlay == "xy1":
        if len(p) != 3 or p.piles[2] != 1 or not p.piles[0] > p.piles[1] >= 2:
            raise InvalidInputError(f"--overlay xy1 needs a position (x,y,1) with x > y >= 2, got {p}")
        overlay = closedform.xy1(p.piles[0], p.piles[1])
    elif args.overlay == "auto":
        found = closedform.dispatch(p)
        if found is None:
            raise InvalidInputError(f"no closed form known for {p}")
        overlay = found[0]
    title = f"f_N{disp}"
    if args.format == "ascii":
        out = render.ascii_plot(f, lo, hi, overlay, title)
    else:
        out = render.svg_plot(f, lo, hi, overlay, title)
    if args.output and args.output != "-":
        try:
            Path(args.output).write_text(out)
        except OSError as e:
            raise InvalidInputError(f"cannot write {args.output}: {e.strerror}") from None
    else:
        sys.stdout.write(out)
    return EXIT_OK


def cmd_play(args, cache) -> int:
    disp = DisplayPosition.parse(args.position)
    n = parse_bonus(args.n)
    try:
        play(disp, n, args.human_side == "first", cache=cache)
    except QuitGame:
        print("quit")
        return EXIT_USAGE
    return EXIT_OK


def cmd_cache(args, cache) -> int:
    if args.action == "save":
        if not args.path:
            raise UsageError("cache save needs a path")
        for text in args.position or []:
            solver.payoff(Position.parse(text), cache)
        solver.save_cache(cache, args.path)
        _emit(args, {"saved": len(cache), "path": args.path}, f"saved {len(cache)} positions to {args.path}")
    elif args.action == "load":
        if not args.path:
            raise UsageError("cache load needs a path")
        loaded = solver.load_cache(args.path)
        cache.entries.update(loaded.entries)
        _emit(args, {"loaded": len(loaded), "path": args.path}, f"loaded {len(loaded)} positions from {args.path}")
    else:
        stats = cache.stats()
        _emit(args, stats, f"entries {stats['entries']}  hits {stats['hits']}  misses {stats['misses']}")
    return EXIT_OK


# --- parser -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
    common.add_argument("--cache", default=argparse.SUPPRESS, metavar="PATH",
                        help="persistent cache file (default: $NIMSCORE_CACHE)")
    common.add_argument("--max-positions", type=int, default=argparse.SUPPRESS, metavar="N",
                        help="ceiling on cached positions")

    parser = _Parser(prog="nimscore", description="Exact payoff analysis for Scoring Nim.", parents=[common])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        sp.set_defaults(func=func)
        return sp

    sp = add("eval", cmd_eval, "exact payoff at one bonus value")
    sp.add_argument("position")
    sp.add_argument("--n", required=True)

    sp = add("plf", cmd_plf, "whole payoff function, breakpoints and asymptotic constants")
    sp.add_argument("position")

    sp = add("moves", cmd_moves, "optimal first moves at one bonus value (+inf/-inf allowed)")
    sp.add_argument("position")
    sp.add_argument("--n", required=True)

    sp = add("line", cmd_line, "one optimal line of play with final scores")
    sp.add_argument("position")
    sp.add_argument("--n", required=True)

    sp = add("intervals", cmd_intervals, "optimal first moves as a function of N")
    sp.add_argument("position")
    sp.add_argument("--n", default=None, help="only show rows containing this N (+inf/-inf allowed)")

    sp = add("who-last", cmd_who_last, "which player takes the last stone at non-integer N")
    sp.add_argument("position")
    sp.add_argument("--n", required=True)

    sp = add("verify", cmd_verify, "check closed forms and the oracle against the solver")
    sp.add_argument("--max-total", type=int, default=20)
    sp.add_argument("--oracle-max", type=int, default=None)

    sp = add("plot", cmd_plot, "plot the payoff function as SVG or ASCII")
    sp.add_argument("position")
    sp.add_argument("--from", dest="lo", default=None)
    sp.add_argument("--to", dest="hi", default=None)
    sp.add_argument("--format", choices=["svg", "ascii"], default="svg")
    sp.add_argument("--output", "-o", default=None)
    sp.add_argument("--overlay", choices=["none", "auto", "xy1"], default="none")

    sp = add("play", cmd_play, "play against the engine in the terminal")
    sp.add_argument("position")
    sp.add_argument("--n", required=True)
    sp.add_argument("--human-side", choices=["first", "second"], default="first")

    sp = add("cache", cmd_cache, "save, load or inspect the solver cache")
    sp.add_argument("action", choices=["save", "load", "stats"])
    sp.add_argument("path", nargs="?")
    sp.add_argument("--position", action="append", help="solve this position before saving")
    return parser


VALUE_FLAGS = ("--n", "--from", "--to")


def _glue_negative_values(argv: list[str]) -> list[str]:
    # argparse mistakes "-1/2" or "-inf" for an option; "--n=-1/2" is unambiguous
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-") and argv[i + 1][1:2] not in ("", "-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = _glue_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    args.json = getattr(args, "json", False)
    cache_path = getattr(args, "cache", None) or os.environ.get("NIMSCORE_CACHE") or None
    max_positions = getattr(args, "max_positions", solver.DEFAULT_MAX_POSITIONS)

    try:
        if cache_path and Path(cache_path).exists():
            cache = solver.load_cache(cache_path, max_positions=max_positions)
        else:
            cache = solver.SolveCache(max_positions=max_positions)
        before = len(cache)
        code = args.func(args, cache)
        if cache_path and len(cache) != before:
            solver.save_cache(cache, cache_path)
        return code
    except ResourceLimitError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except (UsageError, CacheFormatError, InvalidInputError, NimScoreError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
