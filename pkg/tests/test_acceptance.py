"""Acceptance suite: one test, and one PASS/FAIL line, per criterion.

Run with ``pytest tests/test_acceptance.py -v``; the PASS/FAIL lines are
printed in the terminal summary. ``python3 tests/test_acceptance.py`` runs
the same checks without pytest.

Golden values marked "derived" below were computed with the brute-force
minimax oracle and frozen; criterion 11 re-derives them on every run.
"""

import contextlib
import io
import json
import random
import sys
import tempfile
from fractions import Fraction as Fr
from pathlib import Path

import pytest

from nimscore import cli, plf, render
from nimscore.closedform import TAGS, F, verify_closed_forms, verify_greedy
from nimscore.core import Position, canonicalize, enumerate_positions
from nimscore.solver import (
    SolveCache,
    asymptotics,
    brute_force_payoff,
    payoff,
    payoff_at,
    verify_oracle,
)
from nimscore.strategy import best_line, strategy_intervals


def P(*piles):
    return Position(tuple(piles))


def cli_json(*argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli.main([*argv, "--json"])
    assert code == 0, f"exit {code} for {argv}"
    return json.loads(buf.getvalue())


def cli_text(*argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli.main(list(argv))
    return code, buf.getvalue()


# --- criteria ---------------------------------------------------------------


def crit_oracle(cache):
    out = verify_oracle(12, cache)
    assert out["mismatches"] == [], out["mismatches"][:5]
    assert out["evaluations"] > 20000
    for k in range(-4, 5):
        assert payoff_at(P(), Fr(k, 2), cache) == brute_force_payoff(P(), Fr(k, 2))
    return f"{out['evaluations']} evaluations on |p| <= 12, 0 mismatches"


def crit_closed_forms(cache):
    rep = verify_closed_forms(20, cache)
    assert rep.mismatches == [], rep.mismatches[:3]
    for tag in TAGS:
        assert rep.tag_counts.get(tag, 0) >= 10, (tag, rep.tag_counts.get(tag, 0))
    assert set(rep.tag_counts) == set(TAGS)
    code, text = cli_text("verify", "--max-total", "20", "--oracle-max", "12")
    assert code == 0 and text.splitlines()[-1] == "0 mismatches"
    smallest = min(rep.tag_counts.values())
    return f"{rep.positions_checked} positions, {len(TAGS)} tags (each >= {smallest}), 0 mismatches"


def crit_greedy(cache):
    out = verify_greedy(14, cache)
    assert out["mismatches"] == []
    return f"{out['evaluations']} evaluations, 0 mismatches"


def crit_asymptotics(cache):
    assert asymptotics(P(5, 4, 2), cache).c_plus == -3
    a = asymptotics(P(3, 2, 1), cache)
    assert (a.c_plus, a.c_minus) == (2, 2)
    for k in range(1, 11):
        a = asymptotics(P(2 * k + 1, 2 * k, 1), cache)
        assert (a.c_plus, a.c_minus) == (2 * k, 2 * k), k
    checked = 0
    for p in enumerate_positions(12, min_total=1):
        f = payoff(p, cache)
        a = asymptotics(p, cache)
        t = p.total
        # every integer from the threshold to past the window, then the tail slope
        for n in range(t - 2, max(f.hi, t - 2) + 2):
            want = a.c_plus - n if a.in_P_plus else a.c_plus + n
            assert f.at(n) == want, (p, n)
        assert f.right_slope == (-1 if a.in_P_plus else 1), p
        for n in range(min(f.lo, -t) - 1, -t + 1):
            want = a.c_minus + n if a.in_P_minus else a.c_minus - n
            assert f.at(n) == want, (p, n)
        assert f.left_slope == (1 if a.in_P_minus else -1), p
        checked += 1
    return f"constants match; tail thresholds hold on {checked} positions"


def crit_breakpoint_counts(cache):
    for k in range(1, 11):
        bps = plf.breakpoints(payoff(P(2 * k + 1, 2 * k, 1), cache))
        assert len(bps) == 4 * k - 3, (k, len(bps))
        assert bps == plf.breakpoints(F(k))
    return "4k-3 breakpoints and equal to F_k for k = 1..10"


def crit_extrema(cache):
    for k in range(1, 9):
        f = payoff(P(2 * k + 1, 2 * k, 1), cache)
        top = plf.extremum_on(f, kind="max")
        assert not top.unbounded and top.value == 2
        assert set(top.points) == set(range(-(2 * k - 2), 2 * k - 1, 2)), k
        for n in range(-(2 * k + 5), 2 * k + 6, 2):
            assert f.at(n) <= 1, (k, n)
        assert plf.extremum_on(f, lower=2 * k + 1, kind="max").value <= -1
        assert plf.extremum_on(f, upper=-(2 * k + 1), kind="max").value <= -1
    for k in range(1, 7):
        for x in range(2 * k + 2, 2 * k + 9):
            low = plf.extremum_on(payoff(P(x, 2 * k, 1), cache), kind="min")
            assert low.value == x - 2 * k - 1, (x, k)
            assert set(low.points) == {-2 * k, 2 * k}, (x, k)
    return "max 2 on J_k (k<=8); min x-2k-1 exactly at +-2k (k<=6)"


def crit_tables(cache):
    data = cli_json("intervals", "5,4,2")
    rows = [(r["from"], r["to"], sorted(map(tuple, r["moves"]))) for r in data["regions"]]
    assert rows == [
        ("-inf", -4, [(5, 4, 1)]),
        (-4, -1, [(0, 4, 2), (1, 4, 2)]),
        (-1, 1, [(0, 4, 2)]),
        (1, 4, [(1, 4, 2)]),
        (4, "+inf", [(5, 4, 1)]),
    ], rows
    code, text = cli_text("intervals", "5,4,2")
    assert code == 0 and len(text.splitlines()) == 5

    data = cli_json("intervals", "9,8,1")
    att = {k: [iv for iv in v if iv[0] != iv[1]] for k, v in data["attainment"].items()}
    att = {k: v for k, v in att.items() if v}
    assert att == {
        "(0,8,1)": [[-1, 1]],
        "(2,8,1)": [[-3, -1], [1, 3]],
        "(4,8,1)": [[-5, -3], [3, 5]],
        "(6,8,1)": [["-inf", -5], [5, "+inf"]],
    }, att
    prof = strategy_intervals(P(9, 8, 1), cache)
    assert len(prof.table) == 7
    return "(5,4,2) five rows exact; (9,8,1) four attainment sets exact"


def crit_pieces(cache):
    f = payoff(P(10, 8, 1), cache)
    for k in range(12, 17):
        n = Fr(k, 2)
        assert plf.evaluate(f, n) == 9 - n and plf.evaluate(f, -n) == 9 - n
    for k in range(16, 25):
        n = Fr(k, 2)
        assert plf.evaluate(f, n) == n - 7 and plf.evaluate(f, -n) == n - 7
    return "9-N on [6,8] and N-7 on [8,12]"


def crit_lines(cache):
    line = best_line(P(5, 4, 2), 3, cache)
    assert (line.first_score, line.second_score) == (8, 6)
    data = cli_json("line", "10,8,1", "--n", "7")
    assert data["positions"][1:4] == [[6, 8, 1], [6, 7, 1], [6, 4, 1]]
    assert data["payoff"] == "2"
    assert (data["first_score"], data["second_score"]) == ("14", "12")
    count = 0
    grid = [Fr(k, 4) for k in range(-40, 41, 3)]
    for p in enumerate_positions(9):
        for n in grid:
            line = best_line(p, n, cache)
            assert line.first_score + line.second_score == p.total + n
            count += 1
    return f"reference lines reproduced; constant-sum on {count} lines"


def crit_invariants(cache):
    rng = random.Random(1729)
    positions = [
        canonicalize([rng.randint(0, 15) for _ in range(rng.randint(1, 5))]) for _ in range(1000)
    ]
    for p in positions:
        f = payoff(p, cache)
        lo, hi = f.lo - 3, f.hi + 3
        vals = f.window(lo, hi)
        assert all(abs(b - a) == 1 for a, b in zip(vals, vals[1:])), p
        assert all((v - (p.total + n)) % 2 == 0 for n, v in zip(range(lo, hi + 1), vals)), p
        for _ in range(5):
            a = Fr(rng.randint(-400, 400), rng.randint(1, 12))
            b = Fr(rng.randint(-400, 400), rng.randint(1, 12))
            assert abs(plf.evaluate(f, a) - plf.evaluate(f, b)) <= abs(a - b), p
        assert payoff(canonicalize(list(p.piles) + [1, 1]), cache) == f, p
    paired = plf.constant_minus(1, plf.absolute(plf.affine(1, 1)))
    for _ in range(200):
        a, b = rng.randint(2, 15), rng.randint(1, 15)
        for q in (P(a, a), canonicalize([a, a, b, b])):
            assert payoff(q, cache) == paired, q
    return "1000 random positions: +-1 steps, parity, Lipschitz, (p,1,1)=p; 400 paired"


GOLDEN = {  # derived: brute-force oracle at integers, frozen
    (5, 4, 2): [(-4, 1), (-2, 3), (-1, 2), (0, 3), (1, 2), (2, 3), (4, 1)],
    (6, 4, 1): [(-4, 1), (-2, 3), (-1, 2), (0, 3), (1, 2), (2, 3), (4, 1)],
    (8, 7, 1): [(-5, 1), (-4, 2), (-3, 1), (-2, 2), (-1, 1), (0, 2), (1, 1), (2, 2), (3, 1), (4, 2), (5, 1)],
    (5, 4, 3): [(-4, 2), (-2, 4), (-1, 3), (0, 4), (3, 1)],
}


def crit_figures(cache):
    for piles, bps in GOLDEN.items():
        p = Position(piles)
        f = payoff(p, cache)
        assert plf.breakpoints(f) == bps, piles
        # the frozen table still agrees with the oracle
        for n in range(-p.total - 3, p.total + 4):
            assert brute_force_payoff(p, n) == f.at(n), (piles, n)
    f = payoff(P(5, 4, 3), cache)
    grid = range(-16, 17)
    assert any(f.at(n) != f.at(-n) for n in grid)
    assert any(f.at(n) != f.at(-2 - n) for n in grid)

    first = render.svg_plot(f, -14, 14, title="f_N(5,4,3)")
    assert first == render.svg_plot(payoff(P(5, 4, 3), SolveCache()), -14, 14, title="f_N(5,4,3)")
    with tempfile.TemporaryDirectory() as d:
        a, b = Path(d, "a.svg"), Path(d, "b.svg")
        assert cli_text("plot", "5,4,2", "-o", str(a))[0] == 0
        assert cli_text("plot", "5,4,2", "-o", str(b))[0] == 0
        assert a.read_bytes() == b.read_bytes()
    return "4 golden tables, (5,4,3) asymmetric, SVG byte-identical"


CRITERIA = [
    (1, "oracle equivalence", crit_oracle),
    (2, "closed-form sweep", crit_closed_forms),
    (3, "greedy regime", crit_greedy),
    (4, "asymptotic constants", crit_asymptotics),
    (5, "breakpoint counts", crit_breakpoint_counts),
    (6, "extremum claims", crit_extrema),
    (7, "strategy tables", crit_tables),
    (8, "(10,8,1) pieces", crit_pieces),
    (9, "play lines", crit_lines),
    (10, "structural invariants", crit_invariants),
    (11, "figure reproduction", crit_figures),
]


def _run(num, title, func, cache):
    try:
        detail = func(cache)
    except Exception as e:
        return False, f"FAIL criterion {num:>2} {title}: {type(e).__name__}: {e}"
    return True, f"PASS criterion {num:>2} {title}: {detail}"


@pytest.mark.parametrize("num,title,func", CRITERIA, ids=[f"c{n:02d}" for n, _, _ in CRITERIA])
def test_criterion(num, title, func, cache, acceptance_log):
    ok, line = _run(num, title, func, cache)
    acceptance_log.append(line)
    print(line)
    assert ok, line


if __name__ == "__main__":
    shared = SolveCache()
    results = [_run(n, t, f, shared) for n, t, f in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
