import threading
from fractions import Fraction

import pytest

from nimscore import plf
from nimscore.core import Position, enumerate_positions, in_P_minus, in_P_plus, legal_moves
from nimscore.errors import CacheFormatError, InternalError, OracleBoundError, ResourceLimitError
from nimscore.plf import PiecewisePayoff, affine, evaluate
from nimscore.solver import (
    CACHE_HEADER,
    SolveCache,
    asymptotics,
    brute_force_payoff,
    load_cache,
    payoff,
    payoff_at,
    save_cache,
)

Q = Fraction
P = lambda *xs: Position(tuple(sorted(xs, reverse=True)))  # noqa: E731


def test_payoff_one_stone(cache):
    assert payoff(P(1), cache) == affine(1, 1)


@pytest.mark.parametrize("x", range(2, 9))
def test_payoff_single_pile(cache, x):
    f = payoff(P(x), cache)
    for n in range(-10, 10):
        assert f.at(n) == x - 1 + abs(1 + n)


def test_payoff_542(cache):
    f = payoff(P(5, 4, 2), cache)
    assert plf.breakpoints(f) == [(-4, 1), (-2, 3), (-1, 2), (0, 3), (1, 2), (2, 3), (4, 1)]
    assert (f.left_slope, f.right_slope) == (-1, 1)


def test_payoff_two_ones(cache):
    assert payoff(P(1, 1), cache) == affine(0, -1)


def test_payoff_at_examples(cache):
    assert payoff_at(P(10, 8, 1), 7, cache) == 2
    assert payoff_at(P(7, 7), 2, cache) == -2
    assert payoff_at(P(1, 1, 1), -5, cache) == -4


def test_brute_force_examples():
    assert brute_force_payoff(P(5, 4, 2), 3) == 2
    assert brute_force_payoff(P(2, 1), 0) == 1
    for n in (Q(-7, 3), 0, 4):
        assert brute_force_payoff(Position(), n) == -n


def test_brute_force_bound():
    with pytest.raises(OracleBoundError):
        brute_force_payoff(P(20, 5), 0)
    assert brute_force_payoff(P(2, 1), 0, max_total=3) == 1


def test_oracle_equivalence_small(cache):
    for p in enumerate_positions(8, min_total=1):
        f = payoff(p, cache)
        for k in range(-4 * p.total, 4 * p.total + 1):
            n = Q(k, 2)
            assert evaluate(f, n) == brute_force_payoff(p, n), (p, n)


def test_oracle_agrees_off_grid(cache):
    for p in [P(5, 4, 2), P(4, 3, 1), P(3, 3, 2, 1)]:
        for n in (Q(1, 3), Q(-7, 5), Q(22, 7)):
            assert payoff_at(p, n, cache) == brute_force_payoff(p, n)


def test_recursion_local_optimality(cache):
    for p in enumerate_positions(9, min_total=1):
        for n in (Q(-5, 2), -1, 0, Q(3, 2), 4):
            v = payoff_at(p, n, cache)
            cands = [p.total - c.total - payoff_at(c, n, cache) for _, c in legal_moves(p)]
            assert v >= max(cands) and v in cands


def test_structural_properties(cache):
    for p in enumerate_positions(11, min_total=1):
        f = payoff(p, cache)
        lo, hi = f.lo - 3, f.hi + 3
        for n in range(lo, hi + 1):
            assert (f.at(n) - p.total - n) % 2 == 0
            assert abs(f.at(n + 1) - f.at(n)) == 1


def test_pair_stripping(cache):
    for p in enumerate_positions(10):
        q = Position(tuple(sorted(p.piles + (1, 1), reverse=True)))
        assert payoff(q, cache) == payoff(p, cache)


def test_symmetric_pairs(cache):
    target = PiecewisePayoff(-1, -1, (1,), 1, -1)  # 1-|1+N|
    assert payoff(P(4, 4, 7, 7), cache) == target
    assert payoff(P(2, 2, 3, 3, 5, 5), cache) == target


def test_asymptotics_examples(cache):
    a = asymptotics(P(3, 2, 1), cache)
    assert (a.c_plus, a.c_minus) == (2, 2)
    assert asymptotics(P(5, 4, 2), cache).c_plus == -3
    for k in range(1, 7):
        a = asymptotics(P(2 * k + 1, 2 * k, 1), cache)
        assert a.c_plus == a.c_minus == 2 * k
        assert a.in_P_plus and a.in_P_minus


def test_tail_laws(cache):
    for p in enumerate_positions(10, min_total=1):
        f = payoff(p, cache)
        a = asymptotics(p, cache)
        assert f.hi <= p.total - 2 or f.lo == f.hi == 0 and f.left_slope == f.right_slope
        assert f.lo >= -p.total
        for n in range(p.total - 2, p.total + 5):
            assert f.at(n) == (a.c_plus - n if in_P_plus(p) else a.c_plus + n)
        for n in range(-p.total - 5, -p.total + 1):
            assert f.at(n) == (a.c_minus + n if in_P_minus(p) else a.c_minus - n)


def test_asymptotics_detects_forged_entry():
    c = SolveCache()
    c.entries[P(5, 4, 2)] = affine(0, -1)  # wrong right slope for a non-P+ position
    with pytest.raises(InternalError):
        asymptotics(P(5, 4, 2), c)


def test_deep_single_pile():
    c = SolveCache()
    f = payoff(P(300), c)
    assert f.at(3) == 299 + 4


def test_resource_limit():
    c = SolveCache(max_positions=10)
    with pytest.raises(ResourceLimitError):
        payoff(P(5, 4, 2), c)


def test_cache_stats():
    c = SolveCache()
    payoff(P(3, 2), c)
    payoff(P(3, 2), c)
    s = c.stats()
    assert s["entries"] >= 1 and s["hits"] >= 1


def test_save_load_round_trip(tmp_path):
    c = SolveCache()
    payoff(P(6, 5, 3), c)
    path = tmp_path / "cache.txt"
    save_cache(c, path)
    assert path.read_text().splitlines()[0] == CACHE_HEADER
    loaded = load_cache(path)
    assert loaded.entries == c.entries
    path2 = tmp_path / "again.txt"
    save_cache(loaded, path2)
    assert path2.read_bytes() == path.read_bytes()


def test_cache_transparency(tmp_path):
    cold = SolveCache()
    warm = SolveCache()
    for p in enumerate_positions(7):
        payoff(p, warm)
    path = tmp_path / "c.txt"
    save_cache(warm, path)
    persisted = load_cache(path)
    for p in [P(9, 4, 2), P(6, 6, 1), P(5, 3, 2, 1)]:
        assert payoff(p, cold) == payoff(p, warm) == payoff(p, persisted)


def test_load_empty_file(tmp_path):
    path = tmp_path / "empty.txt"
    path.write_text("")
    assert len(load_cache(path)) == 0


def test_load_rejects_bad_step(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text(
        CACHE_HEADER + "\n"
        '1\t{"hi":0,"left_slope":1,"lo":0,"right_slope":1,"samples":[1]}\n'
        '2\t{"hi":1,"left_slope":-1,"lo":0,"right_slope":1,"samples":[1,3]}\n'
    )
    with pytest.raises(CacheFormatError) as exc:
        load_cache(path)
    assert exc.value.line == 3


def test_load_rejects_version(tmp_path):
    path = tmp_path / "v2.txt"
    path.write_text("nimscore-cache v2\n")
    with pytest.raises(CacheFormatError):
        load_cache(path)


def test_load_rejects_wrong_parity(tmp_path):
    path = tmp_path / "parity.txt"
    path.write_text(CACHE_HEADER + '\n2\t{"hi":0,"left_slope":1,"lo":0,"right_slope":1,"samples":[1]}\n')
    with pytest.raises(CacheFormatError):
        load_cache(path)


def test_concurrent_solves_match_serial():
    serial = SolveCache()
    targets = [P(9, 7, 3), P(8, 6, 4), P(10, 5, 2, 1), P(7, 7, 3, 2)]
    expected = [payoff(p, serial) for p in targets]
    shared = SolveCache()
    results = {}

    def work(i, p):
        results[i] = payoff(p, shared)

    threads = [threading.Thread(target=work, args=(i % len(targets), targets[i % len(targets)])) for i in range(12)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert [results[i] for i in range(len(targets))] == expected
    assert shared.entries == {p: f for p, f in serial.entries.items() if p in shared.entries}
