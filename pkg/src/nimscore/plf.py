"""Exact algebra for continuous piecewise-linear functions of the bonus N.

Every payoff function in Scoring Nim has integer values at integer N,
slope +1 or -1 on each unit interval, and affine tails. A function is
stored as its integer samples over a window ``[lo, hi]`` plus the slopes
of the two tails; all evaluation is exact over :class:`fractions.Fraction`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Iterable, Sequence, Union

from .errors import InternalError, InvalidInputError, ParityMismatchError, PayoffFormatError

Rational = Union[int, Fraction]


def parse_rational(text: str) -> Fraction:
    """Parse an integer, decimal (``-2.5``) or fraction (``-5/2``)."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise InvalidInputError(f"not an exact rational: {text!r}") from None


def format_rational(q: Rational) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class PiecewisePayoff:
    """Continuous function with integer breakpoints and slopes of +-1.

    ``samples[i]`` is the value at ``N = lo + i``. For ``N <= lo`` the
    function is ``samples[0] + left_slope * (N - lo)``, and symmetrically
    on the right. Construction validates the step invariant and trims the
    window to its canonical form, so two instances compare equal exactly
    when they describe the same function.
    """

    lo: int
    hi: int
    samples: tuple[int, ...]
    left_slope: int
    right_slope: int

    def __post_init__(self):
        samples = tuple(self.samples)
        if not samples:
            raise PayoffFormatError("samples must be non-empty")
        if self.hi - self.lo + 1 != len(samples):
            raise PayoffFormatError(
                f"window [{self.lo}, {self.hi}] does not match {len(samples)} samples"
            )
        if self.left_slope not in (-1, 1) or self.right_slope not in (-1, 1):
            raise PayoffFormatError("tail slopes must be -1 or +1")
        for i in range(len(samples) - 1):
            if abs(samples[i + 1] - samples[i]) != 1:
                raise PayoffFormatError(
                    f"samples at N={self.lo + i} and N={self.lo + i + 1} differ by "
                    f"{samples[i + 1] - samples[i]}, expected +-1"
                )
        lo, samples = _trim(self.lo, samples, self.left_slope, self.right_slope)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", lo + len(samples) - 1)
        object.__setattr__(self, "samples", samples)

    @classmethod
    def from_samples(cls, lo: int, samples: Sequence[int], left_slope: int, right_slope: int):
        return cls(lo, lo + len(samples) - 1, tuple(samples), left_slope, right_slope)

    def at(self, n: int) -> int:
        """Value at an integer N (inside or outside the window)."""
        if n <= self.lo:
            return self.samples[0] + self.left_slope * (n - self.lo)
        if n >= self.hi:
            return self.samples[-1] + self.right_slope * (n - self.hi)
        return self.samples[n - self.lo]

    def window(self, lo: int, hi: int) -> list[int]:
        """Samples over an arbitrary integer window."""
        if lo >= self.lo and hi <= self.hi:
            return list(self.samples[lo - self.lo : hi - self.lo + 1])
        return [self.at(n) for n in range(lo, hi + 1)]

    def parity(self) -> int:
        """The constant ``(f(n) + n) mod 2``."""
        return (self.samples[0] + self.lo) % 2

    def __call__(self, n: Rational) -> Fraction:
        return evaluate(self, n)


def _trim(lo: int, samples: tuple[int, ...], left: int, right: int) -> tuple[int, tuple[int, ...]]:
    start, end = 0, len(samples)
    while end - start > 1 and samples[start + 1] - samples[start] == left:
        start += 1
    while end - start > 1 and samples[end - 1] - samples[end - 2] == right:
        end -= 1
    lo += start
    samples = samples[start:end]
    if len(samples) == 1 and left == right:
        # affine: pin the representative point to N=0
        return 0, (samples[0] - left * lo,)
    return lo, samples


def affine(value_at_zero: int, slope: int) -> PiecewisePayoff:
    """The function ``value_at_zero + slope * N``."""
    return PiecewisePayoff(0, 0, (value_at_zero,), slope, slope)


def terminal_payoff() -> PiecewisePayoff:
    """Payoff of the empty position: the opponent just collected the bonus."""
    return affine(0, -1)


def constant_minus(c: int, f: PiecewisePayoff) -> PiecewisePayoff:
    """``N -> c - f(N)``."""
    return PiecewisePayoff(f.lo, f.hi, tuple(c - s for s in f.samples), -f.left_slope, -f.right_slope)


def add_constant(f: PiecewisePayoff, c: int) -> PiecewisePayoff:
    return PiecewisePayoff(f.lo, f.hi, tuple(s + c for s in f.samples), f.left_slope, f.right_slope)


def negate(f: PiecewisePayoff) -> PiecewisePayoff:
    return constant_minus(0, f)


def absolute(f: PiecewisePayoff) -> PiecewisePayoff:
    """``|f|``; valid because ``f`` and ``-f`` always share parity."""
    return max_many([f, negate(f)])


def max_many(fs: Iterable[PiecewisePayoff]) -> PiecewisePayoff:
    """Exact pointwise maximum of same-parity functions.

    Two same-parity functions can only cross at integers, so the samplewise
    maximum on a window wide enough to contain every crossing is exact.
    """
    fs = list(fs)
    if not fs:
        raise ValueError("max_many needs at least one function")
    if len(fs) == 1:
        return fs[0]
    return _max_raw([(f.lo, f.samples, f.left_slope, f.right_slope) for f in fs])


def max_of_differences(terms: Iterable[tuple[int, PiecewisePayoff]]) -> PiecewisePayoff:
    """``max_i (c_i - f_i)``, the recursion step, without building each ``c_i - f_i``."""
    raw = [
        (f.lo, tuple(c - s for s in f.samples), -f.left_slope, -f.right_slope)
        for c, f in terms
    ]
    if not raw:
        raise ValueError("max_of_differences needs at least one term")
    return _max_raw(raw)


def _raw_at(r, n: int) -> int:
    lo, s, ls, rs = r
    if n <= lo:
        return s[0] + ls * (n - lo)
    hi = lo + len(s) - 1
    if n >= hi:
        return s[-1] + rs * (n - hi)
    return s[n - lo]


def _raw_window(r, lo: int, hi: int) -> list[int]:
    flo, s, ls, rs = r
    fhi = flo + len(s) - 1
    out = [s[0] + ls * (n - flo) for n in range(lo, min(flo, hi + 1))]
    out += s[max(lo - flo, 0) : max(min(hi, fhi) - flo + 1, 0)]
    out += [s[-1] + rs * (n - fhi) for n in range(max(fhi + 1, lo), hi + 1)]
    return out


def _max_raw(rs: list[tuple]) -> PiecewisePayoff:
    if len(rs) == 1:
        lo, s, ls, rsl = rs[0]
        return PiecewisePayoff(lo, lo + len(s) - 1, tuple(s), ls, rsl)
    lo = min(r[0] for r in rs)
    hi = max(r[0] + len(r[1]) - 1 for r in rs)

    parity = (_raw_at(rs[0], lo) + lo) % 2
    for r in rs[1:]:
        if (_raw_at(r, lo) + lo) % 2 != parity:
            raise ParityMismatchError(f"inputs disagree mod 2 at N={lo}")

    # Right tail: the eventual winner has the greatest (slope, value at hi).
    # A rising winner overtakes a higher falling candidate after gap/2 steps.
    right = max(rs, key=lambda r: (r[3], _raw_at(r, hi)))
    w = _raw_at(right, hi)
    ext_hi = 0
    if right[3] == 1:
        for r in rs:
            v = _raw_at(r, hi)
            if r[3] == -1 and v > w:
                ext_hi = max(ext_hi, (v - w) // 2)
    left = max(rs, key=lambda r: (-r[2], _raw_at(r, lo)))
    w = _raw_at(left, lo)
    ext_lo = 0
    if left[2] == -1:
        for r in rs:
            v = _raw_at(r, lo)
            if r[2] == 1 and v > w:
                ext_lo = max(ext_lo, (v - w) // 2)
    lo -= ext_lo
    hi += ext_hi

    samples = tuple(map(max, *(_raw_window(r, lo, hi) for r in rs)))
    if samples[-1] != _raw_at(right, hi) or samples[0] != _raw_at(left, lo):
        raise InternalError("tail winner does not attain the maximum at the window edge")
    return PiecewisePayoff(lo, hi, samples, left[2], right[3])


def evaluate(f: PiecewisePayoff, n: Rational) -> Fraction:
    """Exact value at a rational N (linear between integer samples)."""
    n = Fraction(n)
    if n <= f.lo:
        return f.samples[0] + f.left_slope * (n - f.lo)
    if n >= f.hi:
        return f.samples[-1] + f.right_slope * (n - f.hi)
    k = floor(n)
    a = f.samples[k - f.lo]
    b = f.samples[k + 1 - f.lo]
    return a + (b - a) * (n - k)


def slope_at(f: PiecewisePayoff, n: Rational) -> int:
    """Slope on the open unit interval containing a non-integer N."""
    n = Fraction(n)
    if n.denominator == 1:
        raise InvalidInputError("slope is undefined at integer N (possible breakpoint)")
    k = floor(n)
    return f.at(k + 1) - f.at(k)


def slopes(f: PiecewisePayoff) -> list[int]:
    """Slopes left tail, each unit interval in the window, right tail."""
    s = f.samples
    return [f.left_slope] + [s[i + 1] - s[i] for i in range(len(s) - 1)] + [f.right_slope]


def breakpoints(f: PiecewisePayoff) -> list[tuple[int, int]]:
    """Integers where the slope changes sign, with the function value there."""
    sl = slopes(f)
    return [(f.lo + i, f.samples[i]) for i in range(len(f.samples)) if sl[i] != sl[i + 1]]


def equals(f: PiecewisePayoff, g: PiecewisePayoff) -> bool:
    return f == g


@dataclass(frozen=True)
class Extremum:
    """Result of :func:`extremum_on`.

    ``value`` and ``points`` are ``None``/empty when the extremum is unbounded.
    ``location`` is the smallest attaining N.
    """

    kind: str
    unbounded: bool
    value: Fraction | None = None
    points: tuple[Fraction, ...] = ()

    @property
    def location(self) -> Fraction | None:
        return self.points[0] if self.points else None


def extremum_on(
    f: PiecewisePayoff,
    lower: Rational | None = None,
    upper: Rational | None = None,
    kind: str = "max",
) -> Extremum:
    """Exact min or max of ``f`` over ``[lower, upper]``; ``None`` means infinite."""
    if kind not in ("min", "max"):
        raise ValueError(f"kind must be 'min' or 'max', not {kind!r}")
    lower = None if lower is None else Fraction(lower)
    upper = None if upper is None else Fraction(upper)
    if lower is not None and upper is not None and lower > upper:
        raise InvalidInputError(f"empty interval [{lower}, {upper}]")

    sign = 1 if kind == "max" else -1
    # a tail grows without bound toward +inf when slope*sign > 0
    if (upper is None and f.right_slope * sign > 0) or (lower is None and f.left_slope * sign < 0):
        return Extremum(kind, True)

    candidates = [Fraction(n) for n, _ in breakpoints(f)]
    candidates = [
        n for n in candidates
        if (lower is None or n >= lower) and (upper is None or n <= upper)
    ]
    candidates += [e for e in (lower, upper) if e is not None]
    if not candidates:
        raise InternalError("bounded extremum with no candidate points")
    values = {n: evaluate(f, n) for n in candidates}
    best = max(v * sign for v in values.values()) * sign
    points = tuple(sorted({n for n, v in values.items() if v == best}))
    return Extremum(kind, False, best, points)


def to_dict(f: PiecewisePayoff) -> dict:
    return {
        "lo": f.lo,
        "hi": f.hi,
        "samples": list(f.samples),
        "left_slope": f.left_slope,
        "right_slope": f.right_slope,
    }


def from_dict(d) -> PiecewisePayoff:
    if not isinstance(d, dict):
        raise PayoffFormatError("expected a JSON object")
    missing = {"lo", "hi", "samples", "left_slope", "right_slope"} - d.keys()
    if missing:
        raise PayoffFormatError(f"missing fields: {', '.join(sorted(missing))}")
    for key in ("lo", "hi", "left_slope", "right_slope"):
        if not _is_int(d[key]):
            raise PayoffFormatError(f"field {key!r} must be an integer")
    if not isinstance(d["samples"], list) or not all(_is_int(s) for s in d["samples"]):
        raise PayoffFormatError("field 'samples' must be a list of integers")
    return PiecewisePayoff(d["lo"], d["hi"], tuple(d["samples"]), d["left_slope"], d["right_slope"])


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def to_json(f: PiecewisePayoff) -> str:
    return json.dumps(to_dict(f), sort_keys=True, separators=(",", ":"))


def from_json(text: str) -> PiecewisePayoff:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise PayoffFormatError(f"invalid JSON at line {e.lineno} column {e.colno} (char {e.pos}): {e.msg}") from None
    return from_dict(d)


def describe(f: PiecewisePayoff) -> str:
    """Human-readable tails, e.g. ``N-3 for N>=4``."""
    return f"left: {tail_formula(f, 'left')} for N<={f.lo}; right: {tail_formula(f, 'right')} for N>={f.hi}"


def tail_formula(f: PiecewisePayoff, side: str) -> str:
    if side == "left":
        slope, c = f.left_slope, f.samples[0] - f.left_slope * f.lo
    else:
        slope, c = f.right_slope, f.samples[-1] - f.right_slope * f.hi
    lead = "N" if slope == 1 else "-N"
    return f"{lead}{c:+d}" if c else lead
