"""Certified isolation of the largest real root of a rational polynomial.

Polynomials here are ascending coefficient lists of Fractions.  Root counts
come from a Sturm sequence of the square-free part, so "no root above hi" is
a theorem about the exact polynomial, not a sampled observation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .poly import MultiPoly

DEFAULT_WIDTH = Fraction(1, 1000)


def _strip(p: Sequence[Fraction]) -> list[Fraction]:
    p = [Fraction(c) for c in p]
    while p and p[-1] == 0:
        p.pop()
    return p


def peval(p: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def _derivative(p: Sequence[Fraction]) -> list[Fraction]:
    return [k * c for k, c in enumerate(p)][1:]


def _divmod(a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = _strip(a)
    b = _strip(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        factor = a[-1] / b[-1]
        q[shift] = factor
        for i, c in enumerate(b):
            a[i + shift] -= factor * c
        a = _strip(a)
    return q, a


def _gcd(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    a, b = _strip(a), _strip(b)
    while b:
        _, r = _divmod(a, b)
        a, b = b, r
    return [c / a[-1] for c in a] if a else a


def squarefree_part(p: Sequence[Fraction]) -> list[Fraction]:
    p = _strip(p)
    g = _gcd(p, _derivative(p))
    if len(g) <= 1:
        return p
    q, r = _divmod(p, g)
    assert not r
    return _strip(q)


def sturm_sequence(p: Sequence[Fraction]) -> list[list[Fraction]]:
    seq = [squarefree_part(p)]
    seq.append(_derivative(seq[0]))
    while _strip(seq[-1]):
        _, r = _divmod(seq[-2], seq[-1])
        seq.append([-c for c in r])
    return [s for s in seq if _strip(s)]


def _variations(signs: Sequence[int]) -> int:
    signs = [s for s in signs if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def roots_above(seq: list[list[Fraction]], x: Fraction) -> int:
    """Number of distinct real roots in (x, +inf)."""
    at_x = [_sign(peval(s, x)) for s in seq]
    at_inf = [_sign(s[-1]) for s in seq]
    return _variations(at_x) - _variations(at_inf)


def cauchy_bound(p: Sequence[Fraction]) -> Fraction:
    """1 + max |a_i / a_n|: every real root lies strictly below it."""
    p = _strip(p)
    lead = p[-1]
    return 1 + max((abs(c / lead) for c in p[:-1]), default=Fraction(0))


@dataclass(frozen=True)
class RootInterval:
    """(lo, hi] contains the largest real root; no real root exceeds hi."""

    lo: Fraction
    hi: Fraction

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def within(self, a: Fraction | float | str, b: Fraction | float | str) -> bool:
        """Whether the interval sits inside the open interval (a, b)."""
        return Fraction(a) < self.lo and self.hi < Fraction(b)

    def as_dict(self) -> dict:
        return {
            "lo": str(self.lo),
            "hi": str(self.hi),
            "lo_approx": f"{float(self.lo):.6f}",
            "hi_approx": f"{float(self.hi):.6f}",
        }


def _as_coeffs(p: MultiPoly | Sequence[Fraction]) -> list[Fraction]:
    if isinstance(p, MultiPoly):
        return _strip(p.univariate_coeffs())
    return _strip(p)


def highest_root(p: MultiPoly | Sequence[Fraction], width: Fraction | str = DEFAULT_WIDTH) -> RootInterval | None:
    """Bracket the largest real root to within ``width``; ``None`` if p has no real root."""
    coeffs = _as_coeffs(p)
    width = Fraction(width)
    if not coeffs:
        raise ValueError("highest_root of the zero polynomial")
    if len(coeffs) == 1:
        raise ValueError("highest_root needs a nonconstant polynomial")
    if coeffs[-1] < 0:
        raise ValueError("highest_root expects a positive leading coefficient")
    if width <= 0:
        raise ValueError("width must be positive")

    seq = sturm_sequence(coeffs)
    hi = cauchy_bound(coeffs)
    lo = -hi
    if roots_above(seq, lo) == 0:
        return None
    # Invariant: some root in (lo, inf), none in (hi, inf).
    while hi - lo > width:
        mid = (lo + hi) / 2
        if roots_above(seq, mid) > 0:
            lo = mid
        else:
            hi = mid
    interval = RootInterval(lo, hi)
    certify_interval(coeffs, interval)
    return interval


def certify_interval(p: MultiPoly | Sequence[Fraction], interval: RootInterval) -> None:
    """Raise unless p is positive on (hi, inf) and has a real root in (lo, hi]."""
    coeffs = _as_coeffs(p)
    seq = sturm_sequence(coeffs)
    if roots_above(seq, interval.hi) != 0:
        raise ArithmeticError(f"root found above {interval.hi}")
    if roots_above(seq, interval.lo) == 0:
        raise ArithmeticError(f"no root in ({interval.lo}, {interval.hi}]")
    beyond = max(interval.hi, cauchy_bound(coeffs))
    for x in (interval.hi + interval.width, beyond, beyond + 1):
        if peval(coeffs, x) <= 0:
            raise ArithmeticError(f"polynomial not positive at {x} above the largest root")
    if peval(coeffs, interval.hi) < 0:
        raise ArithmeticError("polynomial negative at the interval's upper end")
