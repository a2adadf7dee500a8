"""General slice rank of forms and the defect polynomial that governs it.

For ``d >= 3`` the general slice rank of a degree-``d`` form in ``n + 1``
variables is the least ``r`` with ``r (n + 1 - r) >= C(d + n - r, d)``.
Writing ``x = n - r`` turns that test into ``p(x) <= 0`` for

    p(x) = (x + d)(x + d - 1)...(x + 2) - d! (n - x),

which is strictly increasing on ``x >= 0``; the defect ``n - sl.rk`` is the
floor of its positive root.  Every bound below is certified by evaluating
``p`` at exact rationals, never by floating point roots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .series import DegreeProfile, binom

# Denominator used for rational approximations of (d! n)^(1/(d-1)).
_ROOT_SCALE = 10**6


def fano_delta(n: int, d: int, r: int) -> int:
    """Expected dimension of the Fano scheme of r-planes on a general hypersurface."""
    if n < 1 or d < 3 or r < 0:
        raise ValueError(f"fano_delta needs n >= 1, d >= 3, r >= 0; got {(n, d, r)}")
    return (r + 1) * (n - r) - binom(d + r, d)


def _slice_condition(n: int, d: int, r: int) -> bool:
    return r * (n + 1 - r) >= binom(d + n - r, d)


def general_slice_rank(n: int, d: int) -> int:
    if n < 1 or d < 2:
        raise ValueError(f"general_slice_rank needs n >= 1, d >= 2; got {(n, d)}")
    if d == 2:
        return (n + 2) // 2
    # The condition holds exactly for n - r <= a, so walk x = n - r upward.
    x = 0
    while x + 1 <= n and _slice_condition(n, d, n - x - 1):
        x += 1
    return n - x


def simultaneous_slice_rank(n: int, profile: DegreeProfile | Iterable[int]) -> int:
    """General simultaneous slice rank of a family of forms of the given degrees."""
    if not isinstance(profile, DegreeProfile):
        profile = DegreeProfile(profile)
    if not profile.degrees:
        raise ValueError("simultaneous_slice_rank needs at least one degree")
    if n < 1 or min(profile.degrees) < 3:
        raise ValueError("simultaneous_slice_rank needs n >= 1 and all degrees >= 3")
    for r in range(n + 2):
        if r * (n + 1 - r) >= sum(binom(di + n - r, di) for di in profile.degrees):
            return r
    raise AssertionError("unreachable: r = n + 1 always satisfies the condition")


def root_poly(n: int, d: int, x: Fraction | int) -> Fraction | int:
    """p(x) = (x+d)...(x+2) - d!(n-x), evaluated exactly (an int for integer x)."""
    prod = 1
    for k in range(2, d + 1):
        prod *= x + k
    return prod - math.factorial(d) * (n - x)


def _iroot_floor(value: int, k: int) -> int:
    """Largest integer y >= 0 with y**k <= value."""
    if value < 0:
        raise ValueError("negative radicand")
    if value < 2:
        return value
    # Newton iteration from a power of two above the root.
    y = 1 << (value.bit_length() // k + 1)
    while True:
        z = ((k - 1) * y + value // y ** (k - 1)) // k
        if z >= y:
            break
        y = z
    while (y + 1) ** k <= value:
        y += 1
    return y


def root_bounds_of_dfn(n: int, d: int) -> tuple[Fraction, Fraction]:
    """Rationals lo <= (d! n)^(1/(d-1)) <= hi, with hi - lo = 1/_ROOT_SCALE."""
    k = d - 1
    scaled = math.factorial(d) * n * _ROOT_SCALE**k
    y = _iroot_floor(scaled, k)
    lo = Fraction(y, _ROOT_SCALE)
    hi = lo if y**k == scaled else Fraction(y + 1, _ROOT_SCALE)
    return lo, hi


def choose_w(d: int) -> Fraction:
    """Offset w: d + 2 for d <= 5, otherwise d/2 + 1 (kept exact for odd d)."""
    if d < 3:
        raise ValueError("choose_w needs d >= 3")
    return Fraction(d + 2) if d <= 5 else Fraction(d, 2) + 1


def largeness_condition(n: int, d: int) -> bool:
    """Whether n is large enough for the lower bound a > (d!n)^(1/(d-1)) - w.

    For d <= 5 this is the (d+2)-offset regime, for d >= 6 the (d/2+1) one.
    Both are checked with integer/rational powers only.
    """
    if d < 4:
        return False
    dfn = math.factorial(d) * n
    if dfn < d ** (d - 1):
        return False
    if d <= 5:
        # (d! n)^(d-3) >= ((d-1)!)^(d-1)
        return dfn ** (d - 3) >= math.factorial(d - 1) ** (d - 1)
    base = Fraction(math.factorial(d)) / (Fraction(d, 2) - 1) ** 2
    return Fraction(dfn) ** (d - 4) >= base ** (d - 1)


def largeness_threshold(d: int) -> int:
    """Smallest n satisfying :func:`largeness_condition` (monotone in n)."""
    if d < 4:
        raise ValueError("largeness regime needs d >= 4")
    hi = 1
    while not largeness_condition(hi, d):
        hi *= 2
    lo = hi // 2
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if largeness_condition(mid, d):
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class RootBound:
    """Certified information about the positive root a of p(x)."""

    n: int
    d: int
    floor_a: int
    upper: Fraction
    lower: Fraction | None
    w: Fraction


def root_poly_floor(n: int, d: int) -> RootBound:
    if d < 3 or n < 1:
        raise ValueError(f"root_poly_floor needs d >= 3, n >= 1; got {(n, d)}")
    # p is increasing on x >= 0 with p(0) <= 0 and p(n) > 0.
    lo, hi = 0, n
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if root_poly(n, d, mid) <= 0:
            lo = mid
        else:
            hi = mid
    x = lo
    if not (root_poly(n, d, x) <= 0 < root_poly(n, d, x + 1)):
        raise ArithmeticError("floor of the root failed certification")

    lo_root, hi_root = root_bounds_of_dfn(n, d)
    upper = hi_root - 2
    if root_poly(n, d, upper) <= 0:
        raise ArithmeticError(f"upper bound {upper} not certified for (n, d) = {(n, d)}")

    w = choose_w(d)
    lower = None
    if largeness_condition(n, d):
        lower = lo_root - w
        if root_poly(n, d, lower) >= 0:
            raise ArithmeticError(f"lower bound {lower} not certified for (n, d) = {(n, d)}")
    return RootBound(n=n, d=d, floor_a=x, upper=upper, lower=lower, w=w)


def defect_start(d: int, k: int) -> int:
    """n_k: the least n with n - sl.rk(n, d) >= k, for k >= 1."""
    if d < 3 or k < 1:
        raise ValueError("defect_start needs d >= 3 and k >= 1")
    prod = 1
    for i in range(2, d + 1):
        prod *= k + i
    return k + -(-prod // math.factorial(d))


def plateau_points(d: int) -> Iterable[int]:
    """Yield, in increasing order, every n >= 1 with sl.rk(n, d) == sl.rk(n+1, d).

    n_k = k + ceil((k+2)(k+3)...(k+d) / d!) is the first n whose defect
    reaches k; the plateau points are n_k - 1 for k >= 1.
    """
    if d < 3:
        raise ValueError("plateau machinery needs d >= 3")
    k = 1
    while True:
        n_k = defect_start(d, k)
        if n_k - 1 >= 1:
            yield n_k - 1
        k += 1


def plateau_set(d: int, N: int) -> list[int]:
    if N < 1:
        raise ValueError("N must be positive")
    out = []
    for n in plateau_points(d):
        if n > N:
            break
        out.append(n)
    return out
