"""Codimension function of joins of factor-type secant varieties.

``f_eval(n, d, m, tail)`` is the alternating binomial sum over 2 x (floor(d/2)-1)
matrices beta; ``f_eval_series`` computes the same number as one coefficient
of a truncated power series.  The two paths share no code beyond ``binom``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .series import DegreeProfile, TruncSeries, binom
from .slicerank import general_slice_rank


@dataclass(frozen=True)
class EllProfile:
    """Multiplicities (l_1, ..., l_floor(d/2)) of the join factors."""

    d: int
    ells: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "ells", tuple(int(x) for x in self.ells))
        if len(self.ells) != self.d // 2:
            raise ValueError(f"degree {self.d} needs {self.d // 2} multiplicities, got {self.ells}")
        if any(x < 0 for x in self.ells):
            raise ValueError(f"multiplicities must be nonnegative: {self.ells}")

    @property
    def r(self) -> int:
        return sum(self.ells)

    @property
    def tail(self) -> tuple[int, ...]:
        return self.ells[1:]


def tail_length(d: int) -> int:
    return d // 2 - 1


def _check_tail(d: int, tail: Sequence[int]) -> tuple[int, ...]:
    tail = tuple(int(x) for x in tail)
    if d < 4:
        raise ValueError(f"f is defined for d >= 4, got d = {d}")
    if len(tail) != tail_length(d):
        raise ValueError(f"degree {d} needs a tail (l_2..l_{d // 2}) of length {tail_length(d)}, got {tail}")
    if any(x < 0 for x in tail):
        raise ValueError(f"tail entries must be nonnegative: {tail}")
    return tail


def beta_matrices(d: int, bounds: Sequence[int] | None = None) -> Iterator[tuple[tuple[int, int], ...]]:
    """Yield beta as ((b_1_2, b_2_2), ..., (b_1_k, b_2_k)) with ||beta|| <= d.

    With ``bounds`` given, also require b_j_i <= bounds[i-2]; otherwise every
    entry is only limited by the weight.
    """
    k = d // 2
    cols = list(range(2, k + 1))

    def rec(idx: int, budget: int) -> Iterator[tuple[tuple[int, int], ...]]:
        if idx == len(cols):
            yield ()
            return
        i = cols[idx]
        cap = bounds[idx] if bounds is not None else budget
        for b1 in range(min(cap, budget // i) + 1):
            rest = budget - b1 * i
            for b2 in range(min(cap, rest // (d - i)) + 1):
                for tail in rec(idx + 1, rest - b2 * (d - i)):
                    yield ((b1, b2),) + tail

    yield from rec(0, d)


def beta_weight(d: int, beta: Sequence[tuple[int, int]]) -> tuple[int, int]:
    """(||beta||, |beta|) for a beta matrix given column by column from i = 2."""
    norm = sum(b1 * i + b2 * (d - i) for i, (b1, b2) in enumerate(beta, start=2))
    size = sum(b1 + b2 for b1, b2 in beta)
    return norm, size


def f_eval(n: int, d: int, m: int, tail: Sequence[int]) -> int:
    """f_{n,d}(m, l_2, ..., l_floor(d/2)) by the beta-indexed sum."""
    tail = _check_tail(d, tail)
    if m < 0:
        raise ValueError("m must be nonnegative")
    total = 0
    for beta in beta_matrices(d, tail):
        norm, size = beta_weight(d, beta)
        term = binom(m + d - norm, m)
        for ell, (b1, b2) in zip(tail, beta):
            term *= binom(ell, b1) * binom(ell, b2)
        total += -term if size % 2 else term
    return total - (n - m) * (m + 1)


def f_eval_series(n: int, d: int, m: int, tail: Sequence[int]) -> int:
    """Same value as :func:`f_eval`, read off a truncated power series."""
    tail = _check_tail(d, tail)
    if m < 0:
        raise ValueError("m must be nonnegative")
    s = TruncSeries.inverse_power_of_one_minus_t(m + 1, d)
    for i, ell in enumerate(tail, start=2):
        s = s.times_one_minus_t_power(i, ell).times_one_minus_t_power(d - i, ell)
    return s[d] - (n - m) * (m + 1)


def codim_sigma_linear_raw(n: int, d: int, r: int) -> int:
    if not 1 <= r <= n:
        raise ValueError(f"need 1 <= r <= n, got r = {r}, n = {n}")
    return f_eval(n, d, n - r, (0,) * tail_length(d))


def codim_sigma_linear(n: int, d: int, r: int) -> int:
    """Codimension of the r-th secant variety of forms with a linear factor.

    Negative raw values mean the secant variety fills the space; they clamp
    to 0 here.  The raw value is available from :func:`codim_sigma_linear_raw`.
    """
    return max(codim_sigma_linear_raw(n, d, r), 0)


def generator_profile(d: int, ells: EllProfile | Sequence[int]) -> DegreeProfile:
    """Degrees of the 2r generators g_i, h_i of a general tangent space."""
    if d < 4:
        raise ValueError("generator_profile needs d >= 4")
    if not isinstance(ells, EllProfile):
        ells = EllProfile(d, tuple(ells))
    degrees: list[int] = []
    for i, ell in enumerate(ells.ells, start=1):
        degrees += [i] * ell + [d - i] * ell
    return DegreeProfile(degrees)


@dataclass(frozen=True)
class KeyInequality:
    n: int
    d: int
    m: int
    tail: tuple[int, ...]
    lhs: int
    rhs: int

    @property
    def holds(self) -> bool:
        return self.lhs >= self.rhs

    @property
    def strict(self) -> bool:
        return self.lhs > self.rhs

    @property
    def exceptional(self) -> bool:
        return is_exceptional(self.n, self.d, self.m, self.tail)


def is_exceptional(n: int, d: int, m: int, tail: Sequence[int]) -> bool:
    """Nonzero tail with (n, d, m - l_2) == (3, 4, 1): the one tie case."""
    return any(tail) and (n, d, m - tail[0]) == (3, 4, 1)


def key_inequality(n: int, d: int, m: int, tail: Sequence[int]) -> KeyInequality:
    """Compare f(m, tail) with f(m - sum(tail), 0, ..., 0)."""
    tail = _check_tail(d, tail)
    base = n - general_slice_rank(n, d) + 1
    if m > n:
        raise ValueError(f"out of range: m = {m} exceeds n = {n}")
    if m - sum(tail) < base:
        raise ValueError(
            f"out of range: m - sum(tail) = {m - sum(tail)} is below n - sl.rk + 1 = {base}"
        )
    lhs = f_eval(n, d, m, tail)
    rhs = f_eval(n, d, m - sum(tail), (0,) * len(tail))
    return KeyInequality(n, d, m, tail, lhs, rhs)


# Corollary-level degrees where the strength/slice-rank equality is proved.
PROVED_DEGREES = frozenset({2, 3, 4, 5, 6, 7, 9})


def coverage_cell(n: int, d: int) -> str:
    """Which known result settles generic strength = generic slice rank at (n, d).

    Returns ``red`` (complete-intersection curves range), ``green`` (small slice
    rank range), ``blue`` (degrees proved here) or ``open``, in that priority.
    """
    if n < 2 or d < 2:
        raise ValueError("coverage_cell needs n >= 2, d >= 2")
    if n == 2 or 2 * d >= 3 * n - 1:
        return "red"
    if 2 * general_slice_rank(n, d) <= n + 2:
        return "green"
    if d in PROVED_DEGREES:
        return "blue"
    return "open"
