"""Exact truncated power series and Fröberg-type Hilbert series predictions."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence


def binom(a: int, b: int) -> int:
    """Binomial coefficient with C(a, b) = 0 for 0 <= a < b.

    Negative ``a`` is rejected; no formula here needs the extension.
    """
    if a < 0:
        raise ValueError(f"binom: negative upper argument {a}")
    if b < 0:
        raise ValueError(f"binom: negative lower argument {b}")
    if b > a:
        return 0
    b = min(b, a - b)
    result = 1
    for k in range(1, b + 1):
        result = result * (a - b + k) // k
    return result


@dataclass(frozen=True)
class TruncSeries:
    """Power series known exactly up to and including ``t**order``."""

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int], order: int | None = None):
        c = tuple(int(x) for x in coeffs)
        if order is not None:
            if order < 0:
                raise ValueError("order must be nonnegative")
            c = c[: order + 1] + (0,) * (order + 1 - len(c))
        if not c:
            raise ValueError("a truncated series needs at least one coefficient")
        object.__setattr__(self, "coeffs", c)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def one(cls, order: int) -> "TruncSeries":
        return cls([1], order)

    @classmethod
    def inverse_power_of_one_minus_t(cls, exponent: int, order: int) -> "TruncSeries":
        """1/(1-t)**exponent, i.e. coefficients C(exponent-1+k, k)."""
        if exponent < 0:
            raise ValueError("exponent must be nonnegative")
        if exponent == 0:
            return cls.one(order)
        return cls([binom(exponent - 1 + k, k) for k in range(order + 1)])

    def __getitem__(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k <= self.order else 0

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        order = min(self.order, other.order)
        return TruncSeries([self[k] + other[k] for k in range(order + 1)])

    def __neg__(self) -> "TruncSeries":
        return TruncSeries([-c for c in self.coeffs])

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        return self + (-other)

    def __mul__(self, other: "TruncSeries") -> "TruncSeries":
        order = min(self.order, other.order)
        out = [0] * (order + 1)
        for i, a in enumerate(self.coeffs[: order + 1]):
            if a:
                for j in range(order + 1 - i):
                    out[i + j] += a * other.coeffs[j]
        return TruncSeries(out)

    def times_one_minus_t_power(self, degree: int, times: int = 1) -> "TruncSeries":
        """Multiply by (1 - t**degree)**times in place of a full product."""
        if degree < 1:
            raise ValueError("degree must be positive")
        c = list(self.coeffs)
        for _ in range(times):
            for k in range(self.order, degree - 1, -1):
                c[k] -= c[k - degree]
        return TruncSeries(c)

    def divide_by_one_minus_t(self, times: int = 1) -> "TruncSeries":
        """Divide by (1 - t)**times via repeated prefix sums."""
        c = list(self.coeffs)
        for _ in range(times):
            for k in range(1, len(c)):
                c[k] += c[k - 1]
        return TruncSeries(c)

    def bracket(self) -> "TruncSeries":
        return bracket(self)


def bracket(s: TruncSeries) -> TruncSeries:
    """Zero every coefficient from the first negative one onward."""
    out = []
    alive = True
    for c in s.coeffs:
        if c < 0:
            alive = False
        out.append(c if alive else 0)
    return TruncSeries(out)


@dataclass(frozen=True)
class DegreeProfile:
    """Multiset of generator degrees."""

    degrees: tuple[int, ...]

    def __init__(self, degrees: Iterable[int] = ()):
        ds = tuple(sorted(int(d) for d in degrees))
        if any(d < 1 for d in ds):
            raise ValueError(f"generator degrees must be positive, got {ds}")
        object.__setattr__(self, "degrees", ds)

    @classmethod
    def from_multiplicities(cls, mult: dict[int, int] | Sequence[int]) -> "DegreeProfile":
        """Build from {degree: count} or a list whose entry i-1 counts degree i."""
        if not isinstance(mult, dict):
            mult = {i + 1: m for i, m in enumerate(mult)}
        degrees: list[int] = []
        for deg, count in mult.items():
            if count < 0:
                raise ValueError("multiplicities must be nonnegative")
            degrees.extend([deg] * count)
        return cls(degrees)

    @property
    def multiplicities(self) -> dict[int, int]:
        return dict(sorted(Counter(self.degrees).items()))

    def __len__(self) -> int:
        return len(self.degrees)


def froberg_series(n: int, profile: DegreeProfile | Iterable[int], order: int) -> TruncSeries:
    """prod(1 - t**d_i) / (1 - t)**(n+1), truncated at ``order``."""
    if n < 0 or order < 0:
        raise ValueError("need n >= 0 and order >= 0")
    if not isinstance(profile, DegreeProfile):
        profile = DegreeProfile(profile)
    s = TruncSeries.inverse_power_of_one_minus_t(n + 1, order)
    for deg, count in profile.multiplicities.items():
        s = s.times_one_minus_t_power(deg, count)
    return s


def froberg_coeff(n: int, profile: DegreeProfile | Iterable[int], d: int) -> int:
    """Coefficient of t**d in the bracketed Fröberg series."""
    if d < 0:
        raise ValueError("degree must be nonnegative")
    return bracket(froberg_series(n, profile, d))[d]


def froberg_coeff_unbracketed(n: int, profile: DegreeProfile | Iterable[int], d: int) -> int:
    return froberg_series(n, profile, d)[d]
