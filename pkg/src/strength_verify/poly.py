"""Sparse multivariate polynomials with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Scalar = Union[int, Fraction]
Monomial = tuple[int, ...]


class MultiPoly:
    """Polynomial in a fixed, ordered tuple of variables.

    Terms are stored as ``{exponent_tuple: Fraction}`` with zero coefficients
    removed.  Two polynomials can only be combined when their variable tuples
    agree; use :meth:`with_variables` to embed into a larger ring.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[Monomial, Scalar] | None = None):
        self.variables: tuple[str, ...] = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"duplicate variable names in {self.variables}")
        clean: dict[Monomial, Fraction] = {}
        for mono, c in (terms or {}).items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != len(self.variables) or any(e < 0 for e in mono):
                raise ValueError(f"bad exponent vector {mono} for variables {self.variables}")
            c = Fraction(c)
            if c:
                clean[mono] = clean.get(mono, Fraction(0)) + c
                if not clean[mono]:
                    del clean[mono]
        self.terms: dict[Monomial, Fraction] = clean

    # construction -----------------------------------------------------

    @classmethod
    def constant(cls, variables: Sequence[str], c: Scalar) -> "MultiPoly":
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, variables: Sequence[str], name: str) -> "MultiPoly":
        idx = tuple(variables).index(name)
        mono = tuple(1 if i == idx else 0 for i in range(len(variables)))
        return cls(variables, {mono: 1})

    @classmethod
    def univariate(cls, name: str, coeffs: Sequence[Scalar]) -> "MultiPoly":
        """Univariate polynomial from ascending coefficients."""
        return cls((name,), {(k,): c for k, c in enumerate(coeffs)})

    def with_variables(self, variables: Sequence[str]) -> "MultiPoly":
        """Re-express in a variable tuple containing all current variables."""
        variables = tuple(variables)
        missing = [v for v in self.variables if v not in variables]
        if missing and any(self.degree_in(v) > 0 for v in missing):
            raise ValueError(f"cannot drop variables {missing} that occur in the polynomial")
        pos = {v: i for i, v in enumerate(self.variables)}
        terms = {}
        for mono, c in self.terms.items():
            terms[tuple(mono[pos[v]] if v in pos else 0 for v in variables)] = c
        return MultiPoly(variables, terms)

    # arithmetic -------------------------------------------------------

    def _coerce(self, other: "MultiPoly | Scalar") -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.variables != self.variables:
                raise ValueError(f"variable mismatch: {self.variables} vs {other.variables}")
            return other
        return MultiPoly.constant(self.variables, other)

    def __add__(self, other: "MultiPoly | Scalar") -> "MultiPoly":
        other = self._coerce(other)
        terms = dict(self.terms)
        for mono, c in other.terms.items():
            terms[mono] = terms.get(mono, Fraction(0)) + c
        return MultiPoly(self.variables, terms)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.variables, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "MultiPoly | Scalar") -> "MultiPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Scalar) -> "MultiPoly":
        return (-self) + other

    def __mul__(self, other: "MultiPoly | Scalar") -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            c = Fraction(other)
            return MultiPoly(self.variables, {m: v * c for m, v in self.terms.items()})
        other = self._coerce(other)
        terms: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                terms[m] = terms.get(m, Fraction(0)) + c1 * c2
        return MultiPoly(self.variables, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MultiPoly":
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        result = MultiPoly.constant(self.variables, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, MultiPoly):
            return self.variables == other.variables and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == MultiPoly.constant(self.variables, other).terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.variables, frozenset(self.terms.items())))

    # queries ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def degree_in(self, name: str) -> int:
        i = self.variables.index(name)
        return max((m[i] for m in self.terms), default=-1)

    def coefficient(self, exponents: Mapping[str, int]) -> Fraction:
        mono = tuple(exponents.get(v, 0) for v in self.variables)
        return self.terms.get(mono, Fraction(0))

    def top_homogeneous_part(self) -> "MultiPoly":
        deg = self.total_degree()
        return MultiPoly(self.variables, {m: c for m, c in self.terms.items() if sum(m) == deg})

    def __call__(self, *args: Scalar, **kwargs: Scalar) -> Fraction:
        return self.evaluate(*args, **kwargs)

    def evaluate(self, *args: Scalar, **kwargs: Scalar) -> Fraction:
        if args:
            if kwargs or len(args) != len(self.variables):
                raise ValueError("pass either all values positionally or by name")
            point = [Fraction(a) for a in args]
        else:
            point = [Fraction(kwargs[v]) for v in self.variables]
        total = Fraction(0)
        for mono, c in self.terms.items():
            term = c
            for x, e in zip(point, mono):
                if e:
                    term *= x**e
            total += term
        return total

    def substitute(self, mapping: Mapping[str, "MultiPoly | Scalar"], variables: Sequence[str]) -> "MultiPoly":
        """Replace variables by polynomials in ``variables``; others must also live there."""
        variables = tuple(variables)
        images = []
        for v in self.variables:
            if v in mapping:
                img = mapping[v]
                images.append(img if isinstance(img, MultiPoly) else MultiPoly.constant(variables, img))
            else:
                images.append(MultiPoly.var(variables, v))
        result = MultiPoly(variables)
        for mono, c in self.terms.items():
            term = MultiPoly.constant(variables, c)
            for img, e in zip(images, mono):
                if e:
                    term = term * img**e
            result = result + term
        return result

    # univariate helpers -----------------------------------------------

    def univariate_coeffs(self) -> list[Fraction]:
        """Ascending coefficients of a one-variable polynomial."""
        if len(self.variables) != 1:
            raise ValueError("univariate_coeffs needs a one-variable polynomial")
        deg = max(self.total_degree(), 0)
        out = [Fraction(0)] * (deg + 1)
        for (e,), c in self.terms.items():
            out[e] = c
        return out

    def leading_coefficient(self) -> Fraction:
        """Coefficient of the highest power of a univariate polynomial."""
        coeffs = self.univariate_coeffs()
        return coeffs[-1]

    # formatting -------------------------------------------------------

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        """Terms by descending total degree, then descending lexicographic exponent."""
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-e for e in t[0])))

    def canonical(self) -> str:
        """Stable textual form, e.g. ``1/6*m^3 - 2*m*l2 + 17/6*m + 2*l2 - 3``."""
        if not self.terms:
            return "0"
        pieces = []
        for mono, c in self.sorted_terms():
            mono_str = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(self.variables, mono) if e
            )
            mag = abs(c)
            if mono_str:
                body = mono_str if mag == 1 else f"{mag}*{mono_str}"
            else:
                body = str(mag)
            sign = "-" if c < 0 else "+"
            pieces.append((sign, body))
        first_sign, first_body = pieces[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"MultiPoly({self.variables}, {self.canonical()!r})"


def falling_binomial(variables: Sequence[str], name: str, k: int) -> MultiPoly:
    """C(x, k) = x(x-1)...(x-k+1)/k! as a polynomial in ``name``."""
    x = MultiPoly.var(variables, name)
    result = MultiPoly.constant(variables, 1)
    for i in range(k):
        result = result * (x - i) * Fraction(1, i + 1)
    return result


def rising_binomial(variables: Sequence[str], name: str, e: int) -> MultiPoly:
    """C(x + e, x) = (x+e)...(x+1)/e! as a polynomial in ``name``."""
    x = MultiPoly.var(variables, name)
    result = MultiPoly.constant(variables, 1)
    for i in range(1, e + 1):
        result = result * (x + i) * Fraction(1, i)
    return result


def binom_poly(e: int, name: str = "m") -> MultiPoly:
    if e < 0:
        raise ValueError("binom_poly needs e >= 0")
    return rising_binomial((name,), name, e)


def poly_sum(polys: Iterable[MultiPoly], variables: Sequence[str]) -> MultiPoly:
    total = MultiPoly(variables)
    for p in polys:
        total = total + p
    return total
