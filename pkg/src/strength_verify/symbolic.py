"""Bounding polynomials for the asymptotic regime and the thresholds N.

The codimension function is built as an exact polynomial in
``(n, m, l2, ..., lk)``.  Differences of it give the polynomials behind the
two families of statements used to push cases down:

* A(j): moving one unit from l_j to l_{j-1} strictly decreases f  (g_A),
* B: lowering m and l_2 together strictly decreases f              (g_B).

Each is bounded below by a univariate "tilde" majorant whose largest real
root is isolated exactly; the roots then fix the thresholds N and the case
bound M used by the finite verifier.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .poly import MultiPoly, falling_binomial, rising_binomial
from .roots import DEFAULT_WIDTH, RootInterval, highest_root
from .slicerank import choose_w, defect_start, general_slice_rank, largeness_threshold
from .strength import beta_matrices, beta_weight

# Published thresholds for the finite check, by degree.
PUBLISHED_N = {
    4: 755,
    5: 3056,
    6: 1742,
    7: 32215,
    8: 1408841,
    9: 73305293,
    10: 4393224603,
}


class ConsistencyError(ArithmeticError):
    """A structural identity the construction relies on did not hold."""


def ell_names(d: int) -> tuple[str, ...]:
    return tuple(f"l{i}" for i in range(2, d // 2 + 1))


@lru_cache(maxsize=None)
def f_poly(d: int) -> MultiPoly:
    """f_{n,d} as a polynomial in (n, m, l2, ..., l_floor(d/2))."""
    if d < 4:
        raise ValueError("f is defined for d >= 4")
    ells = ell_names(d)
    variables = ("n", "m") + ells
    binoms = {}
    total = MultiPoly(variables)
    for beta in beta_matrices(d):
        norm, size = beta_weight(d, beta)
        term = rising_binomial(variables, "m", d - norm)
        for name, (b1, b2) in zip(ells, beta):
            for b in (b1, b2):
                if b:
                    key = (name, b)
                    if key not in binoms:
                        binoms[key] = falling_binomial(variables, name, b)
                    term = term * binoms[key]
        total = total + (-term if size % 2 else term)
    n = MultiPoly.var(variables, "n")
    m = MultiPoly.var(variables, "m")
    return total - (n - m) * (m + 1)


def _drop_n(p: MultiPoly, out_vars: tuple[str, ...], what: str) -> MultiPoly:
    if p.degree_in("n") > 0:
        raise ConsistencyError(f"{what}: residual dependence on n")
    return p.with_variables(out_vars)


@lru_cache(maxsize=None)
def build_g_A(d: int, j: int) -> MultiPoly:
    """g^(j)(m, l2..lj) = f(.., l_{j-1}, l_j, 0..) - f(.., l_{j-1}+1, l_j-1, 0..) - 1."""
    k = d // 2
    if not (d >= 6 and 3 <= j <= k):
        raise ValueError(f"build_g_A needs d >= 6 and 3 <= j <= {k}; got d={d}, j={j}")
    f = f_poly(d)
    full = f.variables
    used = ("n", "m") + tuple(f"l{i}" for i in range(2, j + 1))
    zero_rest = {f"l{i}": 0 for i in range(j + 1, k + 1)}
    first = f.substitute(zero_rest, used)
    lj1 = MultiPoly.var(used, f"l{j - 1}")
    lj = MultiPoly.var(used, f"l{j}")
    second = f.substitute({**zero_rest, f"l{j - 1}": lj1 + 1, f"l{j}": lj - 1}, used)
    assert full[: len(used)] == used
    g = _drop_n(first - second - 1, used[1:], f"g_A(d={d}, j={j})")
    top = g.top_homogeneous_part()
    expected_deg = d - j + 1
    expected = MultiPoly.var(g.variables, "m") ** expected_deg * Fraction(1, math.factorial(expected_deg))
    if top != expected:
        raise ConsistencyError(f"g_A(d={d}, j={j}): top part {top.canonical()} != m^{expected_deg}/{expected_deg}!")
    return g


@lru_cache(maxsize=None)
def build_g_B(d: int) -> MultiPoly:
    """g(m, l2) with f(m, l, 0..) - f(m-1, l-1, 0..) - 1 = g(m, l) - n."""
    if d < 4:
        raise ValueError("build_g_B needs d >= 4")
    k = d // 2
    f = f_poly(d)
    used = ("n", "m", "l2")
    zero_rest = {f"l{i}": 0 for i in range(3, k + 1)}
    first = f.substitute(zero_rest, used)
    m = MultiPoly.var(used, "m")
    l2 = MultiPoly.var(used, "l2")
    second = f.substitute({**zero_rest, "m": m - 1, "l2": l2 - 1}, used)
    diff = first - second - 1
    n_part = MultiPoly(used, {mono: c for mono, c in diff.terms.items() if mono[0]})
    if n_part != MultiPoly.var(used, "n") * -1:
        raise ConsistencyError(f"g_B(d={d}): n enters as {n_part.canonical()}, expected -n")
    g = _drop_n(diff + MultiPoly.var(used, "n"), ("m", "l2"), f"g_B(d={d})")
    lead = g.coefficient({"m": d - 1})
    if lead != Fraction(1, math.factorial(d - 1)) or g.total_degree() != d - 1:
        raise ConsistencyError(f"g_B(d={d}): leading term is not m^{d - 1}/{d - 1}!")
    return g


def tilde_transform(p: MultiPoly, main: str = "m", out: str = "x") -> MultiPoly:
    """Univariate lower bound of p valid for 0 <= every other variable <= main.

    Positive coefficients on monomials involving the other variables are
    dropped; the rest have every other variable replaced by ``main``.
    """
    idx = p.variables.index(main)
    terms: dict[tuple[int, ...], Fraction] = {}
    for mono, c in p.terms.items():
        others = sum(e for i, e in enumerate(mono) if i != idx)
        if others and c > 0:
            continue
        key = (mono[idx] + others,)
        terms[key] = terms.get(key, Fraction(0)) + c
    return MultiPoly((out,), terms)


def b_threshold_poly(d: int, w: Fraction | int | None = None) -> MultiPoly:
    """tilde(g_B)(x) - (x + w - 1)^(d-1) / d!."""
    if w is None:
        w = choose_w(d)
    gt = tilde_transform(build_g_B(d))
    x = MultiPoly.var(("x",), "x")
    return gt - (x + (Fraction(w) - 1)) ** (d - 1) * Fraction(1, math.factorial(d))


@dataclass(frozen=True)
class Statement:
    """One statement family with its bounding polynomial and certified root."""

    name: str
    poly: MultiPoly
    root: RootInterval | None


@dataclass
class DegreeConfig:
    d: int
    w: Fraction
    statements: list[Statement]
    M: int
    largeness_n: int
    N_computed: int
    N_published: int | None = None
    width: Fraction = field(default=DEFAULT_WIDTH)

    @property
    def N_run(self) -> int:
        return max(self.N_computed, self.N_published or 0)

    def required_N(self) -> list[tuple[str, Fraction]]:
        """Lower bounds N must meet, one per statement plus the largeness one."""
        fact = math.factorial(self.d)
        req: list[tuple[str, Fraction]] = [("largeness", Fraction(self.largeness_n - 1))]
        for st in self.statements:
            if st.root is None:
                continue
            base = st.root.hi + self.w - 1
            req.append((st.name, base ** (self.d - 1) / fact if base > 0 else Fraction(0)))
        return req

    def threshold_checks(self, N: int) -> list[dict]:
        """How each requirement on N is met, one entry per requirement.

        A statement is settled either by the root bound (N at least the
        bound) or, failing that, by exact evaluation of its polynomial over
        every (m, l) with m at most the root's floor that some n > N can
        reach.  Above the root the tilde majorant takes over, which needs
        the largeness condition at N + 1.
        """
        if N < 0:
            raise ValueError("N must be nonnegative")
        out = []
        first = N + 1
        large = first >= self.largeness_n
        out.append({"name": "largeness", "bound": Fraction(self.largeness_n - 1), "method": "bound", "ok": large})
        # Every n > N has n - sl.rk >= this, so m - sum(l) >= base_min.
        base_min = first - general_slice_rank(first, self.d) + 1
        bounds = dict(self.required_N())
        for st in self.statements:
            bound = bounds.get(st.name, Fraction(0))
            if N >= bound:
                out.append({"name": st.name, "bound": bound, "method": "bound", "ok": True})
                continue
            top = math.floor(st.root.hi)
            if st.name == "B":
                ok = _b_holds_below(self.d, N, top, base_min)
            else:
                ok = _a_holds_below(self.d, int(st.name[1:]), top, base_min)
            out.append({"name": st.name, "bound": bound, "method": "finite", "ok": ok and large})
        return out

    def is_valid_N(self, N: int) -> bool:
        """Whether every statement family provably holds for all n > N."""
        return all(c["ok"] for c in self.threshold_checks(N))

    def as_dict(self) -> dict:
        return {
            "d": self.d,
            "w": str(self.w),
            "M": self.M,
            "largeness_n": self.largeness_n,
            "N_computed": self.N_computed,
            "N_published": self.N_published,
            "N_run": self.N_run,
            "N_published_valid": None if self.N_published is None else self.is_valid_N(self.N_published),
            "N_computed_valid": self.is_valid_N(self.N_computed),
            "root_width": str(self.width),
            "statements": [
                {
                    "name": st.name,
                    "poly": st.poly.canonical(),
                    "root": None if st.root is None else st.root.as_dict(),
                }
                for st in self.statements
            ],
        }


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _a_holds_below(d: int, j: int, top: int, base_min: int) -> bool:
    """g_A(m, l) >= 0 for all m <= top, l_j >= 1, sum(l) <= m - base_min."""
    g = build_g_A(d, j)
    for m in range(2, top + 1):
        for s in range(1, m - base_min + 1):
            for ells in _compositions(s, j - 1):
                if ells[-1] >= 1 and g(m, *ells) < 0:
                    return False
    return True


def _b_holds_below(d: int, N: int, top: int, base_min: int) -> bool:
    """g_B(m, l) >= n for every n > N reachable from (m, l) with m <= top.

    With base b = m - l, the admissible n satisfy n - sl.rk <= b - 1, so the
    largest is defect_start(d, b) - 1; g_B does not depend on n.
    """
    g = build_g_B(d)
    for m in range(2, top + 1):
        for ell in range(1, m - base_min + 1):
            n_max = defect_start(d, m - ell) - 1
            if n_max > N and n_max >= m and g(m, ell) < n_max:
                return False
    return True


def statement_polys(d: int, w: Fraction | None = None) -> list[tuple[str, MultiPoly]]:
    out = [(f"A{j}", tilde_transform(build_g_A(d, j))) for j in range(3, d // 2 + 1)]
    out.append(("B", b_threshold_poly(d, w)))
    return out


def compute_N(d: int, width: Fraction | str = DEFAULT_WIDTH) -> DegreeConfig:
    if d < 4:
        raise ValueError("compute_N needs d >= 4")
    width = Fraction(width)
    w = choose_w(d)
    statements = []
    for name, poly in statement_polys(d, w):
        statements.append(Statement(name, poly, highest_root(poly, width)))
    his = [st.root.hi for st in statements if st.root is not None]
    M = math.floor(max(his)) if his else 0
    cfg = DegreeConfig(
        d=d,
        w=w,
        statements=statements,
        M=max(M, 0),
        largeness_n=largeness_threshold(d),
        N_computed=0,
        N_published=PUBLISHED_N.get(d),
        width=width,
    )
    cfg.N_computed = max(math.ceil(bound) for _, bound in cfg.required_N())
    return cfg
