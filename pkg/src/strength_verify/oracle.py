"""Hilbert function of ideals generated by random forms, over a prime field.

dim I_d is the rank of the Macaulay matrix: one row per product x^a f_i with
deg x^a = d - deg f_i, one column per degree-d monomial.  Random
coefficients stand in for general forms; the rank can only drop on a bad
draw, so several seeds are run and the largest rank is kept.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .series import DegreeProfile, binom, froberg_coeff
from .slicerank import general_slice_rank
from .strength import EllProfile, f_eval, generator_profile

log = logging.getLogger(__name__)

DEFAULT_PRIME = 2147483647
MAX_COLUMNS = 20000
DEFAULT_SEEDS = 2


def _is_prime(p: int) -> bool:
    from sympy import isprime

    return bool(isprime(p))


@dataclass(frozen=True)
class OracleQuery:
    n: int
    profile: DegreeProfile
    d: int
    p: int = DEFAULT_PRIME
    seed: int = 0
    seeds: int = DEFAULT_SEEDS

    def __post_init__(self):
        if not isinstance(self.profile, DegreeProfile):
            object.__setattr__(self, "profile", DegreeProfile(self.profile))
        if self.n < 0 or self.d < 0:
            raise ValueError("need n >= 0 and d >= 0")
        if self.seeds < 1:
            raise ValueError("at least one seed is required")
        if not 2 <= self.p < 2**31 or not _is_prime(self.p):
            raise ValueError(f"p = {self.p} is not a prime below 2^31")
        if binom(self.n + self.d, self.d) > MAX_COLUMNS:
            raise ValueError(
                f"C(n+d, d) = {binom(self.n + self.d, self.d)} exceeds the {MAX_COLUMNS}-column cap"
            )

    @property
    def seed_list(self) -> list[int]:
        return [self.seed + i for i in range(self.seeds)]


@dataclass(frozen=True)
class OracleResult:
    hf_value: int
    ideal_dim: int
    shape: tuple[int, int]
    seeds: tuple[int, ...]
    ranks: tuple[int, ...] = field(default=())

    def as_dict(self) -> dict:
        return {
            "hf_value": self.hf_value,
            "ideal_dim": self.ideal_dim,
            "shape": list(self.shape),
            "seeds": list(self.seeds),
            "ranks": list(self.ranks),
        }


@lru_cache(maxsize=256)
def monomials(nvars: int, degree: int) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors of the given degree, in a fixed (lexicographic) order."""
    if nvars == 0:
        return ((),) if degree == 0 else ()
    if nvars == 1:
        return ((degree,),)
    out = []
    for first in range(degree, -1, -1):
        for rest in monomials(nvars - 1, degree - first):
            out.append((first,) + rest)
    return tuple(out)


def _weights(nvars: int, degree: int) -> np.ndarray:
    # Base degree + 1 digits, first variable most significant: keys follow the monomial order.
    return (degree + 1) ** np.arange(nvars - 1, -1, -1, dtype=np.int64)


def _monomial_keys(nvars: int, degree: int) -> np.ndarray:
    weights = _weights(nvars, degree)
    return np.asarray(monomials(nvars, degree), dtype=np.int64).reshape(-1, nvars) @ weights


def _random_forms(q: OracleQuery, seed: int) -> list[np.ndarray]:
    """Coefficient vectors of one random form per generator degree.

    Generator i draws from its own stream keyed by (seed, n, p, i, degree), so
    appending a generator leaves the earlier ones unchanged.
    """
    return [_random_form(q.n, q.p, seed, i, e) for i, e in enumerate(q.profile.degrees)]


def _random_form(n: int, p: int, seed: int, index: int, degree: int) -> np.ndarray:
    rng = np.random.default_rng([seed, n, p, index, degree])
    return rng.integers(0, p, size=len(monomials(n + 1, degree)), dtype=np.int64)


def multiples_block(n: int, coeffs: np.ndarray, e: int, d: int) -> np.ndarray:
    """Rows x^a f for all monomials x^a of degree d - e, in degree-d monomial coordinates."""
    nvars = n + 1
    ncols = len(monomials(nvars, d))
    if e > d:
        return np.zeros((0, ncols), dtype=np.int64)
    shifts = np.asarray(monomials(nvars, d - e), dtype=np.int64).reshape(-1, nvars)
    support = np.asarray(monomials(nvars, e), dtype=np.int64).reshape(-1, nvars)
    weights = _weights(nvars, d)
    keys = (shifts @ weights)[:, None] + (support @ weights)[None, :]
    # Degree-d keys are strictly decreasing in the lexicographic order.
    col_keys = _monomial_keys(nvars, d)[::-1]
    idx = ncols - 1 - np.searchsorted(col_keys, keys)
    out = np.zeros((len(shifts), ncols), dtype=np.int64)
    out[np.arange(len(shifts))[:, None], idx] = coeffs[None, :]
    return out


def macaulay_matrix(q: OracleQuery, seed: int) -> np.ndarray:
    blocks = [
        multiples_block(q.n, coeffs, e, q.d)
        for e, coeffs in zip(q.profile.degrees, _random_forms(q, seed))
    ]
    ncols = len(monomials(q.n + 1, q.d))
    return np.vstack(blocks) if blocks else np.zeros((0, ncols), dtype=np.int64)


_EXACT = 2.0**53
_FLOAT_PRIME_LIMIT = 2**26


def _reduce(x: np.ndarray, p: int) -> np.ndarray:
    """Integer-valued float64 array (entries below 2^53) to int64 residues mod p."""
    return _modf(x, p).astype(np.int64)


def _mulmod(small: np.ndarray, big: np.ndarray, p: int) -> np.ndarray:
    """small @ big mod p through float64 BLAS.

    small holds residues as int64, big as float64.  small is cut into limbs
    narrow enough that every dot product stays below 2^53, hence exact.
    """
    k = small.shape[1]
    bits = 1
    while k * (p - 1) * (2 ** (bits + 1) - 1) < _EXACT:
        bits += 1
    mask = (1 << bits) - 1
    rest = small.copy()
    out = None
    shift = 0
    while True:
        part = _reduce((rest & mask).astype(np.float64) @ big, p)
        if shift:
            part = part * pow(2, shift, p) % p
        out = part if out is None else (out + part) % p
        rest >>= bits
        shift += bits
        if not rest.any():
            return out


def _rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of a and its pivot columns.

    Below 2^26 every product of residues is exact in float64, which is faster
    than int64 remainders; larger primes take the integer route.
    """
    if p < _FLOAT_PRIME_LIMIT:
        new, piv = _rref_core(a.astype(np.float64), p, _modf)
        return new.astype(np.int64), piv
    return _rref_core(a, p, np.remainder)


def _modf(x: np.ndarray, p: int) -> np.ndarray:
    x -= np.floor(x / p) * p
    x[x < 0] += p
    x[x >= p] -= p
    return x


def _rref_core(a: np.ndarray, p: int, mod) -> tuple[np.ndarray, list[int]]:
    nrows = a.shape[0]
    pivots: list[int] = []
    rank = 0
    for col in np.flatnonzero(a.any(axis=0)):
        if rank == nrows:
            break
        nz = np.flatnonzero(a[rank:, col])
        if nz.size == 0:
            continue
        r = rank + int(nz[0])
        if r != rank:
            a[[rank, r]] = a[[r, rank]]
        row = mod(a[rank, col:] * pow(int(a[rank, col]), p - 2, p), p)
        a[rank, col:] = row
        hit = np.flatnonzero(a[:, col])
        hit = hit[hit != rank]
        if hit.size:
            a[hit, col:] = mod(a[hit, col:] - mod(a[hit, col][:, None] * row, p), p)
        pivots.append(int(col))
        rank += 1
    return a[:rank], pivots


class Echelon:
    """Echelon basis of a growing row space over F_p, kept as a list of blocks.

    Each block is in reduced echelon form and vanishes on the pivot columns
    of every earlier block.  Reducing a row against blocks in order therefore
    clears all pivot columns, with one matrix product per block.  Blocks are
    never modified, so copies share them.
    """

    def __init__(self, ncols: int, p: int, chunk: int = 128):
        self.p = p
        self.ncols = ncols
        self.chunk = chunk
        self.blocks: list[tuple[list[int], np.ndarray]] = []
        self.rank = 0

    @property
    def full(self) -> bool:
        return self.rank == self.ncols

    @property
    def pivots(self) -> list[int]:
        return [c for piv, _ in self.blocks for c in piv]

    def copy(self) -> "Echelon":
        out = Echelon(self.ncols, self.p, self.chunk)
        out.blocks = list(self.blocks)
        out.rank = self.rank
        return out

    def reduce(self, rows: np.ndarray) -> np.ndarray:
        for piv, basis in self.blocks:
            rows = (rows - _mulmod(rows[:, piv], basis, self.p)) % self.p
        return rows

    def add(self, block: np.ndarray) -> int:
        """Add the rows of block; returns the new rank."""
        block = np.asarray(block, dtype=np.int64) % self.p
        for start in range(0, block.shape[0], self.chunk):
            if self.full:
                break
            part = self.reduce(block[start : start + self.chunk])
            part = part[part.any(axis=1)]
            if not part.size:
                continue
            new, piv = _rref(part, self.p)
            self.blocks.append((piv, new.astype(np.float64)))
            self.rank += len(piv)
        return self.rank


def rank_mod_p(a: np.ndarray, p: int) -> int:
    """Rank over F_p of an integer matrix."""
    a = np.asarray(a, dtype=np.int64)
    ech = Echelon(a.shape[1], p)
    return ech.add(a) if a.shape[0] else 0


def random_ideal_hf(q: OracleQuery) -> OracleResult:
    """dim (S/I)_d for I generated by random forms of the profile's degrees."""
    total = binom(q.n + q.d, q.d)
    ranks = []
    shape = (0, total)
    for seed in q.seed_list:
        mat = macaulay_matrix(q, seed)
        shape = mat.shape
        ranks.append(rank_mod_p(mat, q.p) if mat.size else 0)
    if len(set(ranks)) > 1:
        log.warning("rank differs across seeds %s: %s; keeping the maximum", q.seed_list, ranks)
    rank = max(ranks)
    return OracleResult(
        hf_value=total - rank,
        ideal_dim=rank,
        shape=(int(shape[0]), int(shape[1])),
        seeds=tuple(q.seed_list),
        ranks=tuple(ranks),
    )


def check_tangent_codim(
    n: int,
    d: int,
    ells: EllProfile | Sequence[int],
    p: int = DEFAULT_PRIME,
    seed: int = 0,
    seeds: int = DEFAULT_SEEDS,
) -> dict:
    """Compare the tangent-space codimension with f_{n,d}(n - l_1, tail)."""
    if not isinstance(ells, EllProfile):
        ells = EllProfile(d, tuple(ells))
    profile = generator_profile(d, ells)
    r = ells.r
    m = n - ells.ells[0]
    if m < 0:
        raise ValueError(f"l_1 = {ells.ells[0]} exceeds n = {n}")
    res = random_ideal_hf(OracleQuery(n, profile, d, p, seed, seeds))
    fval = f_eval(n, d, m, ells.tail)
    equality_expected = 2 * r <= n + 1
    return {
        "n": n,
        "d": d,
        "ells": list(ells.ells),
        "r": r,
        "oracle_hf": res.hf_value,
        "f_value": fval,
        "geq": res.hf_value >= fval,
        "equal": res.hf_value == fval,
        "equality_expected": equality_expected,
        "ok": res.hf_value >= fval and (res.hf_value == fval or not equality_expected),
        "oracle": res.as_dict(),
    }


def known_regime(n: int, profile: DegreeProfile, d: int) -> str | None:
    """Regime where the bracketed prediction is known to be exact, if any."""
    if len(profile) <= n + 1:
        return "complete-intersection"
    if profile.degrees and d == min(profile.degrees) + 1:
        return "lowest-degree-plus-one"
    return None


def check_sfc_known(
    n: int,
    profile: DegreeProfile | Iterable[int],
    d: int,
    p: int = DEFAULT_PRIME,
    seed: int = 0,
    seeds: int = DEFAULT_SEEDS,
) -> dict:
    """Oracle value against the bracketed prediction, where it is a theorem."""
    if not isinstance(profile, DegreeProfile):
        profile = DegreeProfile(profile)
    regime = known_regime(n, profile, d)
    out = {"n": n, "degrees": list(profile.degrees), "d": d, "regime": regime}
    if regime is None:
        return {**out, "verdict": "inconclusive"}
    res = random_ideal_hf(OracleQuery(n, profile, d, p, seed, seeds))
    predicted = froberg_coeff(n, profile, d)
    return {
        **out,
        "oracle_hf": res.hf_value,
        "predicted": predicted,
        "verdict": "pass" if res.hf_value == predicted else "fail",
        "oracle": res.as_dict(),
    }


def profile_tree_hf(
    n: int,
    d: int,
    max_degree: int,
    max_generators: int,
    p: int = DEFAULT_PRIME,
    seed: int = 0,
    saturated: frozenset = frozenset(),
) -> dict[tuple[int, ...], int]:
    """dim (S/I)_d for every sorted degree list with entries <= max_degree.

    Profiles are visited depth first, so each one extends the echelon basis of
    its prefix by the multiples of a single new generator; the random forms are
    those of random_ideal_hf with the same seed.  Once the ideal fills degree d,
    every extension does too.  Profiles listed in saturated (hf zero in a lower
    degree, hence in all higher ones) and their extensions are not recomputed.
    """
    ncols = binom(n + d, d)
    out: dict[tuple[int, ...], int] = {}

    def walk(prefix: tuple[int, ...], ech: Echelon | None) -> None:
        for e in range(prefix[-1] if prefix else 1, max_degree + 1):
            prof = prefix + (e,)
            if ech is None or prof in saturated:
                child = None
            else:
                child = ech.copy()
                child.add(multiples_block(n, _random_form(n, p, seed, len(prefix), e), e, d))
                if child.full:
                    child = None
            out[prof] = 0 if child is None else ncols - child.rank
            if len(prof) < max_generators:
                walk(prof, child)

    walk((), Echelon(ncols, p))
    return out


def complete_intersection_sweep(
    max_n: int,
    max_degree: int,
    max_target: int,
    p: int = DEFAULT_PRIME,
    seed: int = 0,
    seeds: int = DEFAULT_SEEDS,
) -> list[dict]:
    """Oracle against the bracketed prediction for every profile of at most n + 1 forms.

    Covers 0 <= n <= max_n, generator degrees 1..max_degree and target degrees
    0..max_target.  The oracle value per cell is the minimum over the seeds.
    """
    out = []
    for n in range(max_n + 1):
        zero: set[tuple[int, ...]] = set()
        for d in range(max_target + 1):
            tables = [
                profile_tree_hf(n, d, max_degree, n + 1, p, s, frozenset(zero))
                for s in range(seed, seed + seeds)
            ]
            for prof in sorted(tables[0]):
                hf = min(t[prof] for t in tables)
                predicted = froberg_coeff(n, DegreeProfile(prof), d)
                if hf == 0:
                    zero.add(prof)
                out.append(
                    {
                        "n": n,
                        "degrees": list(prof),
                        "d": d,
                        "oracle_hf": hf,
                        "predicted": predicted,
                        "verdict": "pass" if hf == predicted else "fail",
                    }
                )
    return out


def lowest_degree_plus_one_instances(count: int, seed: int = 0) -> list[tuple[int, DegreeProfile, int]]:
    """Deterministic sample of (n, profile, min degree + 1) with more than n + 1 generators."""
    rng = np.random.default_rng([seed, count])
    out: list[tuple[int, DegreeProfile, int]] = []
    seen = set()
    while len(out) < count:
        n = int(rng.integers(1, 6))
        low = int(rng.integers(1, 5))
        s = int(rng.integers(n + 2, n + 9))
        degrees = [low] + [int(x) for x in rng.integers(low, low + 3, size=s - 1)]
        profile = DegreeProfile(degrees)
        key = (n, profile.degrees)
        if key in seen or binom(n + low + 1, n) > 2000:
            continue
        seen.add(key)
        out.append((n, profile, low + 1))
    return out


def tangent_instances(max_n: int, max_d: int) -> list[tuple[int, int, tuple[int, ...]]]:
    """Every (n, d, ells) with 4 <= d <= max_d, n <= max_n, r >= 1 and l_1 <= n."""
    out = []
    for d in range(4, max_d + 1):
        k = d // 2
        for n in range(1, max_n + 1):
            for ells in itertools.product(range(n + 2), repeat=k):
                if sum(ells) >= 1 and ells[0] <= n:
                    out.append((n, d, ells))
    return out


def sample_tangent_instances(
    count: int, max_n: int, max_d: int, seed: int = 0
) -> tuple[list[tuple[int, int, tuple[int, ...]]], list[tuple[int, int, tuple[int, ...]]]]:
    """count instances with 2r <= n + 1 and count beyond, drawn deterministically.

    Beyond 2r <= n + 1 the inequality is only claimed below the filling
    threshold, r <= sl.rk(n, d) - 1, so the second pool stops there.
    """
    pool = tangent_instances(max_n, max_d)
    within = [x for x in pool if 2 * sum(x[2]) <= x[0] + 1]
    beyond = [
        x for x in pool if 2 * sum(x[2]) > x[0] + 1 and sum(x[2]) <= general_slice_rank(x[0], x[1]) - 1
    ]
    rng = np.random.default_rng([seed, count, max_n, max_d])
    pick = lambda xs: [xs[i] for i in sorted(rng.choice(len(xs), size=min(count, len(xs)), replace=False))]
    return pick(within), pick(beyond)
