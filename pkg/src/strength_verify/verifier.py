"""Exhaustive check of the key inequality below the threshold N.

Only plateau points n matter, and for those the base b = m - sum(tail)
is pinned to n - sl.rk + 1.  Writing s = sum(tail) and

    H(m, tail) = coeff_d(Q_tail / (1 - t)^(m+1)) + m (m + 1),

with Q_tail the product of the (1 - t^i)(1 - t^(d-i)) factors, the gap
f(m, tail) - f(b, 0) equals H(b + s, tail) - H(b, 0) - n s, which needs no
per-case series arithmetic once Q_tail is known.  Sampled cases are checked
against :func:`strength.key_inequality` so the two paths stay honest.
"""

from __future__ import annotations

import csv
import io
import math
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from . import __version__
from .roots import cauchy_bound, peval
from .series import binom
from .slicerank import defect_start, general_slice_rank, plateau_set
from .strength import f_eval, is_exceptional, key_inequality, tail_length
from .symbolic import DegreeConfig, compute_N

MIN_DEGREE, MAX_DEGREE = 4, 10
DEFAULT_VIOLATION_CAP = 1000


def _check_degree(d: int) -> None:
    if not MIN_DEGREE <= d <= MAX_DEGREE:
        raise ValueError(f"verification covers 4 <= d <= 10, got d = {d}")


@dataclass(frozen=True)
class CaseRecord:
    n: int
    d: int
    m: int
    ell_tail: tuple[int, ...]
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
        return is_exceptional(self.n, self.d, self.m, self.ell_tail)

    def key(self) -> tuple:
        return (self.n, self.m, self.ell_tail)

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "m": self.m,
            "ell_tail": list(self.ell_tail),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "holds": self.holds,
            "strict": self.strict,
            "exceptional": self.exceptional,
        }

    def row(self) -> list:
        return [self.n, self.d, self.m, *self.ell_tail, self.lhs, self.rhs, int(self.strict), int(self.exceptional)]


def csv_header(d: int) -> list[str]:
    return ["n", "d", "m", *(f"l{i}" for i in range(2, d // 2 + 1)), "lhs", "rhs", "strict", "exceptional"]


def write_csv(d: int, records: Iterable[CaseRecord], out: io.TextIOBase) -> int:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(csv_header(d))
    count = 0
    for rec in records:
        writer.writerow(rec.row())
        count += 1
    return count


# -- enumeration ------------------------------------------------------------


def plateau_bases(d: int, N: int) -> list[tuple[int, int]]:
    """(base, n) for every plateau point n <= N; base = n - sl.rk + 1."""
    out = []
    b = 1
    while True:
        n = defect_start(d, b) - 1
        if n > N:
            return out
        if n >= 1:
            out.append((b, n))
        b += 1


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_cases(d: int, config: DegreeConfig | None = None, N: int | None = None) -> Iterator[tuple[int, int, tuple[int, ...]]]:
    """Yield (n, m, tail) for every claim-level case, ordered by n, m, tail."""
    _check_degree(d)
    if config is None:
        config = compute_N(d)
    if N is None:
        N = config.N_run
    k = tail_length(d)
    for n in plateau_set(d, N):
        base = n - general_slice_rank(n, d) + 1
        for m in range(base, min(n, config.M) + 1):
            for tail in _compositions(m - base, k):
                yield n, m, tail


# -- fast evaluation --------------------------------------------------------


def _mul_trunc(a: list[int], b: list[int], order: int) -> list[int]:
    out = [0] * (order + 1)
    for i, x in enumerate(a):
        if x:
            for j in range(min(len(b), order + 1 - i)):
                out[i + j] += x * b[j]
    return out


def _factor(d: int, i: int) -> list[int]:
    """(1 - t^i)(1 - t^(d-i)) truncated at t^d."""
    f = [0] * (d + 1)
    f[0] += 1
    f[i] -= 1
    f[d - i] -= 1
    f[d] += 1
    return f


class _Evaluator:
    def __init__(self, d: int, max_m: int):
        self.d = d
        # cols[m][k] = C(m + d - k, m): coefficient read-out against Q.
        self.cols = [[binom(m + d - k, m) for k in range(d + 1)] for m in range(max_m + 1)]

    def H(self, m: int, q: Sequence[int]) -> int:
        return sum(map(int.__mul__, q, self.cols[m])) + m * (m + 1)


@dataclass
class _Partial:
    cases: int = 0
    strict: int = 0
    ties: int = 0
    violation_count: int = 0
    violations: list = field(default_factory=list)
    exceptional: list = field(default_factory=list)


def _scan(d: int, M: int, bases: list[tuple[int, int]], cap: int) -> _Partial:
    """Check every case whose plateau point is listed in ``bases`` (sorted by base)."""
    out = _Partial()
    # A base above M leaves no room for m.
    bases = [(b, n) for b, n in bases if b <= min(n, M)]
    if not bases:
        return out
    k = tail_length(d)
    ev = _Evaluator(d, M)
    one = [1] + [0] * d
    h0 = {b: ev.H(b, one) for b, _ in bases}
    # For a tail of sum s the admissible bases satisfy b + s <= min(n, M).
    max_s = max(min(n, M) - b for b, n in bases)
    factors = [_factor(d, i) for i in range(2, d // 2 + 1)]

    def record(b: int, n: int, s: int, tail: tuple[int, ...], gap: int) -> CaseRecord:
        m = b + s
        rhs = f_eval(n, d, b, (0,) * k)
        return CaseRecord(n, d, m, tail, rhs + gap, rhs)

    def walk(idx: int, q: list[int], tail: tuple[int, ...], s: int):
        if idx == k:
            for b, n in bases:
                m = b + s
                if m > M:
                    break
                if m > n:
                    continue
                gap = ev.H(m, q) - h0[b] - n * s
                out.cases += 1
                exc = s > 0 and is_exceptional(n, d, m, tail)
                if exc:
                    out.exceptional.append(record(b, n, s, tail, gap))
                if gap > 0:
                    out.strict += 1
                    continue
                if gap == 0:
                    out.ties += 1
                    if s == 0 or exc:
                        continue
                out.violation_count += 1
                if len(out.violations) < cap:
                    out.violations.append(record(b, n, s, tail, gap))
            return
        cur = q
        for ell in range(max_s - s + 1):
            walk(idx + 1, cur, tail + (ell,), s + ell)
            cur = _mul_trunc(cur, factors[idx], d)

    walk(0, one, (), 0)
    return out


def _scan_job(args):
    return _scan(*args)


def _chunks(bases: list[tuple[int, int]], workers: int) -> list[list[tuple[int, int]]]:
    # Small bases carry the most cases; deal them round-robin.
    return [bases[i::workers] for i in range(workers) if bases[i::workers]]


def resolve_workers(workers: int | None) -> int:
    if workers is None:
        env = os.environ.get("STRENGTH_VERIFY_WORKERS")
        workers = int(env) if env else 1
    if workers < 1:
        raise ValueError("workers must be at least 1")
    return workers


# -- certificates -----------------------------------------------------------


REDUCTION_NOTES = (
    "n runs over plateau points n <= N_run, where sl.rk(n) = sl.rk(n+1); other n reduce to these",
    "m - sum(tail) is pinned to n - sl.rk + 1; larger slack reduces to this level",
    "m <= M, the floor of the largest certified root; larger m is covered by the tilde majorants",
    "n > N_run is covered by the statement families checked in the threshold report",
    "each case compares f(m, tail) with f(m - sum(tail), 0) exactly in integers",
)


@dataclass
class Certificate:
    d: int
    config: DegreeConfig
    N_used: int
    threshold_valid: bool
    threshold_checks: list
    plateau_count: int
    case_count: int
    strict_count: int
    tie_count: int
    violation_count: int
    violations: list[CaseRecord]
    exceptional: list[CaseRecord]
    expected_exceptional: list[tuple]
    cross_checked: int
    duration_seconds: float
    workers: int
    version: str = __version__
    notes: tuple[str, ...] = REDUCTION_NOTES

    @property
    def exceptional_ok(self) -> bool:
        return sorted(r.key() for r in self.exceptional) == sorted(self.expected_exceptional)

    @property
    def verdict(self) -> str:
        if not self.threshold_valid:
            return "unsound-threshold"
        if self.violation_count or not self.exceptional_ok:
            return "refuted"
        return "verified"

    @property
    def verified(self) -> bool:
        return self.verdict == "verified"

    def as_dict(self, timing: bool = True) -> dict:
        out = {
            "d": self.d,
            "verdict": self.verdict,
            "config": self.config.as_dict(),
            "N_used": self.N_used,
            "threshold_valid": self.threshold_valid,
            "threshold_checks": [
                {"name": c["name"], "bound": c["bound"], "method": c["method"], "ok": c["ok"]}
                for c in self.threshold_checks
            ],
            "plateau_count": self.plateau_count,
            "case_count": self.case_count,
            "strict_count": self.strict_count,
            "tie_count": self.tie_count,
            "violation_count": self.violation_count,
            "violations": [r.as_dict() for r in self.violations],
            "exceptional": [r.as_dict() for r in self.exceptional],
            "exceptional_matches_expected": self.exceptional_ok,
            "cross_checked_cases": self.cross_checked,
            "tool_version": self.version,
            "reduction_notes": list(self.notes),
        }
        if timing:
            out["duration_seconds"] = f"{self.duration_seconds:.3f}"
            out["workers"] = self.workers
        return out


def expected_exceptional(d: int) -> list[tuple]:
    """The tie cases allowed in the strict part: only d = 4, n = 3, m - l2 = 1."""
    if d != 4:
        return []
    base = 3 - general_slice_rank(3, 4) + 1
    out = []
    for s in range(1, 3):
        if base + s <= 3:
            out.append((3, base + s, (s,)))
    return out


def _cross_check(d: int, config: DegreeConfig, bases, samples: int, seed: int) -> int:
    """Recompute sampled cases through key_inequality and compare the gap."""
    rng = random.Random(seed)
    k = tail_length(d)
    ev = _Evaluator(d, config.M)
    checked = 0
    for _ in range(samples):
        b, n = rng.choice(bases)
        top = min(n, config.M) - b
        if top < 0:
            continue
        s = rng.randint(0, top)
        tail = [0] * k
        for _ in range(s):
            tail[rng.randrange(k)] += 1
        q = [1] + [0] * d
        for i, ell in enumerate(tail, start=2):
            for _ in range(ell):
                q = _mul_trunc(q, _factor(d, i), d)
        gap = ev.H(b + s, q) - ev.H(b, [1] + [0] * d) - n * s
        ki = key_inequality(n, d, b + s, tail)
        if ki.lhs - ki.rhs != gap:
            raise ArithmeticError(f"fast gap {gap} != direct {ki.lhs - ki.rhs} at {(n, d, b + s, tail)}")
        checked += 1
    return checked


def verify_degree(
    d: int,
    workers: int | None = None,
    violation_cap: int = DEFAULT_VIOLATION_CAP,
    config: DegreeConfig | None = None,
    N: int | None = None,
    cross_check: int = 200,
    seed: int = 0,
) -> Certificate:
    """Check every claim-level case for degree d and return the certificate."""
    _check_degree(d)
    workers = resolve_workers(workers)
    start = time.perf_counter()
    if config is None:
        config = compute_N(d)
    N_used = config.N_run if N is None else N
    checks = config.threshold_checks(N_used)
    bases = plateau_bases(d, N_used)

    if workers == 1 or len(bases) < 2:
        parts = [_scan(d, config.M, bases, violation_cap)]
    else:
        jobs = [(d, config.M, chunk, violation_cap) for chunk in _chunks(bases, workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_scan_job, jobs))

    violations = sorted((r for p in parts for r in p.violations), key=CaseRecord.key)[:violation_cap]
    exceptional = sorted((r for p in parts for r in p.exceptional), key=CaseRecord.key)
    crossed = _cross_check(d, config, bases, cross_check, seed) if bases else 0
    return Certificate(
        d=d,
        config=config,
        N_used=N_used,
        threshold_valid=all(c["ok"] for c in checks),
        threshold_checks=checks,
        plateau_count=len(bases),
        case_count=sum(p.cases for p in parts),
        strict_count=sum(p.strict for p in parts),
        tie_count=sum(p.ties for p in parts),
        violation_count=sum(p.violation_count for p in parts),
        violations=violations,
        exceptional=exceptional,
        expected_exceptional=expected_exceptional(d),
        cross_checked=crossed,
        duration_seconds=time.perf_counter() - start,
        workers=workers,
    )


def iter_case_records(d: int, config: DegreeConfig | None = None, N: int | None = None) -> Iterator[CaseRecord]:
    """Every claim-level case, evaluated directly (slow; meant for export)."""
    for n, m, tail in enumerate_cases(d, config, N):
        ki = key_inequality(n, d, m, tail)
        yield CaseRecord(n, d, m, tail, ki.lhs, ki.rhs)


# -- asymptotic regime and reduction -----------------------------------------


def certify_asymptotic(d: int, config: DegreeConfig | None = None) -> dict:
    """Sign certificates for each statement family beyond its root."""
    _check_degree(d)
    if config is None:
        config = compute_N(d)
    entries = []
    for st in config.statements:
        coeffs = st.poly.univariate_coeffs()
        lead = coeffs[-1]
        if st.root is None:
            points = [Fraction(0)]
        else:
            points = [st.root.hi, math.ceil(st.root.hi) + Fraction(0)]
        bound = cauchy_bound(coeffs)
        points.append(max(bound, points[-1]))
        values = {str(x): peval(coeffs, x) for x in points}
        positive_beyond = all(v > 0 for x, v in values.items() if Fraction(x) > (st.root.hi if st.root else -bound))
        entries.append(
            {
                "name": st.name,
                "leading_coefficient": lead,
                "root": None if st.root is None else st.root.as_dict(),
                "values": values,
                "ok": lead > 0 and positive_beyond and all(v >= 0 for v in values.values()),
            }
        )
    N = config.N_run
    first = N + 1
    largeness_ok = first >= config.largeness_n
    return {
        "d": d,
        "w": config.w,
        "N": N,
        "largeness_at_N_plus_1": largeness_ok,
        "statements": entries,
        "ok": largeness_ok and all(e["ok"] for e in entries),
    }


def spot_check_reduction(d: int, samples: int = 100, max_n: int = 60, seed: int = 0) -> dict:
    """Check the inequality directly on random in-scope tuples with slack."""
    if not MIN_DEGREE <= d <= MAX_DEGREE:
        raise ValueError(f"spot checks cover 4 <= d <= 10, got d = {d}")
    rng = random.Random(seed)
    k = tail_length(d)
    checked = 0
    failures = []
    attempts = 0
    while checked < samples and attempts < 100 * samples:
        attempts += 1
        n = rng.randint(1, max_n)
        base = n - general_slice_rank(n, d) + 1
        # Slack of at least one above the claim level.
        lo = base + 1
        if lo > n:
            continue
        m = rng.randint(lo, n)
        budget = m - lo
        s = rng.randint(0, budget)
        tail = [0] * k
        for _ in range(s):
            tail[rng.randrange(k)] += 1
        ki = key_inequality(n, d, m, tail)
        checked += 1
        strict_needed = s > 0 and not ki.exceptional
        if not ki.holds or (strict_needed and not ki.strict):
            failures.append({"n": n, "m": m, "ell_tail": tail, "lhs": ki.lhs, "rhs": ki.rhs})
    return {"d": d, "samples": checked, "max_n": max_n, "seed": seed, "failures": failures, "ok": not failures}
