"""Truncation-index sequences: growth comparison, ordering, criterion search.

A family of index sequences admits a simultaneous-universality witness exactly
when one subsequence mu_n sends the first sequence and every consecutive ratio
to infinity together.  Symbolic kinds (polynomial / geometric) get exact
asymptotic verdicts; explicit tables get window estimates that are always
labeled as such.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

INF = math.inf


@dataclass(frozen=True)
class IndexSequence:
    """Positive-integer sequence: polynomial in n, geometric, or tabulated."""

    kind: str  # "poly" | "geom" | "explicit"
    coeffs: tuple = ()  # poly: c0 + c1 n + ... (integer, positive leading)
    base: int = 0
    scale: int = 1
    values: tuple = ()
    tail: Callable[[int], int] | None = None
    label: str = ""

    @classmethod
    def poly(cls, coeffs, label: str = "") -> "IndexSequence":
        cs = tuple(int(c) for c in coeffs)
        if not cs or cs[-1] <= 0:
            raise ValueError("polynomial kind needs a positive leading coefficient")
        seq = cls(kind="poly", coeffs=cs, label=label or _poly_label(cs))
        for n in range(1, 1025):
            if seq.eval(n) < 1:
                raise ValueError(f"sequence dips below 1 at n = {n}")
        return seq

    @classmethod
    def geom(cls, base: int, scale: int = 1, label: str = "") -> "IndexSequence":
        if base < 2:
            raise ValueError("geometric base must be an integer >= 2")
        if scale < 1:
            raise ValueError("geometric scale must be a positive integer")
        auto = f"{base}^n" if scale == 1 else f"{scale}*{base}^n"
        return cls(kind="geom", base=int(base), scale=int(scale), label=label or auto)

    @classmethod
    def explicit(cls, values, tail=None, label: str = "") -> "IndexSequence":
        vals = tuple(int(v) for v in values)
        if not vals:
            raise ValueError("explicit sequence needs at least one value")
        if any(v < 1 for v in vals):
            raise ValueError("index sequences must stay >= 1")
        return cls(kind="explicit", values=vals, tail=tail, label=label or "explicit")

    @property
    def symbolic(self) -> bool:
        return self.kind in ("poly", "geom")

    def eval(self, n: int) -> int:
        if n < 1:
            raise ValueError("sequences are indexed from n = 1")
        if self.kind == "poly":
            acc = 0
            for c in reversed(self.coeffs):
                acc = acc * n + c
            return acc
        if self.kind == "geom":
            return self.scale * self.base**n
        if n <= len(self.values):
            return self.values[n - 1]
        if self.tail is not None:
            return int(self.tail(n))
        raise ValueError(
            f"explicit sequence has {len(self.values)} entries; n = {n} is past the end"
        )

    def __call__(self, n: int) -> int:
        return self.eval(n)

    def horizon_cap(self, horizon: int) -> int:
        """Largest n <= horizon this sequence can be evaluated at."""
        if self.kind == "explicit" and self.tail is None:
            return min(horizon, len(self.values))
        return horizon


def _poly_label(cs) -> str:
    parts = []
    for i, c in enumerate(cs):
        if c == 0:
            continue
        if i == 0:
            parts.append(str(c))
        else:
            mono = "n" if i == 1 else f"n^{i}"
            parts.append(mono if c == 1 else f"{c}{mono}")
    return "+".join(reversed(parts)) or "0"


@dataclass(frozen=True)
class SequenceFamily:
    members: tuple

    def __post_init__(self):
        ms = tuple(self.members)
        if not ms:
            raise ValueError("family needs at least one sequence")
        object.__setattr__(self, "members", ms)

    @property
    def sigma0(self) -> int:
        return len(self.members)

    def permuted(self, perm) -> "SequenceFamily":
        """Reorder members; perm lists 1-based original positions."""
        if sorted(perm) != list(range(1, self.sigma0 + 1)):
            raise ValueError("not a permutation of 1..sigma0")
        return SequenceFamily(tuple(self.members[i - 1] for i in perm))


class RatioLimsup(NamedTuple):
    value: float  # may be math.inf
    exact: bool  # symbolic asymptotics vs tail-window estimate


def limsup_ratio(a: IndexSequence, b: IndexSequence, horizon: int = 64) -> RatioLimsup:
    """limsup of a(n)/b(n): exact for symbolic kinds, window max otherwise."""
    if horizon < 16:
        raise ValueError("horizon must be at least 16")
    if a.symbolic and b.symbolic:
        if a.kind == "geom" and b.kind == "geom":
            if a.base != b.base:
                return RatioLimsup(INF if a.base > b.base else 0.0, True)
            return RatioLimsup(a.scale / b.scale, True)
        if a.kind == "geom":
            return RatioLimsup(INF, True)
        if b.kind == "geom":
            return RatioLimsup(0.0, True)
        da, db = len(a.coeffs) - 1, len(b.coeffs) - 1
        if da != db:
            return RatioLimsup(INF if da > db else 0.0, True)
        return RatioLimsup(a.coeffs[-1] / b.coeffs[-1], True)
    hi = min(a.horizon_cap(horizon), b.horizon_cap(horizon))
    lo = max(1, hi // 2)
    window = [a.eval(n) / b.eval(n) for n in range(lo, hi + 1)]
    return RatioLimsup(max(window), False)


@dataclass(frozen=True)
class OrderingReport:
    sigma: int  # adjacent pair (sigma, sigma+1)
    forward: RatioLimsup
    backward: RatioLimsup

    @property
    def ok(self) -> bool:
        return self.forward.value >= self.backward.value


def is_well_ordered(family: SequenceFamily, horizon: int = 64):
    """Each forward limsup ratio must dominate its backward companion.

    Returns (verdict, per-pair reports); a single member is vacuously ordered.
    """
    reports = []
    for s in range(family.sigma0 - 1):
        fwd = limsup_ratio(family.members[s + 1], family.members[s], horizon)
        bwd = limsup_ratio(family.members[s], family.members[s + 1], horizon)
        reports.append(OrderingReport(s + 1, fwd, bwd))
    return all(r.ok for r in reports), reports


def rearrange_well_ordered(family: SequenceFamily, horizon: int = 64):
    """Adjacent-interchange passes until ordered; returns the 1-based permutation.

    Bounded by sigma0^2 interchanges.
    """
    s0 = family.sigma0
    perm = list(range(1, s0 + 1))
    current = list(family.members)
    swaps = 0
    for _ in range(s0):
        changed = False
        for i in range(s0 - 1):
            fwd = limsup_ratio(current[i + 1], current[i], horizon)
            bwd = limsup_ratio(current[i], current[i + 1], horizon)
            if fwd.value < bwd.value:
                current[i], current[i + 1] = current[i + 1], current[i]
                perm[i], perm[i + 1] = perm[i + 1], perm[i]
                swaps += 1
                changed = True
                if swaps > s0 * s0:
                    raise RuntimeError("interchange budget exceeded")
        if not changed:
            break
    ok, _ = is_well_ordered(SequenceFamily(tuple(current)), horizon)
    if not ok:
        raise RuntimeError("rearrangement did not reach a well-ordered family")
    return tuple(perm)


@dataclass(frozen=True)
class CriterionRow:
    level: int
    mu: int
    first_value: int
    ratios: tuple  # consecutive-pair ratios at index mu


@dataclass(frozen=True)
class CriterionCertificate:
    """Subsequence witnessing joint divergence of lambda^(1) and all ratios."""

    mu: tuple
    rows: tuple

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.mu, self.mu[1:])):
            raise ValueError("mu must be strictly increasing")
        for row in self.rows:
            if row.first_value < row.level or any(r < row.level for r in row.ratios):
                raise ValueError("certificate row does not meet its level")

    def replay(self, family: SequenceFamily) -> bool:
        """Re-derive every recorded number from the family; True if identical."""
        for row in self.rows:
            vals = [m.eval(row.mu) for m in family.members]
            if vals[0] != row.first_value:
                return False
            ratios = tuple(vals[s + 1] / vals[s] for s in range(len(vals) - 1))
            if ratios != row.ratios:
                return False
        return True


@dataclass(frozen=True)
class CriterionResult:
    status: str  # "certificate" | "class-empty" | "no-certificate"
    certificate: CriterionCertificate | None
    binding: str | None
    exact: bool


def criterion_subsequence(
    family: SequenceFamily, levels=(2, 4, 8, 16, 32), horizon: int = 64
) -> CriterionResult:
    """Greedy search for the criterion subsequence, with exact short-circuits.

    Requires a well-ordered family.  For fully symbolic families a bounded
    consecutive ratio (or bounded first sequence) proves the class empty; the
    greedy search then certifies the positive case numerically.
    """
    ok, _ = is_well_ordered(family, horizon)
    if not ok:
        raise ValueError("family is not well ordered; rearrange first")
    levels = tuple(sorted(int(t) for t in levels))
    if not levels:
        raise ValueError("need at least one level")
    members = family.members

    all_symbolic = all(m.symbolic for m in members)
    if all_symbolic:
        first_unbounded = members[0].kind == "geom" or len(members[0].coeffs) > 1
        if not first_unbounded:
            return CriterionResult(
                "class-empty", None, "first sequence is bounded", True
            )
        for s in range(len(members) - 1):
            r = limsup_ratio(members[s + 1], members[s], horizon)
            if math.isfinite(r.value):
                return CriterionResult(
                    "class-empty",
                    None,
                    f"ratio of members {s + 2}/{s + 1} is bounded by {r.value:g}",
                    True,
                )

    cap = min(m.horizon_cap(horizon) for m in members)
    mu, rows = [], []
    prev = 0
    for level in levels:
        found = None
        for m in range(prev + 1, cap + 1):
            vals = [s.eval(m) for s in members]
            if vals[0] < level:
                continue
            ratios = tuple(vals[i + 1] / vals[i] for i in range(len(vals) - 1))
            if all(r >= level for r in ratios):
                found = (m, vals[0], ratios)
                break
        if found is None:
            binding = _binding_constraint(members, level, prev, cap)
            return CriterionResult(
                "no-certificate", None,
                f"level {level} unreachable within horizon {cap}: {binding}",
                all_symbolic,
            )
        prev = found[0]
        mu.append(prev)
        rows.append(CriterionRow(level, prev, found[1], found[2]))
    cert = CriterionCertificate(tuple(mu), tuple(rows))
    return CriterionResult("certificate", cert, None, all_symbolic)


def _binding_constraint(members, level, prev, cap) -> str:
    """Name the requirement that blocked the greedy scan."""
    first_ok = any(members[0].eval(m) >= level for m in range(prev + 1, cap + 1))
    if not first_ok:
        return f"lambda^(1) never reaches {level}"
    for s in range(len(members) - 1):
        if not any(
            members[s + 1].eval(m) / members[s].eval(m) >= level
            for m in range(prev + 1, cap + 1)
        ):
            return f"ratio {s + 2}/{s + 1} never reaches {level}"
    return "no single index satisfies all requirements at once"
