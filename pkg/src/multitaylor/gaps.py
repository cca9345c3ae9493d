"""Coefficient-band analytics for lacunary Taylor sections.

A witness whose coefficients nearly vanish on index bands (p_m, q_m] with
growing ratio q_m/p_m has truncations that collapse across each band and, in
the limit, approximate independently of the expansion center.  This module
certifies those trends on finite data: banded root-decay scans, the log-k
index selector with its inequality table, tail-collapse tables over circles,
and recentering-invariance tables.  Verdicts are finite-horizon statements
against explicit targets, never claims about limits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import CompactSetSample
from .polynomials import ComplexPolynomial

RECENTER_DEGREE_LIMIT = 1024
CIRCLE_MESH = 512


def _circle(radius: float, center: complex = 0.0) -> np.ndarray:
    ang = 2.0 * math.pi * np.arange(CIRCLE_MESH) / CIRCLE_MESH
    return center + radius * np.exp(1j * ang)


# ---------------------------------------------------------------------------
# gap detection


@dataclass(frozen=True)
class GapStructure:
    """Index bands (p_m, q_m] with their measured coefficient root-decay.

    decay[m] is max over nu in (p_m, q_m] of |a_nu|^(1/nu); ratio_floor is the
    smallest q_m/p_m.  Pairs must satisfy p_1 < q_1 <= p_2 < q_2 <= ... with
    every p_m >= 1.
    """

    pairs: tuple
    decay: tuple
    ratio_floor: float

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((int(p), int(q)) for p, q in self.pairs))
        object.__setattr__(self, "decay", tuple(float(d) for d in self.decay))
        if not self.pairs:
            raise ValueError("at least one index pair is required")
        prev_q = None
        for p, q in self.pairs:
            if p < 1 or not p < q:
                raise ValueError(f"malformed pair ordering at ({p}, {q})")
            if prev_q is not None and not prev_q <= p:
                raise ValueError(f"malformed pair ordering at ({p}, {q})")
            prev_q = q
        if len(self.decay) != len(self.pairs):
            raise ValueError("one decay entry per pair is required")


@dataclass(frozen=True)
class GapScan:
    structure: GapStructure
    ratio_ok: bool
    decay_ok: bool

    @property
    def verdict(self) -> bool:
        return self.ratio_ok and self.decay_ok


def detect_gaps(coeffs, pairs, ratio_target: float = 8.0,
                decay_target: float = 0.2) -> GapScan:
    """Scan coefficient bands for the gap trend.

    The verdict certifies three finite proxies: the last band ratio q/p
    reaches ratio_target (proxy for q_m/p_m -> infinity), the per-band decay
    maxima are non-increasing, and the last one is at most decay_target
    (proxy for the root-decay limit 0 along the bands).
    """
    a = np.asarray(coeffs, dtype=np.complex128).ravel()
    pairs = tuple((int(p), int(q)) for p, q in pairs)
    top = max(q for _, q in pairs) if pairs else 0
    if a.size < top + 1:
        raise ValueError(
            f"coefficients available up to index {a.size - 1}, bands need {top}"
        )
    decay = []
    for p, q in pairs:
        nu = np.arange(p + 1, q + 1)
        decay.append(float(np.max(np.abs(a[p + 1 : q + 1]) ** (1.0 / nu))))
    structure = GapStructure(pairs, tuple(decay), float(min(q / p for p, q in pairs)))
    p_last, q_last = pairs[-1]
    ratio_ok = q_last / p_last >= ratio_target
    monotone = all(later <= earlier for earlier, later in zip(decay, decay[1:]))
    decay_ok = monotone and decay[-1] <= decay_target
    return GapScan(structure, ratio_ok, decay_ok)


# ---------------------------------------------------------------------------
# index selector


@dataclass(frozen=True)
class SelectorTable:
    """Selected indices p_k with the per-exponent inequality table.

    lhs[i][s-1] = (n_k/p_k)^s and rhs[i] = log k; ok mirrors lhs <= rhs.
    The inequality is a theorem for log k >= 1 (k >= 3); at k = 2 it can
    genuinely fail for s < sigma0 and is reported as measured.
    """

    k_values: tuple
    n_values: tuple
    sigma0: int
    p_values: tuple
    lhs: tuple
    rhs: tuple
    ok: tuple

    @property
    def all_ok(self) -> bool:
        return all(all(row) for row in self.ok)


def gap_selector(n_values, sigma0: int, k_values) -> SelectorTable:
    """p_k = floor(n_k / (log k)^(1/sigma0)) + 1, with the inequality table."""
    ks = tuple(int(k) for k in k_values)
    ns = tuple(int(n) for n in n_values)
    if len(ks) != len(ns):
        raise ValueError("one k per n is required")
    if not ks:
        raise ValueError("at least one index is required")
    if int(sigma0) < 1:
        raise ValueError("sigma0 must be a positive integer")
    sigma0 = int(sigma0)
    if any(k < 2 for k in ks):
        raise ValueError("k = 1 rejected: log k must be positive")
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError("n_k must be strictly increasing")

    p_values, lhs, rhs, ok = [], [], [], []
    for k, n in zip(ks, ns):
        logk = math.log(k)
        p = math.floor(n / logk ** (1.0 / sigma0)) + 1
        p_values.append(p)
        row = tuple((n / p) ** s for s in range(1, sigma0 + 1))
        lhs.append(row)
        rhs.append(logk)
        ok.append(tuple(v <= logk for v in row))
    return SelectorTable(
        ks, ns, sigma0, tuple(p_values), tuple(lhs), tuple(rhs), tuple(ok)
    )


# ---------------------------------------------------------------------------
# tail collapse


@dataclass(frozen=True)
class CollapseTable:
    """sup_{|z|=R} |T_p(f) - T_q(f)| per band (rows) and radius (columns)."""

    pairs: tuple
    radii: tuple
    entries: tuple  # entries[i][j]: band i, radius j
    decreasing: tuple  # per radius: entries non-increasing down the rows


def tail_collapse_check(f: ComplexPolynomial, pairs, radii) -> CollapseTable:
    """Band-difference norms of truncations on origin-centered circles.

    The difference T_q - T_p keeps exactly the coefficients in (p, q], so all
    shared low-order terms cancel coefficientwise before any evaluation.
    """
    pairs = tuple((int(p), int(q)) for p, q in pairs)
    radii = tuple(float(r) for r in radii)
    for p, q in pairs:
        if not 0 <= p < q:
            raise ValueError(f"band ({p}, {q}) needs 0 <= p < q")
    top = max(q for _, q in pairs)
    if not f.degree >= top:
        raise ValueError(
            f"witness degree {f.degree} is below the largest band index {top}"
        )
    rows = []
    for p, q in pairs:
        diff = f.partial_sum(q) - f.partial_sum(p)
        rows.append(
            tuple(
                float(np.max(np.abs(diff(_circle(r))))) if r > 0.0
                else float(abs(diff(0.0)))
                for r in radii
            )
        )
    dec = tuple(
        all(rows[i + 1][j] <= rows[i][j] for i in range(len(rows) - 1))
        for j in range(len(radii))
    )
    return CollapseTable(pairs, radii, tuple(rows), dec)


# ---------------------------------------------------------------------------
# center independence


@dataclass(frozen=True)
class InvarianceTable:
    """sup over centers and over K of the truncation discrepancy, per index."""

    p_values: tuple
    entries: tuple
    decreasing: bool

    @property
    def final(self) -> float:
        return self.entries[-1]


def center_invariance_check(f: ComplexPolynomial, l_set: CompactSetSample,
                            k_set: CompactSetSample, p_values,
                            zeta_count: int = 64) -> InvarianceTable:
    """Compare each truncation against its recentered counterparts.

    For every index p, measures max over zeta samples of L of the sup over K
    of |T_p(f about its own center)(z) - T_p(f about zeta)(z)|.  Once p
    reaches deg f both truncations are the whole polynomial, so the entry is
    exactly 0 with no arithmetic performed.
    """
    p_values = tuple(int(p) for p in p_values)
    if f.degree != float("-inf") and f.degree > RECENTER_DEGREE_LIMIT:
        raise ValueError(
            f"degree {f.degree} exceeds the recentering limit {RECENTER_DEGREE_LIMIT}"
        )
    zs = l_set.all_points
    if zs.size > zeta_count:
        idx = np.linspace(0, zs.size - 1, zeta_count).round().astype(int)
        zs = zs[np.unique(idx)]
    kpts = k_set.all_points
    deg = f.degree

    entries = []
    for p in p_values:
        if deg == float("-inf") or p >= deg:
            entries.append(0.0)
            continue
        base = np.asarray(f.partial_sum(p)(kpts))
        worst = 0.0
        for zeta in zs:
            moved = f.recenter(complex(zeta)).partial_sum(p)
            worst = max(worst, float(np.max(np.abs(base - moved(kpts)))))
        entries.append(worst)
    dec = all(b <= a for a, b in zip(entries, entries[1:]))
    return InvarianceTable(p_values, tuple(entries), dec)


# ---------------------------------------------------------------------------
# norm filter


def norm_filter(f: ComplexPolynomial, k_values, n_values, sigma0: int,
                bound: float = 2.0) -> tuple:
    """Positions where every truncation root-norm on |z| = k stays bounded.

    Keeps index i iff sup_{|z|=k_i} |T_{n_i^s}(f)|^(1/n_i^s) <= bound for all
    s = 1..sigma0: the measured version of passing to a subsequence on which
    the circle norms are controlled.
    """
    ks = tuple(float(k) for k in k_values)
    ns = tuple(int(n) for n in n_values)
    if len(ks) != len(ns):
        raise ValueError("one k per n is required")
    out = []
    for i, (k, n) in enumerate(zip(ks, ns)):
        ok = True
        for s in range(1, int(sigma0) + 1):
            lam = n ** s
            sup = float(np.max(np.abs(f.partial_sum(lam)(_circle(k)))))
            if sup ** (1.0 / lam) > bound:
                ok = False
                break
        if ok:
            out.append(i)
    return tuple(out)


# ---------------------------------------------------------------------------
# coefficient streams


def read_coefficients(path) -> np.ndarray:
    """Decimal text stream, one `index re im` triple per line.

    Blank lines and '#' comments are skipped; missing indices are zero.
    """
    triples = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            body = line.split("#", 1)[0].strip()
            if not body:
                continue
            parts = body.split()
            if len(parts) != 3:
                raise ValueError(
                    f"{path}:{lineno}: expected 'index re im', got {body!r}"
                )
            idx = int(parts[0])
            if idx < 0:
                raise ValueError(f"{path}:{lineno}: negative index {idx}")
            triples.append((idx, float(parts[1]), float(parts[2])))
    if not triples:
        return np.zeros(0, dtype=np.complex128)
    out = np.zeros(max(t[0] for t in triples) + 1, dtype=np.complex128)
    for idx, re, im in triples:
        out[idx] = complex(re, im)
    return out


def write_coefficients(path, coeffs) -> None:
    arr = np.asarray(coeffs, dtype=np.complex128).ravel()
    with open(path, "w") as fh:
        for i, c in enumerate(arr):
            fh.write(f"{i} {float(c.real)!r} {float(c.imag)!r}\n")
