"""Logarithmic potential theory numerics on sampled compact sets.

Extremal (Fekete/Leja) point selection drives three estimators: the
transfinite-diameter capacity, a Green's-function value via the Fekete
polynomial, and the neighborhood rate constant theta = sup exp(-g) over the
complement of an open set.  Everything is deterministic given the samples.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .geometry import CompactSetSample
from .polynomials import ComplexPolynomial

EXACT_LIMIT = 12  # largest n solved by exhaustive discrete search
_COMBO_BUDGET = 300_000
_POLISH_LIMIT = 72  # skip exchange polish above this n (cost grows ~ n^2 * pool)


@dataclass(frozen=True)
class ExtremalPoints:
    """n points on a compact set with (near-)maximal Vandermonde product."""

    points: np.ndarray
    vandermonde_log: float
    method: str  # "exact-discrete" | "greedy-leja"

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.complex128)
        object.__setattr__(self, "points", pts)
        if not math.isfinite(self.vandermonde_log):
            raise ValueError("degenerate extremal configuration (repeated points)")

    @property
    def n(self) -> int:
        return self.points.size

    def monic_log_abs(self, z):
        """log |q(z)| for the monic polynomial q with these roots (array ok).

        -inf at the roots themselves (harmless under max/sup reductions).
        """
        z = np.asarray(z, dtype=np.complex128)
        with np.errstate(divide="ignore"):
            return np.sum(np.log(np.abs(z[..., None] - self.points)), axis=-1)


def _vandermonde_log(pts: np.ndarray) -> float:
    d = np.abs(pts[:, None] - pts[None, :])
    iu = np.triu_indices(pts.size, k=1)
    vals = d[iu]
    if np.any(vals == 0.0):
        return -math.inf
    return float(np.sum(np.log(vals)))


def _candidate_pool(k: CompactSetSample) -> np.ndarray:
    """Deduplicated boundary samples (extremal points live on the boundary)."""
    pts = np.unique(np.round(k.boundary / (k.mesh * 1e-6)) * (k.mesh * 1e-6))
    return np.asarray(pts, dtype=np.complex128)


def _exchange_polish(points: np.ndarray, cands: np.ndarray, sweeps: int = 40):
    """Move one point at a time to its best candidate position until stable."""
    pts = points.copy()
    n = pts.size
    with np.errstate(divide="ignore"):
        logd = np.log(np.abs(cands[:, None] - pts[None, :]))
    for _ in range(sweeps):
        moved = False
        for i in range(n):
            with np.errstate(invalid="ignore"):
                score = np.sum(logd, axis=1) - logd[:, i]
            # a candidate colliding with any point j != i scores -inf (correct);
            # the one sitting at pts[i] itself needs its column re-excluded
            bad = ~np.isfinite(score)
            if np.any(bad):
                others = [j for j in range(n) if j != i]
                score[bad] = np.sum(logd[np.ix_(np.flatnonzero(bad), others)], axis=1)
            best = int(np.argmax(score))
            with np.errstate(divide="ignore"):
                cur = float(np.sum(np.log(np.abs(np.delete(pts, i) - pts[i]))))
            if cands[best] != pts[i] and score[best] > cur + 1e-12:
                pts[i] = cands[best]
                with np.errstate(divide="ignore"):
                    logd[:, i] = np.log(np.abs(cands - pts[i]))
                moved = True
        if not moved:
            break
    return pts


def _exact_discrete(cands: np.ndarray, n: int) -> np.ndarray:
    """Exhaustive search over a decimated candidate set, then polish on all."""
    m = cands.size
    stride = 1
    while math.comb(max((m + stride - 1) // stride, n), n) > _COMBO_BUDGET:
        stride += 1
    sub = cands[::stride]
    if sub.size < n:
        sub = cands[: max(n, sub.size)]
    with np.errstate(divide="ignore"):
        logd = np.log(np.abs(sub[:, None] - sub[None, :]))
    np.fill_diagonal(logd, -np.inf)
    combos = np.array(list(itertools.combinations(range(sub.size), n)), dtype=np.int32)
    score = np.zeros(combos.shape[0])
    for a in range(n):
        for b in range(a + 1, n):
            score += logd[combos[:, a], combos[:, b]]
    best = combos[int(np.argmax(score))]
    return _exchange_polish(sub[best], cands)


def _greedy_leja(cands: np.ndarray, n: int) -> np.ndarray:
    centroid = np.mean(cands)
    start = int(np.argmax(np.abs(cands - centroid)))
    chosen = [cands[start]]
    with np.errstate(divide="ignore"):
        acc = np.log(np.abs(cands - chosen[0]))
    for _ in range(n - 1):
        nxt = int(np.argmax(acc))
        chosen.append(cands[nxt])
        with np.errstate(divide="ignore"):
            acc = acc + np.log(np.abs(cands - cands[nxt]))
    pts = np.array(chosen, dtype=np.complex128)
    return _exchange_polish(pts, cands) if n <= _POLISH_LIMIT else pts


def fekete_points(k: CompactSetSample, n: int) -> ExtremalPoints:
    """n-point extremal configuration on the boundary samples of `k`.

    Exhaustive (decimated + polished) search up to n = 12, greedy Leja with
    the same polish beyond.  Deterministic for fixed samples.
    """
    if n < 2:
        raise ValueError("need n >= 2 extremal points")
    cands = _candidate_pool(k)
    if cands.size < n or k.diameter < 2.0 * k.mesh:
        raise ValueError("insufficient point diversity in the sample set")
    if n <= EXACT_LIMIT:
        pts = _exact_discrete(cands, n)
        method = "exact-discrete"
    else:
        pts = _greedy_leja(cands, n)
        method = "greedy-leja"
    return ExtremalPoints(pts, _vandermonde_log(pts), method)


def capacity(k: CompactSetSample, n: int = 32) -> float:
    """Transfinite-diameter estimate of the logarithmic capacity.

    The n-point diameter of a disk overshoots its capacity by exactly
    n^{1/(n-1)} (equispaced extremal points), so that factor is divided out;
    sets smaller than two mesh cells are treated as polar.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    if k.diameter < 2.0 * k.mesh:
        return 0.0
    ext = fekete_points(k, n)
    delta = math.exp(2.0 * ext.vandermonde_log / (n * (n - 1)))
    return delta / n ** (1.0 / (n - 1))


def green_eval(k: CompactSetSample, z, n: int = 32):
    """Green's function of the complement (pole at infinity) at z.

    Estimator (1/n)(log|q_n(z)| - log ||q_n||_K) with q_n the monic Fekete
    polynomial; clamped at 0.  Scalar in, float out; array in, array out.
    """
    if capacity(k, min(n, 16)) == 0.0:
        raise ValueError("Green's function undefined: set is polar at this resolution")
    z_arr = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    if bool(np.any(k.contains(z_arr, tol=0.0))):
        raise ValueError("green_eval requires z outside the compact set")
    ext = fekete_points(k, n)
    sup_log = float(np.max(ext.monic_log_abs(k.all_points)))
    g = np.maximum((ext.monic_log_abs(z_arr) - sup_log) / n, 0.0)
    return g if np.asarray(z).ndim else float(g[0])


def theta(k: CompactSetSample, u_complement_samples, n: int = 32) -> float:
    """sup over the complement of U of exp(-g); the Bernstein-Walsh rate.

    Returns 0 for polar sets.  The supplied points must sample the closed
    complement of U including its boundary (where the sup is attained).
    """
    if capacity(k, min(n, 16)) == 0.0:
        return 0.0
    pts = np.asarray(u_complement_samples, dtype=np.complex128).ravel()
    if pts.size == 0:
        raise ValueError("no complement samples supplied")
    g = green_eval(k, pts, n)
    return float(np.max(np.exp(-g)))


def bernstein_check(
    p: ComplexPolynomial, l_set: CompactSetSample, z: complex, n: int = 32
):
    """Growth bound |p(z)|^{1/d} <= exp(g(z)) ||p||_L^{1/d}, with 5% slack.

    Returns (lhs, rhs, ok).
    """
    d = p.degree
    if not isinstance(d, int) or d < 1:
        raise ValueError("needs a polynomial of degree >= 1")
    g = green_eval(l_set, z, n)
    sup_l = float(np.max(np.abs(p.eval(l_set.all_points))))
    lhs = abs(p.eval(z)) ** (1.0 / d)
    rhs = math.exp(g) * sup_l ** (1.0 / d)
    return lhs, rhs, bool(lhs <= rhs * 1.05)
