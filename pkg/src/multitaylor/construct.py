"""Inductive construction of a polynomial with prescribed Taylor sections.

One seed polynomial handles the base targets; each later stage adds a
degree-banded correction obtained by approximating a piecewise function (zero
near the center, a rescaled defect on the far sets) through the contour
formula.  Band placement makes every earlier truncation exact, so a single
trial index can serve all targets at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath as mp
import numpy as np

from .bernstein_walsh import (
    AffineArg,
    Const,
    ExprBase,
    NewtonForm,
    PiecewiseFunction,
    PolyExpr,
    Product,
    Raw,
    RecipPower,
    Scaled,
    Sum,
    _lawson_ls,
    as_callable,
    bw_construct_full,
)
from .geometry import (
    CompactSetSample,
    Contour,
    DiskPrim,
    DomainSpec,
    RegionUnion,
    SegmentPrim,
    complement_samples,
    make_contour,
)
from .polynomials import ComplexPolynomial, DegreeBand, horner_noise
from .potential import ExtremalPoints, fekete_points, theta
from .sequences import SequenceFamily

SEED_DEGREE_CAP = 80
CONTOUR_POSITION = 0.8  # slide loops toward the neighborhood edge: faster decay


def _sup(values) -> float:
    return float(np.max(np.abs(np.asarray(values, dtype=np.complex128))))


def _shift_target(target, zeta0: complex):
    """Represent target(w + zeta0) in the centered frame.

    Polynomials shift exactly (same coefficients about a moved center, then
    recentered to 0); anything else composes through an affine argument.
    """
    if isinstance(target, ComplexPolynomial):
        return ComplexPolynomial(target.center - zeta0, target.coeffs).recenter(0.0)
    if isinstance(target, (ExprBase, PiecewiseFunction)):
        return AffineArg(target, 1.0, zeta0)
    return AffineArg(Raw(target), 1.0, zeta0)


# ---------------------------------------------------------------------------
# scenario


@dataclass(frozen=True)
class ConstructionScenario:
    """Domain, target data, index family, and the two working neighborhoods.

    targets[0] pairs with the base set; corrections are built for stages
    2..sigma0.  U1 must hold the center set, U2 every far set, disjointly.
    """

    omega: DomainSpec
    l_set: CompactSetSample
    g: object  # target on l_set
    targets: tuple  # ((f_sigma, K_sigma), ...) for sigma = 1..sigma0
    family: SequenceFamily
    eps: float
    s: int
    u1: object
    u2: object

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(self.targets))
        if self.eps <= 0:
            raise ValueError("eps must be positive")
        if int(self.s) < 1:
            raise ValueError("s must be a positive integer")
        object.__setattr__(self, "s", int(self.s))
        if len(self.targets) != self.family.sigma0:
            raise ValueError("one (target, set) pair per family member is required")
        z0 = self.omega.zeta0
        if not self.l_set.in_m:
            raise ValueError("center set must have connected complement")
        if not bool(np.all(self.omega.contains(self.l_set.all_points))):
            raise ValueError("center set must lie inside the domain")
        pad = self.omega.boundary_distance(z0) / 4.0
        if not self._interior(self.l_set, z0, pad / 64.0):
            object.__setattr__(
                self, "l_set", self.l_set.union(CompactSetSample([DiskPrim(z0, pad)]))
            )
        if not bool(np.all(self.u1.contains(self.l_set.all_points))):
            raise ValueError("U1 must contain the center set")
        for i, (_, kset) in enumerate(self.targets, start=1):
            if not kset.in_m:
                raise ValueError(f"target set {i} must have connected complement")
            if kset.min_distance_to_domain(self.omega) <= 0:
                raise ValueError(f"target set {i} must be disjoint from the domain")
            if not bool(np.all(self.u2.contains(kset.all_points))):
                raise ValueError(f"U2 must contain target set {i}")
        if self.u2.contains(z0):
            raise ValueError("U2 must not contain the expansion center")
        self._check_disjoint_neighborhoods()

    @staticmethod
    def _interior(kset: CompactSetSample, z0: complex, r: float) -> bool:
        ring = z0 + r * np.exp(2j * math.pi * np.arange(16) / 16)
        return bool(np.all(kset.contains(ring))) and bool(np.all(kset.contains(z0)))

    def _check_disjoint_neighborhoods(self):
        boxes = [self.l_set.bbox()] + [k.bbox() for _, k in self.targets]
        x0 = min(b[0] for b in boxes) - 1.0
        x1 = max(b[1] for b in boxes) + 1.0
        y0 = min(b[2] for b in boxes) - 1.0
        y1 = max(b[3] for b in boxes) + 1.0
        step = max(x1 - x0, y1 - y0) / 96.0
        gx, gy = np.meshgrid(np.arange(x0, x1, step), np.arange(y0, y1, step))
        pts = (gx + 1j * gy).ravel()
        both = np.asarray(self.u1.contains(pts)) & np.asarray(self.u2.contains(pts))
        if bool(np.any(both)):
            raise ValueError("U1 and U2 must be disjoint")

    @property
    def zeta0(self) -> complex:
        return self.omega.zeta0

    @property
    def sigma0(self) -> int:
        return self.family.sigma0

    def bundle(self) -> "TargetBundle":
        return TargetBundle(self.zeta0, self.targets, self.s)


# ---------------------------------------------------------------------------
# stage records


@dataclass(frozen=True)
class StageRecord:
    """One correction Q for (stage sigma, trial n), with its measured bounds.

    window is the admissible coefficient range [lambda^(sigma-1)_n + 1,
    lambda^(sigma)_n]; bound_l is the sup of |Q(z - zeta0)| over the center
    set, bound_k the defect left on the stage's far set.
    """

    sigma: int
    n: int
    q: ComplexPolynomial
    band: DegreeBand | None
    bound_l: float
    bound_k: float
    m_const: float
    theta0: float
    window: tuple
    form: NewtonForm | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        lo, hi = self.window
        if self.band is not None and not (lo <= self.band.lo and self.band.hi <= hi):
            raise ValueError(
                f"stage band [{self.band.lo}, {self.band.hi}] leaves "
                f"the admissible window [{lo}, {hi}]"
            )
        if not (0.0 < self.theta0 < 1.0):
            raise ValueError("theta0 must lie strictly between 0 and 1")
        if self.bound_l > 0.0:
            budget = lo * math.log(self.m_const) + hi * math.log(self.theta0)
            if math.log(self.bound_l) > budget + math.log(1.05):
                raise ValueError(
                    f"stage bound {self.bound_l:.3e} exceeds its geometric budget "
                    f"{math.exp(budget):.3e} (x1.05)"
                )

    def eval_shifted(self, w):
        """Q(w) through the factored form: immune to coefficient blow-up."""
        if self.form is None:
            return self.q(w)
        w = np.asarray(w, dtype=np.complex128)
        return w ** self.window[0] * self.form(w)


@dataclass(frozen=True)
class FinalErrors:
    on_l: float
    per_sigma: tuple


class StagedPolynomial(ComplexPolynomial):
    """Assembled witness: the seed plus its degree-banded corrections.

    The monomial image is exact, but its mid-band coefficients are
    exponentially large, so Horner evaluation far from the center cancels
    catastrophically.  Evaluation and band-aligned truncation therefore route
    through the factored stage forms; a truncation that cuts a band midway
    falls back to the plain coefficient section (those values are honestly
    enormous, so verdicts are unaffected).
    """

    __slots__ = ("base", "stage_rows")

    def __init__(self, center, coeffs, base: ComplexPolynomial, stage_rows):
        super().__init__(center, coeffs)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "stage_rows", tuple(stage_rows))

    def eval(self, z):
        arr = np.asarray(z, dtype=np.complex128)
        acc = np.asarray(self.base(arr), dtype=np.complex128)
        for rec in self.stage_rows:
            acc = acc + rec.eval_shifted(arr - self.center)
        if np.isscalar(z) or np.asarray(z).ndim == 0:
            return complex(acc)
        return acc

    def partial_sum(self, lam: int) -> ComplexPolynomial:
        if lam < 0:
            raise ValueError("truncation index must be >= 0")
        sliced = self.coeffs[: lam + 1]
        bands = [rec.band for rec in self.stage_rows]
        if any(b is not None and b.lo <= lam < b.hi for b in bands):
            return ComplexPolynomial(self.center, sliced)
        kept = tuple(
            rec for rec, b in zip(self.stage_rows, bands)
            if b is not None and b.hi <= lam
        )
        return StagedPolynomial(self.center, sliced, self.base.partial_sum(lam), kept)

    def recenter(self, new_center: complex) -> ComplexPolynomial:
        if complex(new_center) == self.center:
            return self
        return ComplexPolynomial(self.center, self.coeffs).recenter(new_center)


@dataclass(frozen=True)
class ConstructionReport:
    p: ComplexPolynomial
    stages: tuple
    n1: int | None
    f: ComplexPolynomial
    final_errors: FinalErrors
    eps: float
    s: int
    passed: bool
    binding: str | None = None
    skipped: tuple = ()

    def __post_init__(self):
        want = self.final_errors.on_l < self.eps and all(
            e < 1.0 / self.s for e in self.final_errors.per_sigma
        )
        if self.passed != want:
            raise ValueError("pass flag contradicts the recorded errors")

    def stage(self, sigma: int, n: int) -> StageRecord | None:
        for rec in self.stages:
            if rec.sigma == sigma and rec.n == n:
                return rec
        return None


# ---------------------------------------------------------------------------
# seed polynomial


def runge_seed(g, l_set: CompactSetSample, f1, k1: CompactSetSample, eps: float, s: int,
               degree_cap: int = SEED_DEGREE_CAP) -> ComplexPolynomial:
    """Joint polynomial fit: within eps/2 of g on l_set, 1/s of f1 on k1.

    Weighted least squares of increasing degree with sup-norm reweighting;
    every candidate is validated against the dense samples before acceptance.
    """
    if not l_set.disjoint_from(k1):
        raise ValueError("seed sets must be disjoint")
    if not l_set.union(k1).in_m:
        raise ValueError("seed sets must keep a connected joint complement")
    if isinstance(g, ComplexPolynomial) and isinstance(f1, ComplexPolynomial):
        if (g - f1.recenter(g.center)).is_zero:
            return g

    pts = np.concatenate([l_set.all_points, k1.all_points])
    nl = l_set.all_points.size
    gl = np.asarray(as_callable(g)(l_set.all_points), dtype=np.complex128)
    fk = np.asarray(as_callable(f1)(k1.all_points), dtype=np.complex128)
    vals = np.concatenate([np.broadcast_to(gl, (nl,)), np.broadcast_to(fk, (pts.size - nl,))])

    x0, x1, y0, y1 = l_set.union(k1).bbox()
    c0 = complex((x0 + x1) / 2, (y0 + y1) / 2)
    scale = max(abs(x1 - x0), abs(y1 - y0)) / 2 or 1.0
    z = (pts - c0) / scale

    need_l, need_k = eps / 2.0, 1.0 / s
    best = (math.inf, None, None, None)
    for deg in range(degree_cap + 1):
        basis = z[:, None] ** np.arange(deg + 1)[None, :]
        sol = _lawson_ls(basis, vals, iters=6)
        p = ComplexPolynomial(c0, sol / scale ** np.arange(deg + 1))
        err_l = _sup(gl - p(l_set.all_points))
        err_k = _sup(fk - p(k1.all_points))
        if err_l < need_l and err_k < need_k:
            return p
        gap = max(err_l / need_l, err_k / need_k)
        if gap < best[0]:
            best = (gap, deg, err_l, err_k)
    raise ValueError(
        f"seed degree cap {degree_cap} reached; best attempt (degree {best[1]}) "
        f"gave {best[2]:.3e} on the center set (needs < {need_l:.3e}) and "
        f"{best[3]:.3e} on the far set (needs < {need_k:.3e})"
    )


# ---------------------------------------------------------------------------
# stages


def _part_contour(part: CompactSetSample, region, n_nodes: int = 512) -> Contour:
    """Loop around one part, well inside its region with a proportional margin."""
    prims = part.primitives
    if len(prims) == 1 and isinstance(prims[0], SegmentPrim):
        seg = prims[0]
        rho_max = min(
            region.max_inscribed_radius(seg.a), region.max_inscribed_radius(seg.b)
        )
        margin = rho_max
    else:
        x0, x1, y0, y1 = part.bbox()
        c = complex((x0 + x1) / 2, (y0 + y1) / 2)
        margin = region.max_inscribed_radius(c) - part.bounding_radius(c)
    if margin <= 0:
        raise ValueError("part does not fit inside its neighborhood")
    return make_contour(part, region, margin / 8.0, CONTOUR_POSITION, n_nodes)


def _single_extremal(k: CompactSetSample) -> ExtremalPoints:
    """Degenerate one-point configuration (the Leja start), for width-1 bands."""
    cands = k.boundary
    start = int(np.argmax(np.abs(cands - np.mean(cands))))
    return ExtremalPoints(np.array([cands[start]]), 0.0, "greedy-leja")


def _stage_theta0(kw: CompactSetSample, u1w, u2w, gamma: Contour) -> float:
    """Fixed rate constant strictly between the measured decay and 1.

    Takes the larger of the complement-of-neighborhood value and the value on
    the integration contour itself (the contour governs what the construction
    actually achieves), then moves halfway to 1.
    """
    x0, x1, y0, y1 = kw.bbox()
    pad = max(x1 - x0, y1 - y0, 1.0)
    box = (x0 - pad, x1 + pad, y0 - pad, y1 + pad)
    samples = complement_samples(RegionUnion((u1w, u2w)), box, pad / 48.0)
    th_u = theta(kw, samples)
    nodes = np.concatenate([l.nodes for l in gamma.loops])
    th_g = theta(kw, nodes)
    return (1.0 + max(th_u, th_g)) / 2.0


def build_stage(scn: ConstructionScenario, sigma: int, prior, n: int,
                seed: ComplexPolynomial) -> StageRecord:
    """Correction polynomial for (sigma, n): Q(w) = w^(lo) * p_n(w).

    prior maps earlier stage indices (2..sigma-1) to their records for the
    same trial n; `seed` is the stage-one polynomial.
    """
    if not (2 <= sigma <= scn.sigma0):
        raise ValueError("sigma must lie in 2..sigma0")
    lam_prev = scn.family.members[sigma - 2].eval(n)
    lam_cur = scn.family.members[sigma - 1].eval(n)
    if lam_cur <= lam_prev:
        raise ValueError(
            f"trial {n}: stage {sigma} index {lam_cur} does not exceed "
            f"the previous index {lam_prev}"
        )
    tau = lam_cur - lam_prev - 1
    if tau < 1:
        raise ValueError("degree band empty")
    priors = [prior.get(k) for k in range(2, sigma)]
    if any(rec is None for rec in priors):
        raise ValueError("stages 2..sigma-1 must be supplied for sigma >= 3")
    if any(rec.n != n for rec in priors):
        raise ValueError("cross-trial stage mixing is rejected")

    z0 = scn.zeta0
    lw = scn.l_set.translate(-z0)
    target, kset = scn.targets[sigma - 1]
    kw = kset.translate(-z0)
    union = lw.union(kw)
    u1w, u2w = scn.u1.translate(-z0), scn.u2.translate(-z0)

    base = ComplexPolynomial(seed.center - z0, seed.coeffs).recenter(0.0)
    for rec in priors:
        base = base + rec.q
    t_shift = _shift_target(target, z0)
    if isinstance(t_shift, ComplexPolynomial):
        g_n = t_shift - base
        g_expr = PolyExpr(g_n)
    else:
        g_n = Sum([t_shift, Scaled(PolyExpr(base), -1.0)])
        g_expr = g_n
    f_n = PiecewiseFunction(
        [(u1w, Const(0.0)), (u2w, Product([RecipPower(0.0, lam_prev + 1), g_expr]))]
    )

    gamma = Contour.join(_part_contour(lw, u1w), _part_contour(kw, u2w))
    q_ext = fekete_points(union, tau) if tau >= 2 else _single_extremal(union)
    form, _ = bw_construct_full(f_n, gamma, q_ext)

    wl, wk = lw.all_points, kw.all_points
    bound_l = _sup(wl ** (lam_prev + 1) * form(wl))
    bound_k = _sup(np.asarray(g_n(wk)) - wk ** (lam_prev + 1) * form(wk))
    m_const = max(_sup(wl), _sup(wk)) + 1.0
    theta0 = _stage_theta0(union, u1w, u2w, gamma)

    q_poly = form.to_polynomial().shift_degrees(lam_prev + 1)
    return StageRecord(
        sigma=sigma,
        n=n,
        q=q_poly,
        band=q_poly.degree_band(),
        bound_l=bound_l,
        bound_k=bound_k,
        m_const=m_const,
        theta0=theta0,
        window=(lam_prev + 1, lam_cur),
        form=form,
    )


# ---------------------------------------------------------------------------
# assembly


def _measure_final(scn: ConstructionScenario, p_centered: ComplexPolynomial,
                   row) -> FinalErrors:
    """Dense-sample errors of the assembled function, stage forms included.

    Truncation at lambda^(sigma) keeps exactly the stages up to sigma (their
    bands are nested above one another by construction), so each error is
    evaluated through the factored forms rather than the monomial image,
    which loses the far-set values once coefficient bands grow.
    """
    z0 = scn.zeta0
    lpts = scn.l_set.all_points
    fl = p_centered(lpts)
    for rec in row:
        fl = fl + rec.eval_shifted(lpts - z0)
    err_l = _sup(np.asarray(as_callable(scn.g)(lpts)) - fl)
    per = []
    for sigma, (target, kset) in enumerate(scn.targets, start=1):
        pts = kset.all_points
        acc = p_centered(pts)
        for rec in row:
            if rec.sigma <= sigma:
                acc = acc + rec.eval_shifted(pts - z0)
        per.append(_sup(np.asarray(as_callable(target)(pts)) - acc))
    return FinalErrors(err_l, tuple(per))


def assemble(scn: ConstructionScenario, stages, trials, seed: ComplexPolynomial,
             skipped=()) -> ConstructionReport:
    """Pick the smallest trial whose stage bounds jointly clear eps and 1/s.

    Requires records for stages 2..sigma0 at a trial for it to qualify; the
    final polynomial is re-measured directly on the dense samples.
    """
    recs = {(r.sigma, r.n): r for r in stages}
    seed_l = _sup(
        np.asarray(as_callable(scn.g)(scn.l_set.all_points)) - seed(scn.l_set.all_points)
    )
    k1 = scn.targets[0][1]
    seed_k = _sup(
        np.asarray(as_callable(scn.targets[0][0])(k1.all_points)) - seed(k1.all_points)
    )
    deg_p = seed.degree
    need_k = 1.0 / scn.s

    binding = None
    chosen = None
    for n in sorted(trials):
        row = [recs.get((sig, n)) for sig in range(2, scn.sigma0 + 1)]
        if any(r is None for r in row):
            continue
        lam1 = scn.family.members[0].eval(n)
        if not lam1 > deg_p:
            binding = f"trial {n}: truncation index {lam1} does not exceed seed degree {deg_p}"
            continue
        total_l = seed_l + sum(r.bound_l for r in row)
        if not total_l < scn.eps:
            binding = (
                f"trial {n}: predicted center error {total_l:.3e} >= eps = {scn.eps:.3e}"
            )
            continue
        bad = [r for r in row if not r.bound_k < need_k]
        if bad:
            binding = (
                f"trial {n}: stage {bad[0].sigma} defect {bad[0].bound_k:.3e} "
                f">= 1/s = {need_k:.3e}"
            )
            continue
        if not seed_k < need_k:
            binding = f"seed error on the first target set {seed_k:.3e} >= 1/s"
            continue
        chosen = (n, row)
        break

    p_centered = seed.recenter(scn.zeta0)
    if chosen is None:
        errors = _measure_final(scn, p_centered, ())
        return ConstructionReport(
            p=seed, stages=tuple(stages), n1=None, f=p_centered,
            final_errors=errors, eps=scn.eps, s=scn.s,
            passed=errors.on_l < scn.eps and all(e < need_k for e in errors.per_sigma),
            binding=binding or "no trial had a complete stage row",
            skipped=tuple(skipped),
        )

    n1, row = chosen
    mono = p_centered
    for rec in row:
        mono = mono + ComplexPolynomial(scn.zeta0, rec.q.coeffs)
    f = StagedPolynomial(scn.zeta0, mono.coeffs, p_centered, row)
    errors = _measure_final(scn, p_centered, row)
    passed = errors.on_l < scn.eps and all(e < need_k for e in errors.per_sigma)
    return ConstructionReport(
        p=seed, stages=tuple(stages), n1=n1, f=f, final_errors=errors,
        eps=scn.eps, s=scn.s, passed=passed,
        binding=None if passed else "measured errors exceeded the predicted bounds",
        skipped=tuple(skipped),
    )


def run_construction(scn: ConstructionScenario, trials=range(1, 17)) -> ConstructionReport:
    """Seed, all stages over the trial grid, then assembly."""
    seed = runge_seed(
        scn.g, scn.l_set, scn.targets[0][0], scn.targets[0][1], scn.eps, scn.s
    )
    stages, skipped = [], []
    for n in sorted(trials):
        prior = {}
        try:
            for sigma in range(2, scn.sigma0 + 1):
                rec = build_stage(scn, sigma, prior, n, seed)
                prior[sigma] = rec
            stages.extend(prior[s] for s in sorted(prior))
        except ValueError as exc:
            skipped.append((n, str(exc)))
    return assemble(scn, stages, trials, seed, skipped=skipped)


# ---------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class TargetBundle:
    zeta0: complex
    pairs: tuple  # ((target, kset), ...)
    s: int


@dataclass(frozen=True)
class UmultReport:
    """Per-stage truncation error curves over a trial range."""

    n_values: tuple
    errors: tuple  # errors[sigma-1][i] on kset_sigma at n_values[i]
    threshold: float
    common: tuple  # trial indices where every stage clears the threshold
    passed: bool

    @property
    def n_star(self) -> int | None:
        return self.common[0] if self.common else None


_GUARD_FRACTION = 1e-3  # tolerated noise floor relative to a reported error


def _sup_error(sec: ComplexPolynomial, tv: np.ndarray, pts: np.ndarray) -> float:
    """sup |sec - tv| over pts, immune to monomial cancellation.

    Plain coefficient evaluation is rescued in extended precision whenever
    the float64 noise floor could contaminate the reported value; staged
    truncations evaluate through their factored forms and need no rescue.
    """
    err = _sup(tv - np.asarray(sec(pts), dtype=np.complex128))
    if isinstance(sec, StagedPolynomial) or sec.is_zero:
        return err
    noise = horner_noise(sec.coeffs, float(np.max(np.abs(pts - sec.center))))
    if noise <= _GUARD_FRACTION * err:
        return err
    dps = 30 + max(0, int(math.ceil(math.log10(noise / np.finfo(np.float64).eps))))
    with mp.workdps(dps):
        rev = [mp.mpc(c) for c in sec.coeffs[::-1]]
        best = mp.mpf(0)
        for z, t in zip(pts, tv):
            w = mp.mpc(z - sec.center)
            acc = mp.mpc(0)
            for c in rev:
                acc = acc * w + c
            best = max(best, abs(acc - mp.mpc(t)))
        return float(best)


def verify_umult(f: ComplexPolynomial, bundle: TargetBundle, family: SequenceFamily,
                 n_range) -> UmultReport:
    """Measure every truncation against its target; pass needs one shared n.

    Success at different trials for different stages does not count: the
    whole point is a single index serving all targets simultaneously.
    """
    if len(bundle.pairs) != family.sigma0:
        raise ValueError("bundle and family sizes differ")
    fc = f.recenter(bundle.zeta0)
    ns = tuple(int(n) for n in n_range)
    thr = 1.0 / bundle.s
    top = max(fc.degree, 0)  # truncating past the degree keeps everything
    curves = []
    for (target, kset), member in zip(bundle.pairs, family.members):
        pts = kset.all_points
        tv = np.asarray(as_callable(target)(pts), dtype=np.complex128)
        cache: dict = {}
        row = []
        for n in ns:
            eff = min(member.eval(n), top)
            if eff not in cache:
                cache[eff] = _sup_error(fc.partial_sum(eff), tv, pts)
            row.append(cache[eff])
        curves.append(tuple(row))
    common = tuple(
        ns[i] for i in range(len(ns)) if all(c[i] < thr for c in curves)
    )
    return UmultReport(ns, tuple(curves), thr, common, bool(common))


# ---------------------------------------------------------------------------
# witness files


WITNESS_MAGIC = "staged-witness 1"


def write_witness(path, f: ComplexPolynomial) -> None:
    """Serialize a witness with enough structure to evaluate it honestly.

    A monomial stream alone cannot carry a staged witness to its far sets:
    rounding the banded coefficients to float64 already perturbs values at
    |z| ~ 2.5 by orders of magnitude more than the errors being certified.
    Stage blocks therefore keep the factored data (window, band, bounds,
    Newton nodes and coefficients), which survives decimal text unharmed
    because the factored evaluation never amplifies its inputs.
    """
    rows = f.stage_rows if isinstance(f, StagedPolynomial) else ()
    lines = [WITNESS_MAGIC]
    lines.append(f"center {float(f.center.real)!r} {float(f.center.imag)!r}")
    lines.append(f"coeffs {f.coeffs.size}")
    for i, c in enumerate(f.coeffs):
        lines.append(f"{i} {float(c.real)!r} {float(c.imag)!r}")
    for rec in rows:
        if rec.band is None:
            continue  # zero correction contributes nothing
        if rec.form is None:
            raise ValueError(f"stage {rec.sigma} lacks its factored form")
        lines.append(f"stage {rec.sigma} {rec.n}")
        lines.append(f"window {rec.window[0]} {rec.window[1]}")
        lines.append(f"band {rec.band.lo} {rec.band.hi}")
        lines.append(
            f"bounds {float(rec.bound_l)!r} {float(rec.bound_k)!r} "
            f"{float(rec.m_const)!r} {float(rec.theta0)!r}"
        )
        lines.append(f"nodes {rec.form.nodes.size}")
        for i, t in enumerate(rec.form.nodes):
            lines.append(f"{i} {float(t.real)!r} {float(t.imag)!r}")
        lines.append(f"newton {rec.form.coeffs.size}")
        for i, c in enumerate(rec.form.coeffs):
            lines.append(f"{i} {float(c.real)!r} {float(c.imag)!r}")
    lines.append("end")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def read_witness(path) -> ComplexPolynomial:
    """Rebuild a witness written by write_witness.

    Stage invariants (band inside window, geometric budget) are re-validated
    on load, so a corrupted or hand-edited file fails loudly.
    """
    with open(path, "r", encoding="utf-8") as fh:
        numbered = [
            (no, ln.strip()) for no, ln in enumerate(fh, start=1) if ln.strip()
        ]
    pos = 0

    def take(what: str):
        nonlocal pos
        if pos >= len(numbered):
            raise ValueError(f"{path}: truncated witness file (expected {what})")
        no, ln = numbered[pos]
        pos += 1
        return no, ln

    def fields(what: str, head: str, count: int):
        no, ln = take(what)
        toks = ln.split()
        if toks[0] != head or len(toks) != count + 1:
            raise ValueError(f"{path}:{no}: expected '{head}' with {count} value(s)")
        return no, toks[1:]

    def triples(head: str) -> np.ndarray:
        no, toks = fields(head, head, 1)
        n = int(toks[0])
        out = np.zeros(n, dtype=np.complex128)
        for i in range(n):
            no, ln = take(f"{head} entry {i}")
            toks = ln.split()
            try:
                idx, re_, im_ = int(toks[0]), float(toks[1]), float(toks[2])
            except (IndexError, ValueError):
                raise ValueError(f"{path}:{no}: malformed '{head}' entry")
            if idx != i:
                raise ValueError(f"{path}:{no}: {head} index {idx} out of order")
            out[i] = complex(re_, im_)
        return out

    no, ln = take("header")
    if ln != WITNESS_MAGIC:
        raise ValueError(f"{path}:{no}: expected {WITNESS_MAGIC!r} header")
    no, toks = fields("center", "center", 2)
    try:
        center = complex(float(toks[0]), float(toks[1]))
    except ValueError:
        raise ValueError(f"{path}:{no}: malformed center")
    coeffs = triples("coeffs")

    rows = []
    while True:
        no, ln = take("'stage' or 'end'")
        if ln == "end":
            break
        toks = ln.split()
        if toks[0] != "stage" or len(toks) != 3:
            raise ValueError(f"{path}:{no}: expected 'stage <sigma> <n>' or 'end'")
        sigma, trial = int(toks[1]), int(toks[2])
        _, wtoks = fields("window", "window", 2)
        window = (int(wtoks[0]), int(wtoks[1]))
        bno, btoks = fields("band", "band", 2)
        band = DegreeBand(int(btoks[0]), int(btoks[1]))
        if band.hi >= coeffs.size:
            raise ValueError(f"{path}:{bno}: band exceeds the coefficient count")
        _, vals = fields("bounds", "bounds", 4)
        bound_l, bound_k, m_const, theta0 = (float(v) for v in vals)
        nodes = triples("nodes")
        newton = triples("newton")
        qc = np.zeros(band.hi + 1, dtype=np.complex128)
        qc[band.lo:] = coeffs[band.lo : band.hi + 1]
        rows.append(
            StageRecord(
                sigma=sigma,
                n=trial,
                q=ComplexPolynomial(0.0, qc),
                band=band,
                bound_l=bound_l,
                bound_k=bound_k,
                m_const=m_const,
                theta0=theta0,
                window=window,
                form=NewtonForm(nodes, newton),
            )
        )
    if not rows:
        return ComplexPolynomial(center, coeffs)
    base = ComplexPolynomial(center, coeffs[: min(r.window[0] for r in rows)])
    return StagedPolynomial(center, coeffs, base, rows)
