"""Bernstein-Walsh machinery: contour-integral polynomial construction.

The central operation takes an analytic function f, a contour winding once
around a compact set K, and a tau-point extremal configuration on K, and
produces the degree <= tau-1 polynomial

    p(w) = (1/2pi i) oint f(z)/q(z) * (q(w) - q(z))/(w - z) dz,

where q is the monic polynomial with the extremal points as roots.  The
divided-difference kernel telescopes into a Newton basis on the extremal
points, so the construction reduces to one prefix-product table and a matrix
product; p is carried in Newton form (numerically robust far beyond the point
where monomial coefficients overflow) with an optional monomial snapshot.

Also here: sup-norm error certificates against the contour-length bound,
powers-normalized local boundedness checks, and a least-squares/Lawson
best-approximation oracle with an extended-precision path for high degrees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath as mp
import numpy as np

from .geometry import CompactSetSample, Contour
from .polynomials import ComplexPolynomial
from .potential import ExtremalPoints

TWO_PI_I = 2j * math.pi


# ---------------------------------------------------------------------------
# expression trees


class ExprBase:
    """Closed-form evaluator; subclasses implement __call__ on complex arrays.

    mp_eval mirrors __call__ on a single mpmath scalar for extended-precision
    work; the fallback routes through float64 (fine for float-bound uses).
    """

    def __call__(self, z):
        raise NotImplementedError

    def mp_eval(self, z):
        return mp.mpc(self(complex(z)))

    def __add__(self, other):
        return Sum((self, _as_expr(other)))

    def __sub__(self, other):
        return Sum((self, Scaled(_as_expr(other), -1.0)))

    def __mul__(self, other):
        return Product((self, _as_expr(other)))


class PolyExpr(ExprBase):
    def __init__(self, poly: ComplexPolynomial):
        self.poly = poly

    def __call__(self, z):
        return self.poly.eval(z)

    def mp_eval(self, z):
        acc = mp.mpc(0)
        w = z - mp.mpc(self.poly.center)
        for c in reversed(self.poly.coeffs):
            acc = acc * w + mp.mpc(c)
        return acc


class Const(ExprBase):
    def __init__(self, value):
        self.value = complex(value)

    def __call__(self, z):
        z = np.asarray(z)
        return np.full(z.shape, self.value) if z.ndim else self.value

    def mp_eval(self, z):
        return mp.mpc(self.value)


class RecipPower(ExprBase):
    """(z - center)^(-power) with integer power >= 1."""

    def __init__(self, center: complex, power: int):
        if power < 1:
            raise ValueError("reciprocal power must be >= 1")
        self.center = complex(center)
        self.power = int(power)

    def __call__(self, z):
        z = np.asarray(z, dtype=np.complex128)
        return (z - self.center) ** (-self.power)

    def mp_eval(self, z):
        return 1 / (z - mp.mpc(self.center)) ** self.power


class Sum(ExprBase):
    def __init__(self, terms):
        self.terms = tuple(terms)

    def __call__(self, z):
        out = self.terms[0](z)
        for t in self.terms[1:]:
            out = out + t(z)
        return out

    def mp_eval(self, z):
        return mp.fsum(t.mp_eval(z) for t in self.terms)


class Product(ExprBase):
    def __init__(self, factors):
        self.factors = tuple(factors)

    def __call__(self, z):
        out = self.factors[0](z)
        for f in self.factors[1:]:
            out = out * f(z)
        return out

    def mp_eval(self, z):
        out = mp.mpc(1)
        for f in self.factors:
            out = out * f.mp_eval(z)
        return out


class Scaled(ExprBase):
    def __init__(self, inner, alpha):
        self.inner = inner
        self.alpha = complex(alpha)

    def __call__(self, z):
        return self.alpha * self.inner(z)

    def mp_eval(self, z):
        return mp.mpc(self.alpha) * self.inner.mp_eval(z)


class AffineArg(ExprBase):
    """inner(a*z + b): composition with an affine change of variable."""

    def __init__(self, inner, a: complex, b: complex):
        self.inner = inner
        self.a = complex(a)
        self.b = complex(b)

    def __call__(self, z):
        z = np.asarray(z, dtype=np.complex128)
        return self.inner(self.a * z + self.b)

    def mp_eval(self, z):
        return self.inner.mp_eval(mp.mpc(self.a) * z + mp.mpc(self.b))


class Raw(ExprBase):
    """Wrap an arbitrary array-aware callable (e.g. a Newton form)."""

    def __init__(self, fn):
        self.fn = fn

    def __call__(self, z):
        return self.fn(z)


def mp_call(f, z):
    """Evaluate any supported function object at one point in mpmath."""
    if hasattr(f, "mp_eval"):
        return f.mp_eval(mp.mpc(z))
    if isinstance(f, ComplexPolynomial):
        return PolyExpr(f).mp_eval(mp.mpc(z))
    return mp.mpc(f(complex(z)))


def _as_expr(obj) -> ExprBase:
    if isinstance(obj, ExprBase):
        return obj
    if isinstance(obj, ComplexPolynomial):
        return PolyExpr(obj)
    if isinstance(obj, (int, float, complex)):
        return Const(obj)
    if callable(obj):
        return Raw(obj)
    raise TypeError(f"cannot treat {type(obj).__name__} as an evaluator")


def as_callable(f):
    """Normalize polynomials / expressions / callables to one array-aware fn."""
    return _as_expr(f) if not callable(f) else f


class PiecewiseFunction:
    """Branches of (open region, evaluator); points must hit exactly one."""

    def __init__(self, branches):
        self.branches = tuple((r, _as_expr(e)) for r, e in branches)
        if not self.branches:
            raise ValueError("piecewise function needs at least one branch")

    def __call__(self, z):
        z_arr = np.atleast_1d(np.asarray(z, dtype=np.complex128))
        out = np.zeros(z_arr.shape, dtype=np.complex128)
        hits = np.zeros(z_arr.shape, dtype=np.int64)
        for region, expr in self.branches:
            mask = np.asarray(region.contains(z_arr))
            hits += mask
            if np.any(mask):
                out[mask] = np.asarray(expr(z_arr[mask]), dtype=np.complex128)
        if np.any(hits == 0):
            bad = z_arr[hits == 0][0]
            raise ValueError(f"no branch covers evaluation point {bad}")
        if np.any(hits > 1):
            bad = z_arr[hits > 1][0]
            raise ValueError(f"branch regions overlap at {bad}")
        return out if np.asarray(z).ndim else complex(out[0])

    def mp_eval(self, z):
        zc = complex(z)
        matches = [e for r, e in self.branches if bool(np.asarray(r.contains(zc)))]
        if len(matches) != 1:
            word = "no branch covers" if not matches else "branch regions overlap at"
            raise ValueError(f"{word} evaluation point {zc}")
        return matches[0].mp_eval(mp.mpc(z))


# ---------------------------------------------------------------------------
# local boundedness


@dataclass(frozen=True)
class LocalBoundCertificate:
    """Measured sup norms ||f_n||_K^(1/sigma_n) over an index window."""

    a_bound: float
    values: tuple
    n_range: tuple
    set_label: str
    growth_detected: bool

    @property
    def bounded_verdict(self) -> bool:
        return not self.growth_detected


def local_bound_check(family, sigma, k: CompactSetSample, n_range) -> LocalBoundCertificate:
    """Certify ||f_n||_K^(1/sigma_n) <= A over the window, or flag growth.

    family: callable n -> evaluator; sigma: callable n -> int (>= 1).
    A is the measured max inflated by 1.1 with floor 1.1.
    """
    ns = list(n_range)
    if not ns:
        raise ValueError("empty index range")
    pts = k.all_points
    vals = []
    for n in ns:
        s = sigma(n) if callable(sigma) else sigma[n]
        if s < 1:
            raise ValueError(f"sigma({n}) = {s} must be >= 1")
        fn = as_callable(family(n))
        sup = float(np.max(np.abs(np.asarray(fn(pts), dtype=np.complex128))))
        vals.append(sup ** (1.0 / s))
    a = 1.1 * max(1.0, max(vals))
    increasing = all(b > a_ for a_, b in zip(vals, vals[1:]))
    grew = increasing and len(vals) >= 4 and vals[-1] >= 4.0 * vals[len(vals) // 2]
    return LocalBoundCertificate(a, tuple(vals), (ns[0], ns[-1]), repr(k), grew)


# ---------------------------------------------------------------------------
# Newton-form polynomials from contour integrals


class NewtonForm:
    """p(w) = sum_j c_j prod_{i<j} (w - t_i); evaluation by backward Horner."""

    __slots__ = ("nodes", "coeffs")

    def __init__(self, nodes, coeffs):
        self.nodes = np.asarray(nodes, dtype=np.complex128)
        self.coeffs = np.asarray(coeffs, dtype=np.complex128)
        if self.nodes.size != self.coeffs.size:
            raise ValueError("one coefficient per Newton node")

    @property
    def degree_cap(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, z):
        z = np.asarray(z, dtype=np.complex128)
        acc = np.full(z.shape, self.coeffs[-1])
        # nodes t_1..t_{j-1} multiply term j, so node j-1 wraps coefficient j
        for j in range(self.coeffs.size - 2, -1, -1):
            acc = acc * (z - self.nodes[j]) + self.coeffs[j]
        return acc if z.ndim else complex(acc)

    def to_polynomial(self, center: complex = 0.0) -> ComplexPolynomial:
        """Monomial coefficients about `center` by exact basis expansion.

        The Newton-to-monomial change of basis cancels catastrophically in
        double precision once the nodes spread past the unit scale, so the
        Horner accumulation runs in mpmath with enough digits to absorb the
        worst-case intermediate growth prod (1 + |t_i|).
        """
        nodes = self.nodes - center
        swing = float(np.sum(np.log10(1.0 + np.abs(nodes))))
        acc = [mp.mpc(complex(self.coeffs[-1]))]
        with mp.workdps(60 + int(math.ceil(swing))):
            for j in range(self.coeffs.size - 2, -1, -1):
                t = mp.mpc(complex(nodes[j]))
                nxt = [mp.mpc(complex(self.coeffs[j])) - t * acc[0]]
                nxt.extend(acc[i - 1] - t * acc[i] for i in range(1, len(acc)))
                nxt.append(acc[-1])
                acc = nxt
            out = np.array([complex(c) for c in acc], dtype=np.complex128)
        return ComplexPolynomial(center, out)


@dataclass(frozen=True)
class ContourBoundReport:
    """Both sides of the length/distance/extremal-ratio error bound.

    `noise` is the float64 resolution of the comparison: once the bound
    shrinks past the roundoff of evaluating the form and f on K (large tau),
    a measured residual at that floor is agreement, not a violation.
    """

    sup_err: float
    length: float
    dist: float
    q_sup_k: float
    q_min_gamma: float
    f_sup_gamma: float
    noise: float = 0.0

    @property
    def rhs(self) -> float:
        return (
            self.length
            / (2.0 * math.pi)
            / self.dist
            * (self.q_sup_k / self.q_min_gamma)
            * self.f_sup_gamma
        )

    @property
    def ok(self) -> bool:
        return self.sup_err <= self.rhs * (1.0 + 1e-9) + self.noise + 1e-300


def _newton_coeffs_from_quadrature(fvals, nodes, derivs, roots):
    """Newton coefficients c_j = (1/2pi i) sum_k w_k f(z_k) / prod_{i<=j}(z_k - t_i).

    The divided-difference kernel telescopes termwise into suffix products
    S_j(z) = prod_{i>j}(z - t_i), and S_j/q = 1/prefix_j, so one cumulative
    product table covers every coefficient.
    """
    n = nodes.size
    weights = derivs / n / TWO_PI_I
    diffs = nodes[None, :] - roots[:, None]
    prefix = np.cumprod(diffs, axis=0)  # prefix[j, k], j = 0..tau-1
    if not np.all(np.isfinite(prefix)) or np.any(prefix == 0.0):
        raise ValueError(
            "prefix products overflowed or hit a root on the contour; "
            "reduce tau or enlarge the contour clearance"
        )
    return np.sum((fvals * weights)[None, :] / prefix, axis=1)


def bw_construct_full(
    f,
    contour: Contour,
    q: ExtremalPoints,
    k: CompactSetSample | None = None,
    residual_tol: float = 1e-8,
):
    """Contour-integral construction with convergence and bound diagnostics.

    Returns (newton_form, report) where report is None unless `k` is given.
    Raises when halving the quadrature nodes moves the coefficients by more
    than `residual_tol` relative (quadrature non-convergence).
    """
    fn = as_callable(f)
    roots = q.points
    all_nodes = np.concatenate([l.nodes for l in contour.loops])
    all_derivs = np.concatenate([l.derivs for l in contour.loops])
    guard = float(np.min(np.abs(all_nodes[:, None] - roots[None, :])))
    if guard <= 1e-9 * max(1.0, contour.length):
        raise ValueError("contour passes through an extremal point")

    def run(stride):
        parts = []
        for loop in contour.loops:
            fv = np.asarray(fn(loop.nodes[::stride]), dtype=np.complex128)
            parts.append(
                _newton_coeffs_from_quadrature(
                    fv, loop.nodes[::stride], loop.derivs[::stride], roots
                )
            )
        return np.sum(parts, axis=0)

    c_full = run(1)
    c_half = run(2)
    scale = max(float(np.max(np.abs(c_full))), 1e-300)
    resid = float(np.max(np.abs(c_full - c_half))) / scale
    if resid > residual_tol:
        raise ValueError(
            f"quadrature not converged: node-halving residual {resid:.3e} "
            f"exceeds {residual_tol:.1e}; refine the contour sampling"
        )
    form = NewtonForm(roots, c_full)

    report = None
    if k is not None:
        pts = k.all_points
        fk = np.asarray(fn(pts), dtype=np.complex128)
        sup_err = float(np.max(np.abs(fk - form(pts))))
        # magnitude image of the backward Horner pass = roundoff carried into
        # each residual; anything measured at this floor is unresolvable
        acc = np.full(pts.shape, float(np.abs(c_full[-1])))
        for j in range(c_full.size - 2, -1, -1):
            acc = acc * np.abs(pts - roots[j]) + float(np.abs(c_full[j]))
        eps = float(np.finfo(np.float64).eps)
        noise = eps * float(np.max(acc + np.abs(fk)))
        logq_k = q.monic_log_abs(pts)
        logq_g = q.monic_log_abs(all_nodes)
        report = ContourBoundReport(
            sup_err=sup_err,
            length=contour.length,
            dist=contour.min_distance_to(pts),
            q_sup_k=math.exp(float(np.max(logq_k))),
            q_min_gamma=math.exp(float(np.min(logq_g))),
            f_sup_gamma=float(np.max(np.abs(np.asarray(fn(all_nodes))))),
            noise=noise,
        )
    return form, report


def bw_construct(f, contour: Contour, q: ExtremalPoints, tau: int) -> ComplexPolynomial:
    """Degree <= tau-1 polynomial from the contour formula (monomial view)."""
    if tau != q.n:
        raise ValueError("tau must equal the number of extremal points")
    form, _ = bw_construct_full(f, contour, q)
    return form.to_polynomial()


# ---------------------------------------------------------------------------
# best approximation oracle


def _line_parameters(pts: np.ndarray):
    """Detect collinear sample sets; return (center, direction) or None."""
    c = np.mean(pts)
    w = pts - c
    scale = float(np.max(np.abs(w)))
    if scale == 0.0:
        return None
    m2 = np.mean(w * w)
    if abs(m2) < 1e-18 * scale**2:
        return None
    direction = np.exp(0.5j * np.angle(m2))
    if float(np.max(np.abs((w * np.conj(direction)).imag))) > 1e-9 * scale:
        return None
    return c, direction


def _lawson_ls(basis: np.ndarray, values: np.ndarray, iters: int = 4) -> np.ndarray:
    """Weighted least squares with Lawson sup-norm reweighting (float path)."""
    wts = np.ones(values.size)
    coef = None
    for _ in range(iters):
        sw = np.sqrt(wts)[:, None]
        coef, *_ = np.linalg.lstsq(basis * sw, values * sw[:, 0], rcond=None)
        err = np.abs(values - basis @ coef)
        wts = wts * (err + 1e-300)
        wts = wts / np.sum(wts) * values.size
    return coef

def _cheb_cols_mp(x, deg):
    """Chebyshev columns T_0..T_deg at mpmath points x (list of mpc/mpf)."""
    cols = [[mp.mpf(1) for _ in x]]
    if deg >= 1:
        cols.append(list(x))
    for _ in range(2, deg + 1):
        prev, prev2 = cols[-1], cols[-2]
        cols.append([2 * xi * a - b for xi, a, b in zip(x, prev, prev2)])
    return cols


def best_approx_error(f, k: CompactSetSample, tau: int, dps: int | None = None) -> float:
    """Sup-norm distance from f to polynomials of degree <= tau on K samples.

    Least-squares fit (Chebyshev basis on collinear sets, scaled monomials
    otherwise) followed by Lawson reweighting; degrees above 16 switch to
    extended precision because the attainable errors sit far below float64.
    Upper bound on the true distance up to sampling density.
    """
    if tau < 0:
        raise ValueError("tau must be >= 0")
    if tau > 60:
        raise ValueError(
            "basis is numerically ill-conditioned beyond tau = 60; "
            "use the contour construction instead"
        )
    fn = as_callable(f)
    pts = k.all_points
    fvals = np.asarray(fn(pts), dtype=np.complex128)
    line = _line_parameters(pts)

    use_mp = (dps or 0) > 0 or tau > 16
    if not use_mp:
        if line is None:
            c = np.mean(pts)
            r = max(float(np.max(np.abs(pts - c))), 1e-300)
            x = (pts - c) / r
            basis = np.vander(x, tau + 1, increasing=True)
        else:
            c, direction = line
            t = (pts - c) * np.conj(direction)
            t = t.real / max(float(np.max(np.abs(t.real))), 1e-300)
            basis = np.polynomial.chebyshev.chebvander(t, tau)
        coef = _lawson_ls(basis, fvals)
        return float(np.max(np.abs(fvals - basis @ coef)))

    # extended precision: evaluation points stay float64 (exact dyadics) while
    # every function value, basis column, and residual is mp arithmetic
    with mp.workdps(dps or 50):
        if line is None:
            c = np.mean(pts)
            r = max(float(np.max(np.abs(pts - c))), 1e-300)
            fit_idx = np.unique(
                np.linspace(0, pts.size - 1, min(pts.size, 6 * (tau + 1))).astype(int)
            )
            zfit = pts[fit_idx]
            xs_fit = [mp.mpc(p) for p in (zfit - c) / r]
            cols_fit = [[xi**j for xi in xs_fit] for j in range(tau + 1)]
            xs_all = [mp.mpc(p) for p in (pts - c) / r]
            cols_all = [[xi**j for xi in xs_all] for j in range(tau + 1)]
        else:
            cl, direction = line
            t = ((pts - cl) * np.conj(direction)).real
            lo, hi = float(np.min(t)), float(np.max(t))
            mid, half = (lo + hi) / 2.0, (hi - lo) / 2.0
            # Chebyshev-distributed fit nodes on the segment itself
            mfit = 4 * (tau + 1)
            xg = np.cos(np.pi * (2 * np.arange(mfit) + 1) / (2 * mfit))
            zfit = cl + direction * (mid + half * xg)
            cols_fit = _cheb_cols_mp([mp.mpf(x) for x in xg], tau)
            xs_all = [mp.mpf((ti - mid) / half) for ti in t]
            cols_all = _cheb_cols_mp(xs_all, tau)
        fv_fit = [mp_call(fn, z) for z in zfit]

        mfit = len(fv_fit)
        gram = mp.matrix(tau + 1, tau + 1)
        rhs = mp.matrix(tau + 1, 1)
        for a in range(tau + 1):
            ca = cols_fit[a]
            for b in range(a, tau + 1):
                cb = cols_fit[b]
                s = mp.fsum(mp.conj(ca[i]) * cb[i] for i in range(mfit))
                gram[a, b] = s
                gram[b, a] = mp.conj(s)
            rhs[a] = mp.fsum(mp.conj(ca[i]) * fv_fit[i] for i in range(mfit))
        coef = mp.lu_solve(gram, rhs)
        worst = mp.mpf(0)
        for i in range(pts.size):
            fit = mp.fsum(coef[j] * cols_all[j][i] for j in range(tau + 1))
            err = abs(mp_call(fn, pts[i]) - fit)
            if err > worst:
                worst = err
        return float(worst)
