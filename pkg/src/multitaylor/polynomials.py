"""Complex polynomials about a movable center, with truncation and recentering.

Everything downstream manipulates finite Taylor sections sum a_k (z - center)^k.
The zero polynomial is the empty coefficient vector; its degree is reported as
the distinguished value NEG_INF rather than an integer, so callers cannot
accidentally treat it as degree -1 in arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath as mp
import numpy as np

NEG_INF = float("-inf")


def _as_coeff_array(coeffs) -> np.ndarray:
    arr = np.asarray(coeffs, dtype=np.complex128).ravel()
    return arr


def _trim(arr: np.ndarray) -> np.ndarray:
    """Strip trailing exact zeros.  Small coefficients are data, not noise:
    a trailing 1e-9 entry at degree 60 moves values by ~1e16 at |z| = 2.5,
    so magnitude-based trimming silently corrupts wide-band polynomials.
    """
    keep = np.nonzero(arr != 0)[0]
    if keep.size == 0:
        return arr[:0]
    return arr[: keep[-1] + 1]


@dataclass(frozen=True)
class DegreeBand:
    """Closed index range [lo, hi] of the coefficients that carry a polynomial."""

    lo: int
    hi: int

    def __post_init__(self):
        if not (0 <= self.lo <= self.hi):
            raise ValueError(f"degree band needs 0 <= lo <= hi, got [{self.lo}, {self.hi}]")

    @property
    def width(self) -> int:
        return self.hi - self.lo + 1


class ComplexPolynomial:
    """Polynomial sum_{k=0}^{d} coeffs[k] * (z - center)^k.

    Trailing exact-zero coefficients are dropped at construction; everything
    else is kept verbatim, however small.
    """

    __slots__ = ("center", "coeffs")

    def __init__(self, center: complex, coeffs):
        object.__setattr__(self, "center", complex(center))
        arr = _trim(_as_coeff_array(coeffs))
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("ComplexPolynomial is immutable")

    # -- basic structure ---------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.coeffs.size == 0

    @property
    def degree(self):
        """Integer degree, or NEG_INF for the zero polynomial."""
        if self.is_zero:
            return NEG_INF
        return int(self.coeffs.size - 1)

    def __repr__(self):
        return f"ComplexPolynomial(center={self.center!r}, deg={self.degree}, n={self.coeffs.size})"

    def __eq__(self, other):
        if not isinstance(other, ComplexPolynomial):
            return NotImplemented
        return (
            self.center == other.center
            and self.coeffs.size == other.coeffs.size
            and bool(np.all(self.coeffs == other.coeffs))
        )

    def __hash__(self):
        return hash((self.center, self.coeffs.tobytes()))

    # -- evaluation --------------------------------------------------------

    def eval(self, z):
        """Horner evaluation; z may be a scalar or an ndarray."""
        w = np.asarray(z, dtype=np.complex128) - self.center
        acc = np.zeros_like(w)
        for c in self.coeffs[::-1]:
            acc = acc * w + c
        if np.isscalar(z) or np.asarray(z).ndim == 0:
            return complex(acc)
        return acc

    def __call__(self, z):
        return self.eval(z)

    # -- algebra -----------------------------------------------------------

    def _check_center(self, other: "ComplexPolynomial"):
        if self.center != other.center:
            raise ValueError(
                f"center mismatch: {self.center} vs {other.center}; recenter one operand first"
            )

    def __add__(self, other):
        if not isinstance(other, ComplexPolynomial):
            return NotImplemented
        self._check_center(other)
        n = max(self.coeffs.size, other.coeffs.size)
        out = np.zeros(n, dtype=np.complex128)
        out[: self.coeffs.size] += self.coeffs
        out[: other.coeffs.size] += other.coeffs
        return ComplexPolynomial(self.center, out)

    def __sub__(self, other):
        if not isinstance(other, ComplexPolynomial):
            return NotImplemented
        return self + (-1.0) * other

    def __mul__(self, other):
        if isinstance(other, ComplexPolynomial):
            self._check_center(other)
            if self.is_zero or other.is_zero:
                return ComplexPolynomial(self.center, [])
            return ComplexPolynomial(self.center, np.convolve(self.coeffs, other.coeffs))
        return ComplexPolynomial(self.center, self.coeffs * complex(other))

    __rmul__ = __mul__

    def shift_degrees(self, m: int) -> "ComplexPolynomial":
        """Multiply by (z - center)^m, i.e. shift every coefficient up by m."""
        if m < 0:
            raise ValueError("degree shift must be nonnegative")
        if self.is_zero:
            return self
        out = np.zeros(self.coeffs.size + m, dtype=np.complex128)
        out[m:] = self.coeffs
        return ComplexPolynomial(self.center, out)

    # -- truncation and recentering -----------------------------------------

    def partial_sum(self, lam: int) -> "ComplexPolynomial":
        """Taylor section keeping degrees 0..lam inclusive."""
        if lam < 0:
            raise ValueError("truncation index must be >= 0")
        return ComplexPolynomial(self.center, self.coeffs[: lam + 1])

    def recenter(self, new_center: complex) -> "ComplexPolynomial":
        """Taylor shift to a new center by repeated synthetic division.

        The mixing amplifies roundoff by roughly sum |a_j| (1+|delta|)^j over
        max |a_j|; once float64 cannot keep that below 1e-12, the division
        reruns in extended precision sized to the amplification, so the
        returned coefficients are always correctly rounded.
        """
        new_center = complex(new_center)
        if new_center == self.center or self.is_zero:
            return ComplexPolynomial(new_center, self.coeffs)
        delta = new_center - self.center
        d = len(self.coeffs) - 1
        mags = np.abs(self.coeffs)
        growth = float(np.polyval(mags[::-1], 1.0 + abs(delta))) / float(np.max(mags))
        eps = float(np.finfo(np.float64).eps)
        if (d + 1) * eps * growth <= 1e-12:
            b = list(self.coeffs)
            # b becomes the coefficient vector of q(x + delta) where q has coeffs b.
            for i in range(d):
                for k in range(d - 1, i - 1, -1):
                    b[k] = b[k] + delta * b[k + 1]
            return ComplexPolynomial(new_center, b)
        with mp.workdps(20 + int(math.ceil(math.log10(growth)))):
            b = [mp.mpc(c) for c in self.coeffs]
            step = mp.mpc(delta)
            for i in range(d):
                for k in range(d - 1, i - 1, -1):
                    b[k] = b[k] + step * b[k + 1]
            return ComplexPolynomial(new_center, [complex(c) for c in b])

    def degree_band(self, tol: float = 0.0):
        """Smallest/largest coefficient index with |a_k| > tol * max|a_j|.

        Returns None for the zero polynomial (empty band).
        """
        if self.is_zero:
            return None
        mags = np.abs(self.coeffs)
        thresh = tol * float(np.max(mags))
        idx = np.nonzero(mags > thresh)[0]
        if idx.size == 0:
            return None
        return DegreeBand(int(idx[0]), int(idx[-1]))


def from_roots(roots, center: complex = 0.0, leading: complex = 1.0) -> ComplexPolynomial:
    """Monic-by-default polynomial with the given roots, in (z - center) powers.

    Roots are given in absolute coordinates; they are shifted by the center
    before expansion.
    """
    coeffs = np.array([complex(leading)], dtype=np.complex128)
    for r in np.asarray(roots, dtype=np.complex128).ravel():
        coeffs = np.convolve(coeffs, np.array([-(r - center), 1.0], dtype=np.complex128))
    return ComplexPolynomial(center, coeffs)


def horner_noise(coeffs, radius: float) -> float:
    """Noise floor of float64 Horner evaluation at distance `radius`.

    eps * sum_nu |a_nu| radius^nu bounds the roundoff of the signed sum;
    values measured below this floor carry no information about the
    polynomial and must be recomputed in extended precision.
    """
    mags = np.abs(_as_coeff_array(coeffs))
    if mags.size == 0:
        return 0.0
    return float(np.finfo(np.float64).eps) * float(np.polyval(mags[::-1], float(radius)))


def zero(center: complex = 0.0) -> ComplexPolynomial:
    return ComplexPolynomial(center, [])


def constant(value: complex, center: complex = 0.0) -> ComplexPolynomial:
    return ComplexPolynomial(center, [value])
