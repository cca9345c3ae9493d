"""Polynomial approximants from the contour formula, with certified bounds.

Interpolation at extremal points, coefficients by trapezoidal quadrature,
and the length/distance/extremal-ratio error bound checked on every run.
The observed error rate is compared with the Green-function prediction.
"""

import math

from multitaylor import (
    CompactSetSample,
    Contour,
    RecipPower,
    SegmentPrim,
    best_approx_error,
    bw_construct_full,
    fekete_points,
    green_eval,
)

seg = CompactSetSample([SegmentPrim(-1.0, 1.0)])
f = RecipPower(2.0, 1)  # 1/(z - 2): analytic near the segment, pole at 2
gamma = Contour.circle(0.0, 1.6, 512)  # inside the pole, around the segment

print("== contour construction for 1/(z-2) on [-1, 1] ==")
print(f"{'tau':>4} {'sup error':>12} {'bound rhs':>12} {'ok':>4} {'err^(1/tau)':>12}")
for tau in (8, 16, 24, 32):
    q = fekete_points(seg, tau)
    form, rep = bw_construct_full(f, gamma, q, k=seg)
    print(f"{tau:>4} {rep.sup_err:>12.3e} {rep.rhs:>12.3e} {str(rep.ok):>4} "
          f"{rep.sup_err ** (1 / tau):>12.4f}")

rho = math.exp(-green_eval(seg, 2.0))
print(f"\npredicted rate exp(-g(2)) = {rho:.4f}   (exact 1/(2+sqrt(3)) = "
      f"{1 / (2 + math.sqrt(3)):.4f})")

print("\n== best-approximation distance shows the same geometric rate ==")
for tau in (12, 24, 36):
    d = best_approx_error(f, seg, tau)
    print(f"  tau = {tau:2d}: distance {d:.3e}, rate {d ** (1 / tau):.4f}")

print("\nthe bound verdict carries a float64 resolution floor: past tau ~ 37")
print("the rhs outruns anything a double-precision residual can display")
