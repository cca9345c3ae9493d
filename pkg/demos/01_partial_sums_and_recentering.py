"""Taylor sections about a movable center.

Walks the polynomial layer: truncation, the projection law, recentering,
and why trailing coefficients are never dropped by magnitude.
"""

import numpy as np

from multitaylor import ComplexPolynomial, horner_noise

print("== sections of f(z) = 1 + z + z^2/2 + z^3/6 + z^4/24 about 0 ==")
f = ComplexPolynomial(0.0, [1, 1, 0.5, 1 / 6, 1 / 24])
for lam in (0, 2, 4, 7):
    t = f.partial_sum(lam)
    print(f"  T_{lam}: degree {t.degree}, value at 1 -> {t(1.0):.6f}")
print(f"  truncating past the degree is the identity: "
      f"{np.array_equal(f.partial_sum(7).coeffs, f.coeffs)}")

print("\n== the projection law: T_a T_b = T_min(a,b) ==")
g = f.partial_sum(3).partial_sum(1)
print(f"  T_1 T_3 f == T_1 f -> {np.array_equal(g.coeffs, f.partial_sum(1).coeffs)}")

print("\n== recentering is a change of basis, not of function ==")
h = f.recenter(0.5)
zs = np.array([0.1 + 0.2j, -0.4, 0.9j])
print(f"  centers 0 and 0.5 agree pointwise: "
      f"{np.allclose(f(zs), h(zs), rtol=0, atol=1e-14)}")
back = h.recenter(0.0)
print(f"  round trip error: {float(np.max(np.abs(back.coeffs - f.coeffs))):.2e}")

print("\n== a badly conditioned shift switches to extended precision ==")
wide = ComplexPolynomial(0.0, np.ones(65))
moved = wide.recenter(4.0)
print(f"  degree 64, shift 4: leading coefficient kept exactly "
      f"({moved.coeffs[-1].real:.1f}), largest ~ {float(np.max(np.abs(moved.coeffs))):.3e}")

print("\n== tiny trailing coefficients are data, not noise ==")
sly = ComplexPolynomial(0.0, [1.0, 0.0, 1e-9])
print(f"  degree stays {sly.degree}: at |z| = 1e6 the 1e-9 tail contributes "
      f"{abs(sly(1e6) - 1.0):.1e}")
print(f"  float64 evaluation noise floor at radius 2.5: "
      f"{horner_noise(sly.coeffs, 2.5):.1e}")
