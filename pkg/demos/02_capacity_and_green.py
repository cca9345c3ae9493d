"""Logarithmic capacity, Green functions, and the shrink factor theta.

Fekete/Leja configurations drive all three estimators; the classical
closed forms for the disk and a segment calibrate them.
"""

import math

import numpy as np

from multitaylor import (
    CompactSetSample,
    DiskPrim,
    SegmentPrim,
    capacity,
    fekete_points,
    green_eval,
    theta,
)

disk = CompactSetSample([DiskPrim(0.0, 1.0)])
seg = CompactSetSample([SegmentPrim(-2.0, 2.0)])

print("== capacity against closed forms ==")
print(f"  disk radius 1:   {capacity(disk, 32):.5f}   (exact 1)")
print(f"  segment [-2,2]:  {capacity(seg, 32):.5f}   (exact (b-a)/4 = 1)")

print("\n== extremal points: exhaustive for small n, greedy-leja beyond ==")
for n in (8, 24):
    ep = fekete_points(disk, n)
    print(f"  n = {n:2d}: method {ep.method}, log Vandermonde {ep.vandermonde_log:.3f}")

print("\n== Green function of the complement, pole at infinity ==")
half = CompactSetSample([SegmentPrim(-1.0, 1.0)])
for z, exact, what in (
    (2.0, math.log(2.0 + math.sqrt(3.0)), "segment [-1,1] at 2"),
    (3.0, math.log(3.0 + math.sqrt(8.0)), "segment [-1,1] at 3"),
):
    print(f"  {what}: {green_eval(half, z):.5f}   (exact {exact:.5f})")
print(f"  disk at 2: {green_eval(disk, 2.0):.5f}   (exact log 2 = {math.log(2):.5f})")

print("\n== theta: sup of exp(-g) off a neighborhood, the approximation rate ==")
ring = np.concatenate([r * np.exp(2j * np.pi * np.arange(96) / 96) for r in (2.0, 2.5, 3.0)])
print(f"  disk inside |z| < 2: theta = {theta(disk, ring):.4f}   (exact 1/2)")
print("  smaller theta = faster geometric decay of the best polynomial error")
