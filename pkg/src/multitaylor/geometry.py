"""Plane geometry: domains, sampled compact sets, neighborhoods, contours.

Compact sets are unions of closed primitives carried together with dense point
samples (interior at mesh h, boundary at h/4).  Membership in the admissible
class (connected complement, not polar) is certified by rule, never guessed:
single primitives are certified by shape, finite unions only when the
primitives are pairwise disjoint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi


def _point_segment_distance(z, a: complex, b: complex):
    """Distance from points z (array ok) to the closed segment [a, b]."""
    z = np.asarray(z, dtype=np.complex128)
    ab = b - a
    denom = abs(ab) ** 2
    if denom == 0.0:
        return np.abs(z - a)
    t = np.clip(((z - a) * np.conj(ab)).real / denom, 0.0, 1.0)
    return np.abs(z - (a + t * ab))


def _segment_segment_distance(a1, b1, a2, b2) -> float:
    """Exact distance between two closed segments; 0 when they intersect."""

    def orient(p, q, r):
        return np.sign(((q - p) * np.conj(r - p)).imag)

    o1, o2 = orient(a1, b1, a2), orient(a1, b1, b2)
    o3, o4 = orient(a2, b2, a1), orient(a2, b2, b1)
    if o1 != o2 and o3 != o4:
        return 0.0
    cands = [
        _point_segment_distance(a1, a2, b2),
        _point_segment_distance(b1, a2, b2),
        _point_segment_distance(a2, a1, b1),
        _point_segment_distance(b2, a1, b1),
    ]
    return float(min(float(c) for c in cands))


# ---------------------------------------------------------------------------
# primitives


@dataclass(frozen=True)
class DiskPrim:
    """Closed disk |z - center| <= radius."""

    center: complex
    radius: float

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("disk radius must be positive")

    def contains(self, z, tol: float = 1e-12):
        return np.abs(np.asarray(z) - self.center) <= self.radius + tol

    def distance(self, z):
        return np.maximum(np.abs(np.asarray(z) - self.center) - self.radius, 0.0)

    def boundary_points(self, spacing: float):
        n = max(32, int(math.ceil(TWO_PI * self.radius / spacing)))
        t = np.arange(n) * (TWO_PI / n)
        return self.center + self.radius * np.exp(1j * t)

    def fill_points(self, spacing: float):
        m = max(2, int(math.ceil(2 * self.radius / spacing)))
        ax = self.center.real + np.linspace(-self.radius, self.radius, m + 1)
        ay = self.center.imag + np.linspace(-self.radius, self.radius, m + 1)
        gx, gy = np.meshgrid(ax, ay)
        pts = (gx + 1j * gy).ravel()
        return pts[np.abs(pts - self.center) <= self.radius]

    def bbox(self):
        c, r = self.center, self.radius
        return (c.real - r, c.real + r, c.imag - r, c.imag + r)

    @property
    def complement_connected(self) -> bool:
        return True

    def translate(self, delta: complex) -> "DiskPrim":
        return DiskPrim(self.center + delta, self.radius)


@dataclass(frozen=True)
class SegmentPrim:
    """Closed straight segment from a to b."""

    a: complex
    b: complex

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError("segment endpoints must differ")

    def contains(self, z, tol: float = 1e-12):
        return _point_segment_distance(z, self.a, self.b) <= tol + 1e-15 * abs(self.b - self.a)

    def distance(self, z):
        return _point_segment_distance(z, self.a, self.b)

    def boundary_points(self, spacing: float):
        n = max(2, int(math.ceil(abs(self.b - self.a) / spacing)) + 1)
        t = np.linspace(0.0, 1.0, n)
        return self.a + t * (self.b - self.a)

    def fill_points(self, spacing: float):
        return self.boundary_points(spacing)

    def bbox(self):
        return (
            min(self.a.real, self.b.real),
            max(self.a.real, self.b.real),
            min(self.a.imag, self.b.imag),
            max(self.a.imag, self.b.imag),
        )

    @property
    def complement_connected(self) -> bool:
        return True

    def translate(self, delta: complex) -> "SegmentPrim":
        return SegmentPrim(self.a + delta, self.b + delta)


@dataclass(frozen=True)
class ArcPrim:
    """Circular arc: center + radius e^{it}, t in [t0, t1]."""

    center: complex
    radius: float
    t0: float
    t1: float

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("arc radius must be positive")
        if not self.t1 > self.t0:
            raise ValueError("arc needs t1 > t0")

    def _angles(self, spacing: float):
        n = max(2, int(math.ceil(self.radius * (self.t1 - self.t0) / spacing)) + 1)
        return np.linspace(self.t0, self.t1, n)

    def contains(self, z, tol: float = 1e-12):
        return self.distance(z) <= tol + 1e-15 * self.radius

    def distance(self, z):
        z = np.asarray(z, dtype=np.complex128)
        w = z - self.center
        ang = np.angle(w)
        span = self.t1 - self.t0
        rel = np.mod(ang - self.t0, TWO_PI)
        on_arc = rel <= min(span, TWO_PI)
        radial = np.abs(np.abs(w) - self.radius)
        e0 = np.abs(z - (self.center + self.radius * np.exp(1j * self.t0)))
        e1 = np.abs(z - (self.center + self.radius * np.exp(1j * self.t1)))
        return np.where(on_arc, radial, np.minimum(e0, e1))

    def boundary_points(self, spacing: float):
        return self.center + self.radius * np.exp(1j * self._angles(spacing))

    def fill_points(self, spacing: float):
        return self.boundary_points(spacing)

    def bbox(self):
        pts = self.boundary_points(self.radius * (self.t1 - self.t0) / 256)
        return (pts.real.min(), pts.real.max(), pts.imag.min(), pts.imag.max())

    @property
    def complement_connected(self) -> bool:
        # A full circle encloses a hole; proper sub-arcs do not separate.
        return (self.t1 - self.t0) < TWO_PI - 1e-12

    def translate(self, delta: complex) -> "ArcPrim":
        return ArcPrim(self.center + delta, self.radius, self.t0, self.t1)


@dataclass(frozen=True)
class PolygonPrim:
    """Closed simple polygon together with its interior."""

    vertices: tuple

    def __post_init__(self):
        if len(self.vertices) < 3:
            raise ValueError("polygon needs at least 3 vertices")
        object.__setattr__(self, "vertices", tuple(complex(v) for v in self.vertices))

    def _edges(self):
        v = self.vertices
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    def _inside(self, z):
        z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
        x, y = z.real, z.imag
        inside = np.zeros(z.shape, dtype=bool)
        for a, b in self._edges():
            cond = (a.imag > y) != (b.imag > y)
            with np.errstate(divide="ignore", invalid="ignore"):
                xin = (b.real - a.real) * (y - a.imag) / (b.imag - a.imag) + a.real
            inside ^= cond & (x < xin)
        return inside

    def contains(self, z, tol: float = 1e-12):
        z_arr = np.atleast_1d(np.asarray(z, dtype=np.complex128))
        near_edge = np.full(z_arr.shape, np.inf)
        for a, b in self._edges():
            near_edge = np.minimum(near_edge, _point_segment_distance(z_arr, a, b))
        out = self._inside(z_arr) | (near_edge <= tol)
        return out if np.asarray(z).ndim else bool(out[0])

    def distance(self, z):
        z_arr = np.atleast_1d(np.asarray(z, dtype=np.complex128))
        d = np.full(z_arr.shape, np.inf)
        for a, b in self._edges():
            d = np.minimum(d, _point_segment_distance(z_arr, a, b))
        d[self._inside(z_arr)] = 0.0
        return d if np.asarray(z).ndim else float(d[0])

    def boundary_points(self, spacing: float):
        pts = []
        for a, b in self._edges():
            n = max(2, int(math.ceil(abs(b - a) / spacing)) + 1)
            t = np.linspace(0.0, 1.0, n, endpoint=False)
            pts.append(a + t * (b - a))
        return np.concatenate(pts)

    def fill_points(self, spacing: float):
        x0, x1, y0, y1 = self.bbox()
        nx = max(2, int(math.ceil((x1 - x0) / spacing)))
        ny = max(2, int(math.ceil((y1 - y0) / spacing)))
        gx, gy = np.meshgrid(np.linspace(x0, x1, nx + 1), np.linspace(y0, y1, ny + 1))
        pts = (gx + 1j * gy).ravel()
        return pts[self._inside(pts)]

    def bbox(self):
        xs = [v.real for v in self.vertices]
        ys = [v.imag for v in self.vertices]
        return (min(xs), max(xs), min(ys), max(ys))

    @property
    def complement_connected(self) -> bool:
        return True

    def translate(self, delta: complex) -> "PolygonPrim":
        return PolygonPrim(tuple(v + delta for v in self.vertices))


@dataclass(frozen=True)
class ClippedDiskPrim:
    """Closed disk intersected with closed half-planes Re(z conj(n)) >= off."""

    center: complex
    radius: float
    halfplanes: tuple  # of (normal: complex, offset: float)

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("clipped disk radius must be positive")
        norm = tuple(
            (complex(n) / abs(complex(n)), float(off)) for n, off in self.halfplanes
        )
        object.__setattr__(self, "halfplanes", norm)

    def contains(self, z, tol: float = 1e-12):
        z = np.asarray(z, dtype=np.complex128)
        ok = np.abs(z - self.center) <= self.radius + tol
        for n, off in self.halfplanes:
            ok &= (z * np.conj(n)).real >= off - tol
        return ok

    def distance(self, z):
        # Lower bound (max of per-constraint distances); exact for our uses of
        # sample-to-set checks since samples are dense anyway.
        z = np.asarray(z, dtype=np.complex128)
        d = np.maximum(np.abs(z - self.center) - self.radius, 0.0)
        for n, off in self.halfplanes:
            d = np.maximum(d, off - (z * np.conj(n)).real)
        return np.maximum(d, 0.0)

    def boundary_points(self, spacing: float):
        pts = [DiskPrim(self.center, self.radius).boundary_points(spacing)]
        for n, off in self.halfplanes:
            # chord of the line Re(z conj(n)) = off inside the disk
            foot = off * n
            h = self.center - foot
            along = 1j * n
            proj = (h * np.conj(along)).real
            perp2 = self.radius**2 - (off - (self.center * np.conj(n)).real) ** 2
            if perp2 <= 0:
                continue
            half = math.sqrt(perp2)
            m = max(2, int(math.ceil(2 * half / spacing)) + 1)
            t = np.linspace(proj - half, proj + half, m)
            pts.append(foot + t * along)
        allpts = np.concatenate(pts)
        return allpts[self.contains(allpts, tol=1e-9)]

    def fill_points(self, spacing: float):
        pts = DiskPrim(self.center, self.radius).fill_points(spacing)
        return pts[self.contains(pts, tol=0.0)]

    def bbox(self):
        return DiskPrim(self.center, self.radius).bbox()

    @property
    def complement_connected(self) -> bool:
        # Disk cap cut by half-planes stays simply connected.
        return True

    def translate(self, delta: complex) -> "ClippedDiskPrim":
        hp = tuple((n, off + (delta * np.conj(n)).real) for n, off in self.halfplanes)
        return ClippedDiskPrim(self.center + delta, self.radius, hp)


def _pair_distance(p, q) -> float:
    """Exact distance for disk/segment pairs, sample fallback otherwise."""
    if isinstance(p, DiskPrim) and isinstance(q, DiskPrim):
        return max(0.0, abs(p.center - q.center) - p.radius - q.radius)
    if isinstance(p, DiskPrim) and isinstance(q, SegmentPrim):
        return max(0.0, float(_point_segment_distance(p.center, q.a, q.b)) - p.radius)
    if isinstance(p, SegmentPrim) and isinstance(q, DiskPrim):
        return _pair_distance(q, p)
    if isinstance(p, SegmentPrim) and isinstance(q, SegmentPrim):
        return _segment_segment_distance(p.a, p.b, q.a, q.b)
    a = p.boundary_points(_coarse_spacing(p))
    b = q.boundary_points(_coarse_spacing(q))
    return float(np.min(np.abs(a[:, None] - b[None, :])))


def _coarse_spacing(prim) -> float:
    x0, x1, y0, y1 = prim.bbox()
    return max(math.hypot(x1 - x0, y1 - y0), 1e-9) / 64


# ---------------------------------------------------------------------------
# sampled compact sets


class CompactSetSample:
    """A compact set as primitives plus dense samples.

    samples: interior + boundary points at mesh h.
    boundary: boundary points oversampled at h/4.
    in_m: True only when admissibility (connected complement, not polar at the
    sampling scale) is certified by rule.
    """

    __slots__ = ("primitives", "samples", "boundary", "mesh", "diameter", "in_m")

    def __init__(self, primitives, mesh: float | None = None):
        prims = tuple(primitives)
        if not prims:
            raise ValueError("compact set needs at least one primitive")
        cloud = np.concatenate([p.boundary_points(_coarse_spacing(p)) for p in prims])
        diam = float(np.max(np.abs(cloud[:, None] - cloud[None, :]))) if cloud.size > 1 else 0.0
        h = mesh if mesh is not None else max(diam / 128.0, 1e-9)
        samples = np.concatenate([p.fill_points(h) for p in prims])
        boundary = np.concatenate([p.boundary_points(h / 4.0) for p in prims])
        in_m = all(p.complement_connected for p in prims) and diam >= 2.0 * h
        if len(prims) > 1:
            for i in range(len(prims)):
                for j in range(i + 1, len(prims)):
                    if _pair_distance(prims[i], prims[j]) <= 0.0:
                        in_m = False
        self.primitives = prims
        self.samples = samples
        self.boundary = boundary
        self.mesh = float(h)
        self.diameter = diam
        self.in_m = bool(in_m)

    # -- queries -------------------------------------------------------------

    @property
    def all_points(self):
        return np.concatenate([self.samples, self.boundary])

    def contains(self, z, tol: float = 1e-12):
        z = np.asarray(z, dtype=np.complex128)
        out = np.zeros(z.shape, dtype=bool)
        for p in self.primitives:
            out |= p.contains(z, tol)
        return out

    def distance(self, z):
        z = np.asarray(z, dtype=np.complex128)
        d = np.full(z.shape, np.inf)
        for p in self.primitives:
            d = np.minimum(d, p.distance(z))
        return d

    def bounding_radius(self, center: complex) -> float:
        return float(np.max(np.abs(self.all_points - center)))

    def bbox(self):
        boxes = [p.bbox() for p in self.primitives]
        return (
            min(b[0] for b in boxes),
            max(b[1] for b in boxes),
            min(b[2] for b in boxes),
            max(b[3] for b in boxes),
        )

    def translate(self, delta: complex) -> "CompactSetSample":
        return CompactSetSample(
            [p.translate(delta) for p in self.primitives], mesh=self.mesh
        )

    def union(self, other: "CompactSetSample") -> "CompactSetSample":
        mesh = min(self.mesh, other.mesh)
        return CompactSetSample(self.primitives + other.primitives, mesh=mesh)

    def min_distance_to_domain(self, omega: "DomainSpec") -> float:
        return float(np.min(omega.distance_from_set(self.all_points)))

    def disjoint_from(self, omega: "DomainSpec") -> bool:
        return bool(np.all(~omega.contains(self.all_points)))

    def __repr__(self):
        kinds = ",".join(type(p).__name__.replace("Prim", "") for p in self.primitives)
        return (
            f"CompactSetSample([{kinds}], mesh={self.mesh:.3g}, "
            f"n={self.samples.size}+{self.boundary.size}, in_m={self.in_m})"
        )


# ---------------------------------------------------------------------------
# domains


@dataclass(frozen=True)
class DomainSpec:
    """Simply connected open domain with a distinguished interior center."""

    kind: str  # disk | halfplane | polygon | fullplane
    zeta0: complex
    center: complex = 0.0
    radius: float = 0.0
    normal: complex = 1.0
    offset: float = 0.0
    vertices: tuple = ()

    def __post_init__(self):
        if self.kind not in ("disk", "halfplane", "polygon", "fullplane"):
            raise ValueError(f"unknown domain kind {self.kind!r}")
        if self.kind == "halfplane":
            n = complex(self.normal)
            object.__setattr__(self, "normal", n / abs(n))
        if not self.contains(self.zeta0) or self.boundary_distance(self.zeta0) <= 0:
            raise ValueError("zeta0 must lie strictly inside the domain")

    @classmethod
    def disk(cls, center, radius, zeta0):
        return cls(kind="disk", zeta0=complex(zeta0), center=complex(center), radius=float(radius))

    @classmethod
    def halfplane(cls, normal, offset, zeta0):
        return cls(kind="halfplane", zeta0=complex(zeta0), normal=complex(normal), offset=float(offset))

    @classmethod
    def polygon(cls, vertices, zeta0):
        return cls(kind="polygon", zeta0=complex(zeta0), vertices=tuple(complex(v) for v in vertices))

    @classmethod
    def fullplane(cls, zeta0=0.0):
        return cls(kind="fullplane", zeta0=complex(zeta0))

    def contains(self, z):
        z = np.asarray(z, dtype=np.complex128)
        if self.kind == "disk":
            return np.abs(z - self.center) < self.radius
        if self.kind == "halfplane":
            return (z * np.conj(self.normal)).real < self.offset
        if self.kind == "polygon":
            return PolygonPrim(self.vertices)._inside(z)
        return np.ones(z.shape, dtype=bool)

    def boundary_distance(self, z):
        z = np.asarray(z, dtype=np.complex128)
        if self.kind == "disk":
            return np.abs(self.radius - np.abs(z - self.center))
        if self.kind == "halfplane":
            return np.abs(self.offset - (z * np.conj(self.normal)).real)
        if self.kind == "polygon":
            poly = PolygonPrim(self.vertices)
            d = np.full(z.shape if z.ndim else (1,), np.inf)
            for a, b in poly._edges():
                d = np.minimum(d, _point_segment_distance(np.atleast_1d(z), a, b))
            return d if z.ndim else float(d[0])
        return np.full(z.shape, np.inf) if z.ndim else math.inf

    def distance_from_set(self, z):
        """Distance from points to the open domain (0 inside or on boundary)."""
        z = np.asarray(z, dtype=np.complex128)
        if self.kind == "disk":
            return np.maximum(np.abs(z - self.center) - self.radius, 0.0)
        if self.kind == "halfplane":
            return np.maximum((z * np.conj(self.normal)).real - self.offset, 0.0)
        if self.kind == "polygon":
            poly = PolygonPrim(self.vertices)
            return poly.distance(z)
        return np.zeros(z.shape)

    @property
    def is_bounded(self) -> bool:
        return self.kind in ("disk", "polygon")


# ---------------------------------------------------------------------------
# open neighborhoods (region specs)


@dataclass(frozen=True)
class OpenDisk:
    center: complex
    radius: float

    def contains(self, z):
        return np.abs(np.asarray(z) - self.center) < self.radius

    def max_inscribed_radius(self, c: complex) -> float:
        return self.radius - abs(c - self.center)

    def boundary_points(self, spacing: float):
        return DiskPrim(self.center, self.radius).boundary_points(spacing)

    def translate(self, delta: complex) -> "OpenDisk":
        return OpenDisk(self.center + delta, self.radius)


@dataclass(frozen=True)
class OpenHalfPlane:
    """Open half-plane Re(z conj(normal)) < offset."""

    normal: complex
    offset: float

    def __post_init__(self):
        n = complex(self.normal)
        object.__setattr__(self, "normal", n / abs(n))

    def contains(self, z):
        return (np.asarray(z, dtype=np.complex128) * np.conj(self.normal)).real < self.offset

    def max_inscribed_radius(self, c: complex) -> float:
        return self.offset - (c * np.conj(self.normal)).real

    def boundary_points(self, spacing: float, extent: float = 8.0):
        along = 1j * self.normal
        t = np.arange(-extent, extent + spacing / 2, spacing)
        return self.offset * self.normal + t * along

    def translate(self, delta: complex) -> "OpenHalfPlane":
        return OpenHalfPlane(self.normal, self.offset + (delta * np.conj(self.normal)).real)


@dataclass(frozen=True)
class RegionUnion:
    members: tuple

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))

    def contains(self, z):
        z = np.asarray(z, dtype=np.complex128)
        out = np.zeros(z.shape, dtype=bool)
        for m in self.members:
            out |= m.contains(z)
        return out

    def translate(self, delta: complex) -> "RegionUnion":
        return RegionUnion(tuple(m.translate(delta) for m in self.members))


def complement_samples(region, bbox, step: float):
    """Sample the closed complement of an open region inside a bounding box.

    Returns grid points outside the region plus member boundary points that
    are not interior to any other member.
    """
    x0, x1, y0, y1 = bbox
    nx = max(2, int(math.ceil((x1 - x0) / step)))
    ny = max(2, int(math.ceil((y1 - y0) / step)))
    gx, gy = np.meshgrid(np.linspace(x0, x1, nx + 1), np.linspace(y0, y1, ny + 1))
    pts = (gx + 1j * gy).ravel()
    out = [pts[~region.contains(pts)]]
    members = region.members if isinstance(region, RegionUnion) else (region,)
    for m in members:
        bd = m.boundary_points(step)
        bd = bd[(bd.real >= x0) & (bd.real <= x1) & (bd.imag >= y0) & (bd.imag <= y1)]
        out.append(bd[~region.contains(bd)])
    return np.concatenate(out)


# ---------------------------------------------------------------------------
# contours


class Loop:
    """One closed parametric curve sampled at N equispaced parameters."""

    __slots__ = ("nodes", "derivs", "length")

    def __init__(self, nodes, derivs, length: float):
        self.nodes = np.asarray(nodes, dtype=np.complex128)
        self.derivs = np.asarray(derivs, dtype=np.complex128)
        self.length = float(length)
        if self.nodes.size != self.derivs.size:
            raise ValueError("nodes and derivatives must align")
        if self.nodes.size < 64:
            raise ValueError("need at least 64 contour nodes")


def _spectral_derivative(nodes: np.ndarray) -> np.ndarray:
    """Derivative w.r.t. the parameter t in [0,1) of a periodic node sequence."""
    n = nodes.size
    k = np.fft.fftfreq(n) * n
    if n % 2 == 0:
        k[n // 2] = 0.0  # drop the unmatched Nyquist mode
    return np.fft.ifft(np.fft.fft(nodes) * 2j * math.pi * k)


def _check_simple(nodes: np.ndarray):
    """Reject self-intersecting node polygons (figure-eight style input)."""
    n = nodes.size
    a = nodes
    b = np.roll(nodes, -1)
    idx = np.arange(n)
    i, j = np.meshgrid(idx, idx, indexing="ij")
    mask = (j > i + 1) & ~((i == 0) & (j == n - 1))
    d1 = np.sign(((b[i] - a[i]) * np.conj(a[j] - a[i])).imag)
    d2 = np.sign(((b[i] - a[i]) * np.conj(b[j] - a[i])).imag)
    d3 = np.sign(((b[j] - a[j]) * np.conj(a[i] - a[j])).imag)
    d4 = np.sign(((b[j] - a[j]) * np.conj(b[i] - a[j])).imag)
    crossing = mask & (d1 != d2) & (d3 != d4) & (d1 != 0) & (d3 != 0)
    if np.any(crossing):
        raise ValueError("contour nodes self-intersect; closed-curve validation failed")


class Contour:
    """A cycle: one or more disjoint closed loops."""

    __slots__ = ("loops",)

    def __init__(self, loops):
        self.loops = tuple(loops)
        if not self.loops:
            raise ValueError("contour needs at least one loop")

    @property
    def length(self) -> float:
        return sum(l.length for l in self.loops)

    @property
    def nodes(self):
        return np.concatenate([l.nodes for l in self.loops])

    def min_distance_to(self, points) -> float:
        pts = np.asarray(points, dtype=np.complex128).ravel()
        return float(
            min(np.min(np.abs(l.nodes[:, None] - pts[None, :])) for l in self.loops)
        )

    @classmethod
    def from_nodes(cls, nodes, derivs=None) -> "Contour":
        nodes = np.asarray(nodes, dtype=np.complex128).ravel()
        if nodes.size < 2:
            raise ValueError("too few nodes")
        if abs(nodes[0] - nodes[-1]) > 1e-12 * max(1.0, float(np.max(np.abs(nodes)))):
            raise ValueError("contour node list must close (first == last within 1e-12)")
        nodes = nodes[:-1]
        if nodes.size < 64:
            raise ValueError("need at least 64 contour nodes")
        _check_simple(nodes)
        if derivs is None:
            derivs = _spectral_derivative(nodes)
        else:
            derivs = np.asarray(derivs, dtype=np.complex128).ravel()[: nodes.size]
        seglen = np.abs(np.roll(nodes, -1) - nodes)
        return cls([Loop(nodes, derivs, float(np.sum(seglen)))])

    @classmethod
    def circle(cls, center: complex, radius: float, n: int = 512) -> "Contour":
        t = np.arange(n) / n
        nodes = center + radius * np.exp(2j * math.pi * t)
        derivs = 2j * math.pi * radius * np.exp(2j * math.pi * t)
        return cls([Loop(nodes, derivs, TWO_PI * radius)])

    @classmethod
    def stadium(cls, a: complex, b: complex, rho: float, n: int = 512) -> "Contour":
        """Counterclockwise offset curve at distance rho around segment [a, b].

        Parametrized with a smoothed per-piece warp so the trapezoid rule keeps
        high-order accuracy despite the curvature jumps at the joins.
        """
        a, b = complex(a), complex(b)
        u = (b - a) / abs(b - a)
        m = -1j * u  # outward normal of the first traversed side
        n = int(4 * math.ceil(n / 4))
        t = np.arange(n) / n
        piece = np.minimum((t * 4).astype(int), 3)
        loc = t * 4 - piece
        warp = loc - np.sin(TWO_PI * loc) / TWO_PI
        dwarp = 1.0 - np.cos(TWO_PI * loc)
        nodes = np.empty(n, dtype=np.complex128)
        derivs = np.empty(n, dtype=np.complex128)
        theta0 = np.angle(m)
        for p in range(4):
            sel = piece == p
            s = warp[sel]
            if p == 0:  # side a->b offset by rho*m
                nodes[sel] = a + rho * m + s * (b - a)
                dP = np.full(s.shape, b - a)
            elif p == 1:  # cap around b
                ang = theta0 + math.pi * s
                nodes[sel] = b + rho * np.exp(1j * ang)
                dP = 1j * math.pi * rho * np.exp(1j * ang)
            elif p == 2:  # side b->a offset by -rho*m
                nodes[sel] = b - rho * m + s * (a - b)
                dP = np.full(s.shape, a - b)
            else:  # cap around a
                ang = theta0 + math.pi * (1.0 + s)
                nodes[sel] = a + rho * np.exp(1j * ang)
                dP = 1j * math.pi * rho * np.exp(1j * ang)
            derivs[sel] = dP * dwarp[sel] * 4.0
        length = 2 * abs(b - a) + TWO_PI * rho
        return cls([Loop(nodes, derivs, length)])

    @classmethod
    def join(cls, *contours) -> "Contour":
        loops = []
        for c in contours:
            loops.extend(c.loops)
        return cls(loops)


def winding_number(contour: Contour, z: complex, tol: float = 1e-6) -> int:
    """Trapezoid winding number; rejects points too close to the curve."""
    w, resid = winding_number_residual(contour, z)
    if resid > tol:
        raise ValueError(f"winding quadrature residual {resid:.2e} exceeds {tol:.0e}")
    return w


def winding_number_residual(contour: Contour, z: complex):
    z = complex(z)
    guard = 1e-9 * contour.length
    total = 0.0 + 0.0j
    for loop in contour.loops:
        dmin = float(np.min(np.abs(loop.nodes - z)))
        if dmin <= guard:
            raise ValueError("point is on (or numerically on) the contour")
        total += np.mean(loop.derivs / (loop.nodes - z)) / (2j * math.pi)
    w = int(round(total.real))
    return w, abs(total - w)


def make_contour(
    inner: CompactSetSample,
    region,
    clearance: float,
    position: float = 0.5,
    n_nodes: int = 512,
) -> Contour:
    """One closed loop around `inner`, inside `region`, away from both.

    position slides the loop between the tightest (0) and widest (1) feasible
    placement; 0.5 reproduces the concentric midpoint convention.
    """
    if clearance <= 0:
        raise ValueError("clearance must be positive")
    if isinstance(region, RegionUnion):
        for m in region.members:
            if bool(np.all(m.contains(inner.all_points))):
                region = m
                break
        else:
            raise ValueError("no single region member contains the inner set")
    if not bool(np.all(region.contains(inner.all_points))):
        raise ValueError("inner set is not inside the neighborhood region")

    prims = inner.primitives
    if len(prims) == 1 and isinstance(prims[0], SegmentPrim):
        seg = prims[0]
        rho_max = min(
            region.max_inscribed_radius(seg.a), region.max_inscribed_radius(seg.b)
        )
        rho = clearance + position * (rho_max - 2 * clearance)
        if not (clearance <= rho <= rho_max - clearance):
            raise ValueError("clearance cannot be achieved around the segment")
        return Contour.stadium(seg.a, seg.b, rho, n_nodes)

    x0, x1, y0, y1 = inner.bbox()
    c = complex((x0 + x1) / 2, (y0 + y1) / 2)
    r_need = inner.bounding_radius(c)
    rho_max = region.max_inscribed_radius(c)
    rho = r_need + position * (rho_max - r_need)
    if not (r_need + clearance <= rho <= rho_max - clearance):
        raise ValueError("clearance cannot be achieved (set too close to region boundary)")
    return Contour.circle(c, rho, n_nodes)


# ---------------------------------------------------------------------------
# exhaustions


def make_exhaustion(omega: DomainSpec, k: int, n_pad: float = 2.0) -> CompactSetSample:
    """k-th member of the compact exhaustion used to schedule target sets.

    Bounded domains inside D(0, n_pad) get the real segment [n_pad, n_pad+k];
    half-planes get the clipped disk closure(complement) intersected with
    D(zeta0, k), inset slightly so samples stay strictly off the domain.
    """
    if k <= 0:
        raise ValueError("exhaustion index k must be a positive integer")
    if omega.kind == "fullplane":
        raise ValueError("full plane has empty complement; no exhaustion exists")
    if omega.is_bounded:
        if omega.kind == "disk":
            reach = abs(omega.center) + omega.radius
        else:
            reach = max(abs(v) for v in omega.vertices)
        if reach > n_pad:
            raise ValueError(f"domain is not contained in D(0, {n_pad}); enlarge n_pad")
        return CompactSetSample([SegmentPrim(complex(n_pad), complex(n_pad + k))])
    # half-plane: complement side with a small fixed inset
    inset = float(omega.boundary_distance(omega.zeta0)) / 64.0
    hp = (omega.normal, omega.offset + inset)
    prim = ClippedDiskPrim(omega.zeta0, float(k), (hp,))
    probe = prim.fill_points(max(k / 64.0, 1e-6))
    if probe.size == 0:
        raise ValueError("exhaustion piece is empty at this k; increase k")
    return CompactSetSample([prim])
