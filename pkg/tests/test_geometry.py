"""Geometry layer: sampled compacts, domains, contours, winding, exhaustions."""

import math

import numpy as np
import pytest

from multitaylor.geometry import (
    ArcPrim,
    CompactSetSample,
    Contour,
    DiskPrim,
    DomainSpec,
    OpenDisk,
    OpenHalfPlane,
    PolygonPrim,
    RegionUnion,
    SegmentPrim,
    complement_samples,
    make_contour,
    make_exhaustion,
    winding_number,
    winding_number_residual,
)


def winding_by_angle(nodes: np.ndarray, z: complex) -> int:
    """Oracle: accumulate argument increments around the node polygon."""
    w = nodes - z
    dphi = np.angle(np.roll(w, -1) / w)
    return int(round(float(np.sum(dphi)) / (2 * math.pi)))


class TestCompactSetSample:
    def test_samples_lie_in_union(self):
        s = CompactSetSample([DiskPrim(1j, 0.5), SegmentPrim(2.0, 3.0)])
        assert bool(np.all(s.contains(s.samples, tol=1e-9)))
        assert bool(np.all(s.contains(s.boundary, tol=1e-9)))

    def test_default_mesh_is_diameter_over_128(self):
        s = CompactSetSample([DiskPrim(0, 1.0)])
        assert s.mesh == pytest.approx(2.0 / 128.0, rel=1e-3)
        assert s.diameter == pytest.approx(2.0, rel=1e-3)

    def test_mesh_override_respected(self):
        s = CompactSetSample([SegmentPrim(0, 1.0)], mesh=0.01)
        assert s.mesh == 0.01
        assert s.samples.size >= 100

    def test_in_m_disjoint_union_true(self):
        s = CompactSetSample([DiskPrim(0, 0.4), SegmentPrim(1.5, 2.5)])
        assert s.in_m

    def test_in_m_crossing_segments_false(self):
        s = CompactSetSample([SegmentPrim(1.5, 2.5), SegmentPrim(2 - 1.5j, 2 + 1.5j)])
        assert not s.in_m

    def test_in_m_full_circle_false_half_arc_true(self):
        full = CompactSetSample([ArcPrim(0, 1.0, 0.0, 2 * math.pi)])
        half = CompactSetSample([ArcPrim(0, 1.0, 0.0, math.pi)])
        assert not full.in_m
        assert half.in_m

    def test_in_m_touching_disks_false(self):
        s = CompactSetSample([DiskPrim(0, 1.0), DiskPrim(2.0, 1.0)])
        assert not s.in_m

    def test_union_and_translate(self):
        a = CompactSetSample([DiskPrim(0, 0.4)])
        b = CompactSetSample([SegmentPrim(1.5, 2.5)])
        u = a.union(b)
        assert len(u.primitives) == 2 and u.in_m
        t = u.translate(-1.0)
        assert bool(np.all(t.contains(u.all_points - 1.0, tol=1e-9)))

    def test_segment_distance_values(self):
        s = CompactSetSample([SegmentPrim(1.5, 2.5)])
        assert float(s.distance(np.array(2.0 + 1j))) == pytest.approx(1.0)
        assert float(s.distance(np.array(3.5 + 0j))) == pytest.approx(1.0)
        assert float(s.distance(np.array(2.0 + 0j))) == 0.0

    def test_polygon_membership_against_angle_sum_oracle(self):
        verts = [np.exp(2j * math.pi * k / 6) * (2 + 0.3 * (-1) ** k) for k in range(6)]
        poly = PolygonPrim(verts)
        rng = np.random.default_rng(7)
        pts = rng.uniform(-3, 3, 240) + 1j * rng.uniform(-3, 3, 240)
        vs = np.array(verts + [verts[0]])
        for z in pts:
            if float(poly.distance(np.array(z))) < 1e-3 and poly.contains(z):
                continue  # skip boundary-ambiguous points
            total = float(np.sum(np.angle((vs[1:] - z) / (vs[:-1] - z))))
            inside_oracle = abs(total) > math.pi
            assert bool(poly._inside(np.array(z))[0]) == inside_oracle


class TestDomainSpec:
    def test_zeta0_must_be_interior(self):
        with pytest.raises(ValueError, match="zeta0"):
            DomainSpec.disk(0, 1, 2.0)
        with pytest.raises(ValueError, match="zeta0"):
            DomainSpec.disk(0, 1, 1.0)  # boundary is not interior
        with pytest.raises(ValueError, match="zeta0"):
            DomainSpec.halfplane(1.0, 0.0, 0.5)

    def test_membership_and_distances(self):
        om = DomainSpec.disk(0, 1, 0)
        assert bool(om.contains(0.9)) and not bool(om.contains(1.1))
        assert float(om.boundary_distance(np.array(0.25 + 0j))) == pytest.approx(0.75)
        hp = DomainSpec.halfplane(1.0, 0.0, -1.0)  # Re z < 0
        assert bool(hp.contains(-0.1)) and not bool(hp.contains(0.1))
        assert float(hp.distance_from_set(np.array(3.0 + 4j))) == pytest.approx(3.0)

    def test_set_disjointness_queries(self):
        om = DomainSpec.disk(0, 1, 0)
        k1 = CompactSetSample([SegmentPrim(1.5, 2.5)])
        assert k1.disjoint_from(om)
        assert k1.min_distance_to_domain(om) == pytest.approx(0.5, abs=1e-9)


class TestContour:
    def test_concentric_circle_convention(self):
        inner = CompactSetSample([DiskPrim(0, 1.0)])
        ct = make_contour(inner, OpenDisk(0, 2.0), clearance=0.25)
        assert abs(ct.length - 3 * math.pi) <= 1e-8
        assert winding_number(ct, 0.0) == 1
        assert winding_number(ct, 3.0) == 0
        assert bool(np.all(np.abs(ct.nodes) - 1.5 < 1e-12))

    def test_winding_one_on_inner_samples_zero_outside(self):
        inner = CompactSetSample([SegmentPrim(1.5, 2.5)])
        ct = make_contour(inner, OpenHalfPlane(-1.0, -1.1), clearance=0.05)
        for z in (1.5, 2.0, 2.5, 2.0 + 0.05j):
            assert winding_number(ct, z) == 1
        for z in (0.0, 0.9, 5.0, 2.0 + 3j):
            assert winding_number(ct, z) == 0
        assert ct.min_distance_to(inner.all_points) > 0

    def test_winding_matches_angle_accumulation_oracle(self):
        ct = Contour.stadium(1.5, 2.5, 0.4, 512)
        nodes = ct.loops[0].nodes
        for z in (2.0, 1.2, 2.0 + 0.3j, 2.0 + 0.5j, -1.0, 3.0, 1.15 + 0.05j):
            assert winding_number(ct, z) == winding_by_angle(nodes, z)

    def test_residual_geometric_decay_under_node_doubling(self):
        z = 2.0 + 0.2j
        resids = []
        for n in (64, 128, 256):
            _, r = winding_number_residual(Contour.stadium(1.5, 2.5, 0.3, n), z)
            resids.append(r)
        assert resids[1] <= resids[0] / 2
        assert resids[2] <= resids[1] / 2
        assert resids[2] <= 1e-6

    def test_on_curve_point_rejected(self):
        ct = Contour.circle(0, 1.0)
        with pytest.raises(ValueError, match="on (.*)contour"):
            winding_number(ct, ct.loops[0].nodes[3])

    def test_figure_eight_rejected(self):
        t = np.linspace(0, 2 * np.pi, 129)
        nodes = np.sin(t) + 1j * np.sin(t) * np.cos(t)
        with pytest.raises(ValueError, match="self-intersect"):
            Contour.from_nodes(nodes)

    def test_open_node_list_rejected(self):
        t = np.linspace(0, 2 * np.pi, 128, endpoint=False)
        with pytest.raises(ValueError, match="close"):
            Contour.from_nodes(np.exp(1j * t))  # first != last

    def test_too_few_nodes_rejected(self):
        t = np.linspace(0, 2 * np.pi, 33)
        with pytest.raises(ValueError, match="64"):
            Contour.from_nodes(np.exp(1j * t))

    def test_from_nodes_spectral_derivative_accuracy(self):
        t = np.linspace(0, 2 * np.pi, 257)
        ct = Contour.from_nodes(np.exp(1j * t))
        assert winding_number(ct, 0.1 + 0.2j) == 1
        _, r = winding_number_residual(ct, 0.5)
        assert r <= 1e-10

    def test_multi_loop_join(self):
        c1 = Contour.circle(0, 0.5)
        c2 = Contour.circle(4.0, 0.5)
        both = Contour.join(c1, c2)
        assert winding_number(both, 0.0) == 1
        assert winding_number(both, 4.0) == 1
        assert winding_number(both, 2.0) == 0
        assert both.length == pytest.approx(2 * math.pi)

    def test_clearance_failure(self):
        inner = CompactSetSample([DiskPrim(0, 1.0)])
        with pytest.raises(ValueError, match="clearance"):
            make_contour(inner, OpenDisk(0, 1.2), clearance=0.25)

    def test_inner_must_sit_inside_region(self):
        inner = CompactSetSample([DiskPrim(0, 1.0)])
        with pytest.raises(ValueError, match="inside"):
            make_contour(inner, OpenDisk(5.0, 2.0), clearance=0.1)


class TestExhaustion:
    def test_bounded_domain_gives_shifted_segment(self):
        om = DomainSpec.disk(0, 1, 0)
        e3 = make_exhaustion(om, 3, n_pad=2.0)
        (seg,) = e3.primitives
        assert isinstance(seg, SegmentPrim)
        assert seg.a == 2.0 and seg.b == 5.0
        assert e3.in_m and e3.disjoint_from(om)

    def test_halfplane_gives_clipped_disk(self):
        hp = DomainSpec.halfplane(1.0, 0.0, -1.0)  # Re z < 0, zeta0 = -1
        e2 = make_exhaustion(hp, 2)
        pts = e2.all_points
        assert bool(np.all(pts.real >= 0))
        assert bool(np.all(np.abs(pts + 1.0) <= 2.0 + 1e-9))
        # fills the intended region: reaches near the boundary line and the rim
        assert pts.real.min() <= 1.0 / 32.0
        assert np.max(np.abs(pts + 1.0)) >= 1.9
        assert e2.disjoint_from(hp)

    def test_monotone_nesting_and_domain_clearance(self):
        om = DomainSpec.disk(0, 1, 0)
        hp = DomainSpec.halfplane(1.0, 0.0, -1.0)
        # k starts at 2 for the half-plane: D(zeta0, 1) only touches the
        # boundary line, so the k = 1 piece is a near-singleton and rejected.
        for dom, k0 in ((om, 1), (hp, 2)):
            prev = None
            for k in range(k0, 17):
                ek = make_exhaustion(dom, k)
                assert float(np.min(dom.distance_from_set(ek.all_points))) > 0
                if prev is not None:
                    assert bool(np.all(ek.contains(prev.all_points, tol=1e-9)))
                prev = ek

    def test_empty_halfplane_piece_rejected(self):
        hp = DomainSpec.halfplane(1.0, 0.0, -1.0)
        with pytest.raises(ValueError, match="empty"):
            make_exhaustion(hp, 1)

    def test_rejections(self):
        om = DomainSpec.disk(0, 1, 0)
        with pytest.raises(ValueError, match="positive"):
            make_exhaustion(om, 0)
        with pytest.raises(ValueError, match="n_pad"):
            make_exhaustion(DomainSpec.disk(0, 3.0, 0), 2, n_pad=2.0)
        with pytest.raises(ValueError, match="complement"):
            make_exhaustion(DomainSpec.fullplane(), 1)


class TestRegions:
    def test_complement_samples_cover_strip(self):
        u = RegionUnion([OpenHalfPlane(1.0, 0.9), OpenHalfPlane(-1.0, -1.1)])
        pts = complement_samples(u, (0.0, 3.0, -2.0, 2.0), 0.05)
        assert bool(np.all(~u.contains(pts)))
        assert pts.real.min() == pytest.approx(0.9, abs=1e-9)
        assert pts.real.max() == pytest.approx(1.1, abs=1e-9)

    def test_max_inscribed_radius(self):
        assert OpenDisk(0, 2.0).max_inscribed_radius(0.5) == pytest.approx(1.5)
        assert OpenHalfPlane(1.0, 0.9).max_inscribed_radius(0.2) == pytest.approx(0.7)
