"""Banded decay scans, the log-k selector, tail collapse, center independence."""

import math

import numpy as np
import pytest

from multitaylor.gaps import (
    CollapseTable,
    GapStructure,
    center_invariance_check,
    detect_gaps,
    gap_selector,
    norm_filter,
    read_coefficients,
    tail_collapse_check,
    write_coefficients,
)
from multitaylor.geometry import ArcPrim, CompactSetSample, DiskPrim
from multitaylor.polynomials import ComplexPolynomial

TWO_PI = 2.0 * math.pi
CIRCLE15 = CompactSetSample([ArcPrim(0.0, 1.5, 0.0, TWO_PI)])


# ---------------------------------------------------------------------------
# structure validation


class TestGapStructure:
    def test_valid_interleaving_accepted(self):
        gs = GapStructure(((1, 8), (8, 64)), (0.0, 0.0), 8.0)
        assert gs.pairs == ((1, 8), (8, 64))

    @pytest.mark.parametrize(
        "pairs",
        [((0, 4),), ((4, 4),), ((5, 3),), ((1, 8), (6, 20)), ((1, 8), (9, 8))],
    )
    def test_malformed_orderings_rejected(self, pairs):
        with pytest.raises(ValueError, match="malformed pair ordering"):
            GapStructure(pairs, tuple(0.0 for _ in pairs), 1.0)

    def test_decay_length_must_match(self):
        with pytest.raises(ValueError, match="one decay entry per pair"):
            GapStructure(((1, 8),), (0.0, 0.0), 8.0)


# ---------------------------------------------------------------------------
# detection


class TestDetectGaps:
    def test_exactly_zero_bands_pass_defaults(self):
        a = np.ones(65)
        a[2:9] = 0.0   # band (1, 8]
        a[9:65] = 0.0  # band (8, 64]
        scan = detect_gaps(a, ((1, 8), (8, 64)))
        assert scan.structure.decay == (0.0, 0.0)
        assert scan.structure.ratio_floor == 8.0
        assert scan.verdict

    def test_squared_exponential_decay_per_band(self):
        nu = np.arange(26)
        a = np.exp(-(nu.astype(float) ** 2))
        pairs = tuple((m * m, (m + 1) ** 2 - 1) for m in range(1, 5))
        scan = detect_gaps(a, pairs, ratio_target=1.4, decay_target=0.2)
        # |a_nu|^(1/nu) = e^(-nu) is largest at the first band index
        want = tuple(math.exp(-(p + 1)) for p, _ in pairs)
        assert scan.structure.decay == pytest.approx(want, rel=1e-12)
        assert scan.verdict

    def test_fixed_ratio_binds_against_target(self):
        a = np.zeros(17)
        pairs = ((2, 4), (4, 8), (8, 16))
        strict = detect_gaps(a, pairs, ratio_target=4.0)
        assert not strict.ratio_ok and not strict.verdict
        relaxed = detect_gaps(a, pairs, ratio_target=2.0)
        assert relaxed.verdict

    def test_decay_maxima_match_brute_force(self):
        rng = np.random.default_rng(7)
        a = rng.standard_normal(30) + 1j * rng.standard_normal(30)
        pairs = ((3, 9), (9, 27))
        scan = detect_gaps(a, pairs)
        for (p, q), got in zip(pairs, scan.structure.decay):
            want = max(abs(a[v]) ** (1.0 / v) for v in range(p + 1, q + 1))
            assert got == pytest.approx(want, rel=1e-13)

    def test_verdict_monotone_in_targets(self):
        rng = np.random.default_rng(11)
        pairs = ((2, 6), (6, 24), (24, 96))
        for _ in range(20):
            a = rng.uniform(0.0, 1.0, 97) * rng.choice([0.0, 1.0], 97)
            strict = detect_gaps(a, pairs, ratio_target=4.0, decay_target=0.5)
            relaxed = detect_gaps(a, pairs, ratio_target=2.0, decay_target=0.9)
            if strict.verdict:
                assert relaxed.verdict

    def test_insufficient_coefficients_rejected(self):
        with pytest.raises(ValueError, match="coefficients available"):
            detect_gaps(np.ones(10), ((2, 12),))

    def test_growing_band_maxima_fail_decay(self):
        a = np.zeros(33)
        a[3] = 1e-6
        a[20] = 0.9 ** 20  # root 0.9 in the second band beats the first
        scan = detect_gaps(a, ((2, 4), (16, 32)), ratio_target=1.5)
        assert not scan.decay_ok and not scan.verdict


# ---------------------------------------------------------------------------
# selector


class TestGapSelector:
    def test_hand_computed_values(self):
        assert gap_selector((100,), 1, (100,)).p_values == (22,)
        assert gap_selector((100,), 2, (100,)).p_values == (47,)

    def test_formula_against_direct_evaluation(self):
        ks = (3, 7, 19, 50, 121)
        ns = (5, 11, 40, 90, 400)
        for s in (1, 2, 3):
            tab = gap_selector(ns, s, ks)
            want = tuple(
                math.floor(n / math.log(k) ** (1.0 / s)) + 1 for k, n in zip(ks, ns)
            )
            assert tab.p_values == want

    def test_inequality_holds_from_k_three_up(self):
        ks = tuple(range(3, 41))
        for s in (1, 2, 3):
            tab = gap_selector(ks, s, ks)
            assert tab.all_ok
            for row, logk in zip(tab.lhs, tab.rhs):
                assert all(v <= logk for v in row)

    def test_low_k_exception_reported_not_hidden(self):
        tab = gap_selector((100,), 2, (2,))
        assert not tab.ok[0][0]   # (n/p)^1 > log 2 here
        assert tab.ok[0][1]       # the sigma0 power always obeys the bound

    def test_k_one_rejected(self):
        with pytest.raises(ValueError, match="k = 1"):
            gap_selector((10,), 1, (1,))

    def test_non_increasing_n_rejected(self):
        with pytest.raises(ValueError, match="strictly increasing"):
            gap_selector((10, 10), 1, (3, 4))

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError, match="one k per n"):
            gap_selector((10, 20), 1, (3,))


# ---------------------------------------------------------------------------
# tail collapse


class TestTailCollapse:
    def test_zero_band_gives_zero_entries(self):
        f = ComplexPolynomial(0.0, [1.0, 1.0] + [0.0] * 8 + [1.0])  # gap (1, 9]
        table = tail_collapse_check(f, ((1, 9),), (2.0, 0.5))
        assert table.entries == ((0.0, 0.0),)

    def test_positive_coefficients_attain_triangle_bound(self):
        coeffs = 3.0 ** -np.arange(13)
        f = ComplexPolynomial(0.0, coeffs)
        pairs, radii = ((4, 8), (8, 12)), (2.0,)
        table = tail_collapse_check(f, pairs, radii)
        for (p, q), row in zip(pairs, table.entries):
            bound = sum(coeffs[v] * 2.0 ** v for v in range(p + 1, q + 1))
            assert row[0] == pytest.approx(bound, rel=1e-12)
            assert row[0] <= bound * (1.0 + 1e-9)
        assert table.decreasing == (True,)

    def test_radius_zero_column_is_zero(self):
        f = ComplexPolynomial(0.0, np.ones(9))
        table = tail_collapse_check(f, ((1, 4), (4, 8)), (0.0,))
        assert table.entries == ((0.0,), (0.0,))

    def test_shared_low_terms_cancel_exactly(self):
        # identical seeds below the band must not leak into the difference
        coeffs = np.zeros(21)
        coeffs[:3] = (4.0, -2.0, 1.0)
        coeffs[20] = 1e-12
        f = ComplexPolynomial(0.0, coeffs)
        table = tail_collapse_check(f, ((5, 20),), (1.0,))
        assert table.entries[0][0] == pytest.approx(1e-12, rel=1e-12)

    def test_degree_below_band_rejected(self):
        f = ComplexPolynomial(0.0, np.ones(5))
        with pytest.raises(ValueError, match="below the largest band"):
            tail_collapse_check(f, ((2, 9),), (1.0,))

    def test_bad_band_rejected(self):
        f = ComplexPolynomial(0.0, np.ones(9))
        with pytest.raises(ValueError, match="0 <= p < q"):
            tail_collapse_check(f, ((4, 4),), (1.0,))


# ---------------------------------------------------------------------------
# center independence


class TestCenterInvariance:
    def test_truncation_identity_is_exact_zero(self):
        f = ComplexPolynomial(0.0, [1.0, 2.0, 3.0, 4.0])
        table = center_invariance_check(
            f, CompactSetSample([DiskPrim(0.0, 0.3)]), CIRCLE15, (3, 5, 9)
        )
        assert table.entries == (0.0, 0.0, 0.0)
        assert table.decreasing and table.final == 0.0

    def test_single_high_coefficient_hand_value(self):
        # f = z^2, p = 1: recentered section is 2 zeta z - zeta^2, so the
        # discrepancy sup over |zeta| = 0.5, |z| = 1.5 is 2(0.5)(1.5) + 0.25
        f = ComplexPolynomial(0.0, [0.0, 0.0, 1.0])
        ring = CompactSetSample([ArcPrim(0.0, 0.5, 0.0, TWO_PI)])
        table = center_invariance_check(f, ring, CIRCLE15, (1,))
        assert table.entries[0] == pytest.approx(1.75, rel=2e-3)

    def test_vanishing_center_spread_gives_vanishing_entries(self):
        f = ComplexPolynomial(0.0, [1.0, 1.0, 1.0, 1.0, 1.0])
        tiny = CompactSetSample([DiskPrim(0.0, 1e-9)])
        table = center_invariance_check(f, tiny, CIRCLE15, (2,))
        assert table.entries[0] < 1e-6

    def test_degree_overflow_rejected(self):
        coeffs = np.zeros(1026)
        coeffs[-1] = 1.0
        f = ComplexPolynomial(0.0, coeffs)
        with pytest.raises(ValueError, match="recentering limit"):
            center_invariance_check(
                f, CompactSetSample([DiskPrim(0.0, 0.1)]), CIRCLE15, (4,)
            )

    def test_zeta_sampling_is_capped(self):
        f = ComplexPolynomial(0.0, [0.0, 1.0, 1.0])
        dense = CompactSetSample([DiskPrim(0.0, 0.2)])
        assert dense.all_points.size > 16
        a = center_invariance_check(f, dense, CIRCLE15, (1,), zeta_count=16)
        b = center_invariance_check(f, dense, CIRCLE15, (1,), zeta_count=64)
        assert a.entries[0] <= b.entries[0] * (1.0 + 1e-12)


# ---------------------------------------------------------------------------
# norm filter


class TestNormFilter:
    def test_keeps_controlled_indices(self):
        f = ComplexPolynomial(0.0, 3.0 ** -np.arange(7))
        assert norm_filter(f, (1.0, 2.0), (1, 2), 2) == (0, 1)

    def test_requires_every_exponent(self):
        f = ComplexPolynomial(0.0, [0.0, 0.0, 0.0, 0.0, 625.0])  # (5z)^4 top
        assert norm_filter(f, (2.0,), (2,), 1) == (0,)   # T_2 = 0 passes
        assert norm_filter(f, (2.0,), (2,), 2) == ()     # T_4 breaks the bound

    def test_length_mismatch_rejected(self):
        f = ComplexPolynomial(0.0, [1.0])
        with pytest.raises(ValueError, match="one k per n"):
            norm_filter(f, (1.0, 2.0), (1,), 1)


# ---------------------------------------------------------------------------
# coefficient streams


class TestCoefficientStreams:
    def test_round_trip_is_exact(self, tmp_path):
        rng = np.random.default_rng(3)
        coeffs = rng.standard_normal(17) + 1j * rng.standard_normal(17)
        path = tmp_path / "w.coef"
        write_coefficients(path, coeffs)
        back = read_coefficients(path)
        assert back.shape == coeffs.shape
        assert bool(np.all(back == coeffs))

    def test_sparse_indices_fill_zeros(self, tmp_path):
        path = tmp_path / "s.coef"
        path.write_text("# comment\n0 1.0 0.0\n\n5 0.0 -2.5\n")
        got = read_coefficients(path)
        want = np.zeros(6, dtype=np.complex128)
        want[0], want[5] = 1.0, -2.5j
        assert bool(np.all(got == want))

    def test_malformed_line_names_location(self, tmp_path):
        path = tmp_path / "bad.coef"
        path.write_text("0 1.0 0.0\n1 2.0\n")
        with pytest.raises(ValueError, match=r"bad\.coef:2"):
            read_coefficients(path)

    def test_negative_index_rejected(self, tmp_path):
        path = tmp_path / "neg.coef"
        path.write_text("-1 1.0 0.0\n")
        with pytest.raises(ValueError, match="negative index"):
            read_coefficients(path)

    def test_empty_stream_gives_empty_array(self, tmp_path):
        path = tmp_path / "empty.coef"
        path.write_text("# nothing here\n")
        assert read_coefficients(path).size == 0
