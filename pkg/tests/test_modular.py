import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from periodkit.lattice import EllipticLattice, SiegelTau, UnimodularMap, siegel_reduce
from periodkit.modular import (
    InsufficientTruncationError,
    QSeriesConfig,
    check_classical_bounds,
    delta_on_upper_half_plane,
    delta_tau,
    j_invariant,
    j_series_coefficients,
    silverman_f_extrema,
)

upper_half = st.builds(
    complex,
    st.floats(-0.5, 0.5),
    st.floats(0.9, 4.0),
)


class TestDelta:
    def test_corner_value_against_high_precision_sum(self):
        corner = SiegelTau(0.5, math.sqrt(3.0) / 2.0)
        got = delta_tau(corner)
        want = oracles.mp_delta(complex(corner.re, corner.im))
        assert got.value.real == pytest.approx(float(want.real), abs=1e-15)
        assert got.value.imag == pytest.approx(float(want.imag), abs=1e-15)
        assert abs(got.value) == pytest.approx(0.0048051383770529483, rel=1e-12)

    def test_generic_point_frozen_value(self):
        got = delta_on_upper_half_plane(complex(0.3, 0.9))
        assert got.value.real == pytest.approx(-0.0008351110596892742, rel=1e-12)
        assert got.value.imag == pytest.approx(0.0034954046608244818, rel=1e-12)
        assert got.tail < 1e-12

    def test_two_pi_normalization_scale(self):
        z = complex(0.1, 1.2)
        plain = delta_on_upper_half_plane(z).value
        scaled = delta_on_upper_half_plane(z, normalization="two_pi_12").value
        assert scaled == pytest.approx(plain * (2 * math.pi) ** 12, rel=1e-14)

    @given(upper_half)
    @settings(max_examples=40, deadline=None)
    def test_tail_soundness_under_doubling(self, z):
        cfg = QSeriesConfig(truncation_order=48, tail_tolerance=1e-10)
        fine = QSeriesConfig(truncation_order=96, tail_tolerance=1e-10)
        a = delta_on_upper_half_plane(z, cfg)
        b = delta_on_upper_half_plane(z, fine)
        assert abs(a.value - b.value) <= max(a.tail, 1e-18)
        assert abs(a.value - b.value) < cfg.tail_tolerance

    def test_insufficient_truncation_reports_required_order(self):
        cfg = QSeriesConfig(truncation_order=3, tail_tolerance=1e-15)
        with pytest.raises(InsufficientTruncationError) as exc:
            delta_on_upper_half_plane(complex(0.0, 0.35), cfg)
        assert exc.value.required_order > 3
        # the suggested order is actually enough
        ok = QSeriesConfig(exc.value.required_order, 1e-15)
        assert delta_on_upper_half_plane(complex(0.0, 0.35), ok).tail <= 1e-15

    @given(upper_half)
    @settings(max_examples=40, deadline=None)
    def test_quasi_modular_magnitude(self, z):
        lhs = abs(delta_on_upper_half_plane(-1.0 / z).value)
        rhs = abs(z) ** 12 * abs(delta_on_upper_half_plane(z).value)
        assert lhs == pytest.approx(rhs, rel=1e-8)

    def test_quasi_modular_frozen_point(self):
        z = complex(0.3, 0.9)
        lhs = abs(delta_on_upper_half_plane(-1.0 / z).value)
        rhs = abs(z) ** 12 * abs(delta_on_upper_half_plane(z).value)
        assert lhs == pytest.approx(0.0019098827421012782, rel=1e-12)
        assert rhs == pytest.approx(0.0019098827421012782, rel=1e-12)


class TestJInvariant:
    def test_value_at_i(self):
        got = j_invariant(SiegelTau(0.0, 1.0))
        assert abs(got.value - 1728.0) < 1e-9

    def test_value_at_corner(self):
        got = j_invariant(SiegelTau(0.5, math.sqrt(3.0) / 2.0))
        assert abs(got.value) < 1e-9

    def test_value_at_2i(self):
        got = j_invariant(SiegelTau(0.0, 2.0))
        assert got.value.real == pytest.approx(66.0**3, rel=1e-12)
        assert abs(got.value - complex(oracles.mp_j(2j))) < 1e-6

    def test_series_coefficients(self):
        assert j_series_coefficients(6) == [
            1,
            744,
            196884,
            21493760,
            864299970,
            20245856256,
        ]
        assert j_series_coefficients(12) == oracles.j_series_coefficients(12)

    @given(
        upper_half,
        st.integers(-10, 10),
        st.integers(-10, 10),
        st.integers(-10, 10),
    )
    @settings(max_examples=40, deadline=None)
    def test_unimodular_invariance(self, z, a, b, c):
        d = None
        for cand in range(-110, 111):
            if a * cand - b * c == 1:
                d = cand
                break
        if d is None:
            return
        moved = UnimodularMap(a, b, c, d).apply(z)
        back, _ = siegel_reduce(EllipticLattice(1.0, moved))
        ref, _ = siegel_reduce(EllipticLattice(1.0, z))
        lhs = j_invariant(back).value
        rhs = j_invariant(ref).value
        assert abs(lhs - rhs) <= 1e-8 * max(1.0, abs(rhs))


class TestClassicalBounds:
    @pytest.mark.parametrize("re,im", [(0.0, 1.0), (0.5, math.sqrt(3.0) / 2.0)])
    def test_special_points(self, re, im):
        r_j, r_delta = check_classical_bounds(SiegelTau(re, im))
        assert r_j.satisfied
        assert r_delta.satisfied

    def test_grid_of_500_reduced_points(self):
        rng = np.random.default_rng(0)
        count = 0
        while count < 500:
            re = rng.uniform(-0.5, 0.5)
            im = rng.uniform(math.sqrt(3.0) / 2.0, 10.0)
            if re * re + im * im < 1.0:
                continue
            r_j, r_delta = check_classical_bounds(SiegelTau(re, im))
            assert r_j.satisfied, str(r_j)
            assert r_delta.satisfied, str(r_delta)
            count += 1


class TestSilvermanExtrema:
    def test_constant_and_recorded_extrema(self):
        report = silverman_f_extrema()
        assert report.satisfied
        assert report.rhs == 2.95
        assert report.lhs == pytest.approx(2.949867352414245, abs=1e-12)
        assert report.inputs["y0"] == pytest.approx(1.1276230045064373, abs=1e-9)
        assert report.inputs["f_local_min"] == pytest.approx(
            0.0017217862564563695, rel=1e-6
        )
        assert report.inputs["f_left_endpoint"] == pytest.approx(
            0.0018281617776491326, rel=1e-6
        )
        assert report.inputs["increasing_to_3_over_pi"]
        assert report.inputs["decreasing_to_y0"]
        assert report.inputs["increasing_after_y0"]
        assert report.inputs["local_min_below_left_endpoint"]
