import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from periodkit.heights import CurveRecord
from periodkit.lattice import SiegelTau
from periodkit.theta import (
    AppellHumbert,
    RiemannTau,
    TorusPoint,
    bost_inequality_check,
    default_truncation,
    eval_F,
    eval_F_raw,
    theta_at_z,
    theta_from_F,
    torus_l2_norm,
    torus_log_integral,
)

TAU_I = RiemannTau(1, [[1j]])
TAU_CORNER = RiemannTau(1, [[0.5 + 1j * math.sqrt(3.0)]])
TAU_G2 = RiemannTau(2, [[1j, 0.0], [0.0, 2j]])

unit_coords = st.floats(0.0, 0.999)


class TestSeriesEvaluation:
    def test_central_value_at_i(self):
        got = eval_F(TAU_I, TorusPoint([0.0], [0.0]))
        want = oracles.mp_F1(1j, 0.0, 0.0)
        assert got.value.real == pytest.approx(1.2919960074815039, rel=1e-14)
        assert abs(got.value - complex(want)) < 1e-14
        assert abs(got.value.imag) < 1e-15

    def test_generic_point_at_i(self):
        got = eval_F(TAU_I, TorusPoint([0.3], [0.7]))
        assert got.value.real == pytest.approx(0.81556328197122999, rel=1e-13)
        assert got.value.imag == pytest.approx(0.23694303677706712, rel=1e-13)

    def test_generic_point_off_axis_tau(self):
        got = eval_F(RiemannTau(1, [[0.5 + 1j * math.sqrt(3.0)]]), TorusPoint([0.2], [0.4]))
        assert got.value.real == pytest.approx(1.0979158660815058, rel=1e-13)
        assert got.value.imag == pytest.approx(0.026526979244167541, rel=1e-12)

    def test_g2_diagonal_factors(self):
        got = eval_F(TAU_G2, TorusPoint([0.3, 0.1], [0.7, 0.25]))
        want = oracles.mp_F2_diag(1j, 2j, (0.3, 0.1), (0.7, 0.25))
        assert got.value.real == pytest.approx(1.0850388571605529, rel=1e-13)
        assert got.value.imag == pytest.approx(0.30815038740406078, rel=1e-13)
        assert abs(got.value - complex(want)) < 1e-13

    @given(unit_coords, unit_coords)
    @settings(max_examples=30, deadline=None)
    def test_reported_tail_dominates_truncation_change(self, p, q):
        base = default_truncation(TAU_I)
        coarse = eval_F_raw(TAU_I, [p], [q], truncation=base)
        fine = eval_F_raw(TAU_I, [p], [q], truncation=2 * base)
        assert abs(coarse.value - fine.value) <= coarse.tail + 1e-16
        assert coarse.tail < 1e-12


class TestThetaFunction:
    def test_theta_equals_F_at_origin(self):
        pt = TorusPoint([0.0], [0.0])
        assert theta_from_F(TAU_I, pt) == pytest.approx(
            complex(eval_F(TAU_I, pt).value), abs=1e-15
        )

    @given(unit_coords, unit_coords)
    @settings(max_examples=40, deadline=None)
    def test_modulus_identity(self, p, q):
        # |theta(z)| = |F(p, q)| exp((pi/2) H(z, z)) for z = tau p + q
        pt = TorusPoint([p], [q])
        tau = complex(TAU_CORNER.matrix[0, 0])
        z = tau * p + q
        ah = AppellHumbert(TAU_CORNER)
        lhs = abs(theta_from_F(TAU_CORNER, pt))
        rhs = abs(eval_F(TAU_CORNER, pt).value) * math.exp(
            (math.pi / 2.0) * ah.pair([z], [z]).real
        )
        assert lhs == pytest.approx(rhs, rel=1e-10)

    @given(unit_coords, unit_coords, st.integers(-2, 2), st.integers(-2, 2))
    @settings(max_examples=40, deadline=None)
    def test_functional_equation(self, p, q, m, n):
        tau = complex(TAU_CORNER.matrix[0, 0])
        z = tau * p + q
        omega = tau * m + n
        ah = AppellHumbert(TAU_CORNER)
        lhs = theta_at_z(TAU_CORNER, [z + omega])
        rhs = ah.automorphy_factor(TAU_CORNER, [m], [n], [z]) * theta_at_z(
            TAU_CORNER, [z]
        )
        assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(rhs))

    def test_cauchy_riemann_residual(self):
        rng = np.random.default_rng(17)
        h = 1e-5
        tau = complex(TAU_CORNER.matrix[0, 0])
        for _ in range(8):
            z = tau * rng.uniform(0.1, 0.9) + rng.uniform(0.1, 0.9)
            fx = (theta_at_z(TAU_CORNER, [z + h]) - theta_at_z(TAU_CORNER, [z - h])) / (
                2 * h
            )
            fy = (
                theta_at_z(TAU_CORNER, [z + 1j * h]) - theta_at_z(TAU_CORNER, [z - 1j * h])
            ) / (2 * h)
            assert abs(fx + 1j * fy) < 1e-6 * max(1.0, abs(fx))


class TestTorusIntegrals:
    def test_l2_unit_mass_g1(self):
        for mat in ([[1j]], [[2j]], [[0.5 + 1j * math.sqrt(3.0)]]):
            val = torus_l2_norm(RiemannTau(1, mat), 64)
            assert val == pytest.approx(1.0, abs=1e-6)

    def test_l2_unit_mass_g2(self):
        assert torus_l2_norm(TAU_G2, 16) == pytest.approx(1.0, abs=1e-5)

    def test_log_integral_matches_adaptive_oracle(self):
        assert torus_log_integral(TAU_I, 64) == pytest.approx(
            -0.090385275108931573, abs=1e-8
        )
        assert torus_log_integral(RiemannTau(1, [[5j]]), 64) == pytest.approx(
            -0.73335066574725849, abs=1e-8
        )

    def test_log_integral_negative_and_larger_for_taller_tau(self):
        small = torus_log_integral(TAU_I, 64)
        tall = torus_log_integral(RiemannTau(1, [[5j]]), 64)
        assert tall < small < 0

    def test_doubling_stability(self):
        for mat, cap in (([[1j]], 1e-5), ([[0.5 + 1j * math.sqrt(3.0)]], 1e-5)):
            rt = RiemannTau(1, mat)
            assert abs(torus_l2_norm(rt, 64) - torus_l2_norm(rt, 128)) < cap
            assert abs(torus_log_integral(rt, 64) - torus_log_integral(rt, 128)) < cap
        assert abs(torus_l2_norm(TAU_G2, 16) - torus_l2_norm(TAU_G2, 32)) < 1e-4
        assert (
            abs(torus_log_integral(TAU_G2, 16) - torus_log_integral(TAU_G2, 32)) < 1e-4
        )


class TestBostInequality:
    def test_all_fixtures_satisfied(self, bundled_records):
        for rec in bundled_records:
            report = bost_inequality_check(rec)
            assert report.satisfied, str(report)
            assert report.margin > 0, rec.label

    def test_margin_tracks_discriminant_mass(self, bundled_records):
        # with everywhere-good reduction the inequality is an equality, so the
        # slack comes entirely from log|N(disc)|/(24 degree)
        for rec in bundled_records:
            report = bost_inequality_check(rec)
            predicted = rec.log_norm_minimal_discriminant / (24.0 * rec.degree)
            assert report.margin == pytest.approx(predicted, abs=2e-3)

    def test_zero_discriminant_record_sits_at_equality(self):
        rec = CurveRecord(
            label="equality-case",
            degree=1,
            embeddings=(SiegelTau(0.0, 1.0),),
            log_norm_minimal_discriminant=0.0,
            j_rational=(1728, 1),
        )
        report = bost_inequality_check(rec)
        assert abs(report.margin) < 1e-6
