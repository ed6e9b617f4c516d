"""Potential, singularity split, coordinate map, and seed series."""

import math
import random

import pytest
from mpmath import mp, mpf

from spectra.epoly import EnergyPoly
from spectra.potential import (
    DomainError,
    NoValleyError,
    PotentialParams,
    bound_state_precheck,
    coulomb_strength,
    eval_U,
    eval_V,
    map_x,
    map_x_inverse,
    seed_functions,
    v_min,
)
from spectra.series import PoleAtCenterError


class TestParams:
    def test_lambda_positive(self):
        with pytest.raises(ValueError, match="lambda must be positive"):
            PotentialParams(5, -1, 0.6)

    def test_interesting_regime_flag(self):
        assert PotentialParams(5, 0.2, 0.6).interesting_regime
        assert not PotentialParams(5, 0.2, 1.5).interesting_regime
        assert not PotentialParams(5, 0.2, 0.0).interesting_regime

    def test_ell_validation(self):
        with pytest.raises(ValueError):
            PotentialParams(5, 1, 0.5, ell=-1)


class TestEvalV:
    def test_short_range_decay(self):
        p = PotentialParams(5, 0.2, 0.6)
        assert abs(eval_V(p, 300.0)) < 1e-20

    def test_gamma_one_collapses_to_exponential(self):
        # (e^-t - 1)/(e^t - 1) = -e^-t, so V = -V0 e^-(lam r)
        p = PotentialParams(1, 1, 1)
        assert eval_V(p, math.log(2)) == pytest.approx(-0.5, rel=1e-14)

    def test_gamma_one_identity_randomized(self):
        rng = random.Random(7)
        for _ in range(20):
            v0 = rng.uniform(-10, 10)
            lam = rng.uniform(0.05, 3)
            r = rng.uniform(0.01, 20)
            p = PotentialParams(v0, lam, 1.0)
            expected = -v0 * math.exp(-lam * r)
            assert eval_V(p, r) == pytest.approx(expected, rel=1e-12)

    def test_coulomb_limit_at_origin(self):
        # r*V(r) -> Z as r -> 0+; independent high-precision evaluation
        p = PotentialParams(5, 0.2, 0.6)
        with mp.workdps(50):
            r = mpf("1e-8")
            v = mpf(5) * (mp.e ** (-mpf("0.2") * r) - mpf("0.6")) / (mp.e ** (mpf("0.2") * r) - 1)
            assert abs(r * v - 10) < mpf("1e-6")
        assert 1e-8 * eval_V(p, 1e-8) == pytest.approx(10.0, rel=1e-6)

    def test_singular_point_rejected(self):
        p = PotentialParams(5, 0.2, 0.6)
        with pytest.raises(DomainError):
            eval_V(p, 0.0)
        with pytest.raises(DomainError):
            eval_V(p, -1.0)


class TestCoulombStrength:
    def test_direct_arithmetic(self):
        assert coulomb_strength(PotentialParams(5, 0.2, 0.6)) == pytest.approx(10.0)
        assert coulomb_strength(PotentialParams(20, 0.5, 0.6)) == pytest.approx(16.0)

    def test_gamma_one_removes_singularity(self):
        assert coulomb_strength(PotentialParams(5, 0.2, 1.0)) == 0.0


class TestEvalU:
    def test_limit_at_origin(self):
        p = PotentialParams(5, 0.2, 0.8)
        assert eval_U(p, 0.0) == pytest.approx(-5 * (3 - 0.8) / 2, rel=1e-14)
        assert eval_U(p, 0.0) == pytest.approx(-5.5)

    def test_vanishes_at_infinity(self):
        # U ~ -Z/r far out (V itself is exponentially small there)
        p = PotentialParams(5, 0.2, 0.8)
        assert abs(eval_U(p, 1e9)) < 1e-8
        assert abs(eval_U(p, 1e12)) < 1e-11

    def test_series_vs_direct_consistency(self):
        # evaluate both branches where they overlap in accuracy (t ~ 1e-4)
        p = PotentialParams(5, 0.2, 0.8)
        r = 1e-4 / p.lam
        direct = eval_V(p, r) - coulomb_strength(p) / r
        series = eval_U(p, r)
        assert series == pytest.approx(direct, abs=1e-9)

    def test_continuity_at_switch(self):
        p = PotentialParams(5, 0.2, 0.8)
        eps = 1e-6 / p.lam
        below = eval_U(p, eps * 0.999999)
        above = eval_U(p, eps * 1.000001)
        assert below == pytest.approx(above, rel=1e-9)

    def test_split_identity(self):
        # V - Z/r = U at moderate r, to working precision
        p = PotentialParams(5, 0.2, 0.6)
        z = coulomb_strength(p)
        for r in (0.5, 1.0, 3.0, 10.0, 40.0):
            assert eval_V(p, r) - z / r == pytest.approx(eval_U(p, r), rel=1e-12, abs=1e-15)


class TestPrecheck:
    def test_open_range_any_strength(self):
        assert bound_state_precheck(PotentialParams(5, 0.2, 0.6)).ok
        assert bound_state_precheck(PotentialParams(-5, 0.2, 0.6)).ok

    def test_sign_mismatch_warns(self):
        res = bound_state_precheck(PotentialParams(-5, 0.2, 1.5))
        assert not res.ok
        assert "sign" in res.message

    def test_sign_match_passes(self):
        assert bound_state_precheck(PotentialParams(5, 0.2, 1.5)).ok


class TestVMin:
    def test_monotone_case_errors(self):
        with pytest.raises(NoValleyError):
            v_min(PotentialParams(1, 1, 1))

    def test_valley_below_ground_state(self):
        r_star, v_star = v_min(PotentialParams(5, 0.2, 0.6))
        assert v_star < -0.5368000468
        assert r_star > 0

    def test_against_dense_grid_scan(self):
        p = PotentialParams(5, 0.2, 0.3)
        r_star, v_star = v_min(p)
        n = 1_000_000
        lo, hi = 0.05, 300.0
        step = (math.log(hi) - math.log(lo)) / (n - 1)
        best = min(
            eval_V(p, math.exp(math.log(lo) + step * i)) for i in range(0, n)
        )
        assert v_star <= best + 1e-12
        assert v_star == pytest.approx(best, rel=1e-9)


class TestMapX:
    def test_endpoints(self):
        p = PotentialParams(5, 0.2, 0.6)
        assert map_x(p, 0.0) == -1.0
        assert map_x(p, 1e6) == pytest.approx(1.0)
        assert map_x(p, math.log(2) / p.lam) == pytest.approx(0.0, abs=1e-15)

    def test_round_trip_bijection(self):
        p = PotentialParams(5, 0.7, 0.6)
        rng = random.Random(3)
        for _ in range(25):
            x = rng.uniform(-1.0, 0.999)
            assert map_x(p, map_x_inverse(p, x)) == pytest.approx(x, abs=1e-12)

    def test_monotone(self):
        p = PotentialParams(5, 0.2, 0.6)
        rs = [0.1 * i for i in range(1, 60)]
        xs = [map_x(p, r) for r in rs]
        assert all(a < b for a, b in zip(xs, xs[1:]))


class TestSeeds:
    def test_k0_geometric_at_zero(self):
        with mp.workdps(40):
            k0, _ = seed_functions(PotentialParams(5, 0.2, 0.6), -0.5, 0.0, 4)
            assert [float(c) for c in k0.coeffs] == [1, 1, 1, 1]

    def test_z0_constant_term_for_table_energy(self):
        with mp.workdps(40):
            _, z0 = seed_functions(
                PotentialParams(5, 0.2, 0.6), mpf("-0.5368000468"), 0.0, 4
            )
            assert float(z0.coeffs[0]) == pytest.approx(1.84000234, abs=1e-8)

    def test_z0_cancellation_case(self):
        with mp.workdps(40):
            _, z0 = seed_functions(PotentialParams(5, 0.2, 0.5), 0.0, 0.0, 4)
            assert abs(float(z0.coeffs[0])) < 1e-30

    def test_pole_centers_rejected(self):
        with pytest.raises(PoleAtCenterError):
            seed_functions(PotentialParams(5, 0.2, 0.6), -0.5, 1.0, 4)

    def test_swave_only(self):
        with pytest.raises(ValueError):
            seed_functions(PotentialParams(5, 0.2, 0.6, ell=1), -0.5, 0.0, 4)

    def test_coefficients_match_finite_differences(self):
        # first orders of k0 and z0 against central differences of the
        # closed forms, double-precision check
        v0, lam, gamma, e = 5.0, 0.2, 0.6, -0.4
        x0 = 0.2

        def k0_fn(x):
            return 1.0 / (1.0 - x)

        def z0_fn(x):
            c = 2.0 * v0 / lam**2
            return c * (0.5 / (1 + x) - gamma / (1 - x * x) - (e / v0) / (1 - x) ** 2)

        with mp.workdps(40):
            k0, z0 = seed_functions(PotentialParams(v0, lam, gamma), e, x0, 6)
        h = 1e-5
        for fn, series in ((k0_fn, k0), (z0_fn, z0)):
            assert float(series.coeffs[0]) == pytest.approx(fn(x0), rel=1e-10)
            d1 = (fn(x0 + h) - fn(x0 - h)) / (2 * h)
            assert float(series.coeffs[1]) == pytest.approx(d1, rel=1e-6)
            d2 = (fn(x0 + h) - 2 * fn(x0) + fn(x0 - h)) / h**2
            assert float(series.coeffs[2]) == pytest.approx(d2 / 2.0, rel=1e-4)

    def test_gamma_zero_isolates_geometric_parts(self):
        # gamma = 0: z0 = (V0/lam^2) sum (-1)^j x^j - (2E/lam^2) sum (j+1) x^j
        v0, lam, e = 3.0, 0.5, -0.25
        with mp.workdps(40):
            _, z0 = seed_functions(PotentialParams(v0, lam, 0.0), e, 0.0, 8)
            for j in range(8):
                expected = (v0 / lam**2) * (-1) ** j - (2 * e / lam**2) * (j + 1)
                assert abs(float(z0.coeffs[j]) - expected) < 1e-25

    def test_polynomial_energy_gives_affine_coefficients(self):
        with mp.workdps(40):
            _, z0 = seed_functions(
                PotentialParams(5, 0.2, 0.6), EnergyPoly.variable(), 0.0, 5
            )
            for c in z0.coeffs:
                assert isinstance(c, EnergyPoly)
                assert c.degree == 1
