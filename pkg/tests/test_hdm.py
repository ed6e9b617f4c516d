"""Diagonalization engine: matrix elements, quadrature, spectra, plateau."""

import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import genlaguerre

from spectra.hdm import (
    HdmConfig,
    h0_matrix,
    hdm_spectrum,
    overlap_matrix,
    plateau_scan,
    quadrature,
    u_matrix,
)
from spectra.linalg import cholesky, generalized_eigen, SymDense
from spectra.potential import PotentialParams, eval_U

from test_linalg import laguerre_l51_zeros


class TestH0Matrix:
    def test_first_diagonal_entry(self):
        t = h0_matrix(HdmConfig(n_basis=3, mu=2.0, ell=0), z=0.0)
        assert t.diag[0] == pytest.approx(1.0)

    def test_first_offdiagonal_entry(self):
        t = h0_matrix(HdmConfig(n_basis=3, mu=2.0, ell=0), z=0.0)
        assert t.offdiag[0] == pytest.approx(0.5 * math.sqrt(2.0))

    def test_hydrogen_ground_state_exact_in_basis(self):
        # at mu = -2Z the lowest basis function is the exact Coulomb ground state
        cfg = HdmConfig(n_basis=30, mu=2.0, ell=0)
        h = h0_matrix(cfg, z=-1.0)
        s = overlap_matrix(cfg)
        pairs = generalized_eigen(SymDense(h.to_dense()), s)
        assert pairs.values[0] == pytest.approx(-0.5, abs=1e-10)


class TestOverlapMatrix:
    def test_single_entry(self):
        t = overlap_matrix(HdmConfig(n_basis=1, mu=1.0, ell=0))
        assert t.diag == pytest.approx([2.0])
        assert len(t.offdiag) == 0

    def test_two_by_two(self):
        t = overlap_matrix(HdmConfig(n_basis=2, mu=1.0, ell=0))
        assert t.diag == pytest.approx([2.0, 4.0])
        assert t.offdiag == pytest.approx([-math.sqrt(2.0)])

    def test_ell_one(self):
        t = overlap_matrix(HdmConfig(n_basis=2, mu=1.0, ell=1))
        assert t.diag == pytest.approx([4.0, 6.0])
        assert t.offdiag == pytest.approx([-2.0])

    def test_positive_definite_up_to_200(self):
        for ell in range(4):
            for n in (50, 200):
                cholesky(overlap_matrix(HdmConfig(n_basis=n, mu=1.0, ell=ell)))


class TestQuadrature:
    def test_single_node(self):
        rule = quadrature(HdmConfig(n_basis=1, mu=1.0, ell=0))
        assert rule.nodes == pytest.approx([2.0])
        assert abs(rule.vectors[0, 0]) == pytest.approx(1.0)

    def test_nodes_are_laguerre_zeros(self):
        rule = quadrature(HdmConfig(n_basis=5, mu=1.0, ell=0))
        assert rule.nodes == pytest.approx(laguerre_l51_zeros(), abs=1e-10)

    def test_spectral_reconstruction(self):
        cfg = HdmConfig(n_basis=40, mu=1.0, ell=0)
        rule = quadrature(cfg)
        rebuilt = (rule.vectors * rule.nodes) @ rule.vectors.T
        dense = overlap_matrix(cfg).to_dense()
        assert np.max(np.abs(rebuilt - dense)) < 1e-12 * np.max(np.abs(dense))


class TestUMatrix:
    def test_zero_potential(self):
        # V0 = 0 makes U identically zero
        p = PotentialParams(0.0, 1.0, 1.0)
        um = u_matrix(p, HdmConfig(n_basis=10, mu=1.0, ell=0))
        assert np.max(np.abs(um.mat)) == 0.0

    def test_constant_hook_reproduces_overlap(self):
        cfg = HdmConfig(n_basis=20, mu=1.0, ell=0)
        c = 0.731
        um = u_matrix(PotentialParams(5, 0.2, 0.6), cfg, u_fn=lambda r: c)
        dense = c * overlap_matrix(cfg).to_dense()
        assert np.max(np.abs(um.mat - dense)) < 1e-12 * np.max(np.abs(dense))

    def test_u00_against_adaptive_integral(self):
        # 8-point rule vs adaptive quadrature of the defining integral
        p = PotentialParams(5, 0.2, 0.8)
        mu = 1.0
        u00 = u_matrix(p, HdmConfig(n_basis=8, mu=mu, ell=0)).mat[0, 0]
        val, _ = quad(lambda x: x * np.exp(-x) * x * eval_U(p, x / mu), 0, np.inf, limit=400)
        assert u00 == pytest.approx(val, rel=1e-8)

    def test_exponential_potential_against_integral(self):
        # polynomial-times-exponential integrand: default-size rule to 1e-8
        p = PotentialParams(5, 0.2, 0.8)
        mu = 1.0
        cfg = HdmConfig(n_basis=100, mu=mu, ell=0)
        um = u_matrix(p, cfg, u_fn=lambda r: np.exp(-mu * r)).mat
        for n in range(6):
            for m in range(n, 6):
                a_n = math.sqrt(math.factorial(n) / math.factorial(n + 1))
                a_m = math.sqrt(math.factorial(m) / math.factorial(m + 1))
                ln, lm = genlaguerre(n, 1), genlaguerre(m, 1)
                val, _ = quad(
                    lambda x: a_n * a_m * x * np.exp(-2 * x) * ln(x) * lm(x) * x,
                    0,
                    np.inf,
                    limit=400,
                )
                assert um[n, m] == pytest.approx(val, abs=1e-8)

    def test_hamiltonian_symmetry(self):
        p = PotentialParams(20, 0.5, 0.6)
        cfg = HdmConfig(n_basis=60, mu=2.0, ell=0)
        h = h0_matrix(cfg, z=16.0).to_dense() + u_matrix(p, cfg).mat
        assert np.max(np.abs(h - h.T)) <= 1e-12 * np.linalg.norm(h)


TABLE1_G06_HDM = [-0.5368000468, -0.3182343338, -0.1627941432, -0.0623301374, -0.0103705985]


class TestHdmSpectrum:
    def test_table1_gamma_06_at_recipe_scale(self):
        p = PotentialParams(5, 0.2, 0.6)
        rep = hdm_spectrum(p, HdmConfig(n_basis=100, mu=5.0))
        got = rep.energies("hdm")
        assert len(got) == 5
        for g, ref in zip(got, TABLE1_G06_HDM):
            assert g == pytest.approx(ref, abs=1e-9)

    def test_table2_v40_ground_state(self):
        p = PotentialParams(40, 0.5, 0.6)
        rep = hdm_spectrum(p, HdmConfig(n_basis=100, mu=10.0))
        assert rep.energies("hdm")[0] == pytest.approx(-4.4170156123, abs=1e-9)

    def test_pure_coulomb_override(self):
        # V0 = 0 plus an explicit Z gives the analytic -Z^2/2(n+1)^2 ladder
        p = PotentialParams(0.0, 1.0, 0.5)
        rep = hdm_spectrum(p, HdmConfig(n_basis=100, mu=2.0, z_override=-1.0))
        got = rep.energies("hdm")
        for g, ref in zip(got[:3], [-0.5, -0.125, -1.0 / 18.0]):
            assert g == pytest.approx(ref, abs=1e-8)

    def test_bound_state_counts_match_tables(self):
        # counted as negative eigenvalues stable under basis growth, at a
        # scale well inside the plateau (shallow levels destabilize at the
        # large scales some published runs used)
        cases = [
            (PotentialParams(5, 0.2, 0.2), 1.0, 2),
            (PotentialParams(5, 0.2, 0.4), 1.0, 3),
            (PotentialParams(5, 0.2, 0.6), 1.0, 5),
            (PotentialParams(20, 0.5, 0.6), 2.0, 4),
            (PotentialParams(40, 0.5, 0.6), 2.0, 6),
            (PotentialParams(60, 0.5, 0.6), 2.0, 7),
        ]
        for p, mu, expected in cases:
            rep = hdm_spectrum(p, HdmConfig(n_basis=100, mu=mu))
            assert len(rep.energies("hdm")) == expected, p

    def test_basis_growth_stability(self):
        # each bound level moves < 1e-9 between N = 80 and N = 100 on plateau
        p = PotentialParams(5, 0.2, 0.6)
        at80 = hdm_spectrum(p, HdmConfig(n_basis=80, mu=1.0)).energies("hdm")
        at100 = hdm_spectrum(p, HdmConfig(n_basis=100, mu=1.0)).energies("hdm")
        for a, b in zip(at80, at100):
            assert abs(a - b) < 1e-9

    def test_rayleigh_ritz_monotonicity(self):
        # variational bound can only tighten with a larger nested basis
        p = PotentialParams(20, 0.5, 0.6)
        small = hdm_spectrum(p, HdmConfig(n_basis=80, mu=2.0))
        large = hdm_spectrum(p, HdmConfig(n_basis=90, mu=2.0))
        all_small = small.meta["hdm_all_negative"]
        all_large = large.meta["hdm_all_negative"]
        for k in range(min(len(all_small), len(all_large))):
            assert all_large[k] <= all_small[k] + 1e-12

    def test_richer_quadrature_changes_nothing_material(self):
        p = PotentialParams(5, 0.2, 0.6)
        base = hdm_spectrum(p, HdmConfig(n_basis=60, mu=2.0)).energies("hdm")
        rich = hdm_spectrum(p, HdmConfig(n_basis=60, mu=2.0, quadrature_n=90)).energies("hdm")
        for a, b in zip(base, rich):
            assert a == pytest.approx(b, abs=1e-10)

    def test_nonzero_angular_momentum_runs(self):
        # the diagonalization engine accepts any ell >= 0
        p = PotentialParams(5, 0.2, 0.6, ell=1)
        rep = hdm_spectrum(p, HdmConfig(n_basis=80, mu=1.0))
        for e in rep.energies("hdm"):
            assert e < 0

    def test_default_mu_from_plateau(self):
        p = PotentialParams(20, 0.5, 0.6)
        rep = hdm_spectrum(p, HdmConfig(n_basis=60))
        assert "plateau_window" in rep.meta
        assert rep.meta["mu"] > 0
        assert rep.energies("hdm")[0] == pytest.approx(-2.0179675071, abs=1e-8)


class TestPlateauScan:
    def test_window_and_table_agreement(self):
        p = PotentialParams(20, 0.5, 0.6)
        scan = plateau_scan(p, HdmConfig(n_basis=100), 0.5, 8.0, 24)
        assert not scan.no_plateau
        lo, hi = scan.window
        assert lo < scan.recommended_mu < hi
        rep = hdm_spectrum(p, HdmConfig(n_basis=100, mu=scan.recommended_mu))
        refs = [-2.0179675071, -1.0088426139, -0.3740996421, -0.0568940452]
        for g, ref in zip(rep.energies("hdm"), refs):
            assert g == pytest.approx(ref, abs=1e-8)

    def test_tiny_basis_narrows_plateau(self):
        p = PotentialParams(20, 0.5, 0.6)
        big = plateau_scan(p, HdmConfig(n_basis=100), 0.5, 8.0, 24)
        small = plateau_scan(p, HdmConfig(n_basis=5), 0.5, 8.0, 24)
        count_big = sum(1 for d in big.ground_digits if d >= 10)
        count_small = sum(1 for d in small.ground_digits if d >= 10)
        assert count_big > count_small

    def test_coulomb_scale_invariance_at_matched_mu(self):
        # with the exact ground state in the basis the lowest level is exact
        p = PotentialParams(0.0, 1.0, 0.5)
        for n in (1, 5, 40):
            rep = hdm_spectrum(p, HdmConfig(n_basis=n, mu=2.0, z_override=-1.0))
            assert rep.energies("hdm")[0] == pytest.approx(-0.5, abs=1e-12)

    def test_validation(self):
        p = PotentialParams(20, 0.5, 0.6)
        with pytest.raises(ValueError):
            plateau_scan(p, HdmConfig(), 2.0, 1.0, 10)
        with pytest.raises(ValueError):
            HdmConfig(n_basis=10, quadrature_n=5)
