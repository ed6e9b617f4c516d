"""Hamiltonian diagonalization in the Laguerre (J-matrix) basis.

The reference Hamiltonian (kinetic + Z/r) is exactly tridiagonal in the basis
chi_n(r) = a_n (mu r)^(ell+1) exp(-mu r/2) L_n^(2ell+1)(mu r); the regular
remainder U(r) = V(r) - Z/r is quadratured on the eigenvalues of the basis
overlap matrix.  The physical spectrum solves the generalized problem
H c = E S c because the basis is not orthonormal.

The scale parameter mu is free in exact arithmetic; at finite basis size the
usable range is the "plateau of stability", which plateau_scan locates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from spectra.errors import ConvergenceError
from spectra.linalg import EigenPairs, SymDense, SymTridiag, generalized_eigen, tridiag_eigen
from spectra.potential import PotentialParams, coulomb_strength, eval_U
from spectra.report import LevelRow, SpectrumReport

# bound states are negative eigenvalues that survive enlarging the basis
STABILITY_DN = 20
STABILITY_TOL = 1e-6

# default mu search range (in units of lam) when the caller does not fix mu
DEFAULT_MU_RANGE = (0.5, 20.0)
DEFAULT_MU_STEPS = 40
PLATEAU_DIGITS = 10


@dataclass(frozen=True)
class HdmConfig:
    """Basis size, scale parameter, and quadrature richness."""

    n_basis: int = 100
    mu: float | None = None
    ell: int | None = None
    quadrature_n: int | None = None
    z_override: float | None = None

    def __post_init__(self) -> None:
        if self.n_basis < 1:
            raise ValueError(f"basis size must be >= 1, got {self.n_basis}")
        if self.mu is not None and not self.mu > 0:
            raise ValueError(f"mu must be positive, got {self.mu}")
        if self.quadrature_n is not None and self.quadrature_n < self.n_basis:
            raise ValueError("quadrature must be at least as rich as the basis")

    def resolved(self, p: PotentialParams) -> "HdmConfig":
        """Fill ell from the potential parameters when not set explicitly."""
        return self if self.ell is not None else replace(self, ell=p.ell)


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and eigenvector matrix of the overlap-matrix eigenproblem."""

    nodes: np.ndarray
    vectors: np.ndarray


@dataclass(frozen=True)
class PlateauReport:
    """Stability of the spectrum across a mu grid."""

    mu_grid: tuple[float, ...]
    spectra: tuple[tuple[float, ...], ...]
    ground_digits: tuple[int, ...]
    state_digits: tuple[tuple[int, ...], ...]
    window: tuple[float, float] | None
    recommended_mu: float | None

    @property
    def no_plateau(self) -> bool:
        return self.window is None


def _require_mu(cfg: HdmConfig) -> float:
    if cfg.mu is None:
        raise ValueError("this operation needs an explicit mu in HdmConfig")
    return cfg.mu


def h0_matrix(cfg: HdmConfig, z: float) -> SymTridiag:
    """Reference Hamiltonian (kinetic + Z/r) in the Laguerre basis."""
    mu = _require_mu(cfg)
    ell = cfg.ell or 0
    n = np.arange(cfg.n_basis)
    diag = (mu**2 / 4.0) * (n + ell + 1 + 4.0 * z / mu)
    m = n[:-1]
    off = (mu**2 / 8.0) * np.sqrt((m + 1) * (m + 2 * ell + 2))
    return SymTridiag(diag, off)


def overlap_matrix(cfg: HdmConfig, size: int | None = None) -> SymTridiag:
    """Gram matrix of the non-orthonormal basis (tridiagonal)."""
    ell = cfg.ell or 0
    n = np.arange(size if size is not None else cfg.n_basis)
    diag = 2.0 * (n + ell + 1)
    m = n[:-1]
    off = -np.sqrt((m + 1) * (m + 2 * ell + 2))
    return SymTridiag(diag, off)


def quadrature(cfg: HdmConfig) -> QuadratureRule:
    """Gauss rule from the overlap eigenproblem: nodes and vector matrix."""
    size = cfg.quadrature_n if cfg.quadrature_n is not None else cfg.n_basis
    pairs: EigenPairs = tridiag_eigen(overlap_matrix(cfg, size=size))
    return QuadratureRule(pairs.values, pairs.vectors)


def u_matrix(p: PotentialParams, cfg: HdmConfig, u_fn=None) -> SymDense:
    """Matrix of the regular potential part via the overlap-eigenvector quadrature.

    ``u_fn`` overrides the physical U(r) (test hook, e.g. a constant).
    """
    mu = _require_mu(cfg)
    rule = quadrature(cfg)
    fn = u_fn if u_fn is not None else (lambda r: eval_U(p, r))
    vals = rule.nodes * np.array([fn(w / mu) for w in rule.nodes])
    lam_rows = rule.vectors[: cfg.n_basis, :]
    return SymDense((lam_rows * vals) @ lam_rows.T)


def _solve(p: PotentialParams, cfg: HdmConfig, u_fn=None) -> np.ndarray:
    """All generalized eigenvalues, ascending."""
    z = cfg.z_override if cfg.z_override is not None else coulomb_strength(p)
    h = SymDense(h0_matrix(cfg, z).to_dense() + u_matrix(p, cfg, u_fn=u_fn).mat)
    s = overlap_matrix(cfg)
    return generalized_eigen(h, s).values


def _digits_agree(a: float, b: float) -> int:
    """Shared significant digits of two floats (capped at 16)."""
    if a == b:
        return 16
    rel = abs(a - b) / max(abs(a), abs(b))
    if rel <= 0:
        return 16
    return max(0, min(16, int(math.floor(-math.log10(rel)))))


def hdm_spectrum(p: PotentialParams, cfg: HdmConfig | None = None, u_fn=None) -> SpectrumReport:
    """Assemble H = H0 + U and solve the generalized eigenproblem.

    Negative eigenvalues that move less than STABILITY_TOL when the basis
    grows by STABILITY_DN are reported as bound states; the rest are flagged
    as discretized-continuum artifacts in the metadata.  When ``cfg.mu`` is
    None the scale is taken from a plateau scan over the default range.
    """
    cfg = (cfg or HdmConfig()).resolved(p)
    meta: dict = {"n_basis": cfg.n_basis}
    if cfg.mu is None:
        scan = plateau_scan(
            p,
            cfg,
            DEFAULT_MU_RANGE[0] * p.lam,
            DEFAULT_MU_RANGE[1] * p.lam,
            DEFAULT_MU_STEPS,
        )
        if scan.no_plateau:
            raise ConvergenceError(
                "no plateau of stability found on the default mu range; pass mu explicitly"
            )
        cfg = replace(cfg, mu=scan.recommended_mu)
        meta["plateau_window"] = list(scan.window)
    meta["mu"] = cfg.mu

    values = _solve(p, cfg, u_fn=u_fn)
    negatives = values[values < 0.0]
    check = _solve(p, replace(cfg, n_basis=cfg.n_basis + STABILITY_DN), u_fn=u_fn)
    check_neg = check[check < 0.0]

    bound, unstable = [], []
    for e in negatives:
        drift = np.min(np.abs(check_neg - e)) if len(check_neg) else math.inf
        (bound if drift < STABILITY_TOL else unstable).append(float(e))
    meta["hdm_all_negative"] = [float(e) for e in negatives]
    if unstable:
        meta["hdm_unstable"] = unstable

    rows = tuple(LevelRow(n=i, e_hdm=e) for i, e in enumerate(bound))
    return SpectrumReport(p, rows, meta)


def plateau_scan(
    p: PotentialParams,
    cfg: HdmConfig | None,
    mu_lo: float,
    mu_hi: float,
    steps: int,
    u_fn=None,
) -> PlateauReport:
    """Scan a log-spaced mu grid and locate the plateau of stability.

    The recommended window is the longest contiguous run of adjacent grid
    points on which the lowest state agrees to >= PLATEAU_DIGITS significant
    digits; runs shorter than 3 points raise the no-plateau flag.
    """
    if not (0 < mu_lo < mu_hi):
        raise ValueError(f"need 0 < mu_lo < mu_hi, got ({mu_lo}, {mu_hi})")
    if steps < 2:
        raise ValueError("plateau scan needs at least 2 steps")
    cfg = (cfg or HdmConfig()).resolved(p)

    grid = np.exp(np.linspace(math.log(mu_lo), math.log(mu_hi), steps))
    spectra = []
    for mu in grid:
        values = _solve(p, replace(cfg, mu=float(mu)), u_fn=u_fn)
        spectra.append(tuple(float(e) for e in values[values < 0.0]))

    n_states = max((len(s) for s in spectra), default=0)
    state_digits: list[tuple[int, ...]] = []
    for i in range(n_states):
        row = []
        for j in range(steps - 1):
            a, b = spectra[j], spectra[j + 1]
            row.append(_digits_agree(a[i], b[i]) if i < len(a) and i < len(b) else 0)
        state_digits.append(tuple(row))
    ground = state_digits[0] if state_digits else tuple([0] * (steps - 1))

    best_start, best_len = 0, 0
    run_start, run_len = 0, 0
    for j, d in enumerate(ground):
        if d >= PLATEAU_DIGITS:
            if run_len == 0:
                run_start = j
            run_len += 1
            if run_len > best_len:
                best_start, best_len = run_start, run_len
        else:
            run_len = 0

    window = None
    recommended = None
    # best_len adjacent pairs span best_len + 1 grid points
    if best_len + 1 >= 3:
        window = (float(grid[best_start]), float(grid[best_start + best_len]))
        recommended = float(grid[best_start + (best_len + 1) // 2])

    return PlateauReport(
        mu_grid=tuple(float(m) for m in grid),
        spectra=tuple(spectra),
        ground_digits=ground,
        state_digits=tuple(state_digits),
        window=window,
        recommended_mu=recommended,
    )
