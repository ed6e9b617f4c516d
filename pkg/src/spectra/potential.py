"""The three-parameter short-range potential and its derived quantities.

V(r) = V0 * (exp(-lam*r) - gamma) / (exp(lam*r) - 1)

in atomic units (hbar = m = 1).  The potential is short range but carries a
Coulomb-like 1/r singularity at the origin with strength
Z = V0 * (1 - gamma) / lam, so it splits as V = Z/r + U(r) with U regular
everywhere.  This module also provides the coordinate map x = 1 - 2 exp(-lam r)
and the seed series pair used by the iteration engine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from mpmath import mpf

from spectra.series import PoleAtCenterError, TaylorSeries, div


class DomainError(ValueError):
    """Evaluation outside the operation's domain (e.g. at the singular point)."""


class NoValleyError(ValueError):
    """The potential has no interior minimum for these parameters."""


@dataclass(frozen=True)
class PotentialParams:
    """Physical parameters: strength V0, inverse range lam > 0, shape gamma, and ell."""

    v0: float
    lam: float
    gamma: float
    ell: int = 0

    def __post_init__(self) -> None:
        if not self.lam > 0:
            raise ValueError("lambda must be positive")
        if self.ell < 0 or int(self.ell) != self.ell:
            raise ValueError(f"ell must be a non-negative integer, got {self.ell}")

    @property
    def interesting_regime(self) -> bool:
        """True iff 0 < gamma < 1, where the valley/barrier structure exists."""
        return 0.0 < self.gamma < 1.0


@dataclass(frozen=True)
class PrecheckResult:
    """Advisory bound-state existence diagnostic (necessary, not sufficient)."""

    ok: bool
    message: str


def eval_V(p: PotentialParams, r: float) -> float:
    """Potential value at r > 0.  Diverges like Z/r at the origin."""
    if r <= 0:
        raise DomainError(f"V(r) is singular at r = 0; got r = {r}")
    t = p.lam * r
    # 1/(e^t - 1) written as e^-t/(1 - e^-t): full accuracy for small t via
    # expm1 and no overflow for large t
    et = math.exp(-t)
    return p.v0 * (et - p.gamma) * et / (-math.expm1(-t))


def coulomb_strength(p: PotentialParams) -> float:
    """Residue Z of the 1/r singularity: Z = V0 (1 - gamma) / lam."""
    return p.v0 * (1.0 - p.gamma) / p.lam


# Leading Taylor coefficients of U(r)/V0 in t = lam*r.  c3 and the constant
# part of c4 are gamma-independent; checked against the gamma = 1 limit where
# U = -V0*exp(-t).
def _u_series_coeffs(gamma: float) -> tuple[float, float, float, float]:
    c1 = -(3.0 - gamma) / 2.0
    c2 = 1.0 + (1.0 - gamma) / 12.0
    c3 = -0.5
    c4 = 1.0 / 6.0 - (1.0 - gamma) / 720.0
    return c1, c2, c3, c4


def eval_U(p: PotentialParams, r: float) -> float:
    """Regular part U(r) = V(r) - Z/r, continuous on [0, inf).

    Direct subtraction loses all digits near the origin, so below
    lam*r = 1e-6 the value comes from a 4-term series in lam*r; at r = 0 the
    analytic limit is U(0) = -V0 (3 - gamma) / 2.
    """
    if r < 0:
        raise DomainError(f"U(r) is defined on r >= 0; got r = {r}")
    t = p.lam * r
    c1, c2, c3, c4 = _u_series_coeffs(p.gamma)
    if t < 1e-6:
        return p.v0 * (c1 + t * (c2 + t * (c3 + t * c4)))
    return eval_V(p, r) - coulomb_strength(p) / r


def bound_state_precheck(p: PotentialParams) -> PrecheckResult:
    """Necessary-but-not-sufficient conditions for bound states to exist."""
    if p.interesting_regime:
        return PrecheckResult(True, "0 < gamma < 1: any sign of V0 may support bound states")
    if p.gamma > 1.0 or p.gamma < 0.0:
        if math.copysign(1.0, p.v0) == math.copysign(1.0, p.gamma) and p.v0 != 0:
            return PrecheckResult(
                True, "gamma outside (0, 1) with matching sign of V0; valley/barrier structure absent"
            )
        return PrecheckResult(
            False,
            "bound states cannot exist: for gamma > 1 or gamma < 0 the sign of V0 "
            "must be the same as that of gamma",
        )
    return PrecheckResult(True, f"gamma = {p.gamma} is a boundary value not covered by the conditions")


def v_min(p: PotentialParams) -> tuple[float, float]:
    """Locate the potential valley: (r*, V(r*)) minimizing V on (0, inf).

    Golden-section search seeded by a log-spaced scan; relative tolerance 1e-12
    on r*.  Raises NoValleyError when no interior minimum exists.
    """
    if not (p.interesting_regime and p.v0 > 0):
        raise NoValleyError(
            "no interior minimum: the valley requires 0 < gamma < 1 and V0 > 0"
        )
    r_lo = 1e-4 / p.lam
    r_hi = (abs(math.log(p.gamma)) + 80.0) / p.lam
    n_scan = 10_000
    step = (math.log(r_hi) - math.log(r_lo)) / (n_scan - 1)
    grid = [math.exp(math.log(r_lo) + step * i) for i in range(n_scan)]
    vals = [eval_V(p, r) for r in grid]
    i_min = min(range(n_scan), key=vals.__getitem__)
    if i_min == 0 or i_min == n_scan - 1:
        raise NoValleyError("no interior minimum found: potential is monotone on the scan range")

    a, b = grid[i_min - 1], grid[i_min + 1]
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = eval_V(p, c), eval_V(p, d)
    while b - a > 1e-12 * max(1.0, abs(a)):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = eval_V(p, c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = eval_V(p, d)
    r_star = (a + b) / 2.0
    return r_star, eval_V(p, r_star)


def map_x(p: PotentialParams, r: float) -> float:
    """Coordinate map x = 1 - 2 exp(-lam r), a bijection [0, inf) -> [-1, 1)."""
    if r < 0:
        raise DomainError(f"map_x is defined on r >= 0; got r = {r}")
    return 1.0 - 2.0 * math.exp(-p.lam * r)


def map_x_inverse(p: PotentialParams, x: float) -> float:
    """Inverse of map_x: r = -ln((1 - x)/2) / lam for x in [-1, 1)."""
    if not -1.0 <= x < 1.0:
        raise DomainError(f"map_x_inverse is defined on [-1, 1); got x = {x}")
    return -math.log((1.0 - x) / 2.0) / p.lam


def seed_functions(p: PotentialParams, E, x0, L: int) -> tuple[TaylorSeries, TaylorSeries]:
    """Seed series pair (k0, z0) about x0 for the iteration engine (S-wave only).

    k0 = 1/(1-x)
    z0 = (2 V0 / lam^2) [ (1/2)/(1+x) - gamma/(1-x^2) - (E/V0)/(1-x)^2 ]

    built by exact series division.  ``E`` may be a number or any ring element
    (the engine passes a polynomial variable to get z0 linear in E).
    """
    if p.ell != 0:
        raise ValueError("seed functions are derived for S-wave (ell = 0) only")
    if L < 1:
        raise ValueError(f"series length must be >= 1, got {L}")
    x0m = mpf(repr(float(x0)))
    if abs(x0m) >= 1:
        raise PoleAtCenterError(f"seeds have poles at x = +-1; got x0 = {x0}")

    one = mpf(1)
    lam = mpf(repr(float(p.lam)))
    v0 = mpf(repr(float(p.v0)))
    gamma = mpf(repr(float(p.gamma)))
    c = 2 / (lam * lam)

    def poly(*coeffs) -> TaylorSeries:
        cs = list(coeffs) + [mpf(0)] * (L - len(coeffs))
        return TaylorSeries(x0m, tuple(cs[:L]), L)

    one_series = TaylorSeries.constant(one, x0m, L)
    one_minus_x = poly(one - x0m, -one)
    one_plus_x = poly(one + x0m, one)
    one_minus_x2 = poly(one - x0m * x0m, -2 * x0m, -one)
    one_minus_x_sq = poly((one - x0m) ** 2, -2 * (one - x0m), one)

    k0 = div(one_series, one_minus_x)
    inv_plus = div(one_series, one_plus_x)
    inv_x2 = div(one_series, one_minus_x2)
    inv_sq = div(one_series, one_minus_x_sq)

    # z0 = c*(V0/2)*inv_plus - c*V0*gamma*inv_x2 - c*E*inv_sq  (E kept generic)
    a_part = inv_plus.scaled(c * v0 / 2) - inv_x2.scaled(c * v0 * gamma)
    e_part = inv_sq.scaled(c)
    z0 = TaylorSeries(
        x0m,
        tuple(a_part.coeffs[j] - E * e_part.coeffs[j] for j in range(L)),
        L,
    )
    return k0, z0
