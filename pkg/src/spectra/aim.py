"""Asymptotic-iteration engine: recursion, termination determinant, spectrum.

The recursion

    k_n = k'_{n-1} + z_{n-1} + k0 * k_{n-1}
    z_n = z'_{n-1} + z0 * k_{n-1}

is iterated from the seed pair; eigenvalue candidates are roots in E of the
termination determinant

    D_n(x0; E) = k_{n-1}(x0) z_n(x0) - z_{n-1}(x0) k_n(x0)

evaluated at the expansion center.  For exactly solvable seeds D_n is
independent of x0 and its roots are the exact spectrum; otherwise roots are
tracked across n and accepted once they stop drifting.

Two implementations coexist: the reference path runs the recursion over
TaylorSeries values exactly as written above (and accepts a polynomial
energy variable, giving D_n in closed polynomial form), while aim_spectrum
and delta_scan use the equivalent dense kernel in spectra._kernel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from mpmath import mp, mpf

from spectra import _kernel
from spectra.potential import PotentialParams, bound_state_precheck, v_min
from spectra.series import (
    ExhaustedSeriesError,
    Precision,
    TaylorSeries,
    add,
    derivative,
    mul,
    value_at_center,
)

# full-grid rescans happen every RESCAN_EVERY iterations; between them each
# live root is refreshed by a local bracket around its previous position
RESCAN_EVERY = 5


@dataclass(frozen=True)
class AimConfig:
    """Iteration depth, energy bracket, precision, and stability thresholds."""

    x0: float = 0.0
    n_min: int = 8
    n_max: int = 330
    e_grid: int = 2000
    e_lo: float | None = None  # None: 1.02 * potential minimum
    e_hi: float = -1e-10
    stability_tol: float = 1e-10
    stability_runs: int = 3
    precision: Precision = field(default_factory=Precision)
    series_len: int | None = None  # None: n_max + 4

    def __post_init__(self) -> None:
        if self.n_min < 2:
            raise ValueError(f"n_min must be >= 2, got {self.n_min}")
        if self.n_max < self.n_min:
            raise ValueError(f"n_max {self.n_max} below n_min {self.n_min}")
        if self.stability_runs < 2:
            raise ValueError(f"stability_runs must be >= 2, got {self.stability_runs}")
        if self.e_grid < 2:
            raise ValueError(f"e_grid must be >= 2, got {self.e_grid}")
        if not self.e_hi < 0:
            raise ValueError(f"e_hi must be negative, got {self.e_hi}")
        if self.e_lo is not None and not self.e_lo < self.e_hi:
            raise ValueError(f"need e_lo < e_hi < 0, got ({self.e_lo}, {self.e_hi})")
        length = self.series_len if self.series_len is not None else self.n_max + 4
        if length < self.n_max + 2:
            raise ValueError(
                f"series length {length} too short: {self.n_max} iterations need >= {self.n_max + 2}"
            )

    @property
    def length(self) -> int:
        return self.series_len if self.series_len is not None else self.n_max + 4


@dataclass(frozen=True)
class AimLevel:
    """One tracked root with its convergence diagnostics."""

    energy: float
    converged: bool
    n_accepted: int | None
    last_drift: float
    bracket: tuple[float, float]
    first_seen: int
    drift_history: tuple[float, ...] = ()


@dataclass(frozen=True)
class AimResult:
    """Stable eigenvalues (ascending) plus flagged non-converged candidates."""

    eigenvalues: tuple[float, ...]
    levels: tuple[AimLevel, ...]
    candidates: tuple[AimLevel, ...]
    meta: dict = field(default_factory=dict)

    def all_levels(self) -> tuple[AimLevel, ...]:
        """Converged levels and surviving candidates, ascending in energy."""
        return tuple(sorted(self.levels + self.candidates, key=lambda s: s.energy))


# ---------------------------------------------------------------------------
# reference recursion over TaylorSeries values


def aim_step(
    k_prev: TaylorSeries, z_prev: TaylorSeries, k0: TaylorSeries, z0: TaylorSeries
) -> tuple[TaylorSeries, TaylorSeries]:
    """One recursion step; consumes one trustworthy series order."""
    if k_prev.valid_len < 2:
        raise ExhaustedSeriesError(
            "series exhausted: increase the initial series length (need n_max + 2 orders)"
        )
    k_n = add(add(derivative(k_prev), z_prev), mul(k0, k_prev))
    z_n = add(derivative(z_prev), mul(z0, k_prev))
    return k_n, z_n


def delta_n(
    k_nm1: TaylorSeries, z_nm1: TaylorSeries, k_n: TaylorSeries, z_n: TaylorSeries
):
    """Termination determinant at the common expansion center."""
    return value_at_center(k_nm1) * value_at_center(z_n) - value_at_center(
        z_nm1
    ) * value_at_center(k_n)


def delta_sequence(k0: TaylorSeries, z0: TaylorSeries, n_top: int) -> list:
    """[D_1, ..., D_n_top] from arbitrary seeds via the reference recursion.

    With a numeric energy in the seeds the entries are numbers; with
    EnergyPoly.variable() they are polynomials in E.
    """
    out = []
    k_prev, z_prev = k0, z0
    for _ in range(n_top):
        k_next, z_next = aim_step(k_prev, z_prev, k0, z0)
        out.append(delta_n(k_prev, z_prev, k_next, z_next))
        k_prev, z_prev = k_next, z_next
    return out


def find_roots(f, e_lo, e_hi, npts: int, *, abs_tol, rel_tol, max_iter: int = 500):
    """All sign-change roots of f on [e_lo, e_hi] scanned at npts points.

    Returns a list of refined (lo, hi) brackets (mpf endpoints).
    """
    e_lo = mpf(e_lo) if not isinstance(e_lo, mpf) else e_lo
    e_hi = mpf(e_hi) if not isinstance(e_hi, mpf) else e_hi
    h = (e_hi - e_lo) / (npts - 1)
    xs = [e_lo + h * i for i in range(npts)]
    vals = [f(x) for x in xs]
    out = []
    for i in range(npts - 1):
        a, fa = xs[i], vals[i]
        b, fb = xs[i + 1], vals[i + 1]
        if fa == 0:
            out.append((a, a))
            continue
        if fb == 0:
            continue  # handled as the left endpoint of the next cell
        if (fa < 0) == (fb < 0):
            continue
        out.append(_bisect(f, a, b, fa, abs_tol=abs_tol, rel_tol=rel_tol, max_iter=max_iter))
    return out


def _bisect(f, a, b, fa, *, abs_tol, rel_tol, max_iter: int = 500):
    for _ in range(max_iter):
        mid = (a + b) / 2
        if (b - a) <= abs_tol + rel_tol * abs(mid):
            break
        fm = f(mid)
        if fm == 0:
            return mid, mid
        if (fm < 0) == (fa < 0):
            a, fa = mid, fm
        else:
            b = mid
    return a, b


# ---------------------------------------------------------------------------
# dense fast path


def _build_table(p: PotentialParams, cfg: AimConfig) -> list:
    """Kernel delta-polynomial table (backend scalars), index n = 1..n_max."""
    if p.ell != 0:
        raise ValueError("the iteration engine supports S-wave (ell = 0) only")
    return _kernel.build_delta_table(
        p.v0, p.lam, p.gamma, cfg.x0, cfg.n_max, cfg.length, cfg.precision.bits
    )


def _resolve_e_lo(p: PotentialParams, cfg: AimConfig) -> float:
    if cfg.e_lo is not None:
        return cfg.e_lo
    _, v_star = v_min(p)
    return 1.02 * v_star


def _energy_grid(e_lo: float, e_hi: float, npts: int) -> list[float]:
    """Log-spaced energies from e_lo up to e_hi (density grows toward 0-)."""
    t_lo = math.log(-e_lo)
    t_hi = math.log(-e_hi)
    step = (t_hi - t_lo) / (npts - 1)
    return [-math.exp(t_lo + step * i) for i in range(npts)]


def delta_scan(p: PotentialParams, cfg: AimConfig, n: int):
    """Sign-change brackets of D_n(x0; E) on the config energy grid.

    Each bracket is refined by bisection to relative 10^-(digits-10).
    Returns a list of (lo, hi) mpf pairs; empty when D_n has no roots in the
    bracket at this iteration order.
    """
    if p.ell != 0:
        raise ValueError("the iteration engine supports S-wave (ell = 0) only")
    if not 1 <= n <= cfg.n_max:
        raise ValueError(f"n must be in [1, n_max={cfg.n_max}], got {n}")
    table = _build_table(p, cfg)
    poly = table[n]
    e_lo = _resolve_e_lo(p, cfg)
    rel = mpf(10) ** (-(cfg.precision.digits - 10))
    with mp.workprec(cfg.precision.bits):
        grid = _energy_grid(e_lo, cfg.e_hi, cfg.e_grid)

        def f(e):
            return _kernel.horner(poly, _kernel.to_backend(e))

        brackets = find_roots(
            f, grid[0], grid[-1], cfg.e_grid, abs_tol=rel * abs(mpf(e_lo)) * mpf("1e-4"), rel_tol=rel
        )
        return [(mpf(lo), mpf(hi)) for lo, hi in brackets]


class _Track:
    """Mutable per-root record used while tracking across n."""

    __slots__ = (
        "value", "prev", "drifts", "first_seen", "last_seen", "accepted_n", "width", "misses",
    )

    def __init__(self, value, n: int, width):
        self.value = value
        self.prev = None
        self.drifts: list = []
        self.first_seen = n
        self.last_seen = n
        self.accepted_n: int | None = None
        self.width = width
        self.misses = 0

    def update(self, value, n: int, width) -> None:
        self.prev = self.value
        self.value = value
        self.drifts.append(abs(value - self.prev))
        self.last_seen = n
        self.width = width
        self.misses = 0


def aim_spectrum(p: PotentialParams, cfg: AimConfig | None = None) -> AimResult:
    """Track determinant roots across n and return the stabilized spectrum.

    A root is accepted once stability_runs consecutive values drift by less
    than stability_tol; accepted roots keep refining until n_max and are
    reported at their final value.  Roots alive at n_max that never met the
    criterion are returned as flagged candidates (shallow levels converge
    slowly and may legitimately end up there).
    """
    cfg = cfg or AimConfig()
    if p.ell != 0:
        raise ValueError("the iteration engine supports S-wave (ell = 0) only")
    check = bound_state_precheck(p)
    if not check.ok:
        raise ValueError(f"bound-state precheck failed: {check.message}")

    e_lo = _resolve_e_lo(p, cfg)
    table = _build_table(p, cfg)
    bits = cfg.precision.bits
    with mp.workprec(bits):
        grid = [_kernel.backend_float(e) for e in _energy_grid(e_lo, cfg.e_hi, cfg.e_grid)]
        dlog = (math.log(-e_lo) - math.log(-cfg.e_hi)) / (cfg.e_grid - 1)
        track_tol = _kernel.backend_float(min(cfg.stability_tol * 1e-2, 1e-12))
        zero_b = _kernel.backend_float(0.0)

        tracks: list[_Track] = []

        def refine(poly, lo, hi, flo):
            return _bisect(
                lambda e: _kernel.horner(poly, e),
                lo,
                hi,
                flo,
                abs_tol=track_tol,
                rel_tol=track_tol,
            )

        def full_scan(poly, n: int) -> None:
            vals = [_kernel.horner(poly, e) for e in grid]
            for i in range(cfg.e_grid - 1):
                fa, fb = vals[i], vals[i + 1]
                if fa == 0:
                    lo = hi = grid[i]
                elif fb == 0 or (fa < 0) == (fb < 0):
                    continue  # an exact zero at i+1 is the next cell's left endpoint
                else:
                    lo, hi = refine(poly, grid[i], grid[i + 1], fa)
                root = (lo + hi) / 2
                width = hi - lo
                match = None
                best = None
                for t in tracks:
                    d = abs(t.value - root)
                    if best is None or d < best:
                        best, match = d, t
                # tracks are refreshed every n, so a genuine match has moved
                # at most a fraction of a grid cell since the last update
                tol_match = abs(root) * (1.5 * dlog) + abs(track_tol) * 1000
                if match is not None and best <= tol_match:
                    if match.last_seen < n:
                        match.update(root, n, width)
                else:
                    tracks.append(_Track(root, n, width))

        def local_update(poly, t: _Track, n: int) -> None:
            w = abs(t.value) * dlog
            if not w > 0:
                w = abs(track_tol) * 100
            # one widening only: straying further risks stealing a neighbor
            for _ in range(2):
                lo, hi = t.value - w, t.value + w
                flo, fhi = _kernel.horner(poly, lo), _kernel.horner(poly, hi)
                if flo == 0:
                    t.update(lo, n, zero_b)
                    return
                if fhi == 0:
                    t.update(hi, n, zero_b)
                    return
                if (flo < 0) != (fhi < 0):
                    lo, hi = refine(poly, lo, hi, flo)
                    t.update((lo + hi) / 2, n, hi - lo)
                    return
                # the sign change may hide inside: subsample before widening
                inner = [lo + (hi - lo) * k / 8 for k in range(9)]
                fs = [_kernel.horner(poly, e) for e in inner]
                for k in range(8):
                    if (fs[k] < 0) != (fs[k + 1] < 0):
                        lo2, hi2 = refine(poly, inner[k], inner[k + 1], fs[k])
                        t.update((lo2 + hi2) / 2, n, hi2 - lo2)
                        return
                w = w * 4
            t.misses += 1

        def dedupe(n: int) -> None:
            # young roots race down from the shallow edge faster than the
            # match tolerance and briefly spawn duplicate tracks; once two
            # tracks sit on the same root (same value to refinement width)
            # merge them.  Distinct determinant roots may pass within a
            # percent of each other, so this tolerance must stay tiny.
            tracks.sort(key=lambda t: t.value)
            i = 0
            while i + 1 < len(tracks):
                a, b = tracks[i], tracks[i + 1]
                tol = abs(a.value) * 1e-9 + abs(track_tol) * 200
                if abs(a.value - b.value) <= tol:
                    keep, drop = (a, b) if a.first_seen <= b.first_seen else (b, a)
                    if drop.accepted_n is not None and keep.accepted_n is None:
                        keep, drop = drop, keep
                    tracks.remove(drop)
                else:
                    i += 1

        for n in range(cfg.n_min, cfg.n_max + 1):
            poly = table[n]
            if (n - cfg.n_min) % RESCAN_EVERY == 0:
                full_scan(poly, n)
            for t in tracks:
                if t.last_seen < n and t.misses < 10:
                    local_update(poly, t, n)
            dedupe(n)
            need = cfg.stability_runs - 1
            for t in tracks:
                if t.accepted_n is None and len(t.drifts) >= need:
                    recent = t.drifts[-need:]
                    if all(d < cfg.stability_tol for d in recent):
                        t.accepted_n = n

        levels = []
        candidates = []
        min_life = cfg.stability_runs + 2
        for t in tracks:
            energy = float(_kernel.from_backend(t.value))
            if not (e_lo <= energy <= float(cfg.e_hi)):
                continue
            level = AimLevel(
                energy=energy,
                converged=t.accepted_n is not None,
                n_accepted=t.accepted_n,
                last_drift=float(_kernel.from_backend(t.drifts[-1])) if t.drifts else math.inf,
                bracket=(
                    float(_kernel.from_backend(t.value - t.width)),
                    float(_kernel.from_backend(t.value + t.width)),
                ),
                first_seen=t.first_seen,
                drift_history=tuple(float(_kernel.from_backend(d)) for d in t.drifts),
            )
            if level.converged:
                levels.append(level)
            elif t.last_seen == cfg.n_max and (cfg.n_max - t.first_seen) >= min_life:
                candidates.append(level)

    levels.sort(key=lambda s: s.energy)
    candidates.sort(key=lambda s: s.energy)
    meta = {
        "aim_n_max": cfg.n_max,
        "aim_digits": cfg.precision.digits,
        "aim_x0": cfg.x0,
        "aim_bracket": [e_lo, cfg.e_hi],
        "aim_unconverged": [c.energy for c in candidates],
    }
    return AimResult(
        eigenvalues=tuple(s.energy for s in levels),
        levels=tuple(levels),
        candidates=tuple(candidates),
        meta=meta,
    )
