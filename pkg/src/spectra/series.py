"""Truncated Taylor-series arithmetic over configurable-precision reals.

A series is a finite list of derivative coefficients about a fixed center,
``coeffs[j] = f^(j)(x0) / j!``.  Only the leading ``valid_len`` coefficients
are trustworthy: every binary operation truncates to the shorter operand and
every derivative consumes one order.  The bookkeeping is explicit because the
iteration engine built on top of this module spends exactly one order per
step; silently reading stale coefficients is the classic bug in that family
of algorithms.

Coefficients are normally ``mpmath.mpf`` values (rounded at the ambient
``mpmath.mp`` context), but any type with ring arithmetic works; the
eigenvalue engine exploits this by running the same operations over
polynomials in the energy.
"""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import mp, mpf


class SeriesError(ValueError):
    """Base class for series-arithmetic failures."""


class CenterMismatchError(SeriesError):
    """Arithmetic between series expanded about different points."""


class PoleAtCenterError(SeriesError):
    """Division by a series that vanishes at the expansion center."""


class ExhaustedSeriesError(SeriesError):
    """No trustworthy coefficients remain for the requested operation."""


@dataclass(frozen=True)
class Precision:
    """Decimal working precision for the configurable-precision arithmetic."""

    digits: int = 64

    def __post_init__(self) -> None:
        if self.digits < 16:
            raise ValueError(f"precision must be at least 16 digits, got {self.digits}")

    @property
    def bits(self) -> int:
        """Binary precision corresponding to ``digits`` (mpmath convention)."""
        return max(53, int(self.digits * 3.3219280948873626) + 4)


def _coerce(value):
    """Convert plain Python numbers to mpf; leave richer coefficient types alone."""
    if isinstance(value, (int, float)):
        # round-tripping floats through repr keeps e.g. 0.2 meaning the decimal 0.2
        return mpf(repr(value) if isinstance(value, float) else value)
    if isinstance(value, str):
        return mpf(value)
    return value


@dataclass(frozen=True)
class TaylorSeries:
    """Immutable truncated Taylor series about ``center``."""

    center: object
    coeffs: tuple
    valid_len: int

    def __post_init__(self) -> None:
        if self.valid_len < 0 or self.valid_len > len(self.coeffs):
            raise SeriesError(
                f"valid_len {self.valid_len} out of range for {len(self.coeffs)} coefficients"
            )

    @classmethod
    def from_coeffs(cls, center, coeffs, valid_len: int | None = None) -> "TaylorSeries":
        cs = tuple(_coerce(c) for c in coeffs)
        return cls(_coerce(center), cs, len(cs) if valid_len is None else valid_len)

    @classmethod
    def constant(cls, value, center, length: int) -> "TaylorSeries":
        if length < 1:
            raise SeriesError("constant series needs length >= 1")
        zero = mpf(0)
        return cls(_coerce(center), (_coerce(value),) + (zero,) * (length - 1), length)

    def __len__(self) -> int:
        return self.valid_len

    def __getitem__(self, j: int):
        if j >= self.valid_len:
            raise ExhaustedSeriesError(f"coefficient {j} beyond valid_len {self.valid_len}")
        return self.coeffs[j]

    def __add__(self, other: "TaylorSeries") -> "TaylorSeries":
        return add(self, other)

    def __sub__(self, other: "TaylorSeries") -> "TaylorSeries":
        return sub(self, other)

    def __mul__(self, other: "TaylorSeries") -> "TaylorSeries":
        return mul(self, other)

    def __truediv__(self, other: "TaylorSeries") -> "TaylorSeries":
        return div(self, other)

    def __neg__(self) -> "TaylorSeries":
        return TaylorSeries(self.center, tuple(-c for c in self.coeffs), self.valid_len)

    def scaled(self, factor) -> "TaylorSeries":
        """Multiply every coefficient by a scalar (not a series)."""
        f = _coerce(factor)
        return TaylorSeries(
            self.center, tuple(f * c for c in self.coeffs[: self.valid_len]), self.valid_len
        )


def _check_centers(a: TaylorSeries, b: TaylorSeries) -> None:
    if not a.center == b.center:
        raise CenterMismatchError(f"centers differ: {a.center} vs {b.center}")


def add(a: TaylorSeries, b: TaylorSeries) -> TaylorSeries:
    """Coefficient-wise sum, truncated to the shorter operand."""
    _check_centers(a, b)
    n = min(a.valid_len, b.valid_len)
    return TaylorSeries(a.center, tuple(a.coeffs[j] + b.coeffs[j] for j in range(n)), n)


def sub(a: TaylorSeries, b: TaylorSeries) -> TaylorSeries:
    _check_centers(a, b)
    n = min(a.valid_len, b.valid_len)
    return TaylorSeries(a.center, tuple(a.coeffs[j] - b.coeffs[j] for j in range(n)), n)


def mul(a: TaylorSeries, b: TaylorSeries) -> TaylorSeries:
    """Cauchy product truncated to the shorter operand."""
    _check_centers(a, b)
    n = min(a.valid_len, b.valid_len)
    ac, bc = a.coeffs, b.coeffs
    out = []
    for j in range(n):
        s = ac[0] * bc[j]
        for i in range(1, j + 1):
            s = s + ac[i] * bc[j - i]
        out.append(s)
    return TaylorSeries(a.center, tuple(out), n)


def div(a: TaylorSeries, b: TaylorSeries) -> TaylorSeries:
    """Long division: ``mul(div(a, b), b)`` reproduces ``a`` up to valid_len."""
    _check_centers(a, b)
    if b.valid_len < 1 or not b.coeffs[0]:
        raise PoleAtCenterError("divisor series vanishes at the expansion center")
    n = min(a.valid_len, b.valid_len)
    b0 = b.coeffs[0]
    ac, bc = a.coeffs, b.coeffs
    out = []
    for j in range(n):
        s = ac[j]
        for i in range(1, j + 1):
            s = s - bc[i] * out[j - i]
        out.append(s / b0)
    return TaylorSeries(a.center, tuple(out), n)


def derivative(a: TaylorSeries) -> TaylorSeries:
    """d/dx in coefficient space; consumes one trustworthy order."""
    if a.valid_len < 1:
        raise ExhaustedSeriesError("cannot differentiate a series with no valid coefficients")
    n = a.valid_len - 1
    return TaylorSeries(a.center, tuple((j + 1) * a.coeffs[j + 1] for j in range(n)), n)


def value_at_center(a: TaylorSeries):
    """The series value at its own expansion point, i.e. the constant term."""
    if a.valid_len < 1:
        raise ExhaustedSeriesError("series has no valid coefficients")
    return a.coeffs[0]


def evaluate(a: TaylorSeries, x):
    """Horner evaluation of the truncated polynomial at ``x``."""
    if a.valid_len < 1:
        raise ExhaustedSeriesError("series has no valid coefficients")
    dx = _coerce(x) - a.center
    acc = a.coeffs[a.valid_len - 1]
    for j in range(a.valid_len - 2, -1, -1):
        acc = acc * dx + a.coeffs[j]
    return acc


def working_precision(precision: Precision):
    """Context manager setting the ambient mpmath precision."""
    return mp.workprec(precision.bits)
