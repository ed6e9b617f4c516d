"""Polynomials in the energy variable, used as Taylor-series coefficients.

The iteration recursion is linear in the seed pair and the seeds are affine
in the energy E, so running the series recursion with an EnergyPoly in place
of a numeric E produces the termination determinant as an explicit polynomial
in E.  Root-finding then costs one Horner evaluation per probe instead of a
full recursion pass.
"""

from __future__ import annotations

from mpmath import mpf


def _coerce(value):
    if isinstance(value, (int, float)):
        return mpf(repr(value) if isinstance(value, float) else value)
    return value


class EnergyPoly:
    """Immutable dense polynomial in E, constant term first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=(0,)):
        cs = [_coerce(c) for c in coeffs]
        while len(cs) > 1 and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("EnergyPoly is immutable")

    @classmethod
    def variable(cls) -> "EnergyPoly":
        return cls((0, 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, k: int):
        return self.coeffs[k] if k < len(self.coeffs) else mpf(0)

    def __call__(self, e):
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * e + c
        return acc

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, EnergyPoly):
            return self.coeffs == other.coeffs
        return self.degree == 0 and self.coeffs[0] == _coerce(other)

    def __hash__(self):
        return hash(self.coeffs)

    def __neg__(self) -> "EnergyPoly":
        return EnergyPoly(tuple(-c for c in self.coeffs))

    def _lift(self, other) -> "EnergyPoly | None":
        if isinstance(other, EnergyPoly):
            return other
        coerced = _coerce(other)
        if isinstance(coerced, mpf) or isinstance(coerced, (int, float)):
            return EnergyPoly((coerced,))
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return EnergyPoly(tuple(self.coeff(k) + o.coeff(k) for k in range(n)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return EnergyPoly(tuple(self.coeff(k) - o.coeff(k) for k in range(n)))

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, EnergyPoly):
            out = [mpf(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                if not a:
                    continue
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
            return EnergyPoly(tuple(out))
        o = _coerce(other)
        return EnergyPoly(tuple(c * o for c in self.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, EnergyPoly):
            if other.degree > 0:
                raise ZeroDivisionError("cannot divide by a non-constant energy polynomial")
            other = other.coeffs[0]
        o = _coerce(other)
        return EnergyPoly(tuple(c / o for c in self.coeffs))

    def __repr__(self) -> str:
        return f"EnergyPoly({list(self.coeffs)!r})"
