"""Taylor-series arithmetic: hand values, error paths, and randomized laws."""

import random

import pytest
from mpmath import mp, mpf

from spectra.series import (
    CenterMismatchError,
    ExhaustedSeriesError,
    PoleAtCenterError,
    Precision,
    TaylorSeries,
    add,
    derivative,
    div,
    mul,
    value_at_center,
)


def S(coeffs, center=0.0):
    return TaylorSeries.from_coeffs(center, coeffs)


def as_floats(ts):
    return [float(c) for c in ts.coeffs]


class TestAdd:
    def test_additive_identity(self):
        assert as_floats(add(S([1, 2, 3]), S([0, 0, 0]))) == [1, 2, 3]

    def test_inverse(self):
        assert as_floats(add(S([1, 1]), S([-1, -1]))) == [0, 0]

    def test_partial_fractions(self):
        # 1/(1-x) + 1/(1+x) = 2/(1-x^2)
        geo = S([1, 1, 1, 1])
        alt = S([1, -1, 1, -1])
        assert as_floats(add(geo, alt)) == [2, 0, 2, 0]

    def test_truncates_to_shorter(self):
        out = add(S([1, 2, 3, 4]), S([1, 1]))
        assert out.valid_len == 2

    def test_center_mismatch(self):
        with pytest.raises(CenterMismatchError):
            add(S([1, 2]), S([1, 2], center=0.5))


class TestMul:
    def test_difference_of_squares(self):
        assert as_floats(mul(S([1, 1, 0]), S([1, -1, 0]))) == [1, 0, -1]

    def test_multiplicative_identity(self):
        a = S([3.5, -2, 7, 0.25])
        assert as_floats(mul(a, S([1, 0, 0, 0]))) == as_floats(a)

    def test_geometric_squared(self):
        # (1/(1-x))^2 = 1/(1-x)^2 = sum (j+1) x^j
        assert as_floats(mul(S([1, 1, 1, 1]), S([1, 1, 1, 1]))) == [1, 2, 3, 4]


class TestDiv:
    def test_geometric_with_sign(self):
        assert as_floats(div(S([1, 0, 0, 0]), S([1, 1, 0, 0]))) == [1, -1, 1, -1]

    def test_self_division(self):
        a = S([2.0, 0.5, -1.25, 3])
        assert as_floats(div(a, a)) == [1, 0, 0, 0]

    def test_square_of_quotient_consistency(self):
        # (1/(1-x))^2 computed two ways must agree coefficient-wise
        one = S([1, 0, 0, 0])
        inv = div(one, S([1, -1, 0, 0]))
        lhs = mul(inv, inv)
        rhs = div(one, mul(S([1, -1, 0, 0]), S([1, -1, 0, 0])))
        assert as_floats(lhs) == as_floats(rhs)

    def test_pole_at_center(self):
        with pytest.raises(PoleAtCenterError):
            div(S([1, 2]), S([0, 1]))


class TestDerivative:
    def test_definition(self):
        a = S([1.5, -2, 4, 8])
        assert as_floats(derivative(a)) == [-2, 8, 24]

    def test_geometric(self):
        # d/dx 1/(1-x) = 1/(1-x)^2
        assert as_floats(derivative(S([1, 1, 1, 1, 1]))) == [1, 2, 3, 4]

    def test_constant(self):
        assert as_floats(derivative(S([7, 0, 0]))) == [0, 0]

    def test_valid_len_decrement(self):
        assert derivative(S([1, 2, 3])).valid_len == 2

    def test_exhausted(self):
        empty = TaylorSeries(mpf(0), (), 0)
        with pytest.raises(ExhaustedSeriesError):
            derivative(empty)


class TestValueAtCenter:
    def test_plain(self):
        assert float(value_at_center(S([7, 1, 2]))) == 7

    def test_zero_series(self):
        assert float(value_at_center(S([0, 0]))) == 0

    def test_exhausted(self):
        with pytest.raises(ExhaustedSeriesError):
            value_at_center(TaylorSeries(mpf(0), (), 0))


def _random_series(rng, length, center=0.0):
    return TaylorSeries.from_coeffs(
        center, [mpf(rng.randint(-50, 50)) / 8 for _ in range(length)]
    )


def test_leibniz_rule_randomized():
    # (ab)' = a'b + ab' on the shared trustworthy range
    rng = random.Random(20240517)
    for _ in range(1000):
        n = rng.randint(2, 7)
        a = _random_series(rng, n)
        b = _random_series(rng, n)
        lhs = derivative(mul(a, b))
        rhs = add(mul(derivative(a), b), mul(a, derivative(b)))
        m = min(lhs.valid_len, rhs.valid_len)
        for j in range(m):
            assert lhs.coeffs[j] == rhs.coeffs[j]


def test_div_mul_round_trip_randomized():
    rng = random.Random(987123)
    with mp.workdps(40):
        for _ in range(1000):
            n = rng.randint(1, 7)
            a = _random_series(rng, n)
            b = _random_series(rng, n)
            if not b.coeffs[0]:
                continue
            back = mul(div(a, b), b)
            for j in range(back.valid_len):
                assert abs(back.coeffs[j] - a.coeffs[j]) < mpf("1e-30")


def test_precision_escalation_agreement():
    # the same pipeline at d and 2d digits agrees on the first d-8 figures
    digits = 32

    def pipeline():
        one = TaylorSeries.constant(1, 0.0, 12)
        den = TaylorSeries.from_coeffs(0.0, [3, -1] + [0] * 10)
        q = div(one, den)
        q = mul(q, q)
        q = derivative(q)
        return div(q, TaylorSeries.from_coeffs(0.0, [7, 2, 1] + [0] * 8))

    with mp.workdps(digits):
        lo = [mpf(str(c)) for c in pipeline().coeffs]
    with mp.workdps(2 * digits):
        hi = pipeline().coeffs
        tol = mpf(10) ** (-(digits - 8))
        for a, b in zip(lo, hi):
            if b:
                assert abs(a - b) / abs(b) < tol
            else:
                assert abs(a - b) < tol


def test_precision_type_validation():
    assert Precision(64).digits == 64
    assert Precision(16).bits >= 53
    with pytest.raises(ValueError):
        Precision(8)


def test_valid_len_bounds():
    with pytest.raises(ValueError):
        TaylorSeries(mpf(0), (mpf(1),), 2)
