"""Laurent series engine: window algebra, arithmetic, serialization."""

import json
import random
from fractions import Fraction

import pytest

from merohecke.qseries import (
    LaurentSeries,
    InsufficientPrecision,
    PrecisionExceeded,
    ZeroLeadingCoefficient,
    as_coeff,
    equals_to_precision,
    first_mismatch,
    dumps,
    loads,
    to_json_obj,
    from_json_obj,
    _conv_school,
    _conv_kron,
)


def _rand_series(rng, minval=-5, maxval=5, maxlen=12, rational=False):
    val = rng.randint(minval, maxval)
    length = rng.randint(1, maxlen)
    coeffs = []
    for _ in range(length):
        num = rng.randint(-50, 50)
        if rational:
            coeffs.append(Fraction(num, rng.randint(1, 9)))
        else:
            coeffs.append(num)
    return LaurentSeries(val, coeffs)


# -- construction and access ----------------------------------------------


def test_window_bookkeeping():
    s = LaurentSeries(-2, [1, 0, 3, 4])
    assert s.val == -2
    assert s.prec == 2
    assert s.coefficient(-2) == 1
    assert s.coefficient(0) == 3
    # below the window is a provable zero
    assert s.coefficient(-7) == 0
    with pytest.raises(PrecisionExceeded):
        s.coefficient(2)


def test_constructor_rejects_window_mismatch():
    with pytest.raises(ValueError):
        LaurentSeries(0, [1, 2], 5)


def test_coefficients_normalized_to_fractions():
    s = LaurentSeries(0, ["3/4", 2, Fraction(1, 3)])
    assert s.coefficient(0) == Fraction(3, 4)
    assert s.coefficient(1) == 2
    assert isinstance(s.coefficient(1), (int, Fraction))


def test_as_coeff_rejects_floats():
    with pytest.raises(TypeError):
        as_coeff(0.5)


def test_monomial_and_zero():
    m = LaurentSeries.monomial(-1, 4, coeff=7)
    assert m.coefficient(-1) == 7
    assert m.coefficient(2) == 0
    z = LaurentSeries.zero(6)
    assert z.is_zero()
    assert z.prec == 6


def test_from_coeff_map():
    s = LaurentSeries.from_coeff_map({-1: 2, 3: "1/2"}, 5)
    assert s.val == -1
    assert s.coefficient(3) == Fraction(1, 2)
    assert s.coefficient(0) == 0


# -- addition and multiplication windows ----------------------------------


def test_add_window_is_min_of_precisions():
    a = LaurentSeries(0, [1, 2, 3])      # [0, 3)
    b = LaurentSeries(-1, [5, 0, 0, 0, 9])  # [-1, 4)
    c = a.add(b)
    assert (c.val, c.prec) == (-1, 3)
    assert c.coefficient(-1) == 5
    assert c.coefficient(0) == 1


def test_mul_window_rule():
    # [va+vb, min(Pa+vb, Pb+va)) window algebra
    a = LaurentSeries(1, [1, 1, 1])     # [1, 4)
    b = LaurentSeries(-2, [1, 1])       # [-2, 0)
    c = a.mul(b)
    assert (c.val, c.prec) == (-1, min(4 - 2, 0 + 1))


def test_mul_against_schoolbook_oracle():
    rng = random.Random(11)
    for _ in range(200):
        a = _rand_series(rng, rational=rng.random() < 0.4)
        b = _rand_series(rng, rational=rng.random() < 0.4)
        c = a.mul(b)
        for n in range(c.val, c.prec):
            total = 0
            for i in range(a.val, a.prec):
                j = n - i
                if b.val <= j < b.prec:
                    total += a.coefficient(i) * b.coefficient(j)
            assert c.coefficient(n) == total, (n, a, b)


def test_kronecker_matches_schoolbook():
    rng = random.Random(23)
    for _ in range(60):
        a = [rng.randint(-10 ** 6, 10 ** 6) for _ in range(rng.randint(1, 40))]
        b = [rng.randint(-10 ** 6, 10 ** 6) for _ in range(rng.randint(1, 40))]
        assert _conv_kron(a, b) == _conv_school(a, b)


def test_kronecker_huge_coefficients():
    # beyond the packing cutoff the byte-packed path must stay exact
    a = [10 ** 50, -(10 ** 48), 3]
    b = [7, -(10 ** 51)]
    assert _conv_kron(a, b) == _conv_school(a, b)


def test_scale_and_shift():
    s = LaurentSeries(0, [1, 2]).scale(Fraction(1, 2)).shift(-3)
    assert s.val == -3
    assert s.coefficient(-3) == Fraction(1, 2)
    assert s.coefficient(-2) == 1


# -- inversion, division, powers -------------------------------------------


def test_invert_unit_lead():
    s = LaurentSeries(0, [1, -1, 0, 0, 0, 0])  # 1 - q on [0, 6)
    inv = s.invert()
    # geometric series
    for n in range(6):
        assert inv.coefficient(n) == 1


def test_invert_window_shrinks_for_deep_valuation():
    # invert on [-v*, P - 2 v*) for true valuation v*
    s = LaurentSeries(2, [1, 5, 7, 1, 2])  # [2, 7)
    inv = s.invert()
    assert (inv.val, inv.prec) == (-2, 3)
    prod = s.mul(inv)
    for n in range(prod.val, prod.prec):
        assert prod.coefficient(n) == (1 if n == 0 else 0)


def test_invert_rational_lead():
    s = LaurentSeries(0, [Fraction(2, 3), 1, 4])
    prod = s.mul(s.invert())
    assert prod.coefficient(0) == 1
    assert prod.coefficient(1) == 0


def test_invert_zero_lead_raises():
    with pytest.raises(ZeroLeadingCoefficient):
        LaurentSeries(0, [0, 0, 0]).invert()


def test_invert_round_trip_random():
    rng = random.Random(5)
    for _ in range(120):
        s = _rand_series(rng, rational=True)
        if s.is_zero() or s.coefficient(s.valuation()) == 0:
            continue
        inv = s.invert()
        prod = s.mul(inv)
        for n in range(prod.val, prod.prec):
            assert prod.coefficient(n) == (1 if n == 0 else 0)


def test_div_explicit_target_precision():
    num = LaurentSeries(1, [1] + [0] * 9)    # q on [1, 11)
    den = LaurentSeries(0, [1, -1] + [0] * 8)
    q = num.div(den, target_precision=5)
    assert q.prec == 5
    for n in range(1, 5):
        assert q.coefficient(n) == 1


def test_pow_window_rule_same_series():
    # P_k = P_1 - (k-1) for k-th power of a valuation-0 unit
    s = LaurentSeries(0, [1, 1, 1, 1, 1, 1])
    p = s.pow(3)
    assert p.prec == 6
    assert p.coefficient(2) == 6  # trinomial count


def test_pow_negative_valuation():
    s = LaurentSeries(-1, [1, 0, 0, 0])
    p = s.pow(2)
    assert p.val == -2
    assert p.coefficient(-2) == 1


def test_pow_zero_is_one():
    s = LaurentSeries(2, [5, 1])
    p = s.pow(0)
    assert p.coefficient(0) == 1


def test_d_power():
    s = LaurentSeries(-2, [1, 0, 0, 1, 5])  # q^-2 + q + 5 q^2
    d = s.d_power(3)
    assert d.coefficient(-2) == -8
    assert d.coefficient(1) == 1
    assert d.coefficient(2) == 40
    # 0^0 = 1 convention: constant survives d^0
    assert s.d_power(0).coefficient(-2) == 1


def test_truncate():
    s = LaurentSeries(0, [1, 2, 3, 4])
    t = s.truncate(2)
    assert t.prec == 2
    with pytest.raises(PrecisionExceeded):
        t.coefficient(2)
    with pytest.raises(InsufficientPrecision):
        s.truncate(9)


# -- ring laws on random inputs ---------------------------------------------


def test_ring_laws_random():
    rng = random.Random(77)
    for _ in range(150):
        a = _rand_series(rng)
        b = _rand_series(rng)
        c = _rand_series(rng)
        lhs = a.mul(b.add(c))
        rhs = a.mul(b).add(a.mul(c))
        lo = max(lhs.val, rhs.val)
        hi = min(lhs.prec, rhs.prec)
        for n in range(lo, hi):
            assert lhs.coefficient(n) == rhs.coefficient(n)
        ab = a.mul(b)
        ba = b.mul(a)
        assert ab == ba


# -- comparison helpers -------------------------------------------------------


def test_equals_to_precision_reports_window():
    a = LaurentSeries(0, [1, 2, 3, 4])
    b = LaurentSeries(-1, [0, 1, 2, 3])
    ok, window = equals_to_precision(a, b)
    assert ok
    assert window == (-1, 3)


def test_first_mismatch():
    a = LaurentSeries(0, [1, 2, 3])
    b = LaurentSeries(0, [1, 2, 4])
    assert first_mismatch(a, b) == 2
    assert first_mismatch(a, a) is None


# -- printing and serialization ----------------------------------------------


def test_str_format():
    s = LaurentSeries(2, [1, -4143, 16868385, 0])
    assert str(s) == "q^2 - 4143*q^3 + 16868385*q^4 + O(q^6)"


def test_str_constant_and_negative_powers():
    s = LaurentSeries(-1, [1, 744, Fraction(1, 2)])
    assert str(s) == "q^-1 + 744 + 1/2*q + O(q^2)"


def test_json_round_trip_bit_exact():
    rng = random.Random(3)
    for _ in range(80):
        s = _rand_series(rng, rational=True)
        t = loads(dumps(s))
        assert t.val == s.val and t.prec == s.prec
        assert t == s


def test_json_shape():
    s = LaurentSeries(-1, [Fraction(1, 2), 3])
    obj = to_json_obj(s)
    assert obj == {"valuation": -1, "precision": 1, "coefficients": ["1/2", "3"]}
    assert from_json_obj(json.loads(json.dumps(obj))) == s
