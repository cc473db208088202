import pytest
from hypothesis import given, strategies as st

from knotctl import Laurent


def L(text):
    return Laurent.parse(text)


coeff_dicts = st.dictionaries(
    st.integers(min_value=-8, max_value=8),
    st.integers(min_value=-30, max_value=30),
    max_size=6,
)
polys = coeff_dicts.map(Laurent)


def test_construction_drops_zero_coefficients():
    p = Laurent({0: 1, 3: 0, -2: 5})
    assert p.coeffs == {0: 1, -2: 5}


def test_basic_arithmetic():
    p = L("1:0,1:1")       # 1 + t
    q = L("1:0,-1:1")      # 1 - t
    assert (p * q).text() == "1:0,-1:2"
    assert (p + q).text() == "2:0"
    assert (p - q).text() == "2:1"
    assert (p ** 2).text() == "1:0,2:1,1:2"


def test_negative_exponents():
    p = L("1:-1,1:1")
    assert (p * p).text() == "1:-2,2:0,1:2"
    assert p.shifted(1).text() == "1:0,1:2"
    assert p.evaluate(2) == pytest.approx(2.5)


def test_int_coercion():
    p = L("1:1")
    assert (p + 1).text() == "1:0,1:1"
    assert (2 - p).text() == "2:0,-1:1"
    assert (p * 3).text() == "3:1"


def test_zero_and_one():
    assert Laurent.zero().is_zero()
    assert not Laurent.zero()
    assert Laurent.one().text() == "1:0"
    assert Laurent.term(-2, 5).text() == "-2:5"
    assert Laurent.const(7).text() == "7:0"


def test_equality_and_hash():
    assert L("1:0,1:2") == L("1:2,1:0")
    assert L("1:0") == 1
    assert hash(L("3:0")) == hash(Laurent.const(3))
    assert L("1:1") != "not a polynomial"


def test_text_parse_frozen_forms():
    assert L("0").is_zero()
    assert L("1:0,-1:1,1:2").text() == "1:0,-1:1,1:2"
    assert str(L("1:0,-1:1,1:2")) == "1 - t + t^2"
    assert str(L("-2:0,3:1")) == "-2 + 3*t"
    with pytest.raises(ValueError):
        Laurent.parse("banana")


def test_divexact_and_errors():
    p = L("1:0,2:1,1:2")
    assert p.divexact(L("1:0,1:1")).text() == "1:0,1:1"
    with pytest.raises(ArithmeticError):
        L("1:0,1:1").divexact(L("2:0"))
    with pytest.raises(ArithmeticError):
        p.divexact(Laurent.zero())
    assert Laurent.zero().divexact(p).is_zero()


def test_normalized_frozen():
    assert L("-1:-3,1:-1").normalized().text() == "-1:0,1:2"
    assert L("1:-3,-1:-1").normalized().text() == "-1:0,1:2"
    assert L("-2:5").normalized().text() == "2:0"
    assert Laurent.zero().normalized().is_zero()


def test_pow_rejects_negative():
    with pytest.raises(ValueError):
        L("1:1") ** -1


def test_immutability():
    p = L("1:0")
    with pytest.raises(AttributeError):
        p.coeffs = {}


@given(polys, polys)
def test_addition_commutes(p, q):
    assert p + q == q + p


@given(polys, polys, polys)
def test_multiplication_distributes(p, q, r):
    assert p * (q + r) == p * q + p * r


@given(polys, polys)
def test_multiplication_commutes(p, q):
    assert p * q == q * p


@given(polys)
def test_text_round_trip(p):
    assert Laurent.parse(p.text()) == p


@given(polys)
def test_normalized_idempotent(p):
    n = p.normalized()
    assert n.normalized() == n
    if not p.is_zero():
        assert n.min_exp() == 0
        assert n.coeffs[n.max_exp()] > 0


@given(polys, polys)
def test_divexact_undoes_multiplication(p, q):
    if q.is_zero():
        return
    assert (p * q).divexact(q) == p


@given(polys, st.integers(min_value=-5, max_value=5))
def test_shift_matches_term_multiplication(p, k):
    assert p.shifted(k) == p * Laurent.term(1, k)


@given(polys, polys, st.integers(min_value=-3, max_value=3).filter(lambda x: x != 0))
def test_evaluation_is_a_ring_map(p, q, x):
    assert (p + q).evaluate(x) == p.evaluate(x) + q.evaluate(x)
    assert (p * q).evaluate(x) == p.evaluate(x) * q.evaluate(x)
