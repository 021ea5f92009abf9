from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from vertexid.oracle import naive_product, partition_count
from vertexid.parampoly import ParamPoly, RING_Q, RING_T, RingMismatchError
from vertexid.series import (
    MultiSeries,
    SeriesError,
    SpecMismatchError,
    TruncationSpec,
    euler_product,
    first_mismatch,
    render_series,
)

SPEC = TruncationSpec(-8, 8, ((0, 4),))


def mono(u, z=0, c=1, spec=SPEC, ring=()):
    return MultiSeries.monomial(spec, ring, u, (z,), c)


def one(spec=SPEC, ring=()):
    return MultiSeries.one(spec, ring)


# -- ParamPoly ------------------------------------------------------------------

def test_parampoly_basic():
    t = ParamPoly.gen(RING_T, "t")
    p = (t + 1) * (t - 1)
    assert p == t * t - 1
    assert p.degree() == 2
    assert ParamPoly.const(RING_T, 0).is_zero()
    assert str(t * t - 1) in ("-1 + t^2", "t^2 - 1")


def test_parampoly_ring_mismatch():
    t = ParamPoly.gen(RING_T, "t")
    with pytest.raises(RingMismatchError):
        t + ParamPoly.const(RING_Q, 1)


def test_parampoly_json_round_trip():
    t = ParamPoly.gen(RING_T, "t")
    p = 2 * t * t - Fraction(1, 3)
    assert ParamPoly.from_json(RING_T, p.to_json()) == p


# -- constructors and windows ------------------------------------------------------

def test_monomial_inside_and_outside():
    s = mono(2, 1)
    assert s.coefficient(2, (1,)) == ParamPoly.const((), 1)
    with pytest.raises(SeriesError):
        MultiSeries.monomial(SPEC, (), 99, (0,))
    assert MultiSeries.monomial(SPEC, (), 0, (0,), 0).is_zero()


def test_coefficient_out_of_window_rejected():
    with pytest.raises(SeriesError):
        one().coefficient(9)


def test_spec_mismatch_rejected():
    other = TruncationSpec(-8, 8, ((0, 5),))
    with pytest.raises(SpecMismatchError):
        one() + MultiSeries.one(other, ())
    with pytest.raises(SpecMismatchError):
        first_mismatch(one(), MultiSeries.one(other, ()))


def test_empty_window_rejected():
    with pytest.raises(SeriesError):
        TruncationSpec(3, 2)


# -- ring axioms on random small series ------------------------------------------

coeffs = st.integers(min_value=-3, max_value=3).map(Fraction)
keys = st.tuples(st.integers(-4, 4), st.integers(0, 3))


@st.composite
def small_series(draw):
    n = draw(st.integers(0, 5))
    terms = {}
    for _ in range(n):
        u, z = draw(keys)
        c = draw(coeffs)
        if c:
            terms[(u, z)] = ParamPoly.const((), c)
    return MultiSeries(SPEC, (), terms)


@settings(max_examples=60, deadline=None)
@given(small_series(), small_series(), small_series())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + MultiSeries.zero(SPEC, ()) == a
    assert a * one() == a


@settings(max_examples=30, deadline=None)
@given(small_series())
def test_insertion_order_irrelevant(a):
    rebuilt = MultiSeries(SPEC, (), dict(reversed(list(a.terms.items()))))
    assert rebuilt == a


# -- inverse / log / exp -----------------------------------------------------------

def test_inverse_geometric():
    q = mono(1)
    geo = (one() - q).inverse()
    for k in range(9):
        assert geo.coefficient(k) == ParamPoly.const((), 1)
    assert (one() - q) * geo == one()


def test_inverse_of_one():
    assert one().inverse() == one()


def test_inverse_round_trip():
    a = one() - mono(1, 1)
    assert a.inverse().inverse() == a


def test_inverse_with_monomial_prefactor():
    a = mono(-2) - mono(0, 1)  # u^-2 (1 - z u^2)
    inv = a.inverse()
    # true inverse u^2 sum_n (z u^2)^n restricted to the window
    expected = mono(2) + mono(4, 1) + mono(6, 2) + mono(8, 3)
    assert inv == expected


def test_inverse_requires_rational_unit():
    t = ParamPoly.gen(RING_T, "t")
    s = MultiSeries.monomial(SPEC, RING_T, 0, (0,), t) + MultiSeries.monomial(SPEC, RING_T, 1, (0,))
    with pytest.raises(SeriesError):
        s.inverse()


def test_exp_log_round_trip():
    a = mono(2, 1) + mono(0, 2)  # z q + z^2
    assert a.log1p().exp() == one() + a
    assert MultiSeries.zero(SPEC, ()).exp() == one()


def test_log1p_classical_expansion():
    z = mono(0, 1)
    got = (-z).log1p()
    for k in range(1, 5):
        assert got.coefficient(0, (k,)) == ParamPoly.const((), Fraction(-1, k))


def test_exp_requires_zero_constant_term():
    with pytest.raises(SeriesError):
        one().exp()


def test_exp_divergent_input_raises():
    # u + 1/u keeps a constant-term contribution alive forever
    a = mono(1) + mono(-1)
    with pytest.raises(SeriesError):
        a.exp()


def test_pow_param_integer_consistency():
    spec = TruncationSpec(0, 0, ((0, 4),))
    base = MultiSeries.one(spec, ()) - MultiSeries.monomial(spec, (), 0, (1,))
    assert base.pow_param(2) == base * base
    assert base.pow_param(0) == MultiSeries.one(spec, ())


def test_pow_param_symbolic_first_order():
    spec = TruncationSpec(0, 0, ((0, 3),))
    t = ParamPoly.gen(RING_T, "t")
    base = MultiSeries.one(spec, RING_T) - MultiSeries.monomial(spec, RING_T, 0, (1,))
    powed = base.pow_param(t * t - 1)
    assert powed.coefficient(0, (1,)) == 1 - t * t


def test_pow_param_additivity():
    spec = TruncationSpec(0, 0, ((0, 4),))
    base = MultiSeries.one(spec, ()) - MultiSeries.monomial(spec, (), 0, (1,))
    assert base.pow_param(2) * base.pow_param(3) == base.pow_param(5)


# -- euler products ------------------------------------------------------------------

def test_euler_product_partition_counts():
    spec = TruncationSpec(0, 0, ((0, 20),))
    gen = euler_product(spec, (), [(0, (k,), -1, -1) for k in range(1, 21)])
    for n in range(21):
        assert gen.coefficient(0, (n,)).constant_value() == partition_count(n)


def test_euler_product_empty_is_one():
    assert euler_product(SPEC, (), []) == one()


def test_euler_product_rejects_unit_monomial():
    with pytest.raises(SeriesError):
        euler_product(SPEC, (), [(0, (0,), 1, 1)])


def test_euler_product_vs_naive():
    spec = TruncationSpec(0, 0, ((0, 12),))
    viaeuler = euler_product(spec, (), [(0, (k,), -1, -1) for k in range(1, 13)])
    factors = []
    for k in range(1, 13):
        inv_terms = {}
        j = 0
        while j * k <= 12:
            inv_terms[(0, j * k)] = ParamPoly.const((), 1)
            j += 1
        factors.append(MultiSeries(spec, (), inv_terms))
    assert viaeuler == naive_product(factors, spec)


# -- comparison, restriction, rendering -------------------------------------------

def test_first_mismatch_reports_canonical_first():
    a = one()
    b = one() + mono(2, 1)
    got = first_mismatch(a, b)
    assert got is not None
    key, ca, cb = got
    assert key == (2, 1)
    assert ca.is_zero() and cb == ParamPoly.const((), 1)
    assert first_mismatch(a, a) is None


def test_restrict_drops_outside():
    s = one() + mono(8)
    narrowed = s.restrict(TruncationSpec(-4, 4, ((0, 4),)))
    assert narrowed == MultiSeries.one(TruncationSpec(-4, 4, ((0, 4),)), ())


def test_z_total_cap():
    spec = TruncationSpec(0, 0, ((0, 4), (0, 4)), z_total=4)
    assert not spec.contains((0, 3, 2))
    assert spec.contains((0, 2, 2))
    a = MultiSeries.monomial(spec, (), 0, (2, 2))
    assert (a * a).is_zero()


def test_render():
    # graded-lex order puts the q^-1 term (total degree -2) first
    s = one() + mono(1, 1, Fraction(1, 2)) - mono(-2)
    assert render_series(s) == "-q^-1 + 1 + 1/2*q^{1/2}*z1"


def test_json_shape():
    s = one() + mono(2, 1)
    data = s.to_json()
    assert data["terms"][0] == {"u_exp": 0, "z_exps": [0], "coeff": [
        {"param_exps": [], "numerator": 1, "denominator": 1}
    ]}
    assert data["truncation"]["u_window"] == [-8, 8]
