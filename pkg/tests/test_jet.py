import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from grauert_cert.expr import A, XI, Expr, NonUnitError, evaluate
from grauert_cert.jet import (
    Jet, JetError, OriginError, coefficient, compose, from_rational, invert_series, jet_arith,
)
from conftest import gen

N3 = 3
A1, X1, A2, X2 = gen(A, 1), gen(XI, 1), gen(A, 2), gen(XI, 2)


def jet(coeffs, chart=1):
    return Jet.from_coeffs(chart, coeffs, len(coeffs) - 1, N3)


def t(order, chart=1):
    return Jet.variable(chart, order, N3)


def test_from_rational_theta_transition_order2():
    tk = t(2, chart=2)
    j = from_rational(tk, Jet.constant(A1, 2, 2, N3) + tk.scale(X1))
    assert j.coeffs == (0, A1.inverse(), -X1 / A1 ** 2)


def test_from_rational_identity():
    one = Jet.constant(1, 1, 3, N3)
    assert from_rational(one, one) == one


def test_from_rational_inverse_transition_order3():
    tj = t(3)
    j = from_rational(tj.scale(A1), Jet.constant(1, 1, 3, N3) - tj.scale(X1))
    assert j.coeffs == (0, A1, A1 * X1, A1 * X1 ** 2)


def test_from_rational_needs_unit():
    with pytest.raises(NonUnitError):
        from_rational(t(2), jet([X1, 1, 0]))


def test_telescoping_product():
    lhs = jet([1, -X1, 0]) * jet([1, X1, X1 ** 2])
    assert lhs == Jet.constant(1, 1, 2, N3)


def test_add_negation_is_zero():
    j = jet([A1, X1, X2, 1])
    assert jet_arith("add", j, -j).is_zero()


def test_chart_and_order_mismatch():
    with pytest.raises(JetError):
        jet([1, 2]) + jet([1, 2], chart=2)
    with pytest.raises(JetError):
        jet([1, 2]) + jet([1, 2, 3])


def test_compose_with_identity_retags():
    f = jet([A1, X1, X2, 1])
    assert compose(f, t(3, chart=2)) == f.retag(2)


def test_compose_requires_origin():
    with pytest.raises(OriginError):
        compose(jet([1, 1, 0, 0]), jet([1, 1, 0, 0]))


def test_compose_l_transition_is_exactly_linear():
    # a/(a + xi t_k) with t_k = a t_j/(1 - xi t_j) gives 1 - xi t_j
    for N in (3, 5):
        tk = t(N, chart=2)
        eq1 = from_rational(Jet.constant(A1, 2, N, N3), Jet.constant(A1, 2, N, N3) + tk.scale(X1))
        one = Jet.constant(1, 1, N, N3)
        theta_k = from_rational(t(N).scale(A1), one - t(N).scale(X1))
        assert compose(eq1, theta_k) == one - t(N).scale(X1)


def test_compose_mutual_inverses():
    one = Jet.constant(1, 1, 4, N3)
    theta_k = from_rational(t(4).scale(A1), one - t(4).scale(X1))
    tk = t(4, chart=2)
    theta_j = from_rational(tk, Jet.constant(A1, 2, 4, N3) + tk.scale(X1))
    assert compose(theta_j, theta_k) == t(4)


def test_coefficient():
    L = jet([1, -X1, 0, 0])
    assert coefficient(L, 0) == 1
    assert coefficient(L, 1) == -X1
    assert all(coefficient(Jet.constant(0, 1, 3, N3), m) == 0 for m in range(4))
    with pytest.raises(IndexError):
        coefficient(L, 4)


def test_invert_series_examples():
    tk = t(3, chart=2)
    theta_j = from_rational(tk, Jet.constant(A1, 2, 3, N3) + tk.scale(X1))
    inv = invert_series(theta_j, chart=1)
    assert inv.chart == 1 and coefficient(inv, 1) == A1
    assert invert_series(t(3)) == t(3)
    assert invert_series(t(3).scale(A1 * A2)) == t(3).scale((A1 * A2).inverse())


def test_invert_series_rejects_bad_input():
    with pytest.raises(OriginError):
        invert_series(jet([1, 1, 0]))
    with pytest.raises(NonUnitError):
        invert_series(jet([0, X1, 0]))


def test_str_format():
    s = str(jet([1, -X1, 0, A1 + X1]))
    assert s == "1 - xi(1,2)*t + 0*t^2 + (a(1,2) + xi(1,2))*t^3 [chart 1, order 3]"


# -- properties --------------------------------------------------------------

SMALL = [Expr.const(c, N3) for c in (-2, -1, 1, Fraction(1, 2), 3)] + [A1, X1, A2, X2, A1 * X2]


@st.composite
def jets(draw, order, unit=False, origin=False):
    cs = [draw(st.sampled_from(SMALL)) for _ in range(order + 1)]
    if unit:
        cs[0] = draw(st.sampled_from([A1, A2, A1 * A2, Expr.const(2, N3), -A1]))
    if origin:
        cs[0] = Expr.zero(N3)
    return Jet.from_coeffs(1, cs, order, N3)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 4).flatmap(lambda N: st.tuples(jets(N), jets(N), jets(N))))
def test_ring_laws(abc):
    a, b, c = abc
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 4).flatmap(lambda N: st.tuples(jets(N), jets(N, unit=True))))
def test_div_then_mul(ab):
    a, b = ab
    assert jet_arith("div", a, b) * b == a


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4).flatmap(
    lambda N: st.tuples(jets(N), jets(N, origin=True), jets(N, origin=True))))
def test_compose_associative(fgh):
    f, g, h = fgh
    assert compose(compose(f, g), h) == compose(f, compose(g, h))


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4).flatmap(lambda N: jets(N, origin=True)),
       st.sampled_from([A1, -A2, A1 * A2, Expr.const(3, N3)]))
def test_invert_roundtrip(j, c1):
    j = Jet(1, (j.coeffs[0], c1) + j.coeffs[2:])
    inv = invert_series(j)
    ident = t(j.order)
    assert compose(inv, j) == ident
    assert compose(j, inv) == ident


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 4).flatmap(lambda N: st.tuples(jets(N), jets(N))), st.integers(0, 10**6))
def test_evaluate_commutes_with_sum(ab, seed):
    a, b = ab
    rng = random.Random(seed)
    env = {"a(1,2)": rng.uniform(0.5, 2), "a(2,3)": rng.uniform(0.5, 2),
           "xi(1,2)": rng.uniform(-1, 1), "xi(2,3)": rng.uniform(-1, 1)}
    th = rng.uniform(-0.1, 0.1)
    lhs = (a + b).evaluate(env, th)
    rhs = a.evaluate(env, th) + b.evaluate(env, th)
    assert abs(lhs - rhs) <= 1e-8 * max(1.0, abs(rhs))
    prod = (a * b).evaluate(env, th)
    # truncation: the product jet drops t^(N+1..2N) terms
    full = a.evaluate(env, th) * b.evaluate(env, th)
    assert abs(prod - full) <= 50 * abs(th) ** (a.order + 1) * 10 ** 2
