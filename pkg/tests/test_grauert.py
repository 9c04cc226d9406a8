import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from grauert_cert.expr import A, XI, SymbolId
from grauert_cert.grauert import (
    ModelError, build_model, bundle_cocycle_residual, bundle_combine, bundle_divisor_Y, bundle_L,
    bundle_pullback_F, perturb_transition, restrict_to_Y, theta_transition, trivial_bundle,
)
from grauert_cert.jet import coefficient, compose, invert_series
from conftest import gen


def all_bundles(m):
    F, Yb, L = bundle_pullback_F(m), bundle_divisor_Y(m), bundle_L(m)
    return {"p*F": F, "[Y]": Yb, "L": L}


# -- model -------------------------------------------------------------------

def test_build_model_generators(model3):
    names = [str(s) for s in model3.free_generators]
    assert sorted(names) == ["a(1,2)", "a(2,3)", "xi(1,2)", "xi(2,3)"]


def test_build_model_needs_triples():
    with pytest.raises(ModelError):
        build_model(2, 2, 1, 3)


def test_build_model_simplex_counts():
    m = build_model(4, 2, 1, 3)
    assert len(m.nerve.unordered_pairs) == 6
    assert len(m.nerve.triples) == 4


def test_build_model_rejects_low_genus_and_order():
    with pytest.raises(ModelError):
        build_model(3, 1, 1, 3)
    with pytest.raises(ModelError):
        build_model(3, 2, 1, 0)


# -- theta transitions -------------------------------------------------------

def test_theta_transition_coefficients(model3):
    m = model3
    for j, k in m.nerve.pairs:
        tt = theta_transition(m, j, k)
        a, xi = m.a(j, k), m.xi(j, k)
        assert coefficient(tt, 0) == 0
        assert coefficient(tt, 1) == 1 / a
        assert coefficient(tt, 2) == -xi / a ** 2
        assert tt.chart == k


@pytest.mark.parametrize("n", [3, 4])
def test_theta_transition_roundtrip(n):
    m = build_model(n, 2, 1, 4)
    for j, k in m.nerve.pairs:
        tt = theta_transition(m, j, k)
        inv = invert_series(tt, chart=j)
        assert compose(inv, tt) == m.variable(k)
        assert compose(tt, inv) == m.variable(j)
        assert inv == theta_transition(m, k, j)


# -- bundles -----------------------------------------------------------------

def test_pullback_F_constants(model3):
    F = bundle_pullback_F(model3)
    A1, A2 = gen(A, 1), gen(A, 2)
    assert F[(1, 2)] == model3.const(A1, 1)
    assert F[(1, 3)] == model3.const(A1 * A2, 1)
    assert F[(2, 1)] == model3.const(A1.inverse(), 2)


def test_divisor_Y_coefficients(model3):
    m = model3
    Yb = bundle_divisor_Y(m)
    for j, k in m.nerve.pairs:
        a, xi = m.a(j, k), m.xi(j, k)
        assert coefficient(Yb[(j, k)], 0) == 1 / a
        assert coefficient(Yb[(j, k)], 1) == -xi / a
        # v_j theta_j = v_k theta_k: g_jk * theta_k(theta_j) / theta_j = 1
        theta_k = theta_transition(m, k, j)
        prod = Yb[(j, k)] * theta_k
        assert prod.coeffs[0] == 0 and prod.coeffs[1] == 1
        assert all(c == 0 for c in prod.coeffs[2:])


@pytest.mark.parametrize("N", [3, 5])
def test_L_transition_is_one_minus_xi_theta(N):
    m = build_model(3, 2, 1, N)
    L = bundle_L(m)
    for j, k in m.nerve.pairs:
        assert coefficient(L[(j, k)], 0) == 1
        assert coefficient(L[(j, k)], 1) == -m.xi(j, k)
        assert all(coefficient(L[(j, k)], i) == 0 for i in range(2, N + 1))


def test_L_is_tensor_of_F_and_Y(model3):
    F, Yb, L = all_bundles(model3).values()
    assert bundle_combine("tensor", F, Yb) == L


def test_tensor_with_dual_is_trivial(model3):
    for b in all_bundles(model3).values():
        assert bundle_combine("tensor", b, bundle_combine("dual", b)) == trivial_bundle(model3)


def test_dual_is_involution(model3):
    for b in all_bundles(model3).values():
        assert bundle_combine("dual", bundle_combine("dual", b)) == b


@pytest.mark.parametrize("n", [3, 4, 5])
def test_cocycle_residuals_vanish(n):
    m = build_model(n, 2, 1, 3)
    for b in all_bundles(m).values():
        for t in m.nerve.triples:
            assert bundle_cocycle_residual(b, t).is_zero()


def test_reversal_compatibility(model3):
    for b in all_bundles(model3).values():
        for p in model3.nerve.pairs:
            assert b.compatibility_defect(*p).is_zero()


def test_corrupted_cochain_has_linear_residual(model3):
    L = bundle_L(model3)
    bad = perturb_transition(L, (1, 2), SymbolId(XI, 1, 2))
    res = bundle_cocycle_residual(bad, (1, 2, 3))
    assert res.coeffs[0] == 0
    assert res.coeffs[1] != 0


def test_restrict_to_Y(model3):
    m = model3
    flatL = restrict_to_Y(bundle_L(m))
    assert flatL.trivial and all(c == 1 for c in flatL.constants.values())
    assert all(v == 0 for v in flatL.cocycle_defects(m.nerve.triples).values())
    assert restrict_to_Y(trivial_bundle(m)).trivial
    flatF = restrict_to_Y(bundle_pullback_F(m))
    assert not flatF.trivial
    assert all(flatF.constants[p] == m.a(*p) for p in m.nerve.pairs)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6), st.integers(3, 5))
def test_random_tensor_dual_combinations_are_cocycles(seed, n):
    m = build_model(n, 2, 1, 3)
    rng = random.Random(seed)
    basis = list(all_bundles(m).values())
    b = rng.choice(basis)
    for _ in range(rng.randint(1, 3)):
        other = rng.choice(basis)
        if rng.random() < 0.5:
            other = bundle_combine("dual", other)
        b = bundle_combine("tensor", b, other)
    t = rng.choice(list(itertools.permutations(m.nerve.charts, 3)))
    assert bundle_cocycle_residual(b, t).is_zero()


def test_perturb_inverted_generator_needs_scale(model3):
    L = bundle_L(model3)
    a12 = SymbolId(A, 1, 2)
    with pytest.raises(ModelError):
        perturb_transition(L, (2, 1), a12)
    bad = perturb_transition(L, (2, 1), a12, scale=2)
    assert not bad.compatibility_defect(2, 1).is_zero()


def test_residual_with_non_invertible_transition(model3):
    F = bundle_pullback_F(model3)
    g = F[(1, 3)]
    broken = dict(F.transitions)
    broken[(1, 3)] = g + model3.const(1, 1)
    b = type(F)(model3, broken, "broken")
    res = bundle_cocycle_residual(b, (1, 2, 3))
    assert res == -model3.const(1, 1)
