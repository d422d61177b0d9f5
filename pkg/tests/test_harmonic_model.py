import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from snbasis.errors import Dissociated
from snbasis.graphs import enumerate_graphs
from snbasis.harmonic_model import (ALL_SIGNATURES, DISJOINT_PAIRS, DOUBLE_LOOP, LINK,
                                    LINK_LOOP_EACH_END, LINK_LOOP_ON_END, LOOP, NONZERO_CLASSES,
                                    SAME_PAIR, SEPARATE_LOOPS, TRIANGLE, TRIPLE_LOOP,
                                    ModelParams, aux_constants, derive_params, evaluate,
                                    first_order_coefficients, n_coordinates, omega_tensor,
                                    zero_classes)
from snbasis.invariants import contract, reconstruct


def test_parameters_from_couplings():
    p = derive_params(5, omega_t=2.0, omega_p2=4.0 * 19.8)
    assert p.lam == pytest.approx(10.0)
    assert p.gamma_inf == pytest.approx(9 / 14)
    assert p.r_inf2 == pytest.approx(14 / 100)
    assert p.lambda_eff == pytest.approx(50 / 14)


def test_from_lambda_matches_couplings():
    a = ModelParams.from_lambda(6, 3.0)
    b = derive_params(6, 1.0, a.omega_p2)
    assert b.lam == pytest.approx(3.0)
    assert b.gamma_inf == pytest.approx(a.gamma_inf)


def test_r_inf_two_forms():
    p = ModelParams.from_lambda(7, 4.0)
    assert p.r_inf2 == pytest.approx(1 / (2 * (1 + 6 * p.gamma_inf)))


def test_threshold_dissociates():
    with pytest.raises(Dissociated):
        derive_params(5, 1.0, -0.2)
    with pytest.raises(Dissociated):
        derive_params(5, 1.0, -0.3)
    with pytest.raises(Dissociated):
        ModelParams.from_lambda(5, 0.0)
    derive_params(5, 1.0, -0.2 + 1e-9)


@pytest.mark.parametrize("kw", [dict(n_particles=1), dict(n_particles=3, omega_t=0.0)])
def test_bad_parameters(kw):
    with pytest.raises(ValueError):
        derive_params(**kw)


@settings(max_examples=100, deadline=None)
@given(n=st.integers(2, 12), x=st.floats(1e-6, 50.0))
def test_gamma_inf_range(n, x):
    p = ModelParams.from_lambda(n, x)
    assert -1 / (n - 1) < p.gamma_inf < 1


def test_aux_constants():
    p = ModelParams.from_lambda(4, 3.0)
    g = p.gamma_inf
    k = aux_constants(p)
    assert g == pytest.approx(1 / 3)
    assert k.A == pytest.approx(1 / (6 * (2 / 3) * 2))
    assert k.B == pytest.approx(-8 * g ** 3 / ((4 / 9) * 4))
    assert k.D == pytest.approx(4 / 3)
    assert k.F == pytest.approx(1 / (4 / 9))
    assert k.J == pytest.approx((4 / 3) / 2)


def test_printed_formulas():
    p = ModelParams.from_lambda(7, 5.0)
    n, g, r, lam = 7, p.gamma_inf, p.r_inf, 5.0
    k = aux_constants(p)
    c = first_order_coefficients(p)
    assert c.coefficient(LOOP) == pytest.approx(-1 / r)
    assert c.coefficient(LINK) == pytest.approx(k.A * 6 * (n + 1) * g)
    assert c.coefficient(TRIPLE_LOOP) == pytest.approx(1 / (3 * r ** 3))
    assert c.coefficient(LINK_LOOP_EACH_END) == pytest.approx((lam - 1) / n)
    assert c.coefficient(TRIANGLE) == pytest.approx(k.A * (k.B + k.C * k.E + k.F))
    assert c.coefficient(SAME_PAIR) == pytest.approx(k.H * (k.I + k.J))
    assert c.coefficient(DOUBLE_LOOP) == pytest.approx(
        p.lambda_eff + (lam - 1) / (2 * n) * (p.lambda_eff - 1))


def test_corrected_quadratic_forms():
    p = ModelParams.from_lambda(7, 5.0)
    k = aux_constants(p)
    c = first_order_coefficients(p)
    assert c.coefficient(LINK_LOOP_ON_END) == pytest.approx(-(4.0 / 7) * p.r_inf)
    assert c.coefficient(SEPARATE_LOOPS) == pytest.approx(-(4.0 / 7) * p.gamma_inf / 2)
    assert c.coefficient(DISJOINT_PAIRS) == pytest.approx(k.H * k.I)


def test_noninteracting_limit():
    c = first_order_coefficients(ModelParams.from_lambda(6, 1))
    assert c.params.gamma_inf == 0
    assert c.coefficient(DOUBLE_LOOP) == 1
    assert c.coefficient(LOOP) == pytest.approx(-math.sqrt(2))
    assert c.coefficient(TRIPLE_LOOP) == pytest.approx(2 * math.sqrt(2) / 3)
    assert c.coefficient(LINK) == 0
    assert c.coefficient(LINK_LOOP_ON_END) == 0
    assert c.coefficient(TRIANGLE) == pytest.approx(1 / 6)
    assert c.coefficient(SAME_PAIR) == pytest.approx(1 / 4)


def test_every_class_listed():
    c = first_order_coefficients(ModelParams.from_lambda(5, 2.0))
    for sig in ALL_SIGNATURES:
        assert set(c[sig].coefficients) == set(enumerate_graphs(sig, 5))
        for g in zero_classes(sig, 5):
            assert c[sig][g] == 0.0


def test_zero_class_count():
    assert sum(len(zero_classes(s, 8)) for s in ALL_SIGNATURES) == 14
    assert sum(len(v) for v in NONZERO_CLASSES.values()) == 18


@settings(max_examples=40, deadline=None)
@given(n=st.integers(2, 7), x=st.floats(0.05, 30.0))
def test_omega_positive_definite(n, x):
    m = omega_tensor(ModelParams.from_lambda(n, x))
    assert m.shape == (n_coordinates(n),) * 2
    assert np.allclose(m, m.T)
    assert np.linalg.eigvalsh(m).min() > 0


def test_omega_zero_coupling_block_at_lambda_one():
    n = 4
    m = omega_tensor(ModelParams.from_lambda(n, 1.0))
    assert np.all(m[n:, :n] == 0)
    assert np.allclose(m[:n, :n], np.eye(n))


def test_evaluate_matches_omega():
    p = ModelParams.from_lambda(5, 2.0)
    c = first_order_coefficients(p)
    rng = np.random.default_rng(0)
    x, y = rng.normal(size=5), rng.normal(size=10)
    delta, quad = evaluate(c, x, y)
    v = np.concatenate([x, y])
    assert quad == pytest.approx(v @ omega_tensor(p) @ v)
    cubic = sum(contract(reconstruct(c[s]), x, y) for s in ("rrr", "grr", "ggr", "ggg"))
    linear = c.coefficient(LOOP) * x.sum() + c.coefficient(LINK) * y.sum()
    assert delta == pytest.approx(cubic + linear)
