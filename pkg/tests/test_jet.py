import math

import numpy as np
import pytest

from snbasis import jet
from snbasis.harmonic_model import ModelParams
from snbasis.jet import Jet3
from snbasis.oracle import InternalPoint, derivative_tensors, log_psi_j


def f_scalar(x):
    a, b, c = x
    return jet.log(a * b + 2.0) * jet.exp(c) / jet.sqrt(a + 3.0) - a * a / (b - 4.0)


def fd_derivatives(f, x0, h=1e-3):
    """Central differences through third order."""
    x0 = np.asarray(x0, float)
    p = len(x0)
    e = np.eye(p) * h
    g = np.array([(f(x0 + e[i]) - f(x0 - e[i])) / (2 * h) for i in range(p)])
    H = np.empty((p, p))
    for i in range(p):
        for j in range(p):
            H[i, j] = (f(x0 + e[i] + e[j]) - f(x0 + e[i] - e[j])
                       - f(x0 - e[i] + e[j]) + f(x0 - e[i] - e[j])) / (4 * h * h)
    T = np.empty((p, p, p))
    for i in range(p):
        for j in range(p):
            for k in range(p):
                s = 0.0
                for si, sj, sk in np.ndindex(2, 2, 2):
                    sign = (-1) ** (si + sj + sk)
                    s += sign * f(x0 + (1 - 2 * si) * e[i] + (1 - 2 * sj) * e[j]
                                  + (1 - 2 * sk) * e[k])
                T[i, j, k] = s / (8 * h ** 3)
    return g, H, T


def test_variable_seeds_gradient():
    x = Jet3.variable(2.0, 1, 3)
    assert list(x.g) == [0, 1, 0]


def test_product_rule_cubic():
    x, y = Jet3.variables([1.5, -0.5])
    f = x * x * y
    assert f.v == pytest.approx(1.5 ** 2 * -0.5)
    assert f.t[0, 0, 1] == pytest.approx(2.0)
    assert f.t[0, 0, 0] == 0.0


def test_elementary_functions_third_derivative():
    x = Jet3.variable(0.7, 0, 1)
    assert x.log().t[0, 0, 0] == pytest.approx(2 / 0.7 ** 3)
    assert x.exp().t[0, 0, 0] == pytest.approx(math.exp(0.7))
    assert x.sqrt().t[0, 0, 0] == pytest.approx(0.375 * 0.7 ** -2.5)
    assert (1 / x).t[0, 0, 0] == pytest.approx(-6 / 0.7 ** 4)


def test_domain_errors():
    with pytest.raises(ValueError):
        Jet3.variable(-1.0, 0, 1).log()
    with pytest.raises(ZeroDivisionError):
        Jet3.variable(0.0, 0, 1).reciprocal()


def test_against_finite_differences():
    x0 = [0.4, 1.3, -0.2]
    j = f_scalar(Jet3.variables(x0))
    g, H, T = fd_derivatives(lambda x: f_scalar(list(x)), x0)
    assert j.g == pytest.approx(g, rel=1e-6)
    assert j.h == pytest.approx(H, rel=1e-5)
    assert j.t == pytest.approx(T, rel=1e-3, abs=1e-5)


def test_log_psi_derivatives_against_finite_differences():
    p = ModelParams.from_lambda(3, 2.5)
    D = 40.0
    d = derivative_tensors(p, D)
    n = p.n_particles

    def f(v):
        return log_psi_j(p, InternalPoint(v[:n], v[n:]), D)

    def grad_k(k):
        return lambda v: (f(v + h * np.eye(len(v))[k]) - f(v - h * np.eye(len(v))[k])) / (2 * h)

    h = 1e-4
    y0 = np.zeros(n + n * (n - 1) // 2)
    g_fd = np.array([grad_k(k)(y0) for k in range(len(y0))])
    # gradient is O(D^(1/2)) and cancels heavily; compare on the scale of its parts
    assert np.max(np.abs(d.gradient - g_fd)) <= 1e-6 * D
    H_fd = np.array([[(grad_k(k)(y0 + h * np.eye(len(y0))[l]) - grad_k(k)(y0 - h * np.eye(len(y0))[l]))
                      / (2 * h) for l in range(len(y0))] for k in range(len(y0))])
    assert d.hessian == pytest.approx(H_fd, rel=1e-6, abs=1e-6 * np.max(np.abs(d.hessian)))
