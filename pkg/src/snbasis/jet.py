"""Truncated multivariate Taylor arithmetic through third order.

A :class:`Jet3` carries a value together with the gradient, Hessian and
third-derivative tensor of some function of ``P`` variables at a fixed point.
Arithmetic and elementary functions propagate all four exactly to third
order, so derivatives come out free of finite-difference error.
"""

from __future__ import annotations

import math
from numbers import Real

import numpy as np


def _sym3(h: np.ndarray, g: np.ndarray) -> np.ndarray:
    # h_ab g_c + h_ac g_b + h_bc g_a
    return (h[:, :, None] * g[None, None, :]
            + h[:, None, :] * g[None, :, None]
            + h[None, :, :] * g[:, None, None])


class Jet3:
    __slots__ = ("v", "g", "h", "t")

    def __init__(self, v: float, g: np.ndarray, h: np.ndarray, t: np.ndarray):
        self.v = float(v)
        self.g = g
        self.h = h
        self.t = t

    @property
    def size(self) -> int:
        return self.g.shape[0]

    @classmethod
    def constant(cls, value: float, size: int) -> "Jet3":
        return cls(value, np.zeros(size), np.zeros((size, size)), np.zeros((size, size, size)))

    @classmethod
    def variable(cls, value: float, index: int, size: int) -> "Jet3":
        jet = cls.constant(value, size)
        jet.g[index] = 1.0
        return jet

    @classmethod
    def variables(cls, values, size: int | None = None) -> list["Jet3"]:
        values = list(values)
        size = len(values) if size is None else size
        return [cls.variable(v, i, size) for i, v in enumerate(values)]

    def _lift(self, other) -> "Jet3":
        if isinstance(other, Jet3):
            return other
        return Jet3.constant(float(other), self.size)

    def __add__(self, other):
        if isinstance(other, Real):
            return Jet3(self.v + other, self.g, self.h, self.t)
        return Jet3(self.v + other.v, self.g + other.g, self.h + other.h, self.t + other.t)

    __radd__ = __add__

    def __neg__(self):
        return Jet3(-self.v, -self.g, -self.h, -self.t)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Real):
            return Jet3(self.v * other, self.g * other, self.h * other, self.t * other)
        a, b = self, other
        g = a.v * b.g + b.v * a.g
        ab = np.outer(a.g, b.g)
        h = a.v * b.h + b.v * a.h + ab + ab.T
        t = a.v * b.t + b.v * a.t + _sym3(a.h, b.g) + _sym3(b.h, a.g)
        return Jet3(a.v * b.v, g, h, t)

    __rmul__ = __mul__

    def compose(self, d0: float, d1: float, d2: float, d3: float) -> "Jet3":
        """phi(self) given phi and its first three derivatives at ``self.v``."""
        g = d1 * self.g
        gg = np.outer(self.g, self.g)
        h = d1 * self.h + d2 * gg
        t = (d1 * self.t + d2 * _sym3(self.h, self.g)
             + d3 * gg[:, :, None] * self.g[None, None, :])
        return Jet3(d0, g, h, t)

    def reciprocal(self) -> "Jet3":
        x = self.v
        if x == 0.0:
            raise ZeroDivisionError("reciprocal of a jet with zero value")
        return self.compose(1 / x, -1 / x**2, 2 / x**3, -6 / x**4)

    def __truediv__(self, other):
        if isinstance(other, Real):
            return self * (1.0 / other)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, n: int):
        if n != 2:
            raise NotImplementedError("only squaring is supported")
        return self * self

    def log(self) -> "Jet3":
        x = self.v
        if x <= 0.0:
            raise ValueError(f"log of non-positive jet value {x}")
        return self.compose(math.log(x), 1 / x, -1 / x**2, 2 / x**3)

    def exp(self) -> "Jet3":
        e = math.exp(self.v)
        return self.compose(e, e, e, e)

    def sqrt(self) -> "Jet3":
        x = self.v
        if x <= 0.0:
            raise ValueError(f"sqrt of non-positive jet value {x}")
        s = math.sqrt(x)
        return self.compose(s, 0.5 / s, -0.25 / (s * x), 0.375 / (s * x * x))

    def __repr__(self) -> str:
        return f"Jet3(v={self.v!r}, size={self.size})"


def log(x):
    return x.log() if isinstance(x, Jet3) else math.log(x)


def exp(x):
    return x.exp() if isinstance(x, Jet3) else math.exp(x)


def sqrt(x):
    return x.sqrt() if isinstance(x, Jet3) else math.sqrt(x)


def value(x) -> float:
    return x.v if isinstance(x, Jet3) else float(x)
