"""Numerical expansion of the exact wave function, independent of the closed forms.

The exact Jacobian-weighted ground state is evaluated in dimensionally
scaled coordinates about the large-D symmetric point, differentiated to
third order with :class:`~snbasis.jet.Jet3` arithmetic, and the
binary-invariant coefficients are read off block by block.  Finite-D
corrections are removed by Richardson extrapolation along a geometric
ladder of dimensions.  Nothing here uses the closed-form coefficients.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import jet
from .errors import NonConvergent, OutsideDomain
from .graphs import SlotKind, parse_signature, signature_text
from .harmonic_model import ALL_SIGNATURES, ModelParams, n_coordinates
from .invariants import CoefficientTable, InvariantTensor, decompose
from .jet import Jet3


@dataclass(frozen=True)
class InternalPoint:
    """Displacements r'_i and gamma'_ij (pairs in the order 12, 13, 23, 14, ...)."""

    radial: np.ndarray
    angular: np.ndarray

    @classmethod
    def zero(cls, n_particles: int) -> "InternalPoint":
        return cls(np.zeros(n_particles), np.zeros(n_particles * (n_particles - 1) // 2))

    def vector(self) -> np.ndarray:
        return np.concatenate([np.asarray(self.radial, float), np.asarray(self.angular, float)])


def _pivots(entries: list[list]) -> list:
    """Gaussian elimination without pivoting; works on floats and jets alike."""
    a = [row[:] for row in entries]
    n = len(a)
    pivots = []
    for k in range(n):
        p = a[k][k]
        if not jet.value(p) > 0:
            raise OutsideDomain("Gram matrix is not positive definite")
        pivots.append(p)
        inv = 1 / p
        for i in range(k + 1, n):
            factor = a[i][k] * inv
            for j in range(k + 1, n):
                a[i][j] = a[i][j] - factor * a[k][j]
    return pivots


def gram_entries(gammas: Sequence, n_particles: int) -> list[list]:
    """N x N matrix (as nested lists) with unit diagonal and gamma_ij off the diagonal."""
    m = [[1.0] * n_particles for _ in range(n_particles)]
    pos = 0
    for j in range(1, n_particles):
        for i in range(j):
            m[i][j] = m[j][i] = gammas[pos]
            pos += 1
    return m


def gram_determinant(gamma_matrix) -> float:
    """Grammian of a symmetric unit-diagonal cosine matrix."""
    m = np.asarray(gamma_matrix, float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("Gram matrix must be square")
    if not np.allclose(m, m.T, rtol=0, atol=1e-14) or not np.allclose(np.diag(m), 1.0):
        raise ValueError("Gram matrix must be symmetric with unit diagonal")
    try:
        return math.prod(_pivots(m.tolist()))
    except OutsideDomain:
        raise OutsideDomain("non-positive Grammian") from None


def gram_determinant_jet(gammas: Sequence, n_particles: int):
    """Grammian as a float or jet, for gammas given as floats or jets."""
    pivots = _pivots(gram_entries(gammas, n_particles))
    out = pivots[0]
    for p in pivots[1:]:
        out = out * p
    return out


def _log_gram(gammas, n_particles):
    total = 0.0
    for p in _pivots(gram_entries(gammas, n_particles)):
        total = total + jet.log(p)
    return total


def log_psi_j(p: ModelParams, point, D: float):
    """ln Psi_J up to displacement-independent constants.

    ``point`` is an :class:`InternalPoint` or a sequence of N(N+1)/2 floats
    or jets (radial displacements first).  Returns a float or a jet.
    """
    n = p.n_particles
    if not D > n + 1:
        raise ValueError(f"dimension D={D} must exceed N+1={n + 1}")
    y = point.vector() if isinstance(point, InternalPoint) else list(point)
    if len(y) != n_coordinates(n):
        raise ValueError(f"expected {n_coordinates(n)} displacements, got {len(y)}")
    s = D ** -0.5
    r = [p.r_inf + s * y[i] for i in range(n)]
    gam = [p.gamma_inf + s * y[n + k] for k in range(len(y) - n)]
    if any(jet.value(ri) <= 0 for ri in r):
        raise OutsideDomain("non-positive radius")
    try:
        log_gram = _log_gram(gam, n)
    except OutsideDomain:
        raise OutsideDomain("non-positive Grammian") from None

    sum_r2 = 0.0
    sum_log_r = 0.0
    for ri in r:
        sum_r2 = sum_r2 + ri * ri
        sum_log_r = sum_log_r + jet.log(ri)
    cross = 0.0
    pos = 0
    for j in range(1, n):
        for i in range(j):
            cross = cross + r[i] * r[j] * gam[pos]
            pos += 1
    big_r2 = (sum_r2 + 2 * cross) * (1.0 / n)
    rho2 = sum_r2 - big_r2
    return ((D - n - 1) / 4 * log_gram + (D - 1) / 2 * sum_log_r
            - D / 2 * big_r2 - p.lam * D / 2 * rho2)


@dataclass(frozen=True)
class DerivativeTensors:
    D: float
    gradient: np.ndarray
    hessian: np.ndarray
    third: np.ndarray


def derivative_tensors(p: ModelParams, D: float) -> DerivativeTensors:
    """Gradient, Hessian and third derivatives of ln Psi_J at y' = 0."""
    size = n_coordinates(p.n_particles)
    out = log_psi_j(p, Jet3.variables(np.zeros(size)), D)
    return DerivativeTensors(float(D), out.g, out.h, out.t)


def _multiplicity(signature) -> int:
    na = sum(1 for k in signature if k is SlotKind.ANGULAR)
    return math.factorial(len(signature)) // (math.factorial(na) * math.factorial(len(signature) - na))


def block_of(full: np.ndarray, signature, n_particles: int) -> np.ndarray:
    """Restrict a tensor over the combined coordinates to one slot-kind block."""
    signature = parse_signature(signature)
    radial = np.arange(n_particles)
    angular = np.arange(n_particles, n_coordinates(n_particles))
    idx = [radial if k is SlotKind.RADIAL else angular for k in signature]
    return full[np.ix_(*idx)]


def coefficient_blocks(d: DerivativeTensors, n_particles: int) -> dict[str, np.ndarray]:
    """Per-signature coefficient tensors at one dimension.

    ln Psi_J = -y'^T Omega y' + delta^(1/2) Delta(y') / 2 + ..., so the linear
    and cubic blocks are 2 (gradient, third/6) / delta^(1/2) and the quadratic
    ones -Hessian/2, each times the number of slot orderings the block stands for.
    """
    root_delta = d.D ** -0.5
    full = {1: 2 * d.gradient / root_delta, 2: -d.hessian / 2, 3: d.third / (3 * root_delta)}
    blocks = {}
    for sig in ALL_SIGNATURES:
        s = parse_signature(sig)
        blocks[sig] = _multiplicity(s) * block_of(full[len(s)], s, n_particles)
    return blocks


@dataclass(frozen=True)
class Ladder:
    d0: float
    ratio: float = 4.0
    steps: int = 6

    def __post_init__(self):
        if not (self.d0 > 0 and self.ratio > 1 and self.steps >= 2):
            raise ValueError("ladder needs D0 > 0, ratio > 1 and at least 2 steps")

    @property
    def values(self) -> list[float]:
        return [self.d0 * self.ratio ** k for k in range(self.steps)]

    @classmethod
    def parse(cls, text: str) -> "Ladder":
        parts = [x.strip() for x in text.split(",")]
        if len(parts) != 3:
            raise ValueError(f"ladder must be 'D0,ratio,steps', got {text!r}")
        return cls(float(parts[0]), float(parts[1]), int(parts[2]))

    def text(self) -> str:
        return f"{self.d0:g},{self.ratio:g},{self.steps}"


def default_ladder(n_particles: int) -> Ladder:
    return Ladder(20.0 * n_particles, 4.0, 6)


def richardson(values: Sequence[float], ratio: float, stages: int | None = None):
    """Eliminate error terms in delta, delta^2, ... from values at delta/ratio^k.

    Returns (estimate, error estimate, successive stage differences).
    """
    values = [float(v) for v in values]
    if stages is None:
        stages = min(4, len(values) - 1)
    stages = min(stages, len(values) - 1)
    column = values
    best = [values[-1]]
    for m in range(1, stages + 1):
        f = ratio ** m
        column = [(f * column[k + 1] - column[k]) / (f - 1) for k in range(len(column) - 1)]
        best.append(column[-1])
    diffs = [abs(best[m] - best[m - 1]) for m in range(1, len(best))]
    if len(column) >= 2:
        error = abs(column[-1] - column[-2])
    else:
        error = diffs[-1] if diffs else 0.0
    return best[-1], error, diffs


@dataclass
class ExtrapolatedCoefficients:
    params: ModelParams
    ladder: list
    tables: dict = field(default_factory=dict)
    errors: dict = field(default_factory=dict)

    def __getitem__(self, signature: str) -> CoefficientTable:
        return self.tables[signature_text(parse_signature(signature))]

    def max_abs(self) -> float:
        return max(abs(v) for t in self.tables.values() for v in t.coefficients.values())


def _workers(requested: int | None) -> int:
    if requested is not None:
        return max(1, requested)
    env = os.environ.get("SNBASIS_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def rung_tables(p: ModelParams, D: float, tolerance: float = 1e-10) -> dict[str, CoefficientTable]:
    """Coefficient tables at a single dimension, with orbit constancy checked."""
    n = p.n_particles
    blocks = coefficient_blocks(derivative_tensors(p, D), n)
    return {sig: decompose(InvariantTensor(sig, n, blocks[sig]), tolerance) for sig in blocks}


def extrapolate_coefficients(p: ModelParams, ladder: Ladder | Sequence[float] | None = None,
                             tolerance: float = 1e-10, noise_rtol: float = 1e-9,
                             stages: int = 4, workers: int | None = None) -> ExtrapolatedCoefficients:
    """Coefficients recovered from the exact wave function, extrapolated to D -> infinity.

    ``tolerance`` bounds the orbit disagreement accepted at every rung.
    Richardson differences must shrink from stage to stage unless they are
    already below ``noise_rtol`` times the largest coefficient; otherwise
    :class:`NonConvergent` is raised.
    """
    if ladder is None:
        ladder = default_ladder(p.n_particles)
    if isinstance(ladder, Ladder):
        dims, ratio = ladder.values, ladder.ratio
    else:
        dims = [float(x) for x in ladder]
        if len(dims) < 2:
            raise ValueError("ladder needs at least two dimensions")
        ratio = dims[1] / dims[0]
        if not all(math.isclose(b / a, ratio, rel_tol=1e-12) for a, b in zip(dims, dims[1:])):
            raise ValueError("ladder must be geometric")

    with ThreadPoolExecutor(max_workers=_workers(workers)) as pool:
        rungs = list(pool.map(lambda D: rung_tables(p, D, tolerance), dims))

    n = p.n_particles
    estimates: dict[str, dict] = {}
    errors: dict[str, dict] = {}
    history = []
    for sig in ALL_SIGNATURES:
        estimates[sig], errors[sig] = {}, {}
        for g in rungs[0][sig].coefficients:
            seq = [r[sig].coefficients[g] for r in rungs]
            est, err, diffs = richardson(seq, ratio, stages)
            estimates[sig][g] = est
            errors[sig][g] = err
            history.append((sig, g, diffs))

    scale = max([abs(v) for t in estimates.values() for v in t.values()] + [1e-300])
    floor = noise_rtol * scale
    for sig, g, diffs in history:
        for a, b in zip(diffs, diffs[1:]):
            if b > a and b > floor:
                raise NonConvergent(f"Richardson differences grow for {sig} {g}: {diffs}")

    return ExtrapolatedCoefficients(
        params=p,
        ladder=list(dims),
        tables={s: CoefficientTable(s, n, estimates[s]) for s in ALL_SIGNATURES},
        errors={s: CoefficientTable(s, n, errors[s]) for s in ALL_SIGNATURES},
    )
