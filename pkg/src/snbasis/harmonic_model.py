"""Closed-form first-order expansion of the harmonically interacting N-body model.

The model is N particles in a harmonic trap of frequency omega_t with
pairwise harmonic couplings of strength omega_p^2 (which may be negative,
i.e. repulsive, down to the dissociation threshold 1 + N lambda_p^2 = 0).
Its Jacobian-weighted ground state, expanded about the large-dimension
symmetric structure, has the form

    (1 + delta^(1/2) Delta(y') / 2) exp(-y'^T Omega y')

where Delta is a cubic odd polynomial and Omega a quadratic form in the
displacements y' = (r'_1..r'_N, gamma'_12, gamma'_13, gamma'_23, ...).
Both are written on the binary-invariant basis; this module gives every
coefficient in closed form.

Summation conventions for the tables: radial indices run over 1..N,
angular pairs over i<j, and each block lists its slots in standard order
(angular first), so the mixed blocks (g r, g r r, g g r) appear once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import Dissociated
from .graphs import Graph, enumerate_graphs, parse_signature, signature_text
from .invariants import CoefficientTable, InvariantTensor, contract, reconstruct

# rank 1
LOOP = Graph.parse("L(1)")
LINK = Graph.parse("E(1,2)")
# rank 2
DOUBLE_LOOP = Graph.parse("L(1)+L(1)")
SEPARATE_LOOPS = Graph.parse("L(1)+L(2)")
LINK_LOOP_ON_END = Graph.parse("E(1,2)+L(1)")
LINK_LOOP_APART = Graph.parse("E(1,2)+L(3)")
SAME_PAIR = Graph.parse("E(1,2)+E(1,2)")
ADJACENT_PAIRS = Graph.parse("E(1,2)+E(1,3)")
DISJOINT_PAIRS = Graph.parse("E(1,2)+E(3,4)")
# rank 3
TRIPLE_LOOP = Graph.parse("L(1)+L(1)+L(1)")
LINK_LOOP_EACH_END = Graph.parse("E(1,2)+L(1)+L(2)")
TRIPLE_PAIR = Graph.parse("E(1,2)+E(1,2)+E(1,2)")
DOUBLE_PAIR_ADJACENT = Graph.parse("E(1,2)+E(1,2)+E(1,3)")
DOUBLE_PAIR_DISJOINT = Graph.parse("E(1,2)+E(1,2)+E(3,4)")
STAR = Graph.parse("E(1,2)+E(1,3)+E(1,4)")
TRIANGLE = Graph.parse("E(1,2)+E(1,3)+E(2,3)")
PATH = Graph.parse("E(1,2)+E(1,3)+E(2,4)")
PATH_PLUS_PAIR = Graph.parse("E(1,2)+E(1,3)+E(4,5)")
MATCHING = Graph.parse("E(1,2)+E(3,4)+E(5,6)")

LINEAR_SIGNATURES = ("r", "g")
QUADRATIC_SIGNATURES = ("rr", "gr", "gg")
CUBIC_SIGNATURES = ("rrr", "grr", "ggr", "ggg")
ALL_SIGNATURES = LINEAR_SIGNATURES + QUADRATIC_SIGNATURES + CUBIC_SIGNATURES

# classes whose coefficient vanishes identically for this model
NONZERO_CLASSES = {
    "r": {LOOP},
    "g": {LINK},
    "rr": {DOUBLE_LOOP, SEPARATE_LOOPS},
    "gr": {LINK_LOOP_ON_END},
    "gg": {SAME_PAIR, ADJACENT_PAIRS, DISJOINT_PAIRS},
    "rrr": {TRIPLE_LOOP},
    "grr": {LINK_LOOP_EACH_END},
    "ggr": set(),
    "ggg": {TRIPLE_PAIR, DOUBLE_PAIR_ADJACENT, DOUBLE_PAIR_DISJOINT, STAR, TRIANGLE,
            PATH, PATH_PLUS_PAIR, MATCHING},
}


def zero_classes(signature: str, n_particles: int) -> list[Graph]:
    """Classes of a block that carry an identically zero coefficient."""
    return [g for g in enumerate_graphs(signature, n_particles)
            if g not in NONZERO_CLASSES[signature]]


@dataclass(frozen=True)
class ModelParams:
    n_particles: int
    omega_t: float
    omega_p2: float
    lambda_p2: float
    lam: float
    gamma_inf: float
    r_inf: float
    lambda_eff: float

    @property
    def r_inf2(self) -> float:
        return self.r_inf ** 2

    @classmethod
    def from_lambda(cls, n_particles: int, lam: float, omega_t: float = 1.0) -> "ModelParams":
        """Parameters for a given lambda = omega_int / omega_t > 0."""
        if not lam > 0:
            raise Dissociated(f"lambda must be positive, got {lam}")
        omega_p2 = omega_t ** 2 * (lam ** 2 - 1) / n_particles
        return _build(n_particles, omega_t, omega_p2, lam)


def _build(n: int, omega_t: float, omega_p2: float, lam: float) -> ModelParams:
    gamma = (lam - 1) / (n + lam - 1)
    r_inf2 = (n + lam - 1) / (2 * lam * n)
    return ModelParams(
        n_particles=n,
        omega_t=omega_t,
        omega_p2=omega_p2,
        lambda_p2=omega_p2 / omega_t ** 2,
        lam=lam,
        gamma_inf=gamma,
        r_inf=math.sqrt(r_inf2),
        lambda_eff=n * lam / (n + lam - 1),
    )


def derive_params(n_particles: int, omega_t: float = 1.0, omega_p2: float = 0.0) -> ModelParams:
    """Derived constants of the model; raises :class:`Dissociated` when unbound."""
    if n_particles < 2:
        raise ValueError("need at least two particles")
    if not omega_t > 0:
        raise ValueError("trap frequency must be positive")
    lambda_p2 = omega_p2 / omega_t ** 2
    disc = 1 + n_particles * lambda_p2
    if not disc > 0:
        raise Dissociated(f"1 + N lambda_p^2 = {disc:.6g} <= 0: system is unbound")
    return _build(n_particles, omega_t, omega_p2, math.sqrt(disc))


@dataclass(frozen=True)
class AuxConstants:
    A: float
    B: float
    C: float
    D: float
    E: float
    F: float
    G: float
    H: float
    I: float
    J: float


def aux_constants(p: ModelParams) -> AuxConstants:
    n, g = p.n_particles, p.gamma_inf
    c = 1 - g
    s = 1 + (n - 1) * g
    return AuxConstants(
        A=1 / (6 * c * s),
        B=-8 * g ** 3 / (c ** 2 * s ** 2),
        C=-6 * g / (c ** 2 * s),
        D=1 + (n - 3) * g,
        E=-g,
        F=(1 + (n - 4) * g) / c ** 2,
        G=g / c ** 2,
        H=1 / (2 * c ** 2 * s),
        I=g ** 2 / s,
        J=(1 + (n - 3) * g) / 2,
    )


@dataclass
class WaveFunctionCoefficients:
    params: ModelParams
    tables: dict = field(default_factory=dict)

    def __getitem__(self, signature: str) -> CoefficientTable:
        return self.tables[signature_text(parse_signature(signature))]

    @property
    def linear(self) -> dict:
        return {s: self.tables[s] for s in LINEAR_SIGNATURES}

    @property
    def quadratic(self) -> dict:
        return {s: self.tables[s] for s in QUADRATIC_SIGNATURES}

    @property
    def cubic(self) -> dict:
        return {s: self.tables[s] for s in CUBIC_SIGNATURES}

    def coefficient(self, graph: Graph, signature: str | None = None) -> float:
        sig = signature_text(graph.signature) if signature is None else signature
        return self.tables[sig][graph]


def first_order_coefficients(p: ModelParams) -> WaveFunctionCoefficients:
    """Every binary-invariant coefficient of Delta and Omega in closed form."""
    n, lam, g, r = p.n_particles, p.lam, p.gamma_inf, p.r_inf
    k = aux_constants(p)
    A, B, C, D, E, F, G, H, I, J = (k.A, k.B, k.C, k.D, k.E, k.F, k.G, k.H, k.I, k.J)
    values = {
        LOOP: -1 / r,
        LINK: A * 6 * (n + 1) * g,
        TRIPLE_LOOP: 1 / (3 * r ** 3),
        LINK_LOOP_EACH_END: (lam - 1) / n,
        TRIPLE_PAIR: A * (B + C * D),
        TRIANGLE: A * (B + C * E + F),
        DOUBLE_PAIR_ADJACENT: A * (B + C * (D / 3 + 2 * E / 3)),
        STAR: A * (B + C * E),
        PATH: A * (B + 2 * C * E / 3 - G),
        DOUBLE_PAIR_DISJOINT: A * (B + C * D / 3 + 2 * G),
        PATH_PLUS_PAIR: A * (B + C * E / 3),
        MATCHING: A * B,
        DOUBLE_LOOP: p.lambda_eff + (lam - 1) / (2 * n) * (p.lambda_eff - 1),
        SEPARATE_LOOPS: -(lam - 1) / n * g / 2,
        LINK_LOOP_ON_END: -(lam - 1) / n * r,
        SAME_PAIR: H * (I + J),
        ADJACENT_PAIRS: H * (I - g / 2),
        DISJOINT_PAIRS: H * I,
    }
    tables = {}
    for sig in ALL_SIGNATURES:
        tables[sig] = CoefficientTable(sig, n, {
            graph: (values[graph] if graph in NONZERO_CLASSES[sig] else 0.0)
            for graph in enumerate_graphs(sig, n)
        })
    return WaveFunctionCoefficients(p, tables)


def n_coordinates(n_particles: int) -> int:
    return n_particles * (n_particles + 1) // 2


def omega_tensor(p: ModelParams, coefficients: WaveFunctionCoefficients | None = None) -> np.ndarray:
    """Symmetric matrix M with y'^T M y' equal to the quadratic exponent.

    Coordinates are the N radial displacements followed by the N(N-1)/2
    angular ones.  The mixed g r table counts each cross term once, so it
    is split evenly between the two off-diagonal blocks.
    """
    if coefficients is None:
        coefficients = first_order_coefficients(p)
    n = p.n_particles
    rr = reconstruct(coefficients["rr"]).values
    gr = reconstruct(coefficients["gr"]).values
    gg = reconstruct(coefficients["gg"]).values
    m = np.zeros((n_coordinates(n),) * 2)
    m[:n, :n] = rr
    m[n:, n:] = gg
    m[n:, :n] = gr / 2
    m[:n, n:] = gr.T / 2
    return m


def evaluate(coefficients: WaveFunctionCoefficients, radial, angular) -> tuple[float, float]:
    """(Delta(y'), y'^T Omega y') at one displacement vector."""
    radial = np.asarray(radial, float)
    angular = np.asarray(angular, float)

    def total(signatures):
        return sum(contract(reconstruct(coefficients[s]), radial, angular) for s in signatures)

    return (total(LINEAR_SIGNATURES) + total(CUBIC_SIGNATURES),
            total(QUADRATIC_SIGNATURES))


def block_tensor(coefficients: WaveFunctionCoefficients, signature: str) -> InvariantTensor:
    return reconstruct(coefficients[signature])
