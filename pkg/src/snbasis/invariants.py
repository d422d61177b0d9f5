"""Binary invariants and the decomposition of S_N-invariant tensors.

Tensor blocks are stored densely: a radial slot has length N and an angular
slot has length N(N-1)/2 with pairs ordered (1,2),(1,3),(2,3),(1,4),...
Every element belongs to exactly one graph class, so the binary invariants of
a signature have disjoint supports and sum to the all-ones tensor.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from . import graphs as _g
from .errors import InvalidIndex, NotInvariant, UnsupportedRank
from .graphs import Graph, SlotKind, canonicalize, parse_signature, signature_text

# dense blocks above this many elements are refused
MAX_DENSE_ELEMENTS = 50_000_000


def pair_position(i: int, j: int) -> int:
    """0-based position of the pair (i, j), i < j, in the angular ordering."""
    return (j - 1) * (j - 2) // 2 + (i - 1)


def slot_size(kind: SlotKind, n_particles: int) -> int:
    return n_particles if kind is SlotKind.RADIAL else n_particles * (n_particles - 1) // 2


def block_shape(signature, n_particles: int) -> tuple[int, ...]:
    signature = parse_signature(signature)
    return tuple(slot_size(k, n_particles) for k in signature)


def position_of(signature, n_particles: int, index: Sequence) -> tuple[int, ...]:
    """Array position of an index tuple, validating it against the signature."""
    signature = parse_signature(signature)
    _g._pattern(signature, tuple(index), n_particles)
    pos = []
    for kind, item in zip(signature, index):
        pos.append(item - 1 if kind is SlotKind.RADIAL else pair_position(*item))
    return tuple(pos)


def iter_indices(signature, n_particles: int) -> Iterator[tuple]:
    """All conforming index tuples in row-major array order."""
    signature = parse_signature(signature)
    return itertools.product(*(_g.slot_values(k, n_particles) for k in signature))


@lru_cache(maxsize=64)
def class_index(signature: tuple, n_particles: int) -> tuple[tuple[Graph, ...], np.ndarray]:
    """Graph classes of a block and an array giving each element's class number."""
    signature = parse_signature(signature)
    _g.check_rank(len(signature))
    shape = block_shape(signature, n_particles)
    size = int(np.prod(shape))
    if size > MAX_DENSE_ELEMENTS:
        raise MemoryError(f"dense {signature_text(signature)} block at N={n_particles} "
                          f"needs {size} elements")
    classes = _g.enumerate_graphs(signature, n_particles)
    number = {g: c for c, g in enumerate(classes)}
    ids = np.empty(size, dtype=np.int16)
    for pos, idx in enumerate(iter_indices(signature, n_particles)):
        ids[pos] = number[_g._canonical(_g._pattern(signature, idx, None))[0]]
    ids = ids.reshape(shape)
    ids.setflags(write=False)
    return classes, ids


def _classes(signature, n_particles):
    return class_index(parse_signature(signature), n_particles)


def _canonical_member(graph: Graph, signature, n_particles: int) -> Graph:
    g = canonicalize(graph)[0]
    classes, _ = _classes(signature, n_particles)
    if g not in classes:
        raise ValueError(f"graph {g} is not a class of block {signature_text(signature)} "
                         f"at N={n_particles}")
    return g


@dataclass
class InvariantTensor:
    """A dense tensor block over the radial/angular index space."""

    signature: tuple
    n_particles: int
    values: np.ndarray

    def __post_init__(self):
        self.signature = parse_signature(self.signature)
        self.values = np.asarray(self.values)
        shape = block_shape(self.signature, self.n_particles)
        if self.values.shape != shape:
            raise ValueError(f"values have shape {self.values.shape}, expected {shape}")

    @classmethod
    def zeros(cls, signature, n_particles: int, dtype=float) -> "InvariantTensor":
        return cls(signature, n_particles, np.zeros(block_shape(signature, n_particles), dtype))

    @classmethod
    def from_function(cls, signature, n_particles: int, func) -> "InvariantTensor":
        t = cls.zeros(signature, n_particles)
        flat = t.values.reshape(-1)
        for pos, idx in enumerate(iter_indices(t.signature, n_particles)):
            flat[pos] = func(idx)
        return t

    def __getitem__(self, index: Sequence):
        return self.values[position_of(self.signature, self.n_particles, index)]

    def __setitem__(self, index: Sequence, value) -> None:
        self.values[position_of(self.signature, self.n_particles, index)] = value

    def items(self) -> Iterator[tuple[tuple, object]]:
        flat = self.values.reshape(-1)
        for pos, idx in enumerate(iter_indices(self.signature, self.n_particles)):
            yield idx, flat[pos]


@dataclass(frozen=True)
class BinaryInvariant:
    graph: Graph
    signature: tuple
    n_particles: int

    def __post_init__(self):
        sig = parse_signature(self.signature)
        object.__setattr__(self, "signature", sig)
        object.__setattr__(self, "graph", _canonical_member(self.graph, sig, self.n_particles))

    @classmethod
    def of(cls, graph: Graph, n_particles: int, signature=None) -> "BinaryInvariant":
        return cls(graph, signature if signature is not None else graph.signature, n_particles)

    def tensor(self, dtype=np.int8) -> InvariantTensor:
        classes, ids = _classes(self.signature, self.n_particles)
        return InvariantTensor(self.signature, self.n_particles,
                               (ids == classes.index(self.graph)).astype(dtype))


def membership(b: BinaryInvariant, index: Sequence) -> int:
    g = _g.canonical_graph_of_element(b.signature, tuple(index), b.n_particles)
    return int(g == b.graph)


def nonzero_count(graph: Graph, n_particles: int, signature=None) -> int:
    b = BinaryInvariant.of(graph, n_particles, signature)
    classes, ids = _classes(b.signature, n_particles)
    return int(np.count_nonzero(ids == classes.index(b.graph)))


@dataclass
class CoefficientTable:
    """Coefficients of binary invariants for one block signature.

    Keys are canonical graphs; graphs not present read as zero.
    """

    signature: tuple
    n_particles: int
    coefficients: dict = field(default_factory=dict)

    def __post_init__(self):
        self.signature = parse_signature(self.signature)
        checked = {}
        for g, v in self.coefficients.items():
            checked[_canonical_member(g, self.signature, self.n_particles)] = v
        self.coefficients = checked

    def __getitem__(self, graph: Graph):
        g = _canonical_member(graph, self.signature, self.n_particles)
        return self.coefficients.get(g, 0)

    def __setitem__(self, graph: Graph, value) -> None:
        self.coefficients[_canonical_member(graph, self.signature, self.n_particles)] = value

    def __iter__(self):
        return iter(self.sorted_graphs())

    def __len__(self) -> int:
        return len(self.coefficients)

    def sorted_graphs(self) -> list[Graph]:
        return sorted(self.coefficients, key=Graph.key)

    def items(self):
        return [(g, self.coefficients[g]) for g in self.sorted_graphs()]

    def as_dict(self) -> dict[str, object]:
        return {g.text(): v for g, v in self.items()}

    def __eq__(self, other) -> bool:
        if not isinstance(other, CoefficientTable):
            return NotImplemented
        keys = set(self.coefficients) | set(other.coefficients)
        return (self.signature == other.signature and self.n_particles == other.n_particles
                and all(self.coefficients.get(k, 0) == other.coefficients.get(k, 0) for k in keys))


def decompose(t: InvariantTensor, tolerance: float = 0.0) -> CoefficientTable:
    """Coefficients of ``t`` in the binary-invariant basis.

    Each coefficient is the value at the first element of the orbit; every
    other element must agree to within ``tolerance``, absolute when the
    representative is below 1 in magnitude and relative above.
    """
    if tolerance < 0:
        raise ValueError("tolerance must be non-negative")
    classes, ids = _classes(t.signature, t.n_particles)
    flat_ids = ids.reshape(-1)
    vals = t.values.reshape(-1)
    _, first = np.unique(flat_ids, return_index=True)
    reps = vals[first]
    if vals.dtype == object:
        coeffs = {g: reps[c] for c, g in enumerate(classes)}
        for pos, (c, v) in enumerate(zip(flat_ids, vals)):
            if v != reps[c]:
                idx = next(itertools.islice(iter_indices(t.signature, t.n_particles), pos, None))
                raise NotInvariant(classes[c], idx, abs(float(v - reps[c])))
        return CoefficientTable(t.signature, t.n_particles, coeffs)

    deviation = np.abs(vals - reps[flat_ids])
    scale = np.maximum(1.0, np.abs(reps))[flat_ids]
    bad = ~(deviation <= tolerance * scale)
    if bad.any():
        scaled = np.where(np.isnan(deviation), np.inf, deviation / scale)
        pos = int(np.argmax(scaled))
        idx = next(itertools.islice(iter_indices(t.signature, t.n_particles), pos, None))
        raise NotInvariant(classes[flat_ids[pos]], idx, float(deviation[pos]))
    return CoefficientTable(t.signature, t.n_particles,
                            {g: reps[c].item() for c, g in enumerate(classes)})


def reconstruct(c: CoefficientTable) -> InvariantTensor:
    """Sum of coefficient times binary invariant; exact."""
    classes, ids = _classes(c.signature, c.n_particles)
    values = [c.coefficients.get(g, 0) for g in classes]
    if any(isinstance(v, Fraction) for v in values):
        table = np.array(values, dtype=object)
    else:
        table = np.array(values, dtype=float)
    return InvariantTensor(c.signature, c.n_particles, table[ids])


def symmetrize_counts(values: np.ndarray, signature) -> tuple[np.ndarray, int]:
    """Sum of ``values`` over all slot permutations preserving slot kinds.

    Returns the summed array and the number of permutations; dividing gives
    the symmetric part seen by a contraction with one vector per slot kind.
    """
    signature = parse_signature(signature)
    groups = [[s for s, k in enumerate(signature) if k is kind] for kind in SlotKind]
    total = None
    count = 0
    for perms in itertools.product(*(itertools.permutations(gr) for gr in groups)):
        axes = list(range(len(signature)))
        for gr, p in zip(groups, perms):
            for src, dst in zip(gr, p):
                axes[src] = dst
        term = np.transpose(values, axes)
        total = term.copy() if total is None else total + term
        count += 1
    return total, count


def product_decompose(*factors: Graph, n_particles: int, signatures=None) -> CoefficientTable:
    """Exact coefficients of the symmetrized product B(g1) x B(g2) x ...

    The outer product is brought to the standard slot order (angular before
    radial) and averaged over permutations of like slots, which is the part
    of the product that survives contraction with displacement vectors.
    Coefficients are returned as Fractions.
    """
    if signatures is None:
        signatures = [g.signature for g in factors]
    signatures = [parse_signature(s) for s in signatures]
    combined = tuple(k for s in signatures for k in s)
    if len(combined) > _g.MAX_RANK:
        raise UnsupportedRank(f"combined rank {len(combined)} exceeds {_g.MAX_RANK}")
    product = np.ones((), dtype=np.int64)
    for g, s in zip(factors, signatures):
        product = np.multiply.outer(product, BinaryInvariant(g, s, n_particles).tensor(np.int64).values)
    # standard order: angular slots first, stable within kind
    order = sorted(range(len(combined)), key=lambda s: combined[s] is SlotKind.RADIAL)
    product = np.transpose(product, order)
    target = tuple(combined[s] for s in order)
    summed, count = symmetrize_counts(product, target)
    table = decompose(InvariantTensor(target, n_particles, summed.astype(float)), 0.0)
    return CoefficientTable(target, n_particles,
                            {g: Fraction(int(v), count) for g, v in table.coefficients.items()})


def random_table(signature, n_particles: int, rng: np.random.Generator,
                 scale: float = 1.0) -> CoefficientTable:
    classes, _ = _classes(signature, n_particles)
    return CoefficientTable(signature, n_particles,
                            {g: float(v) for g, v in zip(classes, rng.normal(0, scale, len(classes)))})


def contract(t: InvariantTensor, radial: np.ndarray, angular: np.ndarray) -> float:
    """Full contraction with one vector per slot: sum T[a,b,..] x_a y_b ..."""
    out = t.values.astype(float)
    for kind in reversed(t.signature):
        out = out @ (radial if kind is SlotKind.RADIAL else angular)
    return float(out)

