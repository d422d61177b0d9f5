"""Multigraphs labelling the S_N orbits of tensor index tuples.

A tensor block is described by its signature, a sequence of slot kinds.
Radial slots hold one particle index ``i``, angular slots hold an ordered
pair ``(i, j)`` with ``i < j``.  An index tuple is mapped to a graph with one
vertex per distinct particle, one loop per radial slot and one link per
angular slot.  Two tuples lie in the same S_N orbit exactly when their graphs
are isomorphic, so the isomorphism classes label a basis of invariant tensors.

Graphs here are unordered edge multisets.  Canonical forms are found by brute
force over all vertex relabelings, which is exact and cheap for the at most
six vertices a rank-3 graph can have.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import InvalidIndex, UnsupportedRank

MAX_RANK = 3


class SlotKind(str, Enum):
    RADIAL = "r"
    ANGULAR = "g"

    def __str__(self) -> str:
        return self.value


Signature = tuple  # tuple[SlotKind, ...]


def parse_signature(spec: str | Iterable) -> Signature:
    """Parse ``"ggr"``, ``"g g r"`` or a sequence of kinds into a signature."""
    if isinstance(spec, str):
        chars = spec.replace(" ", "").replace(",", "")
        items: Iterable = chars
    else:
        items = spec
    try:
        sig = tuple(SlotKind(str(c)) for c in items)
    except ValueError as exc:
        raise ValueError(f"bad signature {spec!r}: slots must be 'r' or 'g'") from exc
    if not sig:
        raise ValueError("empty signature")
    return sig


def signature_text(signature: Sequence[SlotKind], sep: str = "") -> str:
    return sep.join(str(SlotKind(k)) for k in signature)


def standard_signature(n_angular: int, n_radial: int) -> Signature:
    """Angular slots first, then radial, e.g. ``g g r``."""
    return (SlotKind.ANGULAR,) * n_angular + (SlotKind.RADIAL,) * n_radial


def _edge_key(edge: tuple[int, int]) -> tuple[int, int, int]:
    # links sort before loops
    v, w = edge
    return (1 if v == w else 0, v, w)


@dataclass(frozen=True)
class Graph:
    """Edge multiset on vertices ``1..k``; a loop on ``v`` is stored as ``(v, v)``."""

    edges: tuple

    def __post_init__(self):
        edges = []
        for e in self.edges:
            v, w = int(e[0]), int(e[1])
            if v > w:
                v, w = w, v
            if v < 1:
                raise ValueError(f"vertex labels start at 1, got edge {e}")
            edges.append((v, w))
        if not edges:
            raise ValueError("a graph needs at least one edge")
        vertices = {x for e in edges for x in e}
        if vertices != set(range(1, len(vertices) + 1)):
            raise ValueError(f"vertex labels must be contiguous 1..k, got {sorted(vertices)}")
        object.__setattr__(self, "edges", tuple(sorted(edges, key=_edge_key)))

    @property
    def rank(self) -> int:
        return len(self.edges)

    @property
    def n_vertices(self) -> int:
        return max(max(e) for e in self.edges)

    @property
    def n_loops(self) -> int:
        return sum(1 for v, w in self.edges if v == w)

    @property
    def n_links(self) -> int:
        return self.rank - self.n_loops

    @property
    def signature(self) -> Signature:
        return standard_signature(self.n_links, self.n_loops)

    def relabel(self, mapping: Sequence[int]) -> "Graph":
        """Apply ``v -> mapping[v - 1]``; ``mapping`` is a permutation of 1..k."""
        return Graph(tuple((mapping[v - 1], mapping[w - 1]) for v, w in self.edges))

    def key(self) -> bytes:
        return bytes(x for e in self.edges for x in _edge_key(e))

    def text(self) -> str:
        parts = []
        for v, w in self.edges:
            parts.append(f"L({v})" if v == w else f"E({v},{w})")
        return "+".join(parts)

    def __str__(self) -> str:
        return self.text()

    @classmethod
    def parse(cls, text: str) -> "Graph":
        """Inverse of :meth:`text`, e.g. ``Graph.parse("E(1,2)+L(1)")``."""
        edges = []
        for token in text.strip().split("+"):
            token = token.strip()
            m = re.fullmatch(r"L\((\d+)\)", token)
            if m:
                v = int(m.group(1))
                edges.append((v, v))
                continue
            m = re.fullmatch(r"E\((\d+),(\d+)\)", token)
            if m and m.group(1) != m.group(2):
                edges.append((int(m.group(1)), int(m.group(2))))
                continue
            raise ValueError(f"cannot parse graph edge {token!r} in {text!r}")
        return cls(tuple(edges))


def check_rank(rank: int) -> None:
    if not 1 <= rank <= MAX_RANK:
        raise UnsupportedRank(f"rank {rank} not supported (1..{MAX_RANK})")


def _pattern(signature: Signature, indices: Sequence, n_particles: int | None):
    """Validate ``indices`` and relabel particles by first appearance."""
    if len(indices) != len(signature):
        raise InvalidIndex(f"index tuple {indices!r} does not match signature "
                           f"{signature_text(signature)}")
    labels: dict[int, int] = {}

    def vertex(i) -> int:
        if isinstance(i, bool) or not isinstance(i, int) or i < 1 or (
                n_particles is not None and i > n_particles):
            raise InvalidIndex(f"particle index {i!r} out of range")
        if i not in labels:
            labels[i] = len(labels) + 1
        return labels[i]

    edges = []
    for kind, idx in zip(signature, indices):
        if kind is SlotKind.RADIAL:
            if isinstance(idx, tuple):
                raise InvalidIndex(f"radial slot expects a single index, got {idx!r}")
            v = vertex(idx)
            edges.append((v, v))
        else:
            if not isinstance(idx, tuple) or len(idx) != 2:
                raise InvalidIndex(f"angular slot expects a pair (i,j), got {idx!r}")
            i, j = idx
            if not (isinstance(i, int) and isinstance(j, int)) or i >= j:
                raise InvalidIndex(f"angular pair must satisfy i<j, got {idx!r}")
            edges.append((vertex(i), vertex(j)))
    return tuple(edges)


def graph_of_element(signature, indices: Sequence, n_particles: int | None = None) -> Graph:
    """Graph of one tensor element: one loop per radial slot, one link per angular slot.

    Repeated radial indices give repeated loops on the same vertex, so the
    number of edges always equals the rank.  The result is not canonical.
    """
    signature = parse_signature(signature)
    return Graph(_pattern(signature, indices, n_particles))


@lru_cache(maxsize=None)
def _canonical(edges: tuple) -> tuple[Graph, bytes]:
    g = Graph(edges)
    best = None
    for perm in itertools.permutations(range(1, g.n_vertices + 1)):
        cand = sorted((_edge_key((perm[v - 1], perm[w - 1]) if perm[v - 1] <= perm[w - 1]
                                 else (perm[w - 1], perm[v - 1])) for v, w in g.edges))
        if best is None or cand < best:
            best = cand
    graph = Graph(tuple((v, w) for _, v, w in best))
    return graph, graph.key()


def canonicalize(g: Graph) -> tuple[Graph, bytes]:
    """Return the class representative of ``g`` and its canonical key."""
    return _canonical(g.edges)


def isomorphic(g1: Graph, g2: Graph) -> bool:
    return canonicalize(g1)[1] == canonicalize(g2)[1]


def canonical_graph_of_element(signature, indices: Sequence,
                               n_particles: int | None = None) -> Graph:
    signature = parse_signature(signature)
    return _canonical(_pattern(signature, indices, n_particles))[0]


def slot_values(kind: SlotKind, n_particles: int) -> list:
    """All admissible entries of one slot, angular pairs in the order (1,2),(1,3),(2,3),(1,4),..."""
    if kind is SlotKind.RADIAL:
        return list(range(1, n_particles + 1))
    return [(i, j) for j in range(2, n_particles + 1) for i in range(1, j)]


def enumerate_graphs(signature, n_particles: int) -> tuple[Graph, ...]:
    """All isomorphism classes realizable by ``n_particles`` particles, sorted by key."""
    signature = parse_signature(signature)
    check_rank(len(signature))
    if n_particles < 1:
        raise ValueError("n_particles must be >= 1")
    # a rank-R graph has at most 2R vertices, so small labels reach every class
    m = min(n_particles, 2 * len(signature))
    found = {}
    for idx in itertools.product(*(slot_values(k, m) for k in signature)):
        g, key = _canonical(_pattern(signature, idx, None))
        found[key] = g
    return tuple(found[k] for k in sorted(found))
