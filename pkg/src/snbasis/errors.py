"""Exception types raised across the package."""

from __future__ import annotations


class SNBasisError(Exception):
    """Base class for all package errors."""


class InvalidIndex(SNBasisError, ValueError):
    """An index tuple does not conform to its block signature."""


class UnsupportedRank(SNBasisError, ValueError):
    """Tensor rank outside the supported range 1..3."""


class NotInvariant(SNBasisError):
    """A tensor is not constant on some S_N orbit.

    Carries the offending graph, the worst index tuple found and the
    deviation from the orbit representative.
    """

    def __init__(self, graph, index, deviation: float):
        self.graph = graph
        self.index = index
        self.deviation = deviation
        super().__init__(
            f"tensor not invariant on orbit {graph}: element {format_index(index)} "
            f"deviates by {deviation:.3e}"
        )


class Dissociated(SNBasisError, ValueError):
    """Model parameters at or beyond the dissociation threshold 1 + N lambda_p^2 <= 0."""


class OutsideDomain(SNBasisError, ValueError):
    """Evaluation point with non-positive Grammian or non-positive radius."""


class NonConvergent(SNBasisError):
    """Richardson differences failed to shrink along the dimension ladder."""


def format_index(index) -> str:
    parts = []
    for item in index:
        if isinstance(item, tuple):
            parts.append(f"({item[0]},{item[1]})")
        else:
            parts.append(str(item))
    return " ".join(parts)
