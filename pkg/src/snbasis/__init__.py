"""Binary-invariant tensor bases for S_N-symmetric systems.

The basis tensors are labelled by small multigraphs.  On top of that sits
the closed-form first-order wave function of the harmonically interacting
N-body model in large-dimension perturbation theory, together with an
independent numerical check.
"""

from .errors import (Dissociated, InvalidIndex, NonConvergent, NotInvariant, OutsideDomain,
                     SNBasisError, UnsupportedRank)
from .graphs import (Graph, SlotKind, canonicalize, enumerate_graphs, graph_of_element,
                     isomorphic, parse_signature)
from .harmonic_model import (ModelParams, WaveFunctionCoefficients, aux_constants,
                             derive_params, first_order_coefficients, omega_tensor)
from .invariants import (BinaryInvariant, CoefficientTable, InvariantTensor, decompose,
                         nonzero_count, product_decompose, reconstruct)
from .oracle import Ladder, extrapolate_coefficients, gram_determinant

__all__ = [
    "Dissociated", "InvalidIndex", "NonConvergent", "NotInvariant", "OutsideDomain",
    "SNBasisError", "UnsupportedRank", "Graph", "SlotKind", "canonicalize",
    "enumerate_graphs", "graph_of_element", "isomorphic", "parse_signature", "ModelParams",
    "WaveFunctionCoefficients", "aux_constants", "derive_params", "first_order_coefficients",
    "omega_tensor", "BinaryInvariant", "CoefficientTable", "InvariantTensor", "decompose",
    "nonzero_count", "product_decompose", "reconstruct", "Ladder", "extrapolate_coefficients",
    "gram_determinant",
]
