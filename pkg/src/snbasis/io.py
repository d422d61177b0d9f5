"""Text formats for tensors and coefficient tables.

Tensor file::

    SNTENSOR v1
    g r r
    N=5
    (1,2) 3 4 0.25
    ...

one line per nonzero element in array order; absent elements are zero.
Coefficient tables are ``<graph> <value>`` lines preceded by two comment
lines naming the signature and particle count.  Floats are written with
``repr`` so that files round-trip exactly.
"""

from __future__ import annotations

import re
from fractions import Fraction

import numpy as np

from .graphs import Graph, SlotKind, parse_signature, signature_text
from .invariants import CoefficientTable, InvariantTensor, iter_indices

TENSOR_MAGIC = "SNTENSOR v1"


class FormatError(ValueError):
    pass


def format_value(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    return repr(float(v))


def parse_value(text: str):
    try:
        if "/" in text:
            return Fraction(text)
        return float(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad number {text!r}") from exc


def _format_slot(item) -> str:
    return f"({item[0]},{item[1]})" if isinstance(item, tuple) else str(item)


def write_tensor(t: InvariantTensor) -> str:
    lines = [TENSOR_MAGIC, signature_text(t.signature, " "), f"N={t.n_particles}"]
    for idx, v in t.items():
        if v != 0:
            lines.append(" ".join(_format_slot(x) for x in idx) + " " + format_value(v))
    return "\n".join(lines) + "\n"


def _parse_slot(token: str, kind: SlotKind):
    if kind is SlotKind.RADIAL:
        if not re.fullmatch(r"\d+", token):
            raise FormatError(f"radial slot expects an index, got {token!r}")
        return int(token)
    m = re.fullmatch(r"\((\d+),(\d+)\)", token)
    if not m:
        raise FormatError(f"angular slot expects (i,j), got {token!r}")
    return (int(m.group(1)), int(m.group(2)))


def parse_tensor(text: str) -> InvariantTensor:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if len(lines) < 3 or lines[0] != TENSOR_MAGIC:
        raise FormatError(f"missing '{TENSOR_MAGIC}' header")
    try:
        signature = parse_signature(lines[1])
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
    m = re.fullmatch(r"N=(\d+)", lines[2])
    if not m:
        raise FormatError(f"expected 'N=<count>', got {lines[2]!r}")
    n = int(m.group(1))
    t = InvariantTensor.zeros(signature, n)
    for ln in lines[3:]:
        tokens = ln.split()
        if len(tokens) != len(signature) + 1:
            raise FormatError(f"entry {ln!r} does not match signature {signature_text(signature)}")
        idx = tuple(_parse_slot(tok, k) for tok, k in zip(tokens, signature))
        try:
            t[idx] = parse_value(tokens[-1])
        except (ValueError, IndexError) as exc:
            raise FormatError(f"bad entry {ln!r}: {exc}") from exc
    return t


def write_table(c: CoefficientTable) -> str:
    lines = [f"# signature={signature_text(c.signature)}", f"# N={c.n_particles}"]
    lines += [f"{g.text()} {format_value(v)}" for g, v in c.items()]
    return "\n".join(lines) + "\n"


def parse_table(text: str, signature=None, n_particles: int | None = None) -> CoefficientTable:
    entries = {}
    for raw in text.splitlines():
        ln = raw.strip()
        if not ln:
            continue
        if ln.startswith("#"):
            m = re.fullmatch(r"#\s*signature=(\w+)", ln)
            if m and signature is None:
                signature = m.group(1)
            m = re.fullmatch(r"#\s*N=(\d+)", ln)
            if m and n_particles is None:
                n_particles = int(m.group(1))
            continue
        parts = ln.split()
        if len(parts) != 2:
            raise FormatError(f"expected '<graph> <value>', got {ln!r}")
        try:
            g = Graph.parse(parts[0])
        except ValueError as exc:
            raise FormatError(str(exc)) from exc
        entries[g] = parse_value(parts[1])
    if signature is None:
        if not entries:
            raise FormatError("empty table without a signature")
        signature = next(iter(entries)).signature
    if n_particles is None:
        n_particles = max(2 * len(parse_signature(signature)), 2)
    try:
        return CoefficientTable(signature, n_particles, entries)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def write_tables(tables) -> str:
    return "\n".join(write_table(t) for t in tables)


def parse_tables(text: str) -> list[CoefficientTable]:
    chunks, current = [], []
    for ln in text.splitlines():
        if ln.startswith("# signature=") and any(not x.startswith("#") for x in current):
            chunks.append(current)
            current = []
        current.append(ln)
    if current:
        chunks.append(current)
    return [parse_table("\n".join(ch)) for ch in chunks if any(x.strip() for x in ch)]


def tensor_from_array(signature, n_particles: int, values) -> InvariantTensor:
    return InvariantTensor(signature, n_particles, np.asarray(values, float))


__all__ = [
    "FormatError", "write_tensor", "parse_tensor", "write_table", "parse_table",
    "write_tables", "parse_tables", "format_value", "parse_value", "iter_indices",
]
