"""Closed form against oracle: per-coefficient comparison report."""

from __future__ import annotations

import csv
import io as _io
from dataclasses import dataclass, field

from .harmonic_model import (ALL_SIGNATURES, CUBIC_SIGNATURES, LINEAR_SIGNATURES,
                             QUADRATIC_SIGNATURES, ModelParams, first_order_coefficients)
from .oracle import Ladder, default_ladder, extrapolate_coefficients
from .io import format_value

CSV_COLUMNS = ("block", "graph", "closed_form", "oracle", "fractional_difference",
               "extrapolation_error", "pass")


def fractional_difference(closed: float, oracle: float) -> float:
    if closed != 0:
        return (closed - oracle) / closed
    return closed - oracle


@dataclass(frozen=True)
class Row:
    block: str
    graph: object
    closed_form: float
    oracle: float
    fractional_difference: float
    extrapolation_error: float
    passed: bool

    @property
    def rank(self) -> int:
        return len(self.block)


@dataclass
class VerificationReport:
    params: ModelParams
    ladder: list
    tolerance: float
    zero_tolerance: float
    rows: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    @property
    def failures(self) -> list:
        return [r for r in self.rows if not r.passed]

    def block(self, signature: str) -> list:
        return [r for r in self.rows if r.block == signature]

    def worst_fractional_difference(self) -> float:
        return max((abs(r.fractional_difference) for r in self.rows if r.closed_form != 0),
                   default=0.0)

    def to_csv(self) -> str:
        buf = _io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow([r.block, r.graph.text(), format_value(r.closed_form),
                        format_value(r.oracle), format_value(r.fractional_difference),
                        format_value(r.extrapolation_error), "yes" if r.passed else "no"])
        return buf.getvalue()

    def to_table(self) -> str:
        p = self.params
        head = [
            f"N={p.n_particles} omega_t={p.omega_t:g} omega_p2={p.omega_p2:.12g} "
            f"lambda={p.lam:.12g} gamma_inf={p.gamma_inf:.12g} r_inf={p.r_inf:.12g}",
            "ladder D=" + ",".join(f"{d:g}" for d in self.ladder),
            f"tolerance={self.tolerance:g} zero_tolerance={self.zero_tolerance:g}",
            "",
        ]
        groups = [
            ("rank 3", CUBIC_SIGNATURES),
            ("rank 1", LINEAR_SIGNATURES),
            ("rank 2", QUADRATIC_SIGNATURES),
        ]
        columns = []
        for title, sigs in groups:
            cells = [f"{r.block:<4}{r.graph.text():<24}{r.fractional_difference:>11.2e}"
                     f"{'' if r.passed else ' !'}"
                     for s in sigs for r in self.block(s)]
            columns.append([title, "-" * len(title)] + cells)
        width = max(len(c) for col in columns for c in col) + 3
        height = max(len(col) for col in columns)
        body = []
        for i in range(height):
            line = "".join((col[i] if i < len(col) else "").ljust(width) for col in columns)
            body.append(line.rstrip())
        status = "PASS" if self.passed else f"FAIL ({len(self.failures)} rows)"
        tail = ["", f"worst fractional difference {self.worst_fractional_difference():.3e}",
                f"status: {status}"]
        return "\n".join(head + body + tail) + "\n"


def verify(p: ModelParams, tolerance: float = 1e-6, ladder: Ladder | None = None,
           zero_tolerance: float | None = None, workers: int | None = None) -> VerificationReport:
    """Compare every closed-form coefficient with the extrapolated oracle.

    A nonzero closed-form coefficient passes when the fractional difference
    is within ``tolerance``.  An identically zero one passes when the oracle
    magnitude is within ``zero_tolerance`` times the largest closed-form
    coefficient.
    """
    if ladder is None:
        ladder = default_ladder(p.n_particles)
    if zero_tolerance is None:
        zero_tolerance = tolerance
    closed = first_order_coefficients(p)
    oracle = extrapolate_coefficients(p, ladder, workers=workers)
    scale = max(abs(v) for s in ALL_SIGNATURES for _, v in closed[s].items())
    report = VerificationReport(p, list(ladder.values), tolerance, zero_tolerance)
    for sig in ALL_SIGNATURES:
        for g, c in closed[sig].items():
            o = oracle[sig][g]
            fd = fractional_difference(c, o)
            ok = abs(fd) <= tolerance if c != 0 else abs(o) <= zero_tolerance * scale
            report.rows.append(Row(sig, g, c, o, fd, oracle.errors[sig][g], ok))
    return report
