"""Level grading: the exact form of the gauge circle action.

The gauge action scales a matrix entry at level displacement d by
exp(2*pi*i*theta*d), so its spectral decomposition is the partition of
entries by displacement.  Averaging over the circle kills every nonzero
displacement; the expectation is therefore the displacement-zero part,
computed here with no complex numbers at all.
"""

from __future__ import annotations

from dataclasses import dataclass

from .operators import Entries, SparseOperator, from_columns
from .shifts import op_power


def _component_bounds(op: SparseOperator, d: int) -> tuple[int, int, int]:
    # a single-displacement part keeps the parent's window
    raise_max = d
    raise_min = d
    reliable = min(op.reliable, op.depth - max(d, 0))
    return raise_max, raise_min, reliable


def _component(op: SparseOperator, d: int, cols: Entries) -> SparseOperator:
    rmax, rmin, rel = _component_bounds(op, d)
    return from_columns(op.s, op.depth, cols.items(), rmax, rmin, rel)


@dataclass(frozen=True)
class GradedDecomposition:
    """Partition of an operator by level displacement; re-summing the
    components reproduces the original entries exactly."""

    source: SparseOperator
    components: dict[int, SparseOperator]

    def resum(self) -> SparseOperator:
        out = None
        for d in sorted(self.components):
            part = self.components[d]
            out = part if out is None else out + part
        if out is None:
            return _component(self.source, 0, {})
        return out


def graded(op: SparseOperator) -> GradedDecomposition:
    buckets: dict[int, Entries] = {}
    for col, column in op._cols.items():
        lvl = col.level
        for row, v in column.items():
            buckets.setdefault(row.level - lvl, {}).setdefault(col, {})[row] = v
    comps = {d: _component(op, d, cols) for d, cols in sorted(buckets.items())}
    return GradedDecomposition(op, comps)


def expectation(op: SparseOperator) -> SparseOperator:
    """Displacement-zero part; idempotent, and the identity exactly on
    level-preserving operators."""
    cols: Entries = {}
    for col, column in op._cols.items():
        lvl = col.level
        kept = {row: v for row, v in column.items() if row.level == lvl}
        if kept:
            cols[col] = kept
    return _component(op, 0, cols)


def fourier_coeff(
    x: SparseOperator,
    j: SparseOperator,
    n: int,
    j_star: SparseOperator | None = None,
) -> SparseOperator:
    """n-th coefficient of x along the isometry j.

    For n >= 0 this is E(x j*^n), for n < 0 it is E(j^-n x); j_star
    defaults to the transpose and must be passed explicitly for shifts
    whose starred partner differs from it.
    """
    if n >= 0:
        if j_star is None:
            j_star = j.adjoint()
        return expectation(x @ op_power(j_star, n))
    return expectation(op_power(j, -n) @ x)
