"""Auxiliary representation on a truncated half-plane grid.

The crossed-product picture of the Bunce-Deddens shift algebra acts on
l2 of Z x Z>=0: the isometry shifts the second coordinate up, and a
sequence F = (f_0, f_1, ...) of locally constant functions acts
diagonally through f_l(k + l).  Here the grid is truncated to
|k| <= kmax, 0 <= l <= lmax; identities involving one power of the
shift hold exactly on columns with l <= lmax - 1.
"""

from __future__ import annotations

from typing import Sequence

from .sadic import LCFunction, constant, endo_a_u
from .scalars import QuadScalar


class IndexOutOfGrid(Exception):
    """A grid point outside the truncation was addressed."""


Index = tuple[int, int]  # (k, l)


class GridOperator:
    """Finitely supported matrix on the truncated grid, column-major."""

    __slots__ = ("s", "kmax", "lmax", "_cols")

    def __init__(self, s: int, kmax: int, lmax: int, cols: dict[Index, dict[Index, QuadScalar]]):
        self.s = s
        self.kmax = kmax
        self.lmax = lmax
        self._cols = {
            c: {r: v for r, v in col.items() if v} for c, col in cols.items()
        }

    def _check(self, idx: Index):
        k, l = idx
        if abs(k) > self.kmax or not 0 <= l <= self.lmax:
            raise IndexOutOfGrid(f"{idx} outside |k|<={self.kmax}, 0<=l<={self.lmax}")

    def apply(self, idx: Index) -> dict[Index, QuadScalar]:
        self._check(idx)
        return dict(self._cols.get(idx, {}))

    def compose(self, other: "GridOperator") -> "GridOperator":
        out: dict[Index, dict[Index, QuadScalar]] = {}
        for col, column in other._cols.items():
            acc: dict[Index, QuadScalar] = {}
            for mid, w in column.items():
                for row, v in self._cols.get(mid, {}).items():
                    prev = acc.get(row)
                    acc[row] = v * w if prev is None else prev + v * w
            out[col] = acc
        return GridOperator(self.s, self.kmax, self.lmax, out)

    def __matmul__(self, other):
        return self.compose(other)

    def adjoint(self) -> "GridOperator":
        out: dict[Index, dict[Index, QuadScalar]] = {}
        for col, column in self._cols.items():
            for row, v in column.items():
                out.setdefault(row, {})[col] = v
        return GridOperator(self.s, self.kmax, self.lmax, out)

    def equals_on(self, other: "GridOperator", l_max: int) -> bool:
        cols = {c for c in set(self._cols) | set(other._cols) if c[1] <= l_max}
        for c in cols:
            if self._cols.get(c, {}) != other._cols.get(c, {}):
                return False
        return True


def grid_points(kmax: int, lmax: int) -> list[Index]:
    return [(k, l) for k in range(-kmax, kmax + 1) for l in range(lmax + 1)]


def grid_shift(s: int, kmax: int, lmax: int) -> GridOperator:
    """Unilateral shift in the second coordinate."""
    one = QuadScalar(s, 1)
    cols = {
        (k, l): {(k, l + 1): one}
        for k in range(-kmax, kmax + 1)
        for l in range(lmax)
    }
    return GridOperator(s, kmax, lmax, cols)


def grid_identity(s: int, kmax: int, lmax: int) -> GridOperator:
    one = QuadScalar(s, 1)
    return GridOperator(s, kmax, lmax, {p: {p: one} for p in grid_points(kmax, lmax)})


def grid_mult(fs: Sequence[LCFunction], s: int, kmax: int, lmax: int) -> GridOperator:
    """Diagonal action of the sequence: value f_l(k + l) at (k, l)."""
    if len(fs) < lmax + 1:
        raise ValueError(f"need {lmax + 1} sequence terms, got {len(fs)}")
    cols = {}
    for k, l in grid_points(kmax, lmax):
        v = fs[l](k + l)
        if v:
            cols[(k, l)] = {(k, l): v}
    return GridOperator(s, kmax, lmax, cols)


def sequence_shift_twisted(fs: Sequence[LCFunction], s: int) -> list[LCFunction]:
    """Image of the sequence under the induced endomorphism: the n-th term
    becomes f_{n-1}(x - 1), with a zero landing in slot 0."""
    return [constant(s, 0)] + [endo_a_u(f) for f in fs[:-1]]


def make_altrep_ops(
    fs: Sequence[LCFunction], s: int, kmax: int, lmax: int
) -> tuple[GridOperator, GridOperator]:
    """The truncated grid shift and the diagonal action of fs."""
    return grid_shift(s, kmax, lmax), grid_mult(fs, s, kmax, lmax)
