"""Sparse truncated operators on l2 of the ball set.

An operator stored to finite tree depth only agrees with its
infinite-dimensional counterpart on part of the basis.  Every operator
here therefore carries a *reliable* level d: applying it to any basis
vector of level <= d reproduces the untruncated operator exactly.  All
arithmetic propagates that window deterministically:

  compose(A, B):  reliable = min(B.reliable, A.reliable - max(B.raise_max, 0))
  add(A, B):      reliable = min(A.reliable, B.reliable)
  adjoint(A):     reliable = A.reliable + A.raise_min

where raise_max / raise_min are certified upper/lower bounds on the level
displacement (row level - column level) of the true operator's entries.
The adjoint rule holds because the transposed column at level l reads
exactly the rows of A reachable from columns of level <= l - raise_min,
all of which are exact when l - raise_min <= A.reliable.

Columns beyond the window are never served; asking for one raises
UnreliableLevel rather than returning a boundary artifact.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Iterator

from .sadic import Ball, all_balls, ball_count, ball_index, is_valid_ball
from .scalars import (
    QuadScalar,
    RawScalar,
    format_scalar,
    qs_of,
    raw_of,
    sc_add,
    sc_mul,
    sc_neg,
)


class UnreliableLevel(Exception):
    """A column was requested beyond the operator's reliable window."""


class EmptyWindow(Exception):
    """An operation produced an operator with no reliable columns."""


class WindowTooDeep(Exception):
    """A comparison window exceeds one operand's reliable depth."""


Entries = dict[Ball, dict[Ball, RawScalar]]  # column -> row -> unboxed value


class SparseOperator:
    """Finitely supported matrix over Q(sqrt(s)), indexed by balls.

    Immutable after construction; all operations return new values.
    """

    __slots__ = ("s", "depth", "raise_max", "raise_min", "reliable", "_cols", "_diag")

    def __init__(
        self,
        s: int,
        depth: int,
        cols: Entries,
        raise_max: int,
        raise_min: int,
        reliable: int,
    ):
        if depth < 0:
            raise ValueError("negative depth")
        if raise_min > raise_max:
            raise ValueError("raise_min exceeds raise_max")
        cap = depth - max(raise_max, 0)
        if reliable > cap:
            raise ValueError(f"reliable {reliable} exceeds window cap {cap}")
        clean: Entries = {}
        diag = True
        for col, column in cols.items():
            if col.level > depth or not is_valid_ball(col, s):
                raise ValueError(f"column ball {col} invalid at depth {depth}")
            kept = {}
            for row, v in column.items():
                if row.level > depth or not is_valid_ball(row, s):
                    raise ValueError(f"row ball {row} invalid at depth {depth}")
                if isinstance(v, QuadScalar):
                    v = raw_of(v)
                if v:
                    kept[row] = v
                    if row != col:
                        diag = False
            if kept:
                clean[col] = kept
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "depth", depth)
        object.__setattr__(self, "raise_max", raise_max)
        object.__setattr__(self, "raise_min", raise_min)
        object.__setattr__(self, "reliable", max(reliable, -1))
        object.__setattr__(self, "_cols", clean)
        object.__setattr__(self, "_diag", diag)

    def __setattr__(self, name, value):
        raise AttributeError("SparseOperator is immutable")

    @staticmethod
    def _build(
        s: int,
        depth: int,
        cols: Entries,
        raise_max: int,
        raise_min: int,
        reliable: int,
        diag: bool,
    ) -> "SparseOperator":
        """Trusted constructor for arithmetic results: inputs were already
        validated, zero elimination happened in the producing loop, and the
        diagonality hint may only err towards False."""
        cap = depth - max(raise_max, 0)
        if reliable > cap:
            raise ValueError(f"reliable {reliable} exceeds window cap {cap}")
        out = SparseOperator.__new__(SparseOperator)
        object.__setattr__(out, "s", s)
        object.__setattr__(out, "depth", depth)
        object.__setattr__(out, "raise_max", raise_max)
        object.__setattr__(out, "raise_min", raise_min)
        object.__setattr__(out, "reliable", max(reliable, -1))
        object.__setattr__(out, "_cols", cols)
        object.__setattr__(out, "_diag", diag)
        return out

    # -- inspection ---------------------------------------------------------

    def entries(self) -> Iterator[tuple[Ball, Ball, QuadScalar]]:
        """All stored (row, col, value) triples, including boundary columns."""
        for col, column in self._cols.items():
            for row, v in column.items():
                yield row, col, qs_of(self.s, v)

    def column(self, b: Ball) -> dict[Ball, QuadScalar]:
        return {r: qs_of(self.s, v) for r, v in self._cols.get(b, {}).items()}

    def apply(self, b: Ball) -> dict[Ball, QuadScalar]:
        """Image of the basis vector at b; only served inside the window."""
        if not is_valid_ball(b, self.s):
            raise ValueError(f"{b} is not a ball for radix {self.s}")
        if b.level > self.reliable:
            raise UnreliableLevel(
                f"level {b.level} column requested, window ends at {self.reliable}"
            )
        return self.column(b)

    def entry(self, row: Ball, col: Ball) -> QuadScalar:
        v = self._cols.get(col, {}).get(row)
        return qs_of(self.s, v) if v is not None else QuadScalar(self.s, 0)

    def inner(self, a: Ball, b: Ball) -> QuadScalar:
        """<A e_a, e_b>, requiring a inside the window."""
        return self.apply(a).get(b, QuadScalar(self.s, 0))

    def nnz(self) -> int:
        return sum(len(c) for c in self._cols.values())

    def window_entries(self) -> Iterator[tuple[Ball, Ball, QuadScalar]]:
        for col, column in self._cols.items():
            if col.level <= self.reliable:
                for row, v in column.items():
                    yield row, col, qs_of(self.s, v)

    def is_level_preserving(self) -> bool:
        """True iff every window entry has row level == column level
        (equivalently the gauge circle action fixes the operator)."""
        return all(r.level == c.level for r, c, _ in self.window_entries())

    def is_diagonal(self) -> bool:
        return all(r == c for r, c, _ in self.window_entries())

    def __repr__(self):
        return (
            f"<SparseOperator s={self.s} depth={self.depth} nnz={self.nnz()} "
            f"raise=[{self.raise_min},{self.raise_max}] reliable={self.reliable}>"
        )

    # -- arithmetic ---------------------------------------------------------

    def compose(self, other: "SparseOperator") -> "SparseOperator":
        """Matrix product self @ other with the shrunken window."""
        if self.s != other.s:
            raise ValueError("mixed radices")
        depth = max(self.depth, other.depth)
        reliable = min(other.reliable, self.reliable - max(other.raise_max, 0))
        if reliable < 0:
            raise EmptyWindow("composition has no reliable columns")
        out: Entries = {}
        left_cols = self._cols
        radix = self.s
        if other._diag:
            # scaling each column of self; products of nonzeros never vanish
            for col, column in other._cols.items():
                w = column[col]
                left = left_cols.get(col)
                if left:
                    out[col] = {r: sc_mul(radix, v, w) for r, v in left.items()}
        elif self._diag:
            for col, column in other._cols.items():
                newcol = {}
                for mid, w in column.items():
                    dcol = left_cols.get(mid)
                    if dcol:
                        newcol[mid] = sc_mul(radix, dcol[mid], w)
                if newcol:
                    out[col] = newcol
        else:
            for col, column in other._cols.items():
                acc: dict[Ball, RawScalar] = {}
                acc_get = acc.get
                for mid, w in column.items():
                    left = left_cols.get(mid)
                    if not left:
                        continue
                    for row, v in left.items():
                        prod = sc_mul(radix, v, w)
                        prev = acc_get(row)
                        acc[row] = prod if prev is None else sc_add(prev, prod)
                kept = {r: v for r, v in acc.items() if v}
                if kept:
                    out[col] = kept
        return SparseOperator._build(
            self.s, depth, out,
            self.raise_max + other.raise_max,
            self.raise_min + other.raise_min,
            reliable,
            self._diag and other._diag,
        )

    def __matmul__(self, other):
        return self.compose(other)

    def adjoint(self) -> "SparseOperator":
        """Transpose (all amplitudes are real)."""
        out: Entries = {}
        for col, column in self._cols.items():
            for row, v in column.items():
                out.setdefault(row, {})[col] = v
        reliable = min(
            self.reliable + self.raise_min,
            self.depth - max(-self.raise_min, 0),
        )
        return SparseOperator._build(
            self.s, self.depth, out, -self.raise_min, -self.raise_max, reliable,
            self._diag,
        )

    def add(self, other: "SparseOperator") -> "SparseOperator":
        if self.s != other.s:
            raise ValueError("mixed radices")
        depth = max(self.depth, other.depth)
        out: Entries = {col: dict(column) for col, column in self._cols.items()}
        for col, column in other._cols.items():
            tgt = out.setdefault(col, {})
            for row, v in column.items():
                prev = tgt.get(row)
                acc = v if prev is None else sc_add(prev, v)
                if acc:
                    tgt[row] = acc
                elif prev is not None:
                    del tgt[row]
        for col in [c for c, column in out.items() if not column]:
            del out[col]
        return SparseOperator._build(
            self.s, depth, out,
            max(self.raise_max, other.raise_max),
            min(self.raise_min, other.raise_min),
            min(self.reliable, other.reliable),
            self._diag and other._diag,
        )

    def __add__(self, other):
        return self.add(other)

    def scalar_mul(self, c: QuadScalar | int | Fraction) -> "SparseOperator":
        if not isinstance(c, QuadScalar):
            c = QuadScalar(self.s, c)
        elif c.s != self.s:
            raise ValueError("mixed radices")
        if not c:
            return zero(self.s, self.depth)
        raw_c = raw_of(c)
        radix = self.s
        out = {
            col: {row: sc_mul(radix, raw_c, v) for row, v in column.items()}
            for col, column in self._cols.items()
        }
        return SparseOperator._build(
            self.s, self.depth, out,
            self.raise_max, self.raise_min, self.reliable, self._diag,
        )

    def __rmul__(self, c):
        return self.scalar_mul(c)

    def __sub__(self, other):
        return self.add(other.scalar_mul(-1))

    def __neg__(self):
        return self.scalar_mul(-1)

    def restrict_reliable(self, d: int) -> "SparseOperator":
        """Copy with the window shrunk to d (metadata can only weaken)."""
        if d >= self.reliable:
            return self
        return SparseOperator._build(
            self.s, self.depth, self._cols,
            self.raise_max, self.raise_min, d, self._diag,
        )

    def equals_on_window(self, other: "SparseOperator", d: int) -> bool:
        return first_discrepancy(self, other, d) is None


def first_discrepancy(
    a: SparseOperator, b: SparseOperator, d: int
) -> tuple[Ball, Ball, QuadScalar, QuadScalar] | None:
    """First (row, col, lhs, rhs) where the columns of level <= d differ.

    Absent columns count as zero; "first" means smallest column then row
    in the level-major enumeration.
    """
    if a.s != b.s:
        raise ValueError("mixed radices")
    if d > min(a.reliable, b.reliable):
        raise WindowTooDeep(
            f"window {d} exceeds reliable depths {a.reliable}, {b.reliable}"
        )
    empty: dict[Ball, RawScalar] = {}
    bad_cols = []
    for col, ca in a._cols.items():
        if col.level <= d and ca != b._cols.get(col, empty):
            bad_cols.append(col)
    for col in b._cols:
        if col.level <= d and col not in a._cols:
            bad_cols.append(col)
    if not bad_cols:
        return None
    col = min(bad_cols, key=lambda c: ball_index(c, a.s))
    ca = a._cols.get(col, empty)
    cb = b._cols.get(col, empty)
    zero_val = QuadScalar(a.s, 0)
    rows = sorted(set(ca) | set(cb), key=lambda r: ball_index(r, a.s))
    for row in rows:
        va = qs_of(a.s, ca[row]) if row in ca else zero_val
        vb = qs_of(b.s, cb[row]) if row in cb else zero_val
        if va != vb:
            return row, col, va, vb
    return None


# -- constructors -----------------------------------------------------------

@lru_cache(maxsize=32)
def zero(s: int, depth: int) -> SparseOperator:
    return SparseOperator(s, depth, {}, 0, 0, depth)


@lru_cache(maxsize=32)
def identity(s: int, depth: int) -> SparseOperator:
    one = raw_of(QuadScalar(s, 1))
    cols: Entries = {b: {b: one} for b in all_balls(s, depth)}
    return SparseOperator._build(s, depth, cols, 0, 0, depth, True)


def diagonal(s: int, depth: int, value_at: Callable[[Ball], QuadScalar]) -> SparseOperator:
    """Diagonal operator with entry value_at(ball) at each ball."""
    cols: Entries = {}
    for b in all_balls(s, depth):
        v = value_at(b)
        if v:
            cols[b] = {b: raw_of(v)}
    return SparseOperator._build(s, depth, cols, 0, 0, depth, True)


def from_columns(
    s: int,
    depth: int,
    columns: Iterable[tuple[Ball, dict[Ball, QuadScalar]]],
    raise_max: int,
    raise_min: int,
    reliable: int,
) -> SparseOperator:
    cols: Entries = {}
    for col, column in columns:
        cols[col] = dict(column)
    return SparseOperator(s, depth, cols, raise_max, raise_min, reliable)


# -- export -----------------------------------------------------------------

def _sorted_entries(op: SparseOperator) -> list[tuple[Ball, Ball, QuadScalar]]:
    return sorted(
        op.entries(),
        key=lambda t: (ball_index(t[1], op.s), ball_index(t[0], op.s)),
    )


def to_matrix_market(op: SparseOperator, float_values: bool = False) -> str:
    """Coordinate export over the level-major ball enumeration (1-based).

    The default field is the exact scalar string form; pass float_values
    for a standard real-typed file.
    """
    n = ball_count(op.s, op.depth)
    field = "real" if float_values else "exact"
    lines = [
        f"%%MatrixMarket matrix coordinate {field} general",
        f"% s={op.s} depth={op.depth} raise_max={op.raise_max}"
        f" raise_min={op.raise_min} reliable={op.reliable}",
        "% index(n,x) = (s^n - 1)/(s - 1) + x + 1, level-major",
        f"{n} {n} {op.nnz()}",
    ]
    for row, col, v in _sorted_entries(op):
        i = ball_index(row, op.s) + 1
        j = ball_index(col, op.s) + 1
        val = repr(v.to_float()) if float_values else format_scalar(v)
        lines.append(f"{i} {j} {val}")
    return "\n".join(lines) + "\n"


def to_json_dict(op: SparseOperator, float_values: bool = False) -> dict:
    entries = []
    for row, col, v in _sorted_entries(op):
        val = v.to_float() if float_values else format_scalar(v)
        entries.append([[row.level, row.center], [col.level, col.center], val])
    return {
        "s": op.s,
        "depth": op.depth,
        "raise_max": op.raise_max,
        "raise_min": op.raise_min,
        "reliable": op.reliable,
        "entries": entries,
    }
