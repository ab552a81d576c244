"""Integer K0 data for the Bunce-Deddens shift algebra tower.

At stage n the K0 group is free abelian of rank s**n, coordinatized as
(c_1, ..., c_{s^n - 1}, k): the c_j weight the classes of the ball
projections cut by the range defect, and k weights the class of the
basepoint ball projection.  The connecting map into stage n+1 has an
explicit integer matrix (phi_matrix); rewrite_oracle re-derives its
action symbolically, by running the projection-splitting and
Murray-von Neumann moves on a formal sum of tagged generators, and must
agree with the closed form on every input.
"""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass
from typing import Sequence


class NonCanonicalResidue(Exception):
    """The symbolic rewrite left a term outside the stage-(n+1) basis."""


@dataclass(frozen=True)
class KClass:
    """Integer vector (c_1, ..., c_{s^n - 1}, k) at stage n."""

    s: int
    level: int
    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != self.s**self.level:
            raise ValueError(
                f"expected {self.s ** self.level} coordinates, got {len(self.coords)}"
            )

    def quotient_k(self) -> int:
        return self.coords[-1]


def quotient_k(cls: KClass) -> int:
    """The image of the class in the stage quotient, i.e. its k-part."""
    return cls.coords[-1]


class IntMatrix:
    """Dense exact integer matrix."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Sequence[Sequence[int]]):
        self.data = [list(map(int, row)) for row in data]
        self.rows = len(self.data)
        self.cols = len(self.data[0]) if self.data else 0
        if any(len(row) != self.cols for row in self.data):
            raise ValueError("ragged rows")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        m = cls.zeros(n, n)
        for i in range(n):
            m.data[i][i] = 1
        return m

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.data == other.data

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        out = IntMatrix.zeros(self.rows, other.cols)
        for i, row in enumerate(self.data):
            target = out.data[i]
            for k, a in enumerate(row):
                if a:
                    brow = other.data[k]
                    for j, b in enumerate(brow):
                        if b:
                            target[j] += a * b
        return out

    def apply(self, vec: Sequence[int]) -> list[int]:
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        return [sum(a * v for a, v in zip(row, vec)) for row in self.data]

    def to_json_dict(self) -> dict:
        entries = [
            [i, j, str(v)]
            for i, row in enumerate(self.data)
            for j, v in enumerate(row)
            if v
        ]
        return {"rows": self.rows, "cols": self.cols, "entries": entries}

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        for row in self.data:
            writer.writerow(row)
        return buf.getvalue()

    def __repr__(self):
        return f"IntMatrix({self.rows}x{self.cols})"


def connecting_weight(s: int, n: int, i: int) -> int:
    """Multiplier of k in the i-th output coordinate, 1 <= i < s**(n+1)."""
    base = s**n
    if 1 <= i < base:
        return s - 1
    if base <= i <= (s - 1) * base:
        return s - (-(-i // base))  # s - ceil(i / base)
    return 0


def phi_matrix(s: int, n: int) -> IntMatrix:
    """Closed-form matrix of the stage-n connecting map, s**(n+1) x s**n.

    Output coordinate i < s**(n+1) picks up c_{i mod s**n} (nothing when
    the residue is 0, since splitting never produces those terms) plus
    the weight times k; the final coordinate is s*k.
    """
    size_in = s**n
    size_out = s ** (n + 1)
    m = IntMatrix.zeros(size_out, size_in)
    for i in range(1, size_out):
        j = i % size_in
        if j != 0:
            m.data[i - 1][j - 1] += 1
        m.data[i - 1][size_in - 1] += connecting_weight(s, n, i)
    m.data[size_out - 1][size_in - 1] = s
    return m


def apply_phi(cls: KClass) -> KClass:
    out = phi_matrix(cls.s, cls.level).apply(list(cls.coords))
    return KClass(cls.s, cls.level + 1, tuple(out))


# -- symbolic rewriting oracle -------------------------------------------------
#
# Tags for the formal generator sum:
#   ("ball", n, x)          class of the ball projection at (n, x)
#   ("cut", n, x)           ball projection cut by the range defect
#   ("defect", n, x, m)     ball projection times (I - shift^m shift*^m)
#   ("moved", n, x, i)      ball projection times the i-shifted range defect


def _initial_sum(cls: KClass) -> Counter:
    terms: Counter = Counter()
    size = cls.s**cls.level
    for j in range(1, size):
        c = cls.coords[j - 1]
        if c:
            terms[("cut", cls.level, j)] += c
    k = cls.coords[size - 1]
    if k:
        terms[("ball", cls.level, 0)] += k
    return terms


def _split_children(terms: Counter, s: int, n: int) -> Counter:
    # each ball of level n is the disjoint union of its s children
    out: Counter = Counter()
    step = s**n
    for (kind, _, x), coeff in terms.items():
        for l in range(s):
            out[(kind, n + 1, x + l * step)] += coeff
    return out


def _equate_basepoint(terms: Counter) -> Counter:
    # a ball class at center x > 0 equals the basepoint class plus the
    # class of the ball cut to the complement of the x-step shift range
    out: Counter = Counter()
    for tag, coeff in terms.items():
        if tag[0] == "ball" and tag[2] != 0:
            _, lvl, x = tag
            out[("ball", lvl, 0)] += coeff
            out[("defect", lvl, x, x)] += coeff
        else:
            out[tag] += coeff
    return out


def _telescope(terms: Counter) -> Counter:
    # I - shift^m shift*^m is the sum of the i-shifted range defects, i < m
    out: Counter = Counter()
    for tag, coeff in terms.items():
        if tag[0] == "defect":
            _, lvl, x, m = tag
            for i in range(m):
                out[("moved", lvl, x, i)] += coeff
        else:
            out[tag] += coeff
    return out


def _unshift(terms: Counter) -> Counter:
    # the i-shifted defect piece at center x is equivalent to the plain
    # cut piece at center x - i
    out: Counter = Counter()
    for tag, coeff in terms.items():
        if tag[0] == "moved":
            _, lvl, x, i = tag
            out[("cut", lvl, x - i)] += coeff
        else:
            out[tag] += coeff
    return out


def _collect(terms: Counter, s: int, n: int) -> KClass:
    size = s ** (n + 1)
    coords = [0] * size
    for tag, coeff in terms.items():
        if coeff == 0:
            continue
        if tag[0] == "cut" and tag[1] == n + 1 and 1 <= tag[2] < size:
            coords[tag[2] - 1] += coeff
        elif tag[0] == "ball" and tag[1] == n + 1 and tag[2] == 0:
            coords[size - 1] += coeff
        else:
            raise NonCanonicalResidue(f"surviving term {tag} x{coeff}")
    return KClass(s, n + 1, tuple(coords))


def rewrite_oracle(cls: KClass) -> KClass:
    """Run the derivation steps on a formal sum; independent of phi_matrix."""
    s, n = cls.s, cls.level
    terms = _initial_sum(cls)
    terms = _split_children(terms, s, n)
    terms = _equate_basepoint(terms)
    terms = _telescope(terms)
    terms = _unshift(terms)
    return _collect(terms, s, n)


# -- Smith normal form ----------------------------------------------------------

def snf(m: IntMatrix) -> list[int]:
    """Invariant factors d1 | d2 | ... via exact elementary operations,
    pivoting on the entry of least absolute value."""
    a = [row[:] for row in m.data]
    rows, cols = m.rows, m.cols
    t = 0
    while t < min(rows, cols):
        piv = None
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                v = abs(a[i][j])
                if v and (best is None or v < best):
                    best, piv = v, (i, j)
        if piv is None:
            break
        pi, pj = piv
        if pi != t:
            a[t], a[pi] = a[pi], a[t]
        if pj != t:
            for r in range(rows):
                a[r][t], a[r][pj] = a[r][pj], a[r][t]
        while True:
            p = a[t][t]
            moved = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // p
                    if q:
                        a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
                        moved = True
                        break
            if moved:
                continue
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // p
                    if q:
                        for r in range(rows):
                            a[r][j] -= q * a[r][t]
                    if a[t][j]:
                        for r in range(rows):
                            a[r][t], a[r][j] = a[r][j], a[r][t]
                        moved = True
                        break
            if moved:
                continue
            # pivot clears its row and column; force divisibility of the rest
            stray = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if a[i][j] % p:
                        stray = i
                        break
                if stray is not None:
                    break
            if stray is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[stray])]
        t += 1
    return [abs(a[i][i]) for i in range(min(rows, cols)) if a[i][i]]


def compose_phi(s: int, n_from: int, n_to: int) -> IntMatrix:
    """Product of the connecting maps at stages n_from, ..., n_to inclusive,
    of shape s**(n_to + 1) x s**n_from; the k-row scales by s per stage."""
    if n_to <= n_from:
        raise ValueError("n_to must exceed n_from")
    out = phi_matrix(s, n_from)
    for n in range(n_from + 1, n_to + 1):
        out = phi_matrix(s, n) @ out
    return out


def check_quotient_scaling(s: int, n: int) -> bool:
    """k-part of the image is s times the k-part, on a spanning set."""
    m = phi_matrix(s, n)
    size = s**n
    for i in range(size):
        vec = [0] * size
        vec[i] = 1
        image = m.apply(vec)
        if image[-1] != s * vec[-1]:
            return False
    return True
