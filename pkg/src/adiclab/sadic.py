"""Balls of the s-adic tree and the locally constant function algebra.

A ball is a pair (level n, center x) with 0 <= x < s**n.  Locally constant
functions on the s-adic integers are stored as value tables indexed by the
center modulo s**m; all function-level maps used by the shift algebras only
ever read centers modulo a power of s, so tables are exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .scalars import QuadScalar, format_scalar, parse_scalar


class Ball(NamedTuple):
    level: int
    center: int


def ball_count(s: int, depth: int) -> int:
    """Number of balls of level <= depth."""
    return (s ** (depth + 1) - 1) // (s - 1)


def ball_index(b: Ball, s: int) -> int:
    """Level-major, center-ascending enumeration of balls (0-based)."""
    return (s**b.level - 1) // (s - 1) + b.center


def is_valid_ball(b: Ball, s: int) -> bool:
    return b.level >= 0 and 0 <= b.center < s**b.level


def balls_of_level(s: int, n: int) -> list[Ball]:
    return [Ball(n, x) for x in range(s**n)]


def all_balls(s: int, depth: int) -> list[Ball]:
    out: list[Ball] = []
    for n in range(depth + 1):
        out.extend(balls_of_level(s, n))
    return out


def ball_children(b: Ball, s: int) -> list[Ball]:
    """The s balls of level n+1 partitioning b: centers x + l*s**n."""
    if not is_valid_ball(b, s):
        raise ValueError(f"{b} is not a ball for radix {s}")
    step = s**b.level
    return [Ball(b.level + 1, b.center + l * step) for l in range(s)]


_ValueLike = QuadScalar | int | Fraction


def _coerce_value(v: _ValueLike, s: int) -> QuadScalar:
    if isinstance(v, QuadScalar):
        if v.s != s:
            raise ValueError(f"scalar with radix {v.s} in radix-{s} function")
        return v
    return QuadScalar(s, v)


@dataclass(frozen=True)
class LCFunction:
    """Locally constant function: f(x) = values[x mod s**level]."""

    s: int
    level: int
    values: tuple[QuadScalar, ...]

    def __post_init__(self):
        if self.level < 0:
            raise ValueError("negative modulus level")
        vals = tuple(_coerce_value(v, self.s) for v in self.values)
        if len(vals) != self.s**self.level:
            raise ValueError(
                f"table length {len(vals)} != {self.s}^{self.level}"
            )
        object.__setattr__(self, "values", vals)

    def __call__(self, x: int) -> QuadScalar:
        return self.values[x % len(self.values)]

    def refine(self, level: int) -> "LCFunction":
        """Same function tabulated modulo s**level (level >= self.level)."""
        if level < self.level:
            raise ValueError("refinement cannot lower the modulus level")
        if level == self.level:
            return self
        period = len(self.values)
        table = tuple(self.values[x % period] for x in range(self.s**level))
        return LCFunction(self.s, level, table)

    def _pair(self, other: "LCFunction") -> tuple["LCFunction", "LCFunction"]:
        if self.s != other.s:
            raise ValueError("mixed radices")
        m = max(self.level, other.level)
        return self.refine(m), other.refine(m)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LCFunction):
            return NotImplemented
        a, b = self._pair(other)
        return a.values == b.values

    def reduce(self) -> "LCFunction":
        """Coarsest table representing the same function."""
        f = self
        while f.level > 0:
            period = len(f.values) // f.s
            if any(f.values[x] != f.values[x % period] for x in range(len(f.values))):
                break
            f = LCFunction(f.s, f.level - 1, f.values[:period])
        return f

    def __hash__(self):
        r = self.reduce()
        return hash((r.s, r.level, r.values))

    def __add__(self, other: "LCFunction") -> "LCFunction":
        a, b = self._pair(other)
        return LCFunction(a.s, a.level, tuple(x + y for x, y in zip(a.values, b.values)))

    def __sub__(self, other: "LCFunction") -> "LCFunction":
        a, b = self._pair(other)
        return LCFunction(a.s, a.level, tuple(x - y for x, y in zip(a.values, b.values)))

    def __mul__(self, other):
        if isinstance(other, LCFunction):
            a, b = self._pair(other)
            return LCFunction(a.s, a.level, tuple(x * y for x, y in zip(a.values, b.values)))
        c = _coerce_value(other, self.s)
        return LCFunction(self.s, self.level, tuple(c * v for v in self.values))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.values)

    def to_json(self) -> dict:
        return {
            "s": self.s,
            "level": self.level,
            "values": [format_scalar(v) for v in self.values],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "LCFunction":
        s = int(obj["s"])
        return cls(s, int(obj["level"]), tuple(parse_scalar(v, s) for v in obj["values"]))


def constant(s: int, value: _ValueLike) -> LCFunction:
    return LCFunction(s, 0, (_coerce_value(value, s),))


def indicator(s: int, level: int, center: int) -> LCFunction:
    """Characteristic function of the ball (level, center)."""
    if not 0 <= center < s**level:
        raise ValueError(f"center {center} out of range at level {level}")
    table = [QuadScalar(s, 0)] * s**level
    table[center] = QuadScalar(s, 1)
    return LCFunction(s, level, tuple(table))


def digit_indicator(s: int, j: int) -> LCFunction:
    """Indicator of {x : x mod s == j}, the radius-1/s ball at j."""
    return indicator(s, 1, j)


# ---------------------------------------------------------------------------
# function-level maps attached to the four shifts
# ---------------------------------------------------------------------------

def endo_a_u(f: LCFunction) -> LCFunction:
    """x -> f(x - 1); translation automorphism."""
    period = len(f.values)
    return LCFunction(f.s, f.level, tuple(f.values[(x - 1) % period] for x in range(period)))


def endo_b_u(f: LCFunction) -> LCFunction:
    """x -> f(x + 1); inverse of endo_a_u."""
    period = len(f.values)
    return LCFunction(f.s, f.level, tuple(f.values[(x + 1) % period] for x in range(period)))


def endo_a_v(f: LCFunction) -> LCFunction:
    """x -> f(x/s) on multiples of s, zero elsewhere; raises the level by 1."""
    s = f.s
    zero = QuadScalar(s, 0)
    table = []
    for x in range(s ** (f.level + 1)):
        table.append(f.values[x // s] if x % s == 0 else zero)
    return LCFunction(s, f.level + 1, tuple(table))


def endo_b_v(f: LCFunction) -> LCFunction:
    """x -> f(s*x); lowers the level by 1 and inverts endo_a_v."""
    g = f if f.level >= 1 else f.refine(1)
    period = len(g.values)
    return LCFunction(
        g.s, g.level - 1,
        tuple(g.values[(g.s * x) % period] for x in range(g.s ** (g.level - 1))),
    )


def endo_a_s(f: LCFunction) -> LCFunction:
    """x -> f((x - x mod s)/s); duplicates each table entry s times."""
    s = f.s
    return LCFunction(
        s, f.level + 1,
        tuple(f.values[x // s] for x in range(s ** (f.level + 1))),
    )


def transfer_b_s(f: LCFunction) -> LCFunction:
    """x -> (1/s) * sum_j f(s*x + j); linear, positive, unital, not
    multiplicative in general."""
    g = f if f.level >= 1 else f.refine(1)
    s = g.s
    inv_s = QuadScalar(s, Fraction(1, s))
    period = len(g.values)
    table = []
    for x in range(s ** (g.level - 1)):
        acc = QuadScalar(s, 0)
        for j in range(s):
            acc = acc + g.values[(s * x + j) % period]
        table.append(inv_s * acc)
    return LCFunction(s, g.level - 1, tuple(table))


@dataclass(frozen=True)
class TreeFunction:
    """Function on the balls of level <= depth, one value table per level."""

    s: int
    depth: int
    values: tuple[tuple[QuadScalar, ...], ...]

    def __post_init__(self):
        if self.depth < 0:
            raise ValueError("negative depth")
        rows = []
        for n, row in enumerate(self.values):
            row = tuple(_coerce_value(v, self.s) for v in row)
            if len(row) != self.s**n:
                raise ValueError(f"level-{n} table has length {len(row)}")
            rows.append(row)
        if len(rows) != self.depth + 1:
            raise ValueError(f"expected {self.depth + 1} level tables, got {len(rows)}")
        object.__setattr__(self, "values", tuple(rows))

    def __call__(self, b: Ball) -> QuadScalar:
        return self.values[b.level][b.center]

    def to_json(self) -> dict:
        return {
            "s": self.s,
            "level": self.depth,
            "values": [format_scalar(v) for row in self.values for v in row],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "TreeFunction":
        s = int(obj["s"])
        depth = int(obj["level"])
        flat = [parse_scalar(v, s) for v in obj["values"]]
        rows, pos = [], 0
        for n in range(depth + 1):
            rows.append(tuple(flat[pos : pos + s**n]))
            pos += s**n
        if pos != len(flat):
            raise ValueError("table length does not match depth")
        return cls(s, depth, tuple(rows))


def tree_constant(s: int, depth: int, value: _ValueLike) -> TreeFunction:
    v = _coerce_value(value, s)
    return TreeFunction(s, depth, tuple(tuple([v] * s**n) for n in range(depth + 1)))


def tree_from_lc(f: LCFunction, depth: int) -> TreeFunction:
    """Tabulate f(center) on every ball of level <= depth."""
    rows = tuple(
        tuple(f(x) for x in range(f.s**n)) for n in range(depth + 1)
    )
    return TreeFunction(f.s, depth, rows)


def endo_a_w(F: TreeFunction) -> TreeFunction:
    """(n, x) -> F(n-1, x mod s**(n-1)), zero at the root."""
    s = F.s
    rows = [(QuadScalar(s, 0),)]
    for n in range(1, F.depth + 1):
        period = s ** (n - 1)
        rows.append(tuple(F.values[n - 1][x % period] for x in range(s**n)))
    return TreeFunction(s, F.depth, tuple(rows))


def transfer_b_w(F: TreeFunction) -> TreeFunction:
    """(n, x) -> (1/s) * sum_j F(n+1, x + j*s**n); output depth drops by 1."""
    if F.depth < 1:
        raise ValueError("transfer needs depth >= 1")
    s = F.s
    inv_s = QuadScalar(s, Fraction(1, s))
    rows = []
    for n in range(F.depth):
        step = s**n
        row = []
        for x in range(step):
            acc = QuadScalar(s, 0)
            for j in range(s):
                acc = acc + F.values[n + 1][x + j * step]
            row.append(inv_s * acc)
        rows.append(tuple(row))
    return TreeFunction(s, F.depth - 1, tuple(rows))


def function_to_json_str(f: LCFunction | TreeFunction) -> str:
    return json.dumps(f.to_json(), sort_keys=True)
