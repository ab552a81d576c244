"""Constructors for the named operators on the s-adic tree.

Four shift isometries act on l2 of the ball set: the Bunce-Deddens shift
(translate the center), the Hensel shift (multiply the center by s), the
Bernoulli shift (average over the s successors of s*x), and the Serre
shift (spread over the s lifts of the same center).  Alongside them live
multiplication operators, the associated projections and matrix units,
Cuntz isometries, and the three Toeplitz-style canonical forms for the
coefficient algebras.

The Bernoulli shift is the one place where the conventional star is not
the matrix transpose: the pair (S, S*) used throughout satisfies S*S = I
with S carrying amplitude 1/s and S* carrying amplitude 1, so S* equals
s times the transpose of S.  make_shift_adjoint builds the starred
operator of each shift directly; for the other three it coincides with
the transpose.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .operators import (
    SparseOperator,
    diagonal,
    from_columns,
    identity,
)
from .sadic import (
    Ball,
    LCFunction,
    TreeFunction,
    all_balls,
    digit_indicator,
    is_valid_ball,
)
from .scalars import QuadScalar, inv_sqrt, raw_of


class ShiftKind(enum.Enum):
    BUNCE_DEDDENS = "U"
    HENSEL = "V"
    BERNOULLI = "S"
    SERRE = "W"


@lru_cache(maxsize=64)
def make_shift(kind: ShiftKind, s: int, depth: int) -> SparseOperator:
    """The shift isometry, with columns at every source level < depth."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    inv_s = QuadScalar(s, Fraction(1, s))
    rt = inv_sqrt(s)
    one = QuadScalar(s, 1)
    cols = []
    for n in range(depth):
        for x in range(s**n):
            b = Ball(n, x)
            if kind is ShiftKind.BUNCE_DEDDENS:
                col = {Ball(n + 1, x + 1): one}
            elif kind is ShiftKind.HENSEL:
                col = {Ball(n + 1, s * x): one}
            elif kind is ShiftKind.BERNOULLI:
                col = {Ball(n + 1, s * x + j): inv_s for j in range(s)}
            else:
                col = {Ball(n + 1, x + j * s**n): rt for j in range(s)}
            cols.append((b, col))
    return from_columns(s, depth, cols, 1, 1, depth - 1)


@lru_cache(maxsize=64)
def make_shift_adjoint(kind: ShiftKind, s: int, depth: int) -> SparseOperator:
    """The starred partner of the shift, built from its own casewise rule."""
    one = QuadScalar(s, 1)
    rt = inv_sqrt(s)
    cols = []
    for n in range(1, depth + 1):
        for x in range(s**n):
            b = Ball(n, x)
            if kind is ShiftKind.BUNCE_DEDDENS:
                col = {Ball(n - 1, x - 1): one} if 0 < x <= s ** (n - 1) else {}
            elif kind is ShiftKind.HENSEL:
                col = {Ball(n - 1, x // s): one} if x % s == 0 else {}
            elif kind is ShiftKind.BERNOULLI:
                col = {Ball(n - 1, x // s): one}
            else:
                col = {Ball(n - 1, x % s ** (n - 1)): rt}
            if col:
                cols.append((b, col))
    return from_columns(s, depth, cols, -1, -1, depth)


@lru_cache(maxsize=256)
def op_power(a: SparseOperator, k: int) -> SparseOperator:
    if k < 0:
        raise ValueError("negative power")
    out = identity(a.s, a.depth)
    for _ in range(k):
        out = a @ out
    return out


def make_mult(f: LCFunction, s: int, depth: int) -> SparseOperator:
    """Diagonal multiplication by f(center)."""
    if f.s != s:
        raise ValueError("function radix mismatch")
    raws = [raw_of(v) for v in f.values]
    period = len(raws)
    cols = {}
    for b in all_balls(s, depth):
        v = raws[b.center % period]
        if v:
            cols[b] = {b: v}
    return SparseOperator._build(s, depth, cols, 0, 0, depth, True)


def make_mult_tree(F: TreeFunction, s: int, depth: int) -> SparseOperator:
    """Diagonal multiplication by a function of the ball itself."""
    if F.s != s:
        raise ValueError("function radix mismatch")
    if F.depth < depth:
        raise ValueError(f"tree function depth {F.depth} < operator depth {depth}")
    cols = {}
    for n in range(depth + 1):
        row_vals = F.values[n]
        for x in range(s**n):
            v = row_vals[x]
            if v:
                b = Ball(n, x)
                cols[b] = {b: raw_of(v)}
    return SparseOperator._build(s, depth, cols, 0, 0, depth, True)


# -- Bunce-Deddens projections ----------------------------------------------

def _survives_chain(b: Ball, steps: int, s: int) -> Ball | None:
    """Follow the center-decrement chain; None when it dies."""
    m, y = b
    for _ in range(steps):
        if m >= 1 and 0 < y <= s ** (m - 1):
            m, y = m - 1, y - 1
        else:
            return None
    return Ball(m, y)


def _range_defect_fixes(b: Ball, s: int) -> bool:
    # fixed exactly when the center-decrement step dies at b
    return b.level == 0 or b.center == 0 or b.center > s ** (b.level - 1)


@lru_cache(maxsize=128)
def bd_projection(n: int, s: int, depth: int) -> SparseOperator:
    """The n-th member of the orthogonal family starting at I - UU*."""
    if n > depth - 1:
        raise ValueError(f"projection index {n} too deep for depth {depth}")
    one = QuadScalar(s, 1)

    def val(b: Ball) -> QuadScalar:
        tail = _survives_chain(b, n, s)
        if tail is not None and _range_defect_fixes(tail, s):
            return one
        return QuadScalar(s, 0)

    return diagonal(s, depth, val)


@lru_cache(maxsize=64)
def bd_projection_chain(n: int, s: int, depth: int) -> SparseOperator:
    """Same projection as U^n (I - UU*) (U*)^n, with the composed window."""
    u = make_shift(ShiftKind.BUNCE_DEDDENS, s, depth)
    u_adj = make_shift_adjoint(ShiftKind.BUNCE_DEDDENS, s, depth)
    p0 = identity(s, depth) - u @ u_adj
    return op_power(u, n) @ p0 @ op_power(u_adj, n)


# -- Hensel basepoint projections and matrix units ---------------------------

@lru_cache(maxsize=128)
def basepoint_projection(n: int, s: int, depth: int) -> SparseOperator:
    """Rank-one projection onto the basis vector at (n, 0)."""
    if n > depth:
        raise ValueError(f"level {n} beyond depth {depth}")
    b = Ball(n, 0)
    return from_columns(s, depth, [(b, {b: QuadScalar(s, 1)})], 0, 0, depth)


@lru_cache(maxsize=256)
def hensel_matrix_unit(k: int, l: int, s: int, depth: int) -> SparseOperator:
    """Sends the basis vector at (l, 0) to the one at (k, 0)."""
    if max(k, l) > depth:
        raise ValueError("matrix unit index beyond depth")
    d = k - l
    col = (Ball(l, 0), {Ball(k, 0): QuadScalar(s, 1)})
    return from_columns(s, depth, [col], d, d, depth - max(d, 0))


@lru_cache(maxsize=64)
def hensel_matrix_unit_chain(k: int, l: int, s: int, depth: int) -> SparseOperator:
    v = make_shift(ShiftKind.HENSEL, s, depth)
    v_adj = make_shift_adjoint(ShiftKind.HENSEL, s, depth)
    return op_power(v, k) @ basepoint_projection(0, s, depth) @ op_power(v_adj, l)


# -- Cuntz isometries ---------------------------------------------------------

@lru_cache(maxsize=64)
def cuntz_isometry(j: int, s: int, depth: int) -> SparseOperator:
    """s * M_{digit indicator j} * S; sends (n, x) to (n+1, s*x + j)."""
    if not 0 <= j < s:
        raise ValueError(f"digit {j} out of range for radix {s}")
    m = make_mult(digit_indicator(s, j), s, depth)
    return (m @ make_shift(ShiftKind.BERNOULLI, s, depth)).scalar_mul(s)


@lru_cache(maxsize=128)
def cuntz_word(n: int, x: int, s: int, depth: int) -> SparseOperator:
    """Product of the digit isometries of x, least significant digit first."""
    if not 0 <= x < s**n:
        raise ValueError(f"center {x} out of range at level {n}")
    if n > depth:
        raise ValueError("word length exceeds depth")
    out = identity(s, depth)
    digits = []
    y = x
    for _ in range(n):
        digits.append(y % s)
        y //= s
    for d in reversed(digits):
        out = cuntz_isometry(d, s, depth) @ out
    return out


# -- Serre projections and matrix units ---------------------------------------

@lru_cache(maxsize=16)
def serre_projection(n: int, s: int, depth: int) -> SparseOperator:
    """The n-th member of the orthogonal family starting at I - WW*.

    Closed form of W^n (I - WW*) (W*)^n: on a ball (m, x) with m > n the
    column spreads over centers congruent to x modulo s^(m-n-1), weighted
    s^-n on the finer class modulo s^(m-n) and -s^-(n+1) off it; at m == n
    it averages the whole level; below it vanishes.
    """
    if n > depth - 1:
        raise ValueError(f"projection index {n} too deep for depth {depth}")
    lead = QuadScalar(s, Fraction(1, s**n))
    hit = QuadScalar(s, Fraction(s - 1, s ** (n + 1)))
    miss = QuadScalar(s, Fraction(-1, s ** (n + 1)))
    cols = []
    for m in range(n, depth + 1):
        for x in range(s**m):
            b = Ball(m, x)
            if m == n:
                cols.append((b, {Ball(n, z): lead for z in range(s**n)}))
                continue
            fine = s ** (m - n)
            coarse = s ** (m - n - 1)
            xf = x % fine
            col = {
                Ball(m, z): (hit if z % fine == xf else miss)
                for z in range(x % coarse, s**m, coarse)
            }
            cols.append((b, col))
    return from_columns(s, depth, cols, 0, 0, depth)


@lru_cache(maxsize=16)
def serre_projection_chain(n: int, s: int, depth: int) -> SparseOperator:
    w = make_shift(ShiftKind.SERRE, s, depth)
    w_adj = make_shift_adjoint(ShiftKind.SERRE, s, depth)
    p0 = identity(s, depth) - w @ w_adj
    return op_power(w, n) @ p0 @ op_power(w_adj, n)


@lru_cache(maxsize=256)
def matrix_unit(row: Ball, col: Ball, s: int, depth: int) -> SparseOperator:
    """Rank-one map sending the basis vector at col to the one at row."""
    for b in (row, col):
        if not is_valid_ball(b, s) or b.level > depth:
            raise ValueError(f"{b} invalid at depth {depth}")
    d = row.level - col.level
    return from_columns(
        s, depth, [(col, {row: QuadScalar(s, 1)})], d, d, depth - max(d, 0)
    )


# -- Toeplitz canonical forms --------------------------------------------------

def toeplitz_u(
    fs: Sequence[LCFunction], f_inf: LCFunction, s: int, depth: int
) -> SparseOperator:
    """Sum of (M_{f_n} - M_{f_inf}) P_n plus M_{f_inf}, truncated.

    Terms beyond the list vanish on columns of level < len(fs), so the
    result is reliable up to min(len(fs), depth) - 1.
    """
    horizon = min(len(fs), depth)
    acc = make_mult(f_inf, s, depth)
    for n in range(horizon):
        diff = fs[n] - f_inf
        if diff.is_zero():
            continue
        acc = acc + make_mult(diff, s, depth) @ bd_projection(n, s, depth)
    return acc.restrict_reliable(horizon - 1)


def toeplitz_v(
    xs: Sequence[QuadScalar | int | Fraction],
    f: LCFunction,
    s: int,
    depth: int,
) -> SparseOperator:
    """Sum of (x_n - f(0)) P_(n,0) plus M_f, truncated."""
    horizon = min(len(xs), depth + 1)
    acc = make_mult(f, s, depth)
    f0 = f(0)
    for n in range(horizon):
        x_n = xs[n] if isinstance(xs[n], QuadScalar) else QuadScalar(s, xs[n])
        c = x_n - f0
        if c:
            acc = acc + basepoint_projection(n, s, depth).scalar_mul(c)
    return acc.restrict_reliable(horizon - 1)


def toeplitz_w(
    gs: Sequence[TreeFunction], g_inf: TreeFunction, s: int, depth: int
) -> SparseOperator:
    """Sum of P_n (M_{g_n} - M_{g_inf}) P_n plus M_{g_inf}, truncated."""
    horizon = min(len(gs), depth)
    acc = make_mult_tree(g_inf, s, depth)
    m_inf = acc
    for n in range(horizon):
        m_n = make_mult_tree(gs[n], s, depth)
        diff = m_n - m_inf
        if not diff.nnz():
            continue
        p = serre_projection(n, s, depth)
        acc = acc + p @ diff @ p
    return acc.restrict_reliable(horizon - 1)


# -- named-operator registry for the expression language ------------------------

SHIFT_NAMES = {
    "U": ShiftKind.BUNCE_DEDDENS,
    "V": ShiftKind.HENSEL,
    "S": ShiftKind.BERNOULLI,
    "W": ShiftKind.SERRE,
}

ATOM_ARITIES = {
    "U": 0, "V": 0, "S": 0, "W": 0, "I": 0,
    "P": 1, "PV": 1, "Sj": 1, "CP": 1,
    "PT": 2, "Sw": 2,
    "MU": 4,
}


def atom_operator(name: str, args: tuple[int, ...], s: int, depth: int) -> SparseOperator:
    """Resolve a named atom of the expression language."""
    if name in SHIFT_NAMES:
        return make_shift(SHIFT_NAMES[name], s, depth)
    if name == "I":
        return identity(s, depth)
    if name == "P":
        return bd_projection(args[0], s, depth)
    if name == "PV":
        return basepoint_projection(args[0], s, depth)
    if name == "PT":
        return hensel_matrix_unit(args[0], args[1], s, depth)
    if name == "Sj":
        return cuntz_isometry(args[0], s, depth)
    if name == "Sw":
        return cuntz_word(args[0], args[1], s, depth)
    if name == "CP":
        return serre_projection(args[0], s, depth)
    if name == "MU":
        return matrix_unit(Ball(args[0], args[1]), Ball(args[2], args[3]), s, depth)
    raise ValueError(f"unknown operator atom {name!r}")


def shift_star(name: str, s: int, depth: int) -> SparseOperator:
    """The starred partner of a bare shift atom."""
    return make_shift_adjoint(SHIFT_NAMES[name], s, depth)
