"""Exact arithmetic in the field Q(sqrt(s)).

Amplitudes of all operators in this package live in Q(sqrt(s)) for the
session's branching number s.  A value is stored as a reduced integer
triple (a + b*sqrt(s)) / den with den >= 1 and gcd(a, b, den) = 1; when
s is a perfect square the root is folded into the rational part at
construction time, so equality is always component-wise.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Union

from gmpy2 import mpq

_RatLike = int | Fraction


@lru_cache(maxsize=None)
def _sqrt_exact(s: int) -> int | None:
    r = math.isqrt(s)
    return r if r * r == s else None


class QuadScalar:
    """An element rat + irr*sqrt(s), normalized on construction.

    Treated as immutable everywhere; arithmetic always returns new values.
    """

    __slots__ = ("s", "a", "b", "den")

    def __init__(self, s: int, rat: _RatLike = 0, irr: _RatLike = 0):
        if s < 2:
            raise ValueError(f"ambient radix must be >= 2, got {s}")
        rat = Fraction(rat)
        irr = Fraction(irr)
        r = _sqrt_exact(s)
        if r is not None and irr:
            rat += irr * r
            irr = Fraction(0)
        den = rat.denominator * irr.denominator
        a = rat.numerator * irr.denominator
        b = irr.numerator * rat.denominator
        g = math.gcd(a, b, den)
        if g > 1:
            a //= g
            b //= g
            den //= g
        self.s = s
        self.a = a
        self.b = b
        self.den = den

    @property
    def rat(self) -> Fraction:
        return Fraction(self.a, self.den)

    @property
    def irr(self) -> Fraction:
        return Fraction(self.b, self.den)

    def _coerce(self, other) -> "QuadScalar | None":
        if isinstance(other, QuadScalar):
            if other.s != self.s:
                raise ValueError(f"mixed radices {self.s} and {other.s}")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadScalar(self.s, other)
        return None

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = QuadScalar(self.s, other)
        if not isinstance(other, QuadScalar):
            return NotImplemented
        return (
            self.s == other.s
            and self.a == other.a
            and self.b == other.b
            and self.den == other.den
        )

    def __hash__(self):
        return hash((self.s, self.a, self.b, self.den))

    def __bool__(self) -> bool:
        return self.a != 0 or self.b != 0

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d1, d2 = self.den, o.den
        return _norm3(self.s, self.a * d2 + o.a * d1, self.b * d2 + o.b * d1, d1 * d2)

    __radd__ = __add__

    def __neg__(self):
        return _make(self.s, -self.a, -self.b, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d1, d2 = self.den, o.den
        return _norm3(self.s, self.a * d2 - o.a * d1, self.b * d2 - o.b * d1, d1 * d2)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        # (a + b*sqrt(s)) (c + d*sqrt(s)) = (ac + bds) + (ad + bc)*sqrt(s)
        b1, b2 = self.b, o.b
        if b1 == 0 == b2:
            return _norm3(self.s, self.a * o.a, 0, self.den * o.den)
        return _norm3(
            self.s,
            self.a * o.a + b1 * b2 * self.s,
            self.a * b2 + b1 * o.a,
            self.den * o.den,
        )

    __rmul__ = __mul__

    def inverse(self) -> "QuadScalar":
        if not self:
            raise ZeroDivisionError("inverse of exact zero")
        if self.b == 0:
            return _norm3(self.s, self.den, 0, self.a)
        # sqrt(s) irrational here, so the conjugate norm is nonzero
        norm = self.a * self.a - self.b * self.b * self.s
        return _norm3(self.s, self.den * self.a, -self.den * self.b, norm)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def conjugate(self) -> "QuadScalar":
        """Galois conjugate rat - irr*sqrt(s) (identity for folded squares)."""
        return _make(self.s, self.a, -self.b, self.den)

    def to_float(self) -> float:
        """Lossy export; never used by the exact core."""
        return (self.a + self.b * math.sqrt(self.s)) / self.den

    def __repr__(self):
        return f"QuadScalar({self.s}, {self.rat!r}, {self.irr!r})"

    def __str__(self):
        return format_scalar(self)


def _make(s: int, a: int, b: int, den: int) -> QuadScalar:
    out = QuadScalar.__new__(QuadScalar)
    out.s = s
    out.a = a
    out.b = b
    out.den = den
    return out


def _norm3(s: int, a: int, b: int, den: int) -> QuadScalar:
    """Reduce an (a, b, den) triple; arithmetic never folds a square root,
    because for square s every operand already has b == 0."""
    if den < 0:
        a, b, den = -a, -b, -den
    g = math.gcd(a, b, den)
    if g > 1:
        a //= g
        b //= g
        den //= g
    return _make(s, a, b, den)


_gcd = math.gcd


def mul_qs(x: QuadScalar, y: QuadScalar) -> QuadScalar:
    """Product of two same-radix values; inner-loop path, no coercion."""
    b1 = x.b
    b2 = y.b
    if b1 == 0 == b2:
        a = x.a * y.a
        b = 0
    else:
        a = x.a * y.a + b1 * b2 * x.s
        b = x.a * b2 + b1 * y.a
    den = x.den * y.den
    g = _gcd(a, b, den)
    if g > 1:
        return _make(x.s, a // g, b // g, den // g)
    return _make(x.s, a, b, den)


def add_qs(x: QuadScalar, y: QuadScalar) -> QuadScalar:
    """Sum of two same-radix values; inner-loop path, no coercion."""
    d1 = x.den
    d2 = y.den
    if d1 == d2:
        a, b, den = x.a + y.a, x.b + y.b, d1
    else:
        a, b, den = x.a * d2 + y.a * d1, x.b * d2 + y.b * d1, d1 * d2
    g = _gcd(a, b, den)
    if g > 1:
        return _make(x.s, a // g, b // g, den // g)
    return _make(x.s, a, b, den)


def zero(s: int) -> QuadScalar:
    return QuadScalar(s, 0)


def one(s: int) -> QuadScalar:
    return QuadScalar(s, 1)


def rational(s: int, a: _RatLike) -> QuadScalar:
    return QuadScalar(s, a)


def inv_sqrt(s: int) -> QuadScalar:
    """The exact value 1/sqrt(s); its square times s is 1."""
    r = _sqrt_exact(s)
    if r is not None:
        return QuadScalar(s, Fraction(1, r))
    return _make(s, 0, 1, s)  # 1/sqrt(s) = sqrt(s)/s


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(x: QuadScalar) -> str:
    """Canonical form "a/b+c/d√s" with zero parts omitted, e.g. "1/2√2"."""
    if not x:
        return "0"
    parts = []
    if x.a:
        parts.append(_frac_str(x.rat))
    if x.b:
        coef = x.irr
        if coef == 1:
            irr_str = f"√{x.s}"
        elif coef == -1:
            irr_str = f"-√{x.s}"
        else:
            irr_str = f"{_frac_str(coef)}√{x.s}"
        if parts and coef > 0:
            parts.append("+")
        parts.append(irr_str)
    return "".join(parts)


_RAT_RE = re.compile(r"^-?\d+(?:/\d+)?$")


def _parse_frac(text: str) -> Fraction:
    if not _RAT_RE.match(text):
        raise ValueError(f"malformed rational literal: {text!r}")
    return Fraction(text)


def parse_scalar_parts(text: str) -> tuple[Fraction, Fraction, int | None]:
    """Split a scalar literal into (rational part, root coefficient, radicand).

    No ambient radix needed; the radicand is None for plain rationals.
    """
    t = text.strip().replace(" ", "")
    if not t:
        raise ValueError("empty scalar literal")
    if "√" not in t:
        return _parse_frac(t), Fraction(0), None
    left, _, right = t.partition("√")
    if not right.isdigit():
        raise ValueError(f"malformed radicand in {text!r}")
    # the only interior + or - separates the rational part from the coefficient
    cut = next((i for i in range(1, len(left)) if left[i] in "+-"), None)
    if cut is None:
        rat = Fraction(0)
        coef_text = left
    else:
        rat = _parse_frac(left[:cut])
        coef_text = left[cut:]
    if coef_text in ("", "+"):
        coef = Fraction(1)
    elif coef_text == "-":
        coef = Fraction(-1)
    else:
        sign = 1
        if coef_text[0] in "+-":
            sign = -1 if coef_text[0] == "-" else 1
            coef_text = coef_text[1:]
            if coef_text.startswith("-"):
                raise ValueError(f"malformed scalar literal: {text!r}")
        coef = sign * _parse_frac(coef_text)
    return rat, coef, int(right)


def parse_scalar(text: str, s: int) -> QuadScalar:
    """Inverse of format_scalar; also accepts plain integers and fractions."""
    rat, coef, root = parse_scalar_parts(text)
    if root is not None and root != s:
        raise ValueError(f"scalar {text!r} uses √{root} in a radix-{s} session")
    return QuadScalar(s, rat, coef)


# -- raw storage form ----------------------------------------------------------
#
# Operator matrices store amplitudes in an unboxed form: a bare mpq for
# rational values, or a pair (rational part, root coefficient) with a
# nonzero second component.  Truthiness then doubles as a zero test, and
# equality is native.  QuadScalar remains the boxed interface type.

RawScalar = Union[mpq, tuple]


def raw_of(x: QuadScalar) -> RawScalar:
    if x.b == 0:
        return mpq(x.a, x.den)
    return (mpq(x.a, x.den), mpq(x.b, x.den))


def qs_of(s: int, v: RawScalar) -> QuadScalar:
    if type(v) is tuple:
        rat, irr = v
        return _norm3(
            s,
            int(rat.numerator) * int(irr.denominator),
            int(irr.numerator) * int(rat.denominator),
            int(rat.denominator) * int(irr.denominator),
        )
    return _norm3(s, int(v.numerator), 0, int(v.denominator))


def sc_mul(s: int, x: RawScalar, y: RawScalar) -> RawScalar:
    if type(x) is not tuple:
        if type(y) is not tuple:
            return x * y
        return (x * y[0], x * y[1])
    if type(y) is not tuple:
        return (x[0] * y, x[1] * y)
    irr = x[0] * y[1] + x[1] * y[0]
    rat = x[0] * y[0] + x[1] * y[1] * s
    return rat if not irr else (rat, irr)


def sc_add(x: RawScalar, y: RawScalar) -> RawScalar:
    if type(x) is not tuple:
        if type(y) is not tuple:
            return x + y
        return (x + y[0], y[1])
    if type(y) is not tuple:
        return (x[0] + y, x[1])
    irr = x[1] + y[1]
    rat = x[0] + y[0]
    return rat if not irr else (rat, irr)


def sc_neg(x: RawScalar) -> RawScalar:
    if type(x) is tuple:
        return (-x[0], -x[1])
    return -x
