"""Small expression language for operator words.

Grammar (LL(1), whitespace-insensitive):

    expr    :=  term (('+' | '-') term)*
    term    :=  factor ('.' factor)*
    factor  :=  primary '*'*
    primary :=  '(' expr ')' | scalar | atom | M-literal | MT-literal
    scalar  :=  NUM ['/' NUM] ['√' NUM]  |  '√' NUM
    atom    :=  NAME ['(' NUM (',' NUM)* ')']

Composition is the explicit dot; the postfix star binds tightest.  A bare
scalar evaluates to that multiple of the identity.  M{m:[...]} is a
multiplication operator given by a level-m value table, MT{N:[r0;r1;...]}
one given by a per-level table on the tree.  The star on a bare shift
atom denotes that shift's conventional starred partner; on anything else
it is the transpose.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from . import shifts
from .operators import EmptyWindow, SparseOperator, first_discrepancy, identity, zero
from .sadic import Ball, LCFunction, TreeFunction
from .scalars import QuadScalar, _frac_str


class ExprSyntaxError(Exception):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class ArityError(Exception):
    pass


class EvalError(Exception):
    def __init__(self, message: str, span: tuple[int, int]):
        super().__init__(f"{message} (expression span {span[0]}..{span[1]})")
        self.span = span


ScalarParts = tuple[Fraction, Fraction, Union[int, None]]

_SPAN = dict(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Atom:
    name: str
    args: tuple[int, ...] = ()
    span: tuple[int, int] = field(**_SPAN)


@dataclass(frozen=True)
class ScalarLit:
    rat: Fraction
    irr: Fraction
    root: int | None
    span: tuple[int, int] = field(**_SPAN)


@dataclass(frozen=True)
class MultLit:
    level: int
    values: tuple[ScalarParts, ...]
    span: tuple[int, int] = field(**_SPAN)


@dataclass(frozen=True)
class TreeMultLit:
    depth: int
    rows: tuple[tuple[ScalarParts, ...], ...]
    span: tuple[int, int] = field(**_SPAN)


@dataclass(frozen=True)
class Adjoint:
    child: "OpExpr"
    span: tuple[int, int] = field(**_SPAN)


@dataclass(frozen=True)
class Compose:
    left: "OpExpr"
    right: "OpExpr"
    span: tuple[int, int] = field(**_SPAN)


@dataclass(frozen=True)
class Add:
    left: "OpExpr"
    right: "OpExpr"
    span: tuple[int, int] = field(**_SPAN)


@dataclass(frozen=True)
class Sub:
    left: "OpExpr"
    right: "OpExpr"
    span: tuple[int, int] = field(**_SPAN)


OpExpr = Union[Atom, ScalarLit, MultLit, TreeMultLit, Adjoint, Compose, Add, Sub]


# -- tokenizer ----------------------------------------------------------------

_SYMBOLS = "()+-.*{}[]:;,/√="


@dataclass(frozen=True)
class _Token:
    kind: str  # NAME | NUM | symbol itself | END
    text: str
    pos: int


def _tokenize(src: str) -> list[_Token]:
    out = []
    i = 0
    n = len(src)
    while i < n:
        c = src[i]
        if c.isspace():
            i += 1
            continue
        if c.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            out.append(_Token("NUM", src[i:j], i))
            i = j
            continue
        if c.isalpha():
            j = i
            while j < n and src[j].isalpha():
                j += 1
            out.append(_Token("NAME", src[i:j], i))
            i = j
            continue
        if c in _SYMBOLS:
            out.append(_Token(c, c, i))
            i += 1
            continue
        raise ExprSyntaxError(f"unexpected character {c!r}", i)
    out.append(_Token("END", "", n))
    return out


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.tokens = _tokenize(src)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ExprSyntaxError(f"expected {kind!r}, found {tok.text!r}", tok.pos)
        return self.next()

    def parse(self) -> OpExpr:
        node = self.expr()
        tail = self.peek()
        if tail.kind != "END":
            raise ExprSyntaxError(f"trailing input {tail.text!r}", tail.pos)
        return node

    def expr(self) -> OpExpr:
        node = self.term()
        while self.peek().kind in "+-":
            op = self.next()
            rhs = self.term()
            span = (node.span[0], rhs.span[1])
            node = Add(node, rhs, span=span) if op.kind == "+" else Sub(node, rhs, span=span)
        return node

    def term(self) -> OpExpr:
        node = self.factor()
        while self.peek().kind == ".":
            self.next()
            rhs = self.factor()
            node = Compose(node, rhs, span=(node.span[0], rhs.span[1]))
        return node

    def factor(self) -> OpExpr:
        node = self.primary()
        while self.peek().kind == "*":
            star = self.next()
            node = Adjoint(node, span=(node.span[0], star.pos + 1))
        return node

    def primary(self) -> OpExpr:
        tok = self.peek()
        if tok.kind == "(":
            self.next()
            node = self.expr()
            close = self.expect(")")
            return _respan(node, (tok.pos, close.pos + 1))
        if tok.kind in ("NUM", "√"):
            return self.scalar()
        if tok.kind == "NAME":
            return self.named()
        raise ExprSyntaxError(f"expected an operand, found {tok.text!r}", tok.pos)

    def scalar(self) -> ScalarLit:
        start = self.peek().pos
        rat, irr, root = self.scalar_part(allow_sign=False)
        end = self.tokens[self.pos - 1].pos + len(self.tokens[self.pos - 1].text)
        return ScalarLit(rat, irr, root, span=(start, end))

    def scalar_part(self, allow_sign: bool) -> ScalarParts:
        sign = Fraction(1)
        if allow_sign and self.peek().kind == "-":
            self.next()
            sign = Fraction(-1)
        tok = self.peek()
        if tok.kind == "√":
            self.next()
            rad = int(self.expect("NUM").text)
            return Fraction(0), sign, rad
        num = Fraction(int(self.expect("NUM").text))
        if self.peek().kind == "/":
            self.next()
            den = int(self.expect("NUM").text)
            if den == 0:
                raise ExprSyntaxError("zero denominator", tok.pos)
            num /= den
        if self.peek().kind == "√":
            self.next()
            rad = int(self.expect("NUM").text)
            return Fraction(0), sign * num, rad
        return sign * num, Fraction(0), None

    def scalar_value(self) -> ScalarParts:
        """Full scalar entry inside a table: up to two parts, one root."""
        rat, irr, root = self.scalar_part(allow_sign=True)
        if self.peek().kind in "+-":
            op = self.next()
            flip = Fraction(-1) if op.kind == "-" else Fraction(1)
            rat2, irr2, root2 = self.scalar_part(allow_sign=False)
            if root is not None and root2 is not None:
                raise ExprSyntaxError("two root parts in one scalar", op.pos)
            rat += flip * rat2
            irr += flip * irr2
            root = root if root is not None else root2
        return rat, irr, root

    def named(self) -> OpExpr:
        tok = self.next()
        name = tok.text
        if name == "M":
            return self.mult_literal(tok)
        if name == "MT":
            return self.tree_literal(tok)
        arity = shifts.ATOM_ARITIES.get(name)
        if arity is None:
            raise ExprSyntaxError(f"unknown operator name {name!r}", tok.pos)
        args: tuple[int, ...] = ()
        end = tok.pos + len(name)
        if self.peek().kind == "(":
            self.next()
            got = [int(self.expect("NUM").text)]
            while self.peek().kind == ",":
                self.next()
                got.append(int(self.expect("NUM").text))
            close = self.expect(")")
            end = close.pos + 1
            args = tuple(got)
        if len(args) != arity:
            raise ArityError(f"{name} takes {arity} argument(s), got {len(args)}")
        return Atom(name, args, span=(tok.pos, end))

    def mult_literal(self, tok: _Token) -> MultLit:
        self.expect("{")
        level = int(self.expect("NUM").text)
        self.expect(":")
        self.expect("[")
        values = [self.scalar_value()]
        while self.peek().kind == ",":
            self.next()
            values.append(self.scalar_value())
        self.expect("]")
        close = self.expect("}")
        return MultLit(level, tuple(values), span=(tok.pos, close.pos + 1))

    def tree_literal(self, tok: _Token) -> TreeMultLit:
        self.expect("{")
        depth = int(self.expect("NUM").text)
        self.expect(":")
        self.expect("[")
        rows = [self.value_row()]
        while self.peek().kind == ";":
            self.next()
            rows.append(self.value_row())
        self.expect("]")
        close = self.expect("}")
        return TreeMultLit(depth, tuple(rows), span=(tok.pos, close.pos + 1))

    def value_row(self) -> tuple[ScalarParts, ...]:
        row = [self.scalar_value()]
        while self.peek().kind == ",":
            self.next()
            row.append(self.scalar_value())
        return tuple(row)


def _respan(node: OpExpr, span: tuple[int, int]) -> OpExpr:
    object.__setattr__(node, "span", span)
    return node


def parse(text: str) -> OpExpr:
    """Parse an operator expression into its syntax tree."""
    return _Parser(text).parse()


# -- canonical printer ---------------------------------------------------------

def _format_parts(parts: ScalarParts) -> str:
    rat, irr, root = parts
    if root is None or not irr:
        return _frac_str(rat)
    if irr == 1:
        irr_str = f"√{root}"
    elif irr == -1:
        irr_str = f"-√{root}"
    else:
        irr_str = f"{_frac_str(irr)}√{root}"
    if not rat:
        return irr_str
    joiner = "+" if irr > 0 else ""
    return f"{_frac_str(rat)}{joiner}{irr_str}"


def _prec(node: OpExpr) -> int:
    if isinstance(node, (Add, Sub)):
        return 1
    if isinstance(node, Compose):
        return 2
    if isinstance(node, Adjoint):
        return 3
    return 4


def print_expr(node: OpExpr, min_prec: int = 0) -> str:
    p = _prec(node)
    if isinstance(node, Atom):
        body = node.name if not node.args else f"{node.name}({','.join(map(str, node.args))})"
    elif isinstance(node, ScalarLit):
        body = _format_parts((node.rat, node.irr, node.root))
    elif isinstance(node, MultLit):
        body = f"M{{{node.level}:[{','.join(_format_parts(v) for v in node.values)}]}}"
    elif isinstance(node, TreeMultLit):
        rows = ";".join(",".join(_format_parts(v) for v in row) for row in node.rows)
        body = f"MT{{{node.depth}:[{rows}]}}"
    elif isinstance(node, Adjoint):
        body = f"{print_expr(node.child, 3)}*"
    elif isinstance(node, Compose):
        body = f"{print_expr(node.left, 2)} . {print_expr(node.right, 3)}"
    elif isinstance(node, Add):
        body = f"{print_expr(node.left, 1)} + {print_expr(node.right, 2)}"
    elif isinstance(node, Sub):
        body = f"{print_expr(node.left, 1)} - {print_expr(node.right, 2)}"
    else:
        raise TypeError(f"not an expression node: {node!r}")
    return f"({body})" if p < min_prec else body


# -- evaluator -----------------------------------------------------------------

def _bind_scalar(parts: ScalarParts, s: int, span: tuple[int, int]) -> QuadScalar:
    rat, irr, root = parts
    if root is not None and root != s:
        raise EvalError(f"scalar uses √{root} in a radix-{s} session", span)
    return QuadScalar(s, rat, irr)


def eval_expr(node: OpExpr, s: int, depth: int) -> SparseOperator:
    """Evaluate a syntax tree in the session (s, depth)."""
    try:
        if isinstance(node, Atom):
            return shifts.atom_operator(node.name, node.args, s, depth)
        if isinstance(node, ScalarLit):
            c = _bind_scalar((node.rat, node.irr, node.root), s, node.span)
            if not c:
                return zero(s, depth)
            return identity(s, depth).scalar_mul(c)
        if isinstance(node, MultLit):
            table = tuple(_bind_scalar(v, s, node.span) for v in node.values)
            f = LCFunction(s, node.level, table)
            return shifts.make_mult(f, s, depth)
        if isinstance(node, TreeMultLit):
            rows = tuple(
                tuple(_bind_scalar(v, s, node.span) for v in row) for row in node.rows
            )
            F = TreeFunction(s, node.depth, rows)
            return shifts.make_mult_tree(F, s, depth)
        if isinstance(node, Adjoint):
            if isinstance(node.child, Atom) and node.child.name in shifts.SHIFT_NAMES:
                return shifts.shift_star(node.child.name, s, depth)
            return eval_expr(node.child, s, depth).adjoint()
        if isinstance(node, Compose):
            return eval_expr(node.left, s, depth) @ eval_expr(node.right, s, depth)
        if isinstance(node, Add):
            return eval_expr(node.left, s, depth) + eval_expr(node.right, s, depth)
        if isinstance(node, Sub):
            return eval_expr(node.left, s, depth) - eval_expr(node.right, s, depth)
    except (EvalError, EmptyWindow):
        raise
    except Exception as exc:
        raise EvalError(str(exc), node.span) from exc
    raise TypeError(f"not an expression node: {node!r}")


def eval_text(text: str, s: int, depth: int) -> SparseOperator:
    return eval_expr(parse(text), s, depth)


def window_meta(node: OpExpr, s: int, depth: int) -> tuple[int, int, int]:
    """(raise_min, raise_max, reliable) of an expression, without evaluating.

    Mirrors the window rules of the operator layer; raises EmptyWindow
    when a composition would have no reliable columns.
    """
    if isinstance(node, Atom):
        name, args = node.name, node.args
        if name in shifts.SHIFT_NAMES or name == "Sj":
            return 1, 1, depth - 1
        if name == "Sw":
            n = args[0]
            return n, n, depth - n
        if name == "PT":
            d = args[0] - args[1]
            return d, d, depth - max(d, 0)
        if name == "MU":
            d = args[0] - args[2]
            return d, d, depth - max(d, 0)
        return 0, 0, depth  # I, P, PV, CP
    if isinstance(node, (ScalarLit, MultLit, TreeMultLit)):
        return 0, 0, depth
    if isinstance(node, Adjoint):
        if isinstance(node.child, Atom) and node.child.name in shifts.SHIFT_NAMES:
            return -1, -1, depth
        cmin, cmax, crel = window_meta(node.child, s, depth)
        rel = min(crel + cmin, depth - max(-cmin, 0))
        return -cmax, -cmin, rel
    if isinstance(node, Compose):
        lmin, lmax, lrel = window_meta(node.left, s, depth)
        rmin, rmax, rrel = window_meta(node.right, s, depth)
        rel = min(rrel, lrel - max(rmax, 0))
        if rel < 0:
            raise EmptyWindow("composition has no reliable columns")
        return lmin + rmin, lmax + rmax, rel
    if isinstance(node, (Add, Sub)):
        lmin, lmax, lrel = window_meta(node.left, s, depth)
        rmin, rmax, rrel = window_meta(node.right, s, depth)
        return min(lmin, rmin), max(lmax, rmax), min(lrel, rrel)
    raise TypeError(f"not an expression node: {node!r}")


# -- relation checking -----------------------------------------------------------

@dataclass(frozen=True)
class CheckReport:
    equal: bool
    window: int
    discrepancy: tuple[Ball, Ball, QuadScalar, QuadScalar] | None


def check(lhs: OpExpr, rhs: OpExpr, s: int, depth: int) -> CheckReport:
    """Evaluate both sides and compare columns on the common window."""
    a = eval_expr(lhs, s, depth)
    b = eval_expr(rhs, s, depth)
    window = min(a.reliable, b.reliable)
    if window < 0:
        raise EmptyWindow("relation has no common reliable window")
    diff = first_discrepancy(a, b, window)
    return CheckReport(diff is None, window, diff)


def check_text(lhs: str, rhs: str, s: int, depth: int) -> CheckReport:
    return check(parse(lhs), parse(rhs), s, depth)
