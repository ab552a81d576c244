"""Relation catalog: generation, manifest format, and the suite runner.

The identities satisfied by the four shifts are checked in two layers.
Most ship as a plain-text manifest of expression-language lines, one
``lhs == rhs`` or ``lhs != rhs`` per line, generated deterministically
from the session seed; anything not expressible as an operator word
(Toeplitz canonical forms, the grading round trip, the half-plane grid
model) runs as a programmatic section with the same report shape.

Random locally constant functions are drawn with modulus level <= 2 and
integer values in [-3, 3]; tree functions use the same value range.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import altrep, exprlang, grading, shifts
from .operators import EmptyWindow, SparseOperator, zero
from .sadic import (
    Ball,
    LCFunction,
    TreeFunction,
    constant,
    digit_indicator,
    endo_a_s,
    endo_a_u,
    endo_a_v,
    endo_a_w,
    endo_b_u,
    endo_b_v,
    indicator,
    transfer_b_s,
    transfer_b_w,
    tree_constant,
)
from .scalars import QuadScalar, format_scalar
from .shifts import ShiftKind


@dataclass(frozen=True)
class SuiteLine:
    text: str  # "lhs == rhs" or "lhs != rhs"
    note: str


# -- random inputs -------------------------------------------------------------

def random_lcfunction(rng: random.Random, s: int, max_level: int = 2) -> LCFunction:
    level = rng.randint(0, max_level)
    values = tuple(QuadScalar(s, rng.randint(-3, 3)) for _ in range(s**level))
    return LCFunction(s, level, values)


def random_treefunction(rng: random.Random, s: int, depth: int) -> TreeFunction:
    rows = tuple(
        tuple(QuadScalar(s, rng.randint(-3, 3)) for _ in range(s**n))
        for n in range(depth + 1)
    )
    return TreeFunction(s, depth, rows)


def lc_literal(f: LCFunction) -> str:
    return f"M{{{f.level}:[{','.join(format_scalar(v) for v in f.values)}]}}"


def tree_literal(F: TreeFunction) -> str:
    rows = ";".join(",".join(format_scalar(v) for v in row) for row in F.values)
    return f"MT{{{F.depth}:[{rows}]}}"


def _power(name: str, k: int) -> str:
    return " . ".join([name] * k) if k else "I"


# -- catalog generation ----------------------------------------------------------

def _isometry_lines(s: int, depth: int) -> list[SuiteLine]:
    lines = [
        SuiteLine(f"{j}* . {j} == I", f"{j} is an isometry") for j in "UVSW"
    ]
    lines.append(SuiteLine("U . U* == I - P(0)", "range projection of U"))
    lines.append(SuiteLine("P(0) == I - U . U*", "defect projection, U"))
    lines.append(SuiteLine("CP(0) == I - W . W*", "defect projection, W"))
    return lines


def _commutation_lines(rng: random.Random, s: int, depth: int, n_funcs: int) -> list[SuiteLine]:
    lines = []
    for _ in range(n_funcs):
        f = random_lcfunction(rng, s)
        m = lc_literal(f)
        lines += [
            SuiteLine(f"{m} . U == U . {lc_literal(endo_b_u(f))}", "slide f past U"),
            SuiteLine(f"U . {m} == {lc_literal(endo_a_u(f))} . U", "slide U past f"),
            SuiteLine(f"U* . {m} . U == {lc_literal(endo_b_u(f))}", "transfer along U"),
            SuiteLine(
                f"U . {m} . U* == {lc_literal(endo_a_u(f))} . U . U*",
                "inner endomorphism of U",
            ),
            SuiteLine(f"{m} . V == V . {lc_literal(endo_b_v(f))}", "slide f past V"),
            SuiteLine(f"V . {m} == {lc_literal(endo_a_v(f))} . V", "slide V past f"),
            SuiteLine(f"V* . {m} . V == {lc_literal(endo_b_v(f))}", "transfer along V"),
            SuiteLine(
                f"V . {m} . V* == {lc_literal(endo_a_v(f))} . (I - PV(0))",
                "inner endomorphism of V",
            ),
            SuiteLine(f"S* . {m} . S == {lc_literal(transfer_b_s(f))}", "transfer along S"),
            SuiteLine(f"S . {m} == {lc_literal(endo_a_s(f))} . S", "slide S past f"),
        ]
    # tree-function literals get large quickly; the catalog keeps samples
    # and the bulk of the tree-function commutation runs programmatically
    for _ in range(2):
        F = random_treefunction(rng, s, depth + 1)
        lines += [
            SuiteLine(
                f"W* . {tree_literal(F)} . W == {tree_literal(transfer_b_w(F))}",
                "transfer along W",
            ),
            SuiteLine(
                f"W . {tree_literal(F)} == {tree_literal(endo_a_w(F))} . W",
                "slide W past F",
            ),
        ]
    return lines


def _negative_lines(rng: random.Random, s: int, depth: int) -> list[SuiteLine]:
    # searched over the level-1 indicators; the first failing candidate wins
    lines = []
    for j in range(s):
        f = digit_indicator(s, j)
        lhs = f"{lc_literal(f)} . S"
        rhs = f"S . {lc_literal(transfer_b_s(f))}"
        if not exprlang.check_text(lhs, rhs, s, depth).equal:
            lines.append(SuiteLine(f"{lhs} != {rhs}", "f does not slide past S"))
            break
    for j in range(s):
        f = digit_indicator(s, j)
        sq = transfer_b_s(f * f)
        prod = transfer_b_s(f) * transfer_b_s(f)
        if sq != prod:
            lines.append(
                SuiteLine(
                    f"{lc_literal(sq)} != {lc_literal(prod)}",
                    "the S transfer map is not multiplicative",
                )
            )
            break
    return lines


def _heavy_nmax(s: int, depth: int) -> int:
    # serre projection columns have s**(n+1) entries; cap the index so the
    # densest operators in the catalog stay tractable at larger s
    return min(2 if s <= 3 else 1, depth - 2)


def _generator_exprs(rng: random.Random, shift: str, s: int, depth: int) -> list[str]:
    nmax = min(2, depth - 2) if shift != "W" else _heavy_nmax(s, depth)
    if shift == "U":
        out = [f"P({n})" for n in range(nmax + 1)]
    elif shift == "V":
        out = [f"PV({n})" for n in range(nmax + 1)]
    elif shift == "S":
        out = []
        for _ in range(3):
            n = rng.randint(1, 2)
            x = rng.randrange(s**n)
            y = rng.randrange(s**n)
            out.append(f"Sw({n},{x}) . Sw({n},{y})*")
    else:
        out = [f"CP({n})" for n in range(nmax + 1)]
    if shift in ("U", "V"):
        out.append(lc_literal(random_lcfunction(rng, s)))
    if shift == "W":
        out.append(tree_literal(random_treefunction(rng, s, depth + 1)))
    return out


def _axiom_lines(rng: random.Random, s: int, depth: int) -> list[SuiteLine]:
    lines = []
    for j in "UVSW":
        gens = _generator_exprs(rng, j, s, depth)
        lines.append(SuiteLine(f"{j}* . {j} == I", f"transfer of the identity, {j}"))
        for _ in range(4):
            a = rng.choice(gens)
            b = rng.choice(gens)
            lines += [
                SuiteLine(
                    f"{j}* . {j} . ({a}) . {j}* . {j} == {a}",
                    f"transfer undoes the inner endomorphism, {j}",
                ),
                SuiteLine(
                    f"{j} . {j}* . ({a}) . {j} . {j}* == ({j} . {j}*) . ({a}) . ({j} . {j}*)",
                    f"endomorphism of the transfer compresses, {j}",
                ),
                SuiteLine(
                    f"{j}* . {j} . ({a}) . {j}* . ({b}) . {j} == ({a}) . {j}* . ({b}) . {j}",
                    f"transfer property, {j}",
                ),
            ]
        if j in ("UV"):
            for _ in range(3):
                a = rng.choice(gens)
                b = rng.choice(gens)
                lines.append(
                    SuiteLine(
                        f"{j}* . ({a}) . ({b}) . {j} == ({j}* . ({a}) . {j}) . ({j}* . ({b}) . {j})",
                        f"transfer is multiplicative on the commutative block, {j}",
                    )
                )
    return lines


def _checkable(line: SuiteLine, s: int, depth: int) -> bool:
    """Window metadata only; no operators are materialized."""
    op = "!=" if "!=" in line.text else "=="
    lhs, _, rhs = line.text.partition(op)
    try:
        a = exprlang.window_meta(exprlang.parse(lhs.strip()), s, depth)
        b = exprlang.window_meta(exprlang.parse(rhs.strip()), s, depth)
        return min(a[2], b[2]) >= 0
    except EmptyWindow:
        return False


def _ideal_lines(rng: random.Random, s: int, depth: int) -> list[SuiteLine]:
    lines = []
    for j in "UVSW":
        gens = _generator_exprs(rng, j, s, depth)
        for n in (1, 2, 3):
            if n > depth - 2:
                continue
            a = rng.choice(gens)
            b = rng.choice(gens)
            jn = _power(j, n)
            jn1 = _power(j, n - 1)
            jsn = _power(f"{j}*", n)
            lines += [
                SuiteLine(
                    f"{j}* . ({a}) . {jn} == ({j}* . ({a}) . {j}) . {jn1}",
                    f"absorb one power into the transfer, {j} n={n}",
                ),
                SuiteLine(
                    f"({a}) . {jn} . {j}* == ({a}) . {jn} . {jsn} . {jn1}",
                    f"peel the final co-isometry, {j} n={n}",
                ),
                SuiteLine(
                    f"({b}) . {jsn} . ({a}) == {jsn} . {jn} . ({b}) . {jsn} . ({a})",
                    f"co-isometries move coefficients, {j} n={n}",
                ),
            ]
    return lines


def _hensel_lines(rng: random.Random, s: int, depth: int) -> list[SuiteLine]:
    lines = []
    for n in range(min(3, depth)):
        f = random_lcfunction(rng, s)
        c = constant(s, f(0))
        lines.append(
            SuiteLine(
                f"{lc_literal(f)} . PV({n}) == {lc_literal(c)} . PV({n})",
                "functions see only the basepoint on PV",
            )
        )
    kmax = min(3, depth - 1)
    for k in range(kmax + 1):
        for l in range(kmax + 1):
            lines.append(SuiteLine(f"PT({k},{l})* == PT({l},{k})", "matrix unit star"))
            for m in range(kmax + 1):
                for n in range(kmax + 1):
                    rhs = f"PT({k},{n})" if l == m else "0"
                    lines.append(
                        SuiteLine(
                            f"PT({k},{l}) . PT({m},{n}) == {rhs}",
                            "matrix unit multiplication",
                        )
                    )
    for n in range(min(2, depth - 2) + 1):
        lines.append(SuiteLine(f"V . PV({n}) . V* == PV({n + 1})", "PV moves up"))
        if n >= 1:
            lines.append(SuiteLine(f"V* . PV({n}) . V == PV({n - 1})", "PV moves down"))
    lines.append(SuiteLine("V* . PV(0) . V == 0", "PV dies at the root"))
    return lines


def _cuntz_lines(rng: random.Random, s: int, depth: int) -> list[SuiteLine]:
    lines = []
    for j in range(s):
        for k in range(s):
            rhs = "I" if j == k else "0"
            lines.append(
                SuiteLine(f"Sj({j})* . Sj({k}) == {rhs}", "digit isometries are orthogonal")
            )
    total = " + ".join(f"Sj({j}) . Sj({j})*" for j in range(s))
    lines.append(SuiteLine(f"{total} == I - PV(0)", "range projections fill the tree"))
    for _ in range(3):
        n = rng.randint(0, min(2, depth - 2))
        x = rng.randrange(s**n)
        j = rng.randrange(s)
        lines.append(
            SuiteLine(
                f"Sw({n},{x}) . Sj({j}) == Sw({n + 1},{x + j * s ** n})",
                "digit words append on the right",
            )
        )
    x = rng.randrange(s**2)
    lines.append(
        SuiteLine(
            f"Sw(2,{x}) == Sj({x % s}) . Sj({x // s})",
            "word equals its digit product",
        )
    )
    return lines


def _serre_lines(rng: random.Random, s: int, depth: int) -> list[SuiteLine]:
    lines = []
    nmax = _heavy_nmax(s, depth)
    for n in range(nmax + 1):
        for m in range(nmax + 1):
            rhs = f"CP({n})" if n == m else "0"
            lines.append(SuiteLine(f"CP({n}) . CP({m}) == {rhs}", "orthogonal projections"))
    for n in range(nmax):
        lines.append(SuiteLine(f"W . CP({n}) . W* == CP({n + 1})", "CP moves up"))
    units = []
    for _ in range(4):
        n = rng.randint(0, min(2, depth - 1))
        m = rng.randint(0, min(2, depth - 1))
        x = rng.randrange(s**n)
        y = rng.randrange(s**m)
        units.append((n, x, m, y))
    for n, x, m, y in units:
        lines.append(
            SuiteLine(f"MU({n},{x},{m},{y})* == MU({m},{y},{n},{x})", "matrix unit star")
        )
        q, z = units[rng.randrange(len(units))][:2]
        lines.append(
            SuiteLine(
                f"MU({n},{x},{m},{y}) . MU({m},{y},{q},{z}) == MU({n},{x},{q},{z})",
                "matrix unit multiplication",
            )
        )
        if n > m:
            stars = _power("W*", n - m)
            ws = _power("W", n - m)
            lines.append(
                SuiteLine(
                    f"MU({n},{x},{m},{y}) == MU({n},{x},{m},{y}) . {stars} . {ws}",
                    "factor through the level-preserving part",
                )
            )
    return lines


def _bd_lines(rng: random.Random, s: int, depth: int) -> list[SuiteLine]:
    lines = []
    for m in range(1, min(4, depth - 1) + 1):
        um = _power("U", m)
        usm = _power("U*", m)
        tele = " + ".join(f"P({i})" for i in range(m))
        lines.append(
            SuiteLine(f"I - {um} . {usm} == {tele}", "telescoping range defects")
        )
    for n in range(min(2, depth - 2) + 1):
        lines.append(SuiteLine(f"U . P({n}) . U* == P({n + 1})", "P moves up"))
    lines.append(SuiteLine("U* . P(0) . U == 0", "P dies at the root"))
    for _ in range(3):
        n = rng.randint(0, 1)
        x = rng.randrange(s**n)
        parent = lc_literal(indicator(s, n, x))
        kids = " + ".join(
            lc_literal(indicator(s, n + 1, x + l * s**n)) for l in range(s)
        )
        lines.append(SuiteLine(f"{parent} == {kids}", "ball splits into its children"))
    return lines


def build_catalog(
    s: int, depth: int, seed: int, n_funcs: int = 20
) -> dict[str, list[SuiteLine]]:
    """Deterministic expression-language catalog for one session."""
    rng = random.Random(seed)
    catalog = {
        "isometry": _isometry_lines(s, depth),
        "commutation": _commutation_lines(rng, s, depth, n_funcs),
        "non-commutation": _negative_lines(rng, s, depth),
        "coefficient-axioms": _axiom_lines(rng, s, depth),
        "ideal-identities": _ideal_lines(rng, s, depth),
        "hensel-units": _hensel_lines(rng, s, depth),
        "cuntz": _cuntz_lines(rng, s, depth),
        "serre-units": _serre_lines(rng, s, depth),
        "bunce-deddens": _bd_lines(rng, s, depth),
    }
    # identities whose windows die at this truncation depth are not
    # verifiable; drop them rather than report boundary artifacts
    return {
        name: [line for line in lines if _checkable(line, s, depth)]
        for name, lines in catalog.items()
    }


def catalog_to_manifest(catalog: dict[str, list[SuiteLine]]) -> str:
    out = []
    for name, lines in catalog.items():
        out.append(f"# suite: {name}")
        for line in lines:
            out.append(f"{line.text}  # {line.note}")
        out.append("")
    return "\n".join(out)


def parse_manifest(text: str) -> dict[str, list[SuiteLine]]:
    sections: dict[str, list[SuiteLine]] = {}
    current = "default"
    for raw in text.splitlines():
        stripped = raw.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            body = stripped.lstrip("#").strip()
            if body.startswith("suite:"):
                current = body.split(":", 1)[1].strip()
            continue
        expr, _, note = stripped.partition("#")
        sections.setdefault(current, []).append(SuiteLine(expr.strip(), note.strip()))
    return sections


# -- running -----------------------------------------------------------------

def _witness_json(diff) -> dict:
    row, col, lhs, rhs = diff
    return {
        "row": [row.level, row.center],
        "col": [col.level, col.center],
        "lhs": format_scalar(lhs),
        "rhs": format_scalar(rhs),
    }


def run_suite_lines(
    name: str, lines: list[SuiteLine], s: int, depth: int
) -> dict:
    passed = 0
    failed = []
    witnesses = []
    for idx, line in enumerate(lines):
        if "!=" in line.text:
            lhs, _, rhs = line.text.partition("!=")
            negate = True
        else:
            lhs, _, rhs = line.text.partition("==")
            negate = False
        try:
            report = exprlang.check_text(lhs.strip(), rhs.strip(), s, depth)
        except (EmptyWindow, exprlang.EvalError, exprlang.ExprSyntaxError,
                exprlang.ArityError) as exc:
            failed.append({"line": idx, "text": line.text, "window": None,
                           "witness": {"error": str(exc)}})
            continue
        ok = (not report.equal) if negate else report.equal
        if ok:
            passed += 1
            if negate and report.discrepancy is not None:
                witnesses.append(
                    {
                        "line": idx,
                        "text": line.text,
                        "window": report.window,
                        "witness": _witness_json(report.discrepancy),
                    }
                )
        else:
            failed.append(
                {
                    "line": idx,
                    "text": line.text,
                    "window": report.window,
                    "witness": _witness_json(report.discrepancy)
                    if report.discrepancy
                    else None,
                }
            )
    return {"suite": name, "passed": passed, "failed": failed, "witnesses": witnesses}


def _result(name: str, checks: list[tuple[str, bool, dict | None]]) -> dict:
    passed = 0
    failed = []
    for idx, (text, ok, extra) in enumerate(checks):
        if ok:
            passed += 1
        else:
            failed.append({"line": idx, "text": text, "window": None, "witness": extra})
    return {"suite": name, "passed": passed, "failed": failed, "witnesses": []}


def run_w_commutation_suite(s: int, depth: int, seed: int, n_funcs: int = 20) -> dict:
    """Tree-function commutation at full repetition count, operator level."""
    rng = random.Random(seed + 4)
    w = shifts.make_shift(ShiftKind.SERRE, s, depth)
    w_star = shifts.make_shift_adjoint(ShiftKind.SERRE, s, depth)
    checks: list[tuple[str, bool, dict | None]] = []
    for _ in range(n_funcs):
        F = random_treefunction(rng, s, depth + 1)
        mf = shifts.make_mult_tree(F, s, depth)
        lhs = w @ mf
        rhs = shifts.make_mult_tree(endo_a_w(F), s, depth) @ w
        window = min(lhs.reliable, rhs.reliable)
        checks.append(("slide W past F", lhs.equals_on_window(rhs, window), None))
        lhs2 = w_star @ mf @ w
        rhs2 = shifts.make_mult_tree(transfer_b_w(F), s, depth)
        window = min(lhs2.reliable, rhs2.reliable)
        checks.append(("transfer along W", lhs2.equals_on_window(rhs2, window), None))
    return _result("commutation-w", checks)


def run_toeplitz_suite(s: int, depth: int, seed: int, n_funcs: int = 5) -> dict:
    rng = random.Random(seed + 1)
    checks: list[tuple[str, bool, dict | None]] = []
    zero_fn = constant(s, 0)
    for _ in range(n_funcs):
        f = random_lcfunction(rng, s)
        t = shifts.toeplitz_u([f] * depth, f, s, depth)
        m = shifts.make_mult(f, s, depth)
        checks.append(
            ("constant sequence collapses to the multiplication operator (U)",
             t.equals_on_window(m, t.reliable), None)
        )
        f0 = random_lcfunction(rng, s)
        t0 = shifts.toeplitz_u([f0] + [zero_fn] * (depth - 1), zero_fn, s, depth)
        want = shifts.make_mult(f0, s, depth) @ shifts.bd_projection(0, s, depth)
        checks.append(
            ("single head term reduces to f0 cut by the defect (U)",
             t0.equals_on_window(want, t0.reliable), None)
        )
        xs = [rng.randint(-3, 3) for _ in range(depth)]
        tv = shifts.toeplitz_v(xs, f, s, depth)
        ok = True
        for n in range(tv.reliable + 1):
            for x in range(s**n):
                col = tv.apply(Ball(n, x))
                expect_val = QuadScalar(s, xs[n]) if x == 0 else f(x)
                got = col.get(Ball(n, x), QuadScalar(s, 0))
                if got != expect_val or len(col) > 1:
                    ok = False
        checks.append(("diagonal values of the V canonical form", ok, None))
        tv_const = shifts.toeplitz_v([f(0)] * depth, f, s, depth)
        checks.append(
            ("constant basepoint sequence collapses (V)",
             tv_const.equals_on_window(shifts.make_mult(f, s, depth), tv_const.reliable),
             None)
        )
        G = random_treefunction(rng, s, depth)
        tw = shifts.toeplitz_w([G] * depth, G, s, depth)
        mw = shifts.make_mult_tree(G, s, depth)
        checks.append(
            ("constant sequence collapses to the multiplication operator (W)",
             tw.equals_on_window(mw, tw.reliable), None)
        )
    for _ in range(min(n_funcs, 4 if s <= 3 else 2)):
        # projection sandwiches get dense quickly; keep the index small
        G = random_treefunction(rng, s, depth)
        mw = shifts.make_mult_tree(G, s, depth)
        j = rng.randint(0, _heavy_nmax(s, depth))
        Gj = random_treefunction(rng, s, depth)
        gs = [G] * depth
        gs[j] = Gj
        tw2 = shifts.toeplitz_w(gs, G, s, depth)
        pj = shifts.serre_projection_chain(j, s, depth)
        want2 = mw + pj @ (shifts.make_mult_tree(Gj, s, depth) - mw) @ pj
        window = min(tw2.reliable, want2.reliable)
        checks.append(
            ("one perturbed term matches the chain-built projection sandwich (W)",
             tw2.equals_on_window(want2, window), None)
        )
    # compatibility of the canonical form with the inner endomorphism/transfer
    u = shifts.make_shift(ShiftKind.BUNCE_DEDDENS, s, depth)
    u_star = shifts.make_shift_adjoint(ShiftKind.BUNCE_DEDDENS, s, depth)
    for _ in range(3):
        fs = [random_lcfunction(rng, s) for _ in range(depth + 1)]
        f_inf = constant(s, 0)
        t = shifts.toeplitz_u(fs, f_inf, s, depth)
        pushed = u @ t @ u_star
        twisted = shifts.toeplitz_u(
            [zero_fn] + [endo_a_u(g) for g in fs[:-1]], f_inf, s, depth
        )
        window = min(pushed.reliable, twisted.reliable)
        checks.append(
            ("inner endomorphism shifts the sequence up (U)",
             pushed.equals_on_window(twisted, window), None)
        )
        pulled = u_star @ t @ u
        back = shifts.toeplitz_u(
            [endo_b_u(g) for g in fs[1:]], f_inf, s, depth
        )
        window = min(pulled.reliable, back.reliable)
        checks.append(
            ("transfer shifts the sequence down (U)",
             pulled.equals_on_window(back, window), None)
        )
    return _result("toeplitz", checks)


def normalized_poly(
    rng: random.Random,
    kind: ShiftKind,
    s: int,
    depth: int,
    max_degree: int = 3,
) -> tuple[SparseOperator, dict[int, SparseOperator]]:
    """Random polynomial in the shift with normalized coefficients."""
    max_degree = min(max_degree, depth // 2)  # degree k costs 2k window levels
    j = shifts.make_shift(kind, s, depth)
    j_star = shifts.make_shift_adjoint(kind, s, depth)
    coeffs: dict[int, SparseOperator] = {}
    x = zero(s, depth)
    for n in range(-max_degree, max_degree + 1):
        if rng.random() < 0.4:
            continue
        base = shifts.make_mult(random_lcfunction(rng, s), s, depth)
        k = abs(n)
        jk = shifts.op_power(j, k)
        jsk = shifts.op_power(j_star, k)
        if n >= 0:
            a = base @ jk @ jsk
            term = a @ jk
        else:
            a = jk @ jsk @ base
            term = jsk @ a
        if not a.nnz():
            continue
        coeffs[n] = a
        x = x + term
    return x, coeffs


def run_grading_suite(
    s: int, depth: int, seed: int, n_polys: int = 12, max_degree: int = 3
) -> dict:
    rng = random.Random(seed + 2)
    checks: list[tuple[str, bool, dict | None]] = []
    for kind in ShiftKind:
        j = shifts.make_shift(kind, s, depth)
        j_star = shifts.make_shift_adjoint(kind, s, depth)
        checks.append(
            (f"expectation kills the shift ({kind.value})",
             not grading.expectation(j).nnz(), None)
        )
        for _ in range(n_polys):
            x, coeffs = normalized_poly(rng, kind, s, depth, max_degree)
            dec = grading.graded(x)
            checks.append(
                (f"graded parts resum exactly ({kind.value})",
                 dec.resum().equals_on_window(x, x.reliable)
                 and x.equals_on_window(dec.resum(), x.reliable),
                 None)
            )
            ok = True
            for n, a in coeffs.items():
                got = grading.fourier_coeff(x, j, n, j_star=j_star)
                window = min(got.reliable, a.reliable)
                if window < 0 or not got.equals_on_window(a, window):
                    ok = False
                    break
            checks.append(
                (f"coefficients recovered exactly ({kind.value})", ok, None)
            )
    f = random_lcfunction(rng, s)
    mf = shifts.make_mult(f, s, depth)
    e = grading.expectation(mf)
    checks.append(("expectation fixes diagonal operators", e.equals_on_window(mf, depth), None))
    checks.append(
        ("expectation is idempotent",
         grading.expectation(e).equals_on_window(e, e.reliable), None)
    )
    gens = [
        mf,
        shifts.bd_projection(1, s, depth),
        shifts.basepoint_projection(1, s, depth),
        shifts.serre_projection(1, s, depth),
        shifts.cuntz_word(1, 0, s, depth) @ shifts.cuntz_word(1, 1, s, depth).adjoint(),
        shifts.make_mult_tree(tree_constant(s, depth, 1), s, depth),
    ]
    checks.append(
        ("coefficient-algebra generators are gauge invariant",
         all(g.is_level_preserving() for g in gens), None)
    )
    w = shifts.make_shift(ShiftKind.SERRE, s, depth)
    w_star = shifts.make_shift_adjoint(ShiftKind.SERRE, s, depth)
    mu = shifts.matrix_unit(Ball(2, 1), Ball(1, 0), s, depth)
    halved = mu @ w_star
    checks.append(
        ("matrix unit factors through a gauge invariant part",
         halved.is_level_preserving(), None)
    )
    checks.append(
        ("gauge factorization reassembles the matrix unit",
         (halved @ w).equals_on_window(mu, min((halved @ w).reliable, mu.reliable)),
         None)
    )
    return _result("grading-roundtrip", checks)


def run_altrep_suite(s: int, seed: int, kmax: int = 5, lmax: int = 5, n_seqs: int = 10) -> dict:
    rng = random.Random(seed + 3)
    checks: list[tuple[str, bool, dict | None]] = []
    shift_op = altrep.grid_shift(s, kmax, lmax)
    ident = altrep.grid_identity(s, kmax, lmax)
    checks.append(
        ("grid shift is an isometry on the interior",
         (shift_op.adjoint() @ shift_op).equals_on(ident, lmax - 1), None)
    )
    for _ in range(n_seqs):
        fs = [random_lcfunction(rng, s) for _ in range(lmax + 1)]
        mult = altrep.grid_mult(fs, s, kmax, lmax)
        lhs = shift_op @ mult @ shift_op.adjoint()
        rhs = altrep.grid_mult(altrep.sequence_shift_twisted(fs, s), s, kmax, lmax)
        checks.append(
            ("conjugation twists the coefficient sequence", lhs.equals_on(rhs, lmax), None)
        )
    return _result("altrep", checks)


def run_all_suites(
    s: int,
    depth: int,
    seed: int,
    n_funcs: int = 20,
    manifest: str | None = None,
) -> list[dict]:
    if manifest is None:
        catalog = build_catalog(s, depth, seed, n_funcs)
    else:
        catalog = parse_manifest(manifest)
    results = [
        run_suite_lines(name, lines, s, depth) for name, lines in catalog.items()
    ]
    if manifest is None:
        results.append(run_w_commutation_suite(s, depth, seed, n_funcs))
        results.append(run_toeplitz_suite(s, depth, seed))
        # polynomial size scales with the cost of dense shift powers
        n_polys, max_degree = {2: (12, 3), 3: (6, 3)}.get(s, (3, 2))
        results.append(run_grading_suite(s, depth, seed, n_polys, max_degree))
        results.append(run_altrep_suite(s, seed))
    return results
