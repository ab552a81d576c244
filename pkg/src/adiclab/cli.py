"""Command-line interface.

Verbs: verify (run the relation catalog), suite (emit the generated
manifest), eval (evaluate one expression and export it), fourier (graded
components of an expression), phi / oracle-check / snf / limit-sample
(integer K0 data).  Exit codes: 0 all checks pass, 1 a check failed,
2 usage or configuration error.  File output goes only under --out (or
$ADICLAB_OUT); without it, results print to stdout.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import exprlang, grading, ktheory, operators, suites
from .operators import EmptyWindow, UnreliableLevel, WindowTooDeep


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class SessionConfig:
    s: int
    depth: int
    seed: int = 0
    suite: str | None = None
    out: str | None = None
    emit: str = "json"
    funcs: int = 20

    def __post_init__(self):
        if self.s < 2:
            raise ConfigError("--s must be at least 2")
        if self.depth < 2:
            raise ConfigError("--depth must be at least 2 (shift relations need a window)")


def _out_dir(args) -> Path | None:
    out = getattr(args, "out", None) or os.environ.get("ADICLAB_OUT")
    if out is None:
        return None
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _deliver(text: str, out: Path | None, filename: str) -> None:
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        (out / filename).write_text(text)
        print(f"wrote {out / filename}")


def _json_text(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# -- verbs ---------------------------------------------------------------------

def cmd_verify(args) -> int:
    cfg = SessionConfig(
        s=args.s, depth=args.depth, seed=args.seed,
        suite=args.suite, out=args.out, funcs=args.funcs,
    )
    manifest = None
    if cfg.suite:
        manifest = Path(cfg.suite).read_text()
    results = suites.run_all_suites(
        cfg.s, cfg.depth, cfg.seed, n_funcs=cfg.funcs, manifest=manifest
    )
    ok = all(not r["failed"] for r in results)
    report = {
        "config": {
            "s": cfg.s,
            "depth": cfg.depth,
            "seed": cfg.seed,
            "suite": cfg.suite,
            "funcs": cfg.funcs,
        },
        "results": results,
        "ok": ok,
    }
    _deliver(_json_text(report), _out_dir(args), f"verify_s{cfg.s}_d{cfg.depth}.json")
    for r in results:
        status = "ok" if not r["failed"] else f"{len(r['failed'])} FAILED"
        print(f"  {r['suite']}: {r['passed']} passed, {status}", file=sys.stderr)
    return 0 if ok else 1


def cmd_suite(args) -> int:
    cfg = SessionConfig(s=args.s, depth=args.depth, seed=args.seed, funcs=args.funcs)
    catalog = suites.build_catalog(cfg.s, cfg.depth, cfg.seed, cfg.funcs)
    text = suites.catalog_to_manifest(catalog)
    _deliver(text, _out_dir(args), f"suite_s{cfg.s}_d{cfg.depth}_seed{cfg.seed}.txt")
    return 0


def cmd_eval(args) -> int:
    cfg = SessionConfig(s=args.s, depth=args.depth, out=args.out)
    op = exprlang.eval_text(args.expr, cfg.s, cfg.depth)
    if args.export == "mm":
        text = operators.to_matrix_market(op, float_values=args.float_values)
        name = "eval.mtx"
    else:
        text = _json_text(operators.to_json_dict(op, float_values=args.float_values))
        name = "eval.json"
    _deliver(text, _out_dir(args), name)
    return 0


def cmd_fourier(args) -> int:
    cfg = SessionConfig(s=args.s, depth=args.depth, out=args.out)
    op = exprlang.eval_text(args.expr, cfg.s, cfg.depth)
    dec = grading.graded(op)
    obj = {str(d): operators.to_json_dict(part) for d, part in dec.components.items()}
    _deliver(_json_text(obj), _out_dir(args), "fourier.json")
    return 0


def cmd_phi(args) -> int:
    m = ktheory.phi_matrix(args.s, args.n)
    if args.emit == "csv":
        _deliver(m.to_csv(), _out_dir(args), f"phi_s{args.s}_n{args.n}.csv")
    else:
        _deliver(_json_text(m.to_json_dict()), _out_dir(args), f"phi_s{args.s}_n{args.n}.json")
    return 0


def cmd_oracle_check(args) -> int:
    size = args.s**args.n
    bad = []
    for i in range(size):
        coords = [0] * size
        coords[i] = 1
        cls = ktheory.KClass(args.s, args.n, tuple(coords))
        via_matrix = ktheory.apply_phi(cls)
        via_rewrite = ktheory.rewrite_oracle(cls)
        if via_matrix != via_rewrite:
            bad.append({"basis": i, "matrix": via_matrix.coords, "rewrite": via_rewrite.coords})
    obj = {"s": args.s, "n": args.n, "basis_classes": size, "mismatches": bad}
    _deliver(_json_text(obj), _out_dir(args), f"oracle_s{args.s}_n{args.n}.json")
    return 0 if not bad else 1


def cmd_snf(args) -> int:
    upto = args.upto if args.upto is not None else args.n
    rows = []
    for n in range(args.n, upto + 1):
        m = ktheory.phi_matrix(args.s, n)
        rows.append({
            "n": n,
            "shape": [m.rows, m.cols],
            "invariant_factors": [str(d) for d in ktheory.snf(m)],
        })
    _deliver(_json_text({"s": args.s, "stages": rows}), _out_dir(args), f"snf_s{args.s}.json")
    return 0


def cmd_limit_sample(args) -> int:
    m = ktheory.compose_phi(args.s, args.n_from, args.n_to)
    obj = {
        "s": args.s,
        "from": args.n_from,
        "to": args.n_to,
        "matrix": m.to_json_dict(),
        "invariant_factors": [str(d) for d in ktheory.snf(m)],
        "quotient_scaling": str(args.s ** (args.n_to - args.n_from + 1)),
    }
    _deliver(
        _json_text(obj), _out_dir(args),
        f"limit_s{args.s}_{args.n_from}_{args.n_to}.json",
    )
    return 0


# -- argument wiring -------------------------------------------------------------

def _add_session_args(p: argparse.ArgumentParser, with_seed: bool = False):
    p.add_argument("--s", type=int, required=True, help="branching number, at least 2")
    p.add_argument("--depth", type=int, required=True, help="truncation depth, at least 2")
    if with_seed:
        p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output directory (default: $ADICLAB_OUT or stdout)")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="adiclab",
        description="exact truncated shift operators on the s-adic tree",
    )
    sub = top.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("verify", help="run the relation catalog")
    _add_session_args(p, with_seed=True)
    p.add_argument("--suite", help="manifest file to run instead of the built-in catalog")
    p.add_argument("--all", action="store_true", help="run every section (default)")
    p.add_argument("--funcs", type=int, default=20, help="random functions per identity")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("suite", help="emit the generated relation manifest")
    _add_session_args(p, with_seed=True)
    p.add_argument("--funcs", type=int, default=20)
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("eval", help="evaluate an operator expression")
    _add_session_args(p)
    p.add_argument("--expr", required=True)
    p.add_argument("--export", choices=("json", "mm"), default="json")
    p.add_argument("--float", dest="float_values", action="store_true",
                   help="lossy numeric values instead of exact strings")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("fourier", help="graded components of an expression")
    _add_session_args(p)
    p.add_argument("--expr", required=True)
    p.set_defaults(func=cmd_fourier)

    p = sub.add_parser("phi", help="connecting-map matrix at one stage")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--emit", choices=("json", "csv"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_phi)

    p = sub.add_parser("oracle-check", help="closed form vs symbolic rewriting")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_oracle_check)

    p = sub.add_parser("snf", help="invariant factors of the connecting maps")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--upto", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_snf)

    p = sub.add_parser("limit-sample", help="composite connecting map over a range")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--from", dest="n_from", type=int, required=True)
    p.add_argument("--to", dest="n_to", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_limit_sample)

    return top


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ConfigError, exprlang.ExprSyntaxError, exprlang.ArityError,
            exprlang.EvalError, EmptyWindow, UnreliableLevel, WindowTooDeep,
            ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
