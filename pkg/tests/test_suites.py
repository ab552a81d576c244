import random

import pytest

from adiclab import exprlang
from adiclab.sadic import LCFunction
from adiclab.suites import (
    SuiteLine,
    build_catalog,
    catalog_to_manifest,
    lc_literal,
    parse_manifest,
    random_lcfunction,
    run_altrep_suite,
    run_grading_suite,
    run_suite_lines,
    run_toeplitz_suite,
    run_w_commutation_suite,
    tree_literal,
    random_treefunction,
)


def test_random_function_distribution():
    rng = random.Random(0)
    for _ in range(50):
        f = random_lcfunction(rng, 3)
        assert f.level <= 2
        assert all(v.irr == 0 and -3 <= v.rat <= 3 for v in f.values)


def test_literals_parse_back():
    rng = random.Random(1)
    for _ in range(20):
        f = random_lcfunction(rng, 2)
        node = exprlang.parse(lc_literal(f))
        op = exprlang.eval_expr(node, 2, 3)
        from adiclab.shifts import make_mult

        assert op.equals_on_window(make_mult(f, 2, 3), 3)
    F = random_treefunction(rng, 2, 3)
    node = exprlang.parse(tree_literal(F))
    from adiclab.shifts import make_mult_tree

    op = exprlang.eval_expr(node, 2, 3)
    assert op.equals_on_window(make_mult_tree(F, 2, 3), 3)


def test_catalog_deterministic():
    a = build_catalog(2, 4, seed=3, n_funcs=3)
    b = build_catalog(2, 4, seed=3, n_funcs=3)
    assert a == b
    c = build_catalog(2, 4, seed=4, n_funcs=3)
    assert a != c


def test_catalog_sections_present():
    cat = build_catalog(2, 4, seed=0, n_funcs=2)
    for name in (
        "isometry",
        "commutation",
        "non-commutation",
        "coefficient-axioms",
        "ideal-identities",
        "hensel-units",
        "cuntz",
        "serre-units",
        "bunce-deddens",
    ):
        assert cat[name], name


def test_manifest_round_trip():
    cat = build_catalog(2, 4, seed=0, n_funcs=2)
    text = catalog_to_manifest(cat)
    back = parse_manifest(text)
    assert {k: [l.text for l in v] for k, v in cat.items()} == {
        k: [l.text for l in v] for k, v in back.items()
    }


def test_negative_lines_have_witnesses():
    cat = build_catalog(3, 4, seed=0, n_funcs=2)
    res = run_suite_lines("non-commutation", cat["non-commutation"], 3, 4)
    assert not res["failed"]
    assert len(res["witnesses"]) == len(cat["non-commutation"]) == 2


def test_runner_records_failures_with_witness():
    lines = [SuiteLine("U . U* == I", "false at the root")]
    res = run_suite_lines("demo", lines, 2, 4)
    assert res["passed"] == 0
    [failure] = res["failed"]
    assert failure["witness"]["col"] == [0, 0]


def test_runner_flags_uncheckable_lines():
    lines = [SuiteLine("U . U . U == U . U . U", "window dies at depth 2")]
    res = run_suite_lines("demo", lines, 2, 2)
    assert res["failed"][0]["witness"]["error"]


def test_programmatic_suites_pass_quickly():
    assert not run_toeplitz_suite(2, 4, 0, n_funcs=2)["failed"]
    assert not run_grading_suite(2, 4, 0, n_polys=3, max_degree=2)["failed"]
    assert not run_altrep_suite(2, 0, kmax=3, lmax=3, n_seqs=3)["failed"]
    assert not run_w_commutation_suite(2, 4, 0, n_funcs=3)["failed"]


@pytest.mark.parametrize("s", (2, 3))
def test_full_catalog_passes_small_depth(s):
    cat = build_catalog(s, 4, seed=1, n_funcs=2)
    for name, lines in cat.items():
        res = run_suite_lines(name, lines, s, 4)
        assert not res["failed"], (name, res["failed"][:2])
