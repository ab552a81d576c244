import random

import pytest

from adiclab.grading import expectation, fourier_coeff, graded
from adiclab.operators import first_discrepancy, identity, zero
from adiclab.sadic import Ball, LCFunction
from adiclab.scalars import QuadScalar
from adiclab.shifts import (
    ShiftKind,
    basepoint_projection,
    bd_projection,
    cuntz_word,
    make_mult,
    make_shift,
    make_shift_adjoint,
    op_power,
    serre_projection,
)
from adiclab.suites import normalized_poly


def lc(s, level, vals):
    return LCFunction(s, level, tuple(QuadScalar(s, v) for v in vals))


def test_expectation_examples():
    u = make_shift(ShiftKind.BUNCE_DEDDENS, 2, 4)
    assert expectation(u).nnz() == 0
    f = make_mult(lc(2, 1, [3, -1]), 2, 4)
    assert expectation(f).equals_on_window(f, 4)
    sandwich = u @ f @ u.adjoint()
    mixed = sandwich + u @ u
    e = expectation(mixed)
    assert e.equals_on_window(sandwich, e.reliable)


def test_expectation_idempotent_and_fixed_points():
    u = make_shift(ShiftKind.BUNCE_DEDDENS, 2, 4)
    f = make_mult(lc(2, 1, [1, 2]), 2, 4)
    x = f @ u + f + u.adjoint()
    e = expectation(x)
    assert expectation(e).equals_on_window(e, e.reliable)
    assert not x.is_level_preserving()
    assert e.is_level_preserving()
    assert expectation(e).equals_on_window(e, e.reliable)


def test_graded_examples():
    u = make_shift(ShiftKind.BUNCE_DEDDENS, 2, 4)
    dec = graded(u + u.adjoint())
    assert set(dec.components) == {-1, 1}
    assert dec.components[1].equals_on_window(u, dec.components[1].reliable)
    dec_i = graded(identity(2, 4))
    assert set(dec_i.components) == {0}
    f = make_mult(lc(2, 1, [2, 5]), 2, 4)
    two = f @ u @ u
    dec2 = graded(two)
    assert set(dec2.components) == {2}
    assert dec2.components[2].raise_max == 2 and dec2.components[2].raise_min == 2


def test_graded_resums_exactly():
    rng = random.Random(3)
    for kind in ShiftKind:
        x, _ = normalized_poly(rng, kind, 2, 5)
        dec = graded(x)
        again = dec.resum()
        assert first_discrepancy(again, x, x.reliable) is None
        assert sorted(dec.components) == sorted(
            {r.level - c.level for r, c, _ in x.entries()}
        )


def test_fourier_examples():
    s, depth = 2, 4
    u = make_shift(ShiftKind.BUNCE_DEDDENS, s, depth)
    u_star = make_shift_adjoint(ShiftKind.BUNCE_DEDDENS, s, depth)
    f = make_mult(lc(s, 1, [1, -2]), s, depth)
    x = f @ u
    a1 = fourier_coeff(x, u, 1, j_star=u_star)
    want = f @ u @ u_star
    assert a1.equals_on_window(want, min(a1.reliable, want.reliable))
    a0 = fourier_coeff(f, u, 0, j_star=u_star)
    assert a0.equals_on_window(f, a0.reliable)
    y = u_star @ f
    a_neg = fourier_coeff(y, u, -1, j_star=u_star)
    want_neg = u @ u_star @ f
    assert a_neg.equals_on_window(want_neg, min(a_neg.reliable, want_neg.reliable))


@pytest.mark.parametrize("kind", list(ShiftKind))
def test_fourier_round_trip(kind):
    rng = random.Random(17)
    s, depth = 2, 6
    j = make_shift(kind, s, depth)
    j_star = make_shift_adjoint(kind, s, depth)
    for _ in range(8):
        x, coeffs = normalized_poly(rng, kind, s, depth)
        for n, a in coeffs.items():
            got = fourier_coeff(x, j, n, j_star=j_star)
            d = min(got.reliable, a.reliable)
            assert d >= 0
            assert got.equals_on_window(a, d), (kind, n)
        # absent degrees come back zero
        for n in range(-3, 4):
            if n not in coeffs:
                got = fourier_coeff(x, j, n, j_star=j_star)
                assert got.equals_on_window(zero(s, depth), got.reliable)


def test_coefficient_generators_gauge_invariant():
    s, depth = 2, 5
    gens = [
        make_mult(lc(s, 1, [1, 4]), s, depth),
        bd_projection(1, s, depth),
        basepoint_projection(2, s, depth),
        serre_projection(1, s, depth),
        cuntz_word(2, 1, s, depth) @ cuntz_word(2, 3, s, depth).adjoint(),
    ]
    for g in gens:
        assert g.is_level_preserving()
        e = expectation(g)
        assert e.equals_on_window(g, min(e.reliable, g.reliable))


def test_gauge_factorization_of_matrix_units():
    from adiclab.shifts import matrix_unit

    s, depth = 2, 5
    w = make_shift(ShiftKind.SERRE, s, depth)
    w_star = make_shift_adjoint(ShiftKind.SERRE, s, depth)
    mu = matrix_unit(Ball(3, 2), Ball(1, 1), s, depth)
    level_part = mu @ op_power(w_star, 2)
    assert level_part.is_level_preserving()
    back = level_part @ op_power(w, 2)
    d = min(back.reliable, mu.reliable)
    assert back.equals_on_window(mu, d)
