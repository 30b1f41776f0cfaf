import numpy as np
import pytest

from liesynth import (
    AlgebraElement,
    InvalidInput,
    error_curve,
    expm,
    frob_norm,
    synthesize_trotter,
)
from liesynth.systems import so4_generators, so4_target, so4_target_log

import expected

GENS = so4_generators()
H = so4_target_log()


def test_small_n_rows_match_reference():
    for n, want in expected.TROTTER_TABLE[:8]:
        got = synthesize_trotter(H, n, GENS).error
        assert got == pytest.approx(want, abs=expected.TABLE_TOL)


def test_direct_product_oracle_small_n():
    # independent route: explicit ten-factor step, multiplied out n times by hand
    import scipy.linalg

    from liesynth.systems import SO4_TARGET_SCALE

    n = 6
    res = synthesize_trotter(H, n, GENS)
    sx = SO4_TARGET_SCALE / n
    q, half = sx ** 0.25, sx ** 0.5
    b1, b2 = GENS[0].mat, GENS[1].mat
    step = np.eye(4, dtype=complex)
    for mat, dur in [
        (-b1, q), (-b2, q), (b1, q), (b2, q), (-b2, half),
        (-b2, q), (-b1, q), (b2, q), (b1, q), (b2, half),
    ]:
        step = step @ scipy.linalg.expm(mat * dur)
    iterated = np.eye(4, dtype=complex)
    for _ in range(n):
        iterated = iterated @ step
    assert frob_norm(res.achieved - iterated) < 1e-12
    assert res.error == pytest.approx(frob_norm(so4_target() - iterated), abs=1e-12)


def test_pure_generator_is_exact_for_any_n():
    h = AlgebraElement(0.7 * GENS[0].mat)
    for n in (1, 3, 1000):
        assert synthesize_trotter(h, n, GENS).error < 1e-12


def test_errors_strictly_decrease_on_reference_grid():
    errs = [synthesize_trotter(H, n, GENS).error for n, _ in expected.TROTTER_TABLE[:8]]
    assert all(b < a for a, b in zip(errs, errs[1:]))


def test_trace_identity_crosscheck():
    ns = [n for n, _ in expected.TROTTER_TABLE if n <= 100000]
    for row in error_curve(H, ns, GENS):
        assert abs(row.error - row.error_trace) < 1e-9


def test_loglog_slope_negative():
    ns = np.array([n for n, _ in expected.TROTTER_TABLE])
    errs = np.array([e for _, e in expected.TROTTER_TABLE])
    slope = np.polyfit(np.log(ns), np.log(errs), 1)[0]
    assert slope < 0


def test_error_curve_shares_one_program():
    rows = error_curve(H, [2, 10], GENS)
    assert rows[0].program is rows[1].program
    assert [r.n for r in rows] == [2, 10]


def test_rejects_bad_n():
    with pytest.raises(InvalidInput):
        synthesize_trotter(H, 0, GENS)
    with pytest.raises(InvalidInput):
        error_curve(H, [], GENS)
