import math

import numpy as np
import pytest

from conftest import random_antihermitian
from liesynth import (
    AlgebraElement,
    TargetUnreachable,
    expm,
    frob_norm,
    logm_principal,
    matrix_power,
    neighborhood_solve,
    reachability_check,
    synthesize_exact,
)
from liesynth.systems import (
    skew_pair,
    so4_generators,
    so4_target,
    su2_catalog,
    su2_exact_times,
    su2_generators,
    su2_target,
)

GENS = su2_generators()
CATALOG = su2_catalog()


def catalog_product(catalog, times):
    out = np.eye(catalog.dim_group, dtype=complex)
    for entry, t in zip(catalog.entries, times):
        out = out @ expm(entry.element, t)
    return out


def test_identity_solves_to_zero_times():
    times = neighborhood_solve(np.eye(2), CATALOG)
    assert np.allclose(times, 0.0)


def test_forward_generated_targets_recovered(rng):
    for _ in range(10):
        taus = rng.uniform(-0.1, 0.1, size=3)
        w = catalog_product(CATALOG, taus)
        times = neighborhood_solve(w, CATALOG)
        # the map need not be injective; assert on the product, not the times
        assert frob_norm(catalog_product(CATALOG, times) - w) < 1e-9


def test_alternative_ordering_solves_half_target():
    from liesynth.linalg import principal_sqrt

    w = principal_sqrt(su2_target())
    times = neighborhood_solve(w, CATALOG, ordering=(0, 2, 1))
    prod = np.eye(2, dtype=complex)
    for idx in (0, 2, 1):
        prod = prod @ expm(CATALOG[idx].element, times[idx])
    assert frob_norm(prod - w) < 1e-9


def test_closed_form_times_square_to_target():
    t1, t2, t3 = su2_exact_times()
    prod = catalog_product(CATALOG, [t1, t2, t3])
    assert frob_norm(matrix_power(prod, 2) - su2_target()) < 1e-10


def test_synthesize_exact_on_su2_target():
    sol = synthesize_exact(su2_target(), GENS, catalog=CATALOG)
    assert sol.residual < 1e-8
    assert sol.M >= 2  # the target is off the three-factor surface
    assert sol.schedule.product(GENS).shape == (2, 2)


def test_synthesize_exact_identity():
    sol = synthesize_exact(np.eye(2), GENS, catalog=CATALOG)
    assert sol.M == 1
    assert len(sol.schedule) == 0
    assert sol.residual < 1e-12


def test_synthesize_exact_random_targets(rng):
    for _ in range(20):
        h = random_antihermitian(rng, 2)
        h = h - np.trace(h) / 2.0 * np.eye(2)  # su(2): traceless
        x_f = expm(AlgebraElement(h), 1.0)
        sol = synthesize_exact(x_f, GENS, catalog=CATALOG)
        assert sol.residual < 1e-8


def test_replay_consistency():
    sol = synthesize_exact(su2_target(), GENS, catalog=CATALOG)
    single = catalog_product(CATALOG, sol.times)
    w = expm(logm_principal(su2_target()), 1.0 / sol.M)
    single_residual = frob_norm(single - w)
    replayed = matrix_power(single, sol.M)
    assert frob_norm(replayed - su2_target()) <= sol.M * single_residual + 1e-10


def test_word_expansion_preserves_product():
    sol = synthesize_exact(su2_target(), GENS, catalog=CATALOG)
    replayed = matrix_power(catalog_product(CATALOG, sol.times), sol.M)
    assert frob_norm(sol.schedule.product(GENS) - replayed) < 1e-10
    # the expanded schedule references original generators only
    assert {g for g, _ in sol.schedule.steps} <= {0, 1}


def block_so3_generators():
    """Rotations touching only the first three axes of a 4-dim space."""
    return [
        AlgebraElement(skew_pair(1, 2)),
        AlgebraElement(skew_pair(2, 3)),
    ]


def test_reachability_so4_fixture_target():
    ok, diag = reachability_check(so4_target(), so4_generators())
    assert ok
    assert diag["algebra_dim"] == 6
    assert diag["residual"] < 1e-6


def test_reachability_identity():
    ok, _ = reachability_check(np.eye(4), so4_generators())
    assert ok


def test_reachability_rejects_complement_mixing():
    gens = block_so3_generators()
    outside = expm(AlgebraElement(skew_pair(3, 4)), 0.5)
    ok, diag = reachability_check(outside, gens)
    assert not ok
    assert diag["algebra_dim"] == 3
    assert diag["residual"] > 1e-3


def test_synthesize_exact_unreachable_target():
    gens = block_so3_generators()
    outside = expm(AlgebraElement(skew_pair(3, 4)), 0.5)
    with pytest.raises(TargetUnreachable):
        synthesize_exact(outside, gens)


def test_branch_point_target_via_root():
    # complex-conjugate eigenvalue pair at -1: root once, then synthesize
    gens4 = so4_generators()
    x_f = expm(AlgebraElement(skew_pair(1, 2)), math.pi)
    sol = synthesize_exact(x_f, gens4)
    assert sol.residual < 1e-8
    assert sol.M % 2 == 0


def test_minus_identity_on_su2_is_rejected_by_principal_roots():
    # the principal square root of -1 is diag(i, i), which leaves SU(2); the
    # principal-branch pipeline therefore reports this target unreachable
    with pytest.raises(TargetUnreachable):
        synthesize_exact(-np.eye(2), GENS, catalog=CATALOG)
