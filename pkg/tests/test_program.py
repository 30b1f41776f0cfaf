import math

import numpy as np
import pytest
import scipy.linalg

from liesynth import (
    AlgebraElement,
    Factor,
    InvalidInput,
    atom,
    bracket,
    commutate,
    concat,
    evaluate,
    expm,
    factor_budget,
    frob_norm,
    invert,
    matrix_power,
    program_for,
    scale,
    to_schedule,
    word_length_sequence,
)
from liesynth.program import ProductProgram, identity_program, merge_adjacent
from liesynth.systems import (
    SO4_TARGET_SCALE,
    so4_bracket_catalog,
    so4_coupling,
    so4_generators,
    so4_target_log,
    su2_generators,
)

GENS = so4_generators()
CATALOG = so4_bracket_catalog()


def random_program(rng, num_gens=2, max_depth=3):
    prog = atom(int(rng.integers(num_gens)))
    for _ in range(int(rng.integers(1, 4))):
        op = rng.integers(4)
        other = atom(int(rng.integers(num_gens)), int(rng.choice([1, -1])))
        if op == 0:
            prog = concat(prog, other)
        elif op == 1:
            prog = invert(prog)
        elif op == 2:
            prog = scale(prog, float(rng.uniform(0.1, 2.0)))
        elif max(f.depth_exp for f in prog.factors) < max_depth:
            prog = commutate(prog, other)
    return prog


def test_atom_evaluates_to_single_exponential():
    p = atom(0)
    x = 0.8311
    assert np.allclose(evaluate(p, x, GENS), expm(GENS[0], x), atol=1e-14)
    m = atom(0, -1)
    assert np.allclose(evaluate(m, 0.3, GENS), expm(GENS[0], -0.3), atol=1e-14)


def test_atom_order_delta_is_one():
    assert atom(1).order_delta == 1.0


def test_invert_structure():
    assert invert(atom(0)) == atom(0, -1)
    p = ProductProgram((Factor(0, 1, 1.0, 0), Factor(1, 1, 1.0, 0)), 1.0)
    assert invert(p).factors == (Factor(1, -1, 1.0, 0), Factor(0, -1, 1.0, 0))
    assert invert(invert(p)) == p


def test_invert_is_exact_inverse(rng):
    for _ in range(10):
        p = random_program(rng)
        x = float(rng.uniform(0, 1.5))
        prod = evaluate(invert(p), x, GENS) @ evaluate(p, x, GENS)
        assert frob_norm(prod - np.eye(4)) < 1e-10


def test_scale_edge_cases():
    p = commutate(atom(0), atom(1))
    assert scale(p, 1.0) == p
    zeroed = scale(p, 0.0)
    assert all(f.coeff == 0.0 for f in zeroed.factors)
    deep = ProductProgram((Factor(0, 1, 1.0, 1),), 0.5)
    assert scale(deep, 4.0).factors[0].coeff == pytest.approx(2.0)
    with pytest.raises(InvalidInput):
        scale(p, -1.0)


def test_scale_matches_argument_scaling(rng):
    for _ in range(10):
        p = random_program(rng)
        a = float(rng.uniform(0, 3))
        x = float(rng.uniform(0, 1))
        lhs = evaluate(scale(p, a), x, GENS)
        rhs = evaluate(p, a * x, GENS)
        assert frob_norm(lhs - rhs) < 1e-12


def test_concat_basics():
    p = atom(0)
    assert concat(p, identity_program()) == p
    x = 0.05
    got = evaluate(concat(atom(0), atom(1)), x, GENS)
    assert np.allclose(got, expm(GENS[0], x) @ expm(GENS[1], x), atol=1e-14)


def test_concat_first_order_slope():
    total = AlgebraElement(GENS[0].mat + GENS[1].mat)
    xs = 2.0 ** -np.arange(4, 13)
    errs = [
        frob_norm(expm(total, x) - evaluate(concat(atom(0), atom(1)), x, GENS))
        for x in xs
    ]
    slope = np.polyfit(np.log(xs), np.log(errs), 1)[0]
    assert slope >= 1.9


def test_commutate_structure_is_four_deeper_factors():
    p = commutate(atom(1), atom(0))
    assert p.factors == (
        Factor(1, -1, 1.0, 1),
        Factor(0, -1, 1.0, 1),
        Factor(1, 1, 1.0, 1),
        Factor(0, 1, 1.0, 1),
    )
    assert p.order_delta == pytest.approx(0.5)


def test_commutate_with_itself_is_identity(rng):
    p = random_program(rng)
    x = 0.37
    got = evaluate(commutate(p, p), x, GENS)
    assert frob_norm(got - np.eye(4)) < 1e-12


def test_commutator_formula_slope():
    b = bracket(GENS[0], GENS[1])
    ts = 2.0 ** -np.arange(4, 13)
    errs = [
        frob_norm(
            expm(b, t * t)
            - expm(GENS[0], -t) @ expm(GENS[1], -t) @ expm(GENS[0], t) @ expm(GENS[1], t)
        )
        for t in ts
    ]
    slope = np.polyfit(np.log(ts), np.log(errs), 1)[0]
    assert slope >= 2.9


def test_program_for_depth_two_element_matches_ten_factor_product():
    prog = program_for(so4_coupling(), GENS, CATALOG)
    want = [
        (0, -1, 2), (1, -1, 2), (0, 1, 2), (1, 1, 2), (1, -1, 1),
        (1, -1, 2), (0, -1, 2), (1, 1, 2), (0, 1, 2), (1, 1, 1),
    ]
    assert [(f.gen, f.sign, f.depth_exp) for f in prog.factors] == want
    assert all(f.coeff == 1.0 for f in prog.factors)
    assert prog.order_delta == pytest.approx(0.25)


def test_program_for_generator_is_single_factor():
    prog = program_for(GENS[0], GENS, CATALOG)
    assert len(prog) == 1
    assert prog.order_delta == 1.0


def test_program_for_depth_one_element_has_four_factors():
    prog = program_for(bracket(GENS[1], GENS[0]), GENS, CATALOG)
    assert len(prog) == 4
    assert all(f.depth_exp == 1 for f in prog.factors)


def test_evaluate_edge_cases(rng):
    p = random_program(rng)
    assert np.allclose(evaluate(p, 0.0, GENS), np.eye(4), atol=1e-15)
    with pytest.raises(InvalidInput):
        evaluate(p, -0.1, GENS)


def test_evaluate_unitary(rng):
    for _ in range(5):
        p = random_program(rng)
        u = evaluate(p, float(rng.uniform(0, 2)), GENS)
        assert frob_norm(u.conj().T @ u - np.eye(4)) < 1e-9


def test_evaluate_matches_explicit_product_factorwise():
    # the scaled instantiation of the depth-two program, factor by factor
    prog = program_for(so4_coupling(), GENS, CATALOG)
    x = SO4_TARGET_SCALE * 1e-5
    q, h = x ** 0.25, x ** 0.5
    a1, a2 = GENS[0].mat, GENS[1].mat
    explicit = [
        (-a1, q), (-a2, q), (a1, q), (a2, q), (-a2, h),
        (-a2, q), (-a1, q), (a2, q), (a1, q), (a2, h),
    ]
    prod = np.eye(4)
    for mat, dur in explicit:
        prod = prod @ scipy.linalg.expm(mat * dur)
    assert frob_norm(evaluate(prog, x, GENS) - prod) < 1e-12
    for factor, (mat, dur) in zip(prog.factors, explicit):
        assert factor.exponent_at(x) == pytest.approx(
            dur if factor.sign > 0 else -dur, abs=1e-15
        )


def test_to_schedule_merges_adjacent_steps():
    assert merge_adjacent([(1, 0.2), (1, -0.5)]) == [(1, -0.3)]
    prog = program_for(so4_coupling(), GENS, CATALOG)
    sched = to_schedule(prog, 0.01)
    assert len(sched) == 10  # no adjacent duplicates in this program
    assert len(to_schedule(identity_program(), 0.3)) == 0


def test_schedule_merge_preserves_product(rng):
    for _ in range(5):
        p = random_program(rng)
        doubled = concat(p, p)  # forces adjacent duplicates at the seam
        x = float(rng.uniform(0, 1))
        sched = to_schedule(doubled, x)
        assert frob_norm(sched.product(GENS) - evaluate(doubled, x, GENS)) < 1e-12


def test_iterated_program_error_decreases():
    h = so4_target_log()
    prog = program_for(h, GENS, CATALOG)
    target = expm(h, 1.0)
    errs = []
    for n in (100, 1000, 10000, 100000):
        errs.append(frob_norm(target - matrix_power(evaluate(prog, 1.0 / n, GENS), n)))
    assert all(b < a + 1e-12 for a, b in zip(errs, errs[1:]))


def test_program_order_law():
    h = so4_target_log()
    prog = program_for(h, GENS, CATALOG)
    xs = 2.0 ** -np.arange(4, 13)
    errs = [frob_norm(expm(h, x) - evaluate(prog, x, GENS)) for x in xs]
    slope = np.polyfit(np.log(xs), np.log(errs), 1)[0]
    assert slope >= 1.0 + prog.order_delta - 0.15


def test_order_law_on_su2(rng):
    gens = su2_generators()
    from liesynth import close_by_brackets

    catalog = close_by_brackets(gens)
    coeffs = rng.uniform(-1, 1, size=3)
    h = AlgebraElement(sum(c * e.mat for c, e in zip(coeffs, catalog.elements)))
    prog = program_for(h, gens, catalog)
    xs = 2.0 ** -np.arange(4, 13)
    errs = [frob_norm(expm(h, x) - evaluate(prog, x, gens)) for x in xs]
    slope = np.polyfit(np.log(xs), np.log(errs), 1)[0]
    assert slope >= 1.0 + prog.order_delta - 0.15


def test_factor_budget():
    assert word_length_sequence(5) == [1, 3, 7, 17, 41]
    assert factor_budget(2, 1) == 5
    for m in (1, 2, 5):
        assert factor_budget(m, 0) == m
    with pytest.raises(InvalidInput):
        factor_budget(0, 1)
