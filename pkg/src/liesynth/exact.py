"""Exact synthesis: matrix log, fractional roots, and a neighborhood solve.

Given a target X_f = exp(A), pick a root order M so exp(A/M) sits close
enough to the identity that the factorization
exp(A/M) = prod_j exp(A_j t_j) over a similarity-generated basis has a
solution; replay it M times and unroll derived generators into words over
the original ones.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .algebra import (
    BasisCatalog,
    close_by_brackets,
    close_by_similarity,
    decompose,
    expansion_steps,
)
from .errors import (
    BranchPoint,
    InvalidInput,
    MNotFound,
    NoConvergence,
    ResidualTooLarge,
    TargetUnreachable,
)
from .linalg import (
    AlgebraElement,
    as_matrix,
    expm,
    frob_norm,
    logm_principal,
    matrix_power,
    principal_sqrt,
    unitarity_defect,
)
from .program import PulseSchedule, merge_adjacent

log = logging.getLogger("liesynth.exact")

M_CAP = 2 ** 16
SOLVE_TOL = 1e-9
FD_STEP = 1e-6
MAX_NEWTON_ITERS = 100
MIN_DAMPING = 2.0 ** -24


@dataclass
class ExactSolution:
    """Root order, per-element times (catalog order), and the expanded schedule."""

    M: int
    times: List[float]
    schedule: PulseSchedule
    residual: float
    catalog: BasisCatalog
    ordering: List[int]


def _resolve_ordering(ordering, size: int) -> List[int]:
    if ordering is None:
        return list(range(size))
    order = [int(i) for i in ordering]
    if sorted(order) != list(range(size)):
        raise InvalidInput(f"ordering must permute 0..{size - 1}, got {ordering}")
    return order


def _residual_vector(product: np.ndarray, w_inv: np.ndarray) -> np.ndarray:
    a = logm_principal(product @ w_inv).mat.ravel()
    return np.concatenate([a.real, a.imag])


def neighborhood_solve(
    w: np.ndarray,
    catalog: BasisCatalog,
    ordering: Optional[Sequence[int]] = None,
    tol: float = SOLVE_TOL,
) -> np.ndarray:
    """Times t with prod_j exp(A_j t_j) = W within tol (Frobenius).

    Damped Newton on the log of the residual rotation, Jacobian by central
    finite differences, starting from t = 0 -- which is why W must be near
    the identity.  Raises NoConvergence when damping stalls or the
    iteration cap is hit; a branch-cut hit at the starting point propagates
    as BranchPoint (W too far out).
    """
    w = as_matrix(w)
    order = _resolve_ordering(ordering, len(catalog))
    elements = [catalog[i].element for i in order]
    w_inv = w.conj().T

    def product_at(t: np.ndarray) -> np.ndarray:
        out = np.eye(catalog.dim_group, dtype=complex)
        for el, tj in zip(elements, t):
            out = out @ expm(el, tj)
        return out

    t = np.zeros(len(elements))
    res = _residual_vector(product_at(t), w_inv)  # BranchPoint propagates here
    merit = np.linalg.norm(res)
    for iteration in range(MAX_NEWTON_ITERS):
        if frob_norm(product_at(t) - w) < tol:
            times = np.zeros(len(catalog))
            times[order] = t
            return times
        jac = np.empty((res.size, t.size))
        for j in range(t.size):
            shift = np.zeros_like(t)
            shift[j] = FD_STEP
            try:
                hi = _residual_vector(product_at(t + shift), w_inv)
                lo = _residual_vector(product_at(t - shift), w_inv)
            except BranchPoint as exc:
                raise NoConvergence(f"branch cut during differentiation: {exc}")
            jac[:, j] = (hi - lo) / (2.0 * FD_STEP)
        step, _, _, _ = np.linalg.lstsq(jac, -res, rcond=None)
        damping = 1.0
        while damping >= MIN_DAMPING:
            try:
                new_res = _residual_vector(product_at(t + damping * step), w_inv)
            except BranchPoint:
                damping /= 2.0
                continue
            if np.linalg.norm(new_res) < merit:
                break
            damping /= 2.0
        else:
            raise NoConvergence(
                f"stalled at residual {merit:.3e} after {iteration} iterations"
            )
        t = t + damping * step
        res = new_res
        merit = np.linalg.norm(res)
    if frob_norm(product_at(t) - w) < tol:
        times = np.zeros(len(catalog))
        times[order] = t
        return times
    raise NoConvergence(f"no convergence in {MAX_NEWTON_ITERS} iterations")


def _log_past_branch_points(x: np.ndarray) -> Tuple[AlgebraElement, int]:
    """Principal log, taking principal square roots past eigenvalues at -1."""
    roots = 0
    while True:
        try:
            return logm_principal(x), roots
        except BranchPoint:
            if roots >= 2:
                raise
            x = principal_sqrt(x)
            roots += 1


def synthesize_exact(
    x_f: np.ndarray,
    generators: Sequence[AlgebraElement],
    catalog: Optional[BasisCatalog] = None,
    ordering: Optional[Sequence[int]] = None,
    m_cap: int = M_CAP,
) -> ExactSolution:
    """Drive the identity to X_f exactly (up to solve tolerance).

    Doubles the root order M from 1 until the neighborhood solve converges
    on exp(A/M), then replays the factorization M times with every derived
    generator's exponential rewritten as a conjugation word over the
    original generators.
    """
    x_f = as_matrix(x_f)
    if catalog is None:
        catalog = close_by_similarity(generators)
    a, roots = _log_past_branch_points(x_f)
    try:
        decompose(a, catalog)
    except ResidualTooLarge as exc:
        raise TargetUnreachable(f"log of target is outside the algebra: {exc}")

    order = _resolve_ordering(ordering, len(catalog))
    m = 1
    while m <= m_cap:
        w = expm(a, 1.0 / m)
        try:
            times = neighborhood_solve(w, catalog, ordering=order)
            break
        except (NoConvergence, BranchPoint) as exc:
            log.debug("M=%d failed: %s", m, exc)
            m *= 2
    else:
        raise MNotFound(f"no factorization found for M up to {m_cap}")

    m_total = m * (2 ** roots)
    rep_steps: List[Tuple[int, float]] = []
    for idx in order:
        if times[idx] != 0.0:
            rep_steps.extend(expansion_steps(catalog, idx, float(times[idx])))
    schedule = PulseSchedule(tuple(merge_adjacent(rep_steps * m_total)))
    residual = frob_norm(schedule.product(generators) - x_f)
    return ExactSolution(
        M=m_total,
        times=[float(v) for v in times],
        schedule=schedule,
        residual=residual,
        catalog=catalog,
        ordering=order,
    )


def reachability_check(
    x_f: np.ndarray,
    generators: Sequence[AlgebraElement],
    catalog: Optional[BasisCatalog] = None,
) -> Tuple[bool, dict]:
    """Whether X_f lies in the group generated by the given matrices.

    The log of X_f (rooted past branch points if needed) must decompose over
    the dynamical algebra.  Never raises; the diagnostics carry the residual
    and catalog size.
    """
    x_f = as_matrix(x_f)
    if catalog is None:
        catalog = close_by_brackets(generators)
    diag = {"algebra_dim": catalog.algebra_dim, "unitarity_defect": unitarity_defect(x_f)}
    try:
        a, roots = _log_past_branch_points(x_f)
        diag["roots_taken"] = roots
        deco = decompose(a, catalog)
        diag["residual"] = deco.residual_norm
        return True, diag
    except ResidualTooLarge as exc:
        diag["residual"] = exc.residual
        diag["reason"] = str(exc)
        return False, diag
    except (BranchPoint, InvalidInput) as exc:
        diag["reason"] = str(exc)
        return False, diag
