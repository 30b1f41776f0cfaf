"""First-order split over a similarity-generated basis.

Decompose H over a catalog whose derived elements are similarity transforms,
take R(x) = prod_j exp(alpha_j A_j x) (an O(x^2) approximation of exp(H x)),
and iterate [R(1/n)]^n.  Because every catalog element unrolls into a word
over the original generators, the schedule never needs bracket programs.
"""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

import numpy as np

from .algebra import (
    BasisCatalog,
    close_by_brackets,
    close_by_similarity,
    decompose,
    expansion_steps,
)
from .errors import InvalidInput
from .linalg import AlgebraElement, expm, frob_norm, matrix_power
from .program import PulseSchedule, merge_adjacent
from .trotter import IteratedSynthesis, error_curve, trace_error


def _resolve_ordering(ordering, size: int) -> List[int]:
    if ordering is None:
        return list(range(size))
    order = [int(i) for i in ordering]
    if sorted(order) != list(range(size)):
        raise InvalidInput(f"ordering must permute 0..{size - 1}, got {ordering}")
    return order


def split_product(
    catalog: BasisCatalog,
    coefficients: Sequence[float],
    x: float,
    ordering: Optional[Sequence[int]] = None,
) -> np.ndarray:
    order = _resolve_ordering(ordering, len(catalog))
    out = np.eye(catalog.dim_group, dtype=complex)
    for idx in order:
        out = out @ expm(catalog[idx].element, float(coefficients[idx]) * x)
    return out


def split_schedule(
    catalog: BasisCatalog,
    coefficients: Sequence[float],
    x: float,
    ordering: Optional[Sequence[int]] = None,
) -> PulseSchedule:
    """The split product as original-generator steps (conjugation words unrolled)."""
    order = _resolve_ordering(ordering, len(catalog))
    steps: List[Tuple[int, float]] = []
    for idx in order:
        dur = float(coefficients[idx]) * x
        if dur != 0.0:
            steps.extend(expansion_steps(catalog, idx, dur))
    return PulseSchedule(tuple(merge_adjacent(steps)))


def synthesize_combined(
    h: AlgebraElement,
    n: int,
    generators: Sequence[AlgebraElement],
    catalog: Optional[BasisCatalog] = None,
    ordering: Optional[Sequence[int]] = None,
) -> IteratedSynthesis:
    """Approximate exp(H) as [R(1/n)]^n over a similarity catalog."""
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidInput(f"iteration count must be a positive integer, got {n!r}")
    if catalog is None:
        catalog = close_by_similarity(generators)
    deco = decompose(h, catalog)
    target = expm(h, 1.0)
    achieved = matrix_power(
        split_product(catalog, deco.coefficients, 1.0 / n, ordering), int(n)
    )
    return IteratedSynthesis(
        program=None,
        n=int(n),
        achieved=achieved,
        error=frob_norm(target - achieved),
        error_trace=trace_error(achieved, target),
    )


def compare_methods(
    h: AlgebraElement,
    ns: Sequence[int],
    generators: Sequence[AlgebraElement],
    bracket_catalog: Optional[BasisCatalog] = None,
    similarity_catalog: Optional[BasisCatalog] = None,
    ordering: Optional[Sequence[int]] = None,
) -> List[Tuple[int, float, float]]:
    """Side-by-side (n, iterated-program error, split-product error) rows."""
    if bracket_catalog is None:
        bracket_catalog = close_by_brackets(generators)
    rows_m2 = error_curve(h, ns, generators, catalog=bracket_catalog)
    rows_m3 = [
        synthesize_combined(h, n, generators, catalog=similarity_catalog, ordering=ordering)
        for n in ns
    ]
    return [(int(n), a.error, b.error) for n, a, b in zip(ns, rows_m2, rows_m3)]
