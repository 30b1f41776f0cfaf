"""Worked systems shipped with the CLI: a two-level su(2) pair and the
four-dimensional LC switching network pair on so(4).
"""

from __future__ import annotations

import math
from typing import List

import numpy as np

from .algebra import (
    BasisCatalog,
    CatalogEntry,
    Generator,
    Similarity,
    close_by_brackets,
    close_by_similarity,
    similarity_conjugate,
)
from .errors import InvalidInput
from .linalg import AlgebraElement, expm

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, 1j], [-1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def su2_generators() -> List[AlgebraElement]:
    return [
        AlgebraElement(1j * SIGMA_Z, label="A1"),
        AlgebraElement(1j * (SIGMA_X + SIGMA_Y), label="A2"),
    ]


SU2_CONJUGATION_TIME = -3.0 * math.pi / 8.0


def su2_catalog() -> BasisCatalog:
    """Three-element basis of su(2): the two generators plus one conjugate."""
    return close_by_similarity(su2_generators(), t_candidates=[SU2_CONJUGATION_TIME])


def su2_target() -> np.ndarray:
    """The sqrt-of-iX gate: eigenphases +-pi/4, off the three-factor surface."""
    return np.array([[1, 1j], [1j, 1]], dtype=complex) / math.sqrt(2.0)


def su2_exact_times() -> List[float]:
    """Closed-form times (t1, t2, t3) with (e^{A1 t1} e^{A2 t2} e^{A3 t3})^2
    hitting the target; all three positive."""
    return [9.0 * math.pi / 8.0, math.pi / (4.0 * math.sqrt(2.0)), 5.0 * math.pi / (4.0 * math.sqrt(2.0))]


def skew_pair(j: int, k: int, dim: int = 4) -> np.ndarray:
    """Real skew matrix with +1 at (j, k) and -1 at (k, j), 1-based, j < k."""
    if not (1 <= j < k <= dim):
        raise InvalidInput(f"need 1 <= j < k <= {dim}, got ({j}, {k})")
    m = np.zeros((dim, dim))
    m[j - 1, k - 1] = 1.0
    m[k - 1, j - 1] = -1.0
    return m


def so4_generators() -> List[AlgebraElement]:
    a1 = -skew_pair(1, 2) + skew_pair(1, 4) + 2 * skew_pair(2, 3) - 3 * skew_pair(3, 4)
    a2 = -skew_pair(1, 2) - 3 * skew_pair(3, 4)
    return [AlgebraElement(a1, label="A1"), AlgebraElement(a2, label="A2")]


def so4_bracket_catalog() -> BasisCatalog:
    return close_by_brackets(so4_generators())


SO4_CONJUGATION_TIME = math.pi / 2.0


def so4_similarity_element() -> AlgebraElement:
    """F = e^{A2 pi/2} A1 e^{-A2 pi/2}, one conjugate that closes the span
    needed for the shipped so(4) target."""
    a1, a2 = so4_generators()
    f = similarity_conjugate(a2, a1, SO4_CONJUGATION_TIME)
    return AlgebraElement(f.mat, label="F")


def so4_combined_catalog() -> BasisCatalog:
    """Three-element sub-catalog (A1, A2, F) spanning the target's log."""
    a1, a2 = so4_generators()
    entries = [
        CatalogEntry(a1, 0, Generator(0)),
        CatalogEntry(a2, 0, Generator(1)),
        CatalogEntry(so4_similarity_element(), 1, Similarity(1, 0, SO4_CONJUGATION_TIME)),
    ]
    return BasisCatalog(entries, 4)


# Product order putting the conjugate between the generators, which is the
# readable order for the shipped target's coefficients (10, 6, -16).
SO4_COMBINED_ORDERING = (0, 2, 1)


def so4_coupling() -> AlgebraElement:
    """The depth-2 element 22 E14 + 26 E23 reached by the shipped target."""
    return AlgebraElement(22 * skew_pair(1, 4) + 26 * skew_pair(2, 3), label="A5")


SO4_TARGET_SCALE = math.pi / 44.0


def so4_target_log() -> AlgebraElement:
    return AlgebraElement(so4_coupling().mat * SO4_TARGET_SCALE)


def so4_target() -> np.ndarray:
    """Transition matrix swapping the first and fourth network states."""
    return expm(so4_coupling(), SO4_TARGET_SCALE)


FIXTURES = {
    "su2": su2_generators,
    "so4": so4_generators,
}
