"""Arbitrary-accuracy synthesis by iterating a simulable product.

The program for H is evaluated at x = 1/n and raised to the n-th power by
repeated squaring; the error against exp(H) shrinks as n grows (a standard
limit for normal matrices), so accuracy is a choice of n.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .algebra import BasisCatalog, close_by_brackets
from .errors import InvalidInput
from .linalg import AlgebraElement, expm, frob_norm, matrix_power
from .program import ProductProgram, evaluate, program_for


@dataclass
class IteratedSynthesis:
    """One iterated product: achieved = [T(1/n)]^n and its distance to target.

    `error_trace` is the same distance through the trace identity
    ||X - Y||^2 = 2 dim - 2 Re Tr(X Y^dagger), a cross-check valid while the
    iterated power stays unitary to rounding.
    """

    program: Optional[ProductProgram]
    n: int
    achieved: np.ndarray
    error: float
    error_trace: float = 0.0


def trace_error(achieved: np.ndarray, target: np.ndarray) -> float:
    dim = target.shape[0]
    val = 2.0 * dim - 2.0 * float(np.real(np.trace(achieved @ target.conj().T)))
    return float(np.sqrt(max(val, 0.0)))


def iterate_program(
    program: ProductProgram,
    n: int,
    generators: Sequence[AlgebraElement],
    target: np.ndarray,
) -> IteratedSynthesis:
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidInput(f"iteration count must be a positive integer, got {n!r}")
    achieved = matrix_power(evaluate(program, 1.0 / n, generators), int(n))
    return IteratedSynthesis(
        program=program,
        n=int(n),
        achieved=achieved,
        error=frob_norm(target - achieved),
        error_trace=trace_error(achieved, target),
    )


def synthesize_trotter(
    h: AlgebraElement,
    n: int,
    generators: Sequence[AlgebraElement],
    catalog: Optional[BasisCatalog] = None,
    program: Optional[ProductProgram] = None,
) -> IteratedSynthesis:
    """Approximate exp(H) as [T(1/n)]^n over the bracket closure of the generators."""
    if catalog is None:
        catalog = close_by_brackets(generators)
    if program is None:
        program = program_for(h, generators, catalog)
    return iterate_program(program, n, generators, expm(h, 1.0))


def error_curve(
    h: AlgebraElement,
    ns: Sequence[int],
    generators: Sequence[AlgebraElement],
    catalog: Optional[BasisCatalog] = None,
) -> List[IteratedSynthesis]:
    """One iterated synthesis per requested n, sharing a single program."""
    if not ns:
        raise InvalidInput("need at least one iteration count")
    if catalog is None:
        catalog = close_by_brackets(generators)
    program = program_for(h, generators, catalog)
    target = expm(h, 1.0)
    return [iterate_program(program, n, generators, target) for n in ns]
