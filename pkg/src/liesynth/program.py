"""Symbolic products of exponentials and the composition rules that build them.

A program is an ordered list of factors exp(sign * c * x^(2^-d) * A_gen).
Five structural rules (single generator, inverse, nonnegative scaling,
concatenation for sums, the four-factor commutator pattern at sqrt(x))
combine programs while tracking the approximation order delta of
exp(H x) = product(x) + O(x^(1+delta)).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .algebra import BasisCatalog, Bracket, Generator, decompose
from .errors import InvalidInput
from .linalg import AlgebraElement, expm

COEFF_DROP_TOL = 1e-12


@dataclass(frozen=True)
class Factor:
    """One factor exp(sign * coeff * x^(2^-depth_exp) * A_gen)."""

    gen: int
    sign: int
    coeff: float
    depth_exp: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise InvalidInput(f"sign must be +1 or -1, got {self.sign}")
        if not (self.coeff >= 0.0 and np.isfinite(self.coeff)):
            raise InvalidInput(f"coefficient must be finite and >= 0, got {self.coeff}")
        if self.gen < 0 or self.depth_exp < 0:
            raise InvalidInput("generator index and depth must be nonnegative")

    def exponent_at(self, x: float) -> float:
        return self.sign * self.coeff * x ** (2.0 ** -self.depth_exp)


@dataclass(frozen=True)
class ProductProgram:
    factors: Tuple[Factor, ...]
    order_delta: float

    def __post_init__(self):
        if not (0.0 < self.order_delta <= 1.0):
            raise InvalidInput(f"order_delta must be in (0, 1], got {self.order_delta}")

    def __len__(self):
        return len(self.factors)


def identity_program() -> ProductProgram:
    return ProductProgram((), 1.0)


def atom(gen: int, sign: int = 1) -> ProductProgram:
    """Single exact factor exp(sign * A_gen * x); delta = 1 with no remainder."""
    return ProductProgram((Factor(gen, sign, 1.0, 0),), 1.0)


def invert(p: ProductProgram) -> ProductProgram:
    """Reverse the factors and flip signs: evaluates to the exact inverse."""
    rev = tuple(
        Factor(f.gen, -f.sign, f.coeff, f.depth_exp) for f in reversed(p.factors)
    )
    return ProductProgram(rev, p.order_delta)


def scale(p: ProductProgram, a: float) -> ProductProgram:
    """Program for a*H: substitutes x -> a*x, i.e. coeff *= a^(2^-d)."""
    if a < 0:
        raise InvalidInput("scale factor must be nonnegative; invert first")
    scaled = tuple(
        Factor(f.gen, f.sign, f.coeff * a ** (2.0 ** -f.depth_exp), f.depth_exp)
        for f in p.factors
    )
    return ProductProgram(scaled, p.order_delta)


def concat(pa: ProductProgram, pb: ProductProgram) -> ProductProgram:
    """Program for the sum: T_A(x) T_B(x), order min(delta_A, delta_B, 1)."""
    return ProductProgram(
        pa.factors + pb.factors, min(pa.order_delta, pb.order_delta, 1.0)
    )


def commutate(pa: ProductProgram, pb: ProductProgram) -> ProductProgram:
    """Program for the commutator of the represented elements.

    T_A^-1 T_B^-1 T_A T_B with every factor taken at sqrt(x) (depth_exp + 1);
    the sqrt substitution halves the tracked order.
    """
    seq = invert(pa).factors + invert(pb).factors + pa.factors + pb.factors
    deeper = tuple(
        Factor(f.gen, f.sign, f.coeff, f.depth_exp + 1) for f in seq
    )
    return ProductProgram(deeper, min(pa.order_delta, pb.order_delta, 1.0) / 2.0)


def program_for(
    h: AlgebraElement,
    generators: Sequence[AlgebraElement],
    catalog: BasisCatalog,
) -> ProductProgram:
    """Build the product program approximating exp(H x) over a bracket catalog.

    Each basis element gets a program from its provenance (generators are
    atoms, brackets recurse through the four-factor pattern); H's depth-k
    components are assembled by scaling and concatenation, levels from depth
    0 upward.  Negative coefficients go through the inverse program.
    """
    deco = decompose(h, catalog)

    cache: Dict[int, ProductProgram] = {}

    def element_program(idx: int) -> ProductProgram:
        if idx not in cache:
            prov = catalog[idx].provenance
            if isinstance(prov, Generator):
                cache[idx] = atom(prov.index)
            elif isinstance(prov, Bracket):
                cache[idx] = commutate(
                    element_program(prov.left), element_program(prov.right)
                )
            else:
                raise InvalidInput(
                    "program construction needs a bracket catalog; "
                    f"entry {idx} has provenance {prov!r}"
                )
        return cache[idx]

    result = identity_program()
    for depth in sorted(set(catalog.depths)):
        for idx, entry in enumerate(catalog.entries):
            if entry.depth != depth:
                continue
            alpha = float(deco.coefficients[idx])
            if abs(alpha) < COEFF_DROP_TOL:
                continue
            term = element_program(idx)
            if alpha < 0:
                term = invert(term)
            result = concat(result, scale(term, abs(alpha)))
    return result


def evaluate(
    p: ProductProgram, x: float, generators: Sequence[AlgebraElement]
) -> np.ndarray:
    """Multiply the factors out at a concrete x >= 0 (left to right)."""
    if x < 0:
        raise InvalidInput(f"evaluation point must be nonnegative, got {x}")
    if any(f.gen >= len(generators) for f in p.factors):
        raise InvalidInput("program references a generator outside the given set")
    dim = generators[0].dim if generators else 0
    out = np.eye(dim, dtype=complex)
    for f in p.factors:
        out = out @ expm(generators[f.gen], f.exponent_at(x))
    return out


@dataclass(frozen=True)
class PulseSchedule:
    """Concrete switching sequence: (generator index, duration) steps."""

    steps: Tuple[Tuple[int, float], ...]

    def __post_init__(self):
        for gen, dur in self.steps:
            if gen < 0 or not np.isfinite(dur):
                raise InvalidInput(f"bad schedule step ({gen}, {dur})")

    def __len__(self):
        return len(self.steps)

    def product(self, generators: Sequence[AlgebraElement]) -> np.ndarray:
        dim = generators[0].dim
        out = np.eye(dim, dtype=complex)
        for gen, dur in self.steps:
            out = out @ expm(generators[gen], dur)
        return out

    def min_duration(self) -> float:
        return min((d for _, d in self.steps), default=0.0)


def merge_adjacent(steps: Sequence[Tuple[int, float]]) -> List[Tuple[int, float]]:
    """Sum runs of equal-generator steps; drop steps that cancel to zero."""
    merged: List[Tuple[int, float]] = []
    for gen, dur in steps:
        if merged and merged[-1][0] == gen:
            merged[-1] = (gen, merged[-1][1] + dur)
        else:
            merged.append((gen, dur))
    return [(g, d) for g, d in merged if d != 0.0]


def to_schedule(p: ProductProgram, x: float) -> PulseSchedule:
    """Instantiate the program at x as a schedule, merging adjacent steps."""
    if x < 0:
        raise InvalidInput(f"evaluation point must be nonnegative, got {x}")
    raw = [(f.gen, f.exponent_at(x)) for f in p.factors]
    return PulseSchedule(tuple(merge_adjacent(raw)))


def word_length_sequence(count: int) -> List[int]:
    """Worst-case exponential counts per derived element: 1, 3, then 2*prev + prev2."""
    if count < 0:
        raise InvalidInput("count must be nonnegative")
    seq: List[int] = []
    for j in range(count):
        if j == 0:
            seq.append(1)
        elif j == 1:
            seq.append(3)
        else:
            seq.append(2 * seq[-1] + seq[-2])
    return seq


def factor_budget(m: int, new_elements: int) -> int:
    """Worst-case exponential count for m generators plus derived elements."""
    if m < 1 or new_elements < 0:
        raise InvalidInput("need m >= 1 and new_elements >= 0")
    seq = word_length_sequence(new_elements + 1)
    return m * seq[0] + sum(seq[1 : new_elements + 1])
