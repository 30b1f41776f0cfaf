"""Dynamical Lie algebra construction and target decomposition.

Two closure routines build a depth-tagged basis from the given generators:
one by repeated commutators (breadth-first over depth levels), one by
similarity transforms exp(A t) B exp(-A t) so that every derived element's
exponential unrolls into a word over the original generators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import ExhaustedCandidates, InvalidInput, ResidualTooLarge
from .linalg import (
    AlgebraElement,
    bracket,
    expm,
    frob_norm,
    independent,
    vectorize_real,
)

DECOMPOSE_EXACT_TOL = 1e-8
DECOMPOSE_FAIL_TOL = 1e-6

# Small rational multiples of pi first (keeps schedules readable), then a
# seeded uniform scan; conjugation times failing independence are isolated,
# so the random stage cannot miss for long.
DEFAULT_T_CANDIDATES = tuple(
    s * f * math.pi for f in (1 / 8, 1 / 4, 3 / 8, 1 / 2, 3 / 4) for s in (1, -1)
)
RANDOM_T_DRAWS = 64


@dataclass(frozen=True)
class Generator:
    """Element is input generator number `index`."""

    index: int


@dataclass(frozen=True)
class Bracket:
    """Element is [catalog[left], catalog[right]]."""

    left: int
    right: int


@dataclass(frozen=True)
class Similarity:
    """Element is exp(L t) K exp(-L t) with L, K earlier catalog entries."""

    conjugator: int
    conjugated: int
    time: float


Provenance = Union[Generator, Bracket, Similarity]


@dataclass(frozen=True)
class CatalogEntry:
    element: AlgebraElement
    depth: int
    provenance: Provenance


class BasisCatalog:
    """Ordered maximal linearly independent set spanning the dynamical algebra."""

    def __init__(self, entries: Sequence[CatalogEntry], dim_group: int):
        self.entries: Tuple[CatalogEntry, ...] = tuple(entries)
        self.dim_group = dim_group
        for i, entry in enumerate(self.entries):
            prov = entry.provenance
            refs: Tuple[int, ...] = ()
            if isinstance(prov, Bracket):
                refs = (prov.left, prov.right)
            elif isinstance(prov, Similarity):
                refs = (prov.conjugator, prov.conjugated)
            if any(r >= i or r < 0 for r in refs):
                raise InvalidInput(f"provenance of entry {i} references {refs}")

    @property
    def algebra_dim(self) -> int:
        return len(self.entries)

    @property
    def elements(self) -> List[AlgebraElement]:
        return [e.element for e in self.entries]

    @property
    def depths(self) -> List[int]:
        return [e.depth for e in self.entries]

    @property
    def num_generators(self) -> int:
        return sum(1 for e in self.entries if isinstance(e.provenance, Generator))

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i) -> CatalogEntry:
        return self.entries[i]


def _validate_generators(generators: Sequence[AlgebraElement]) -> int:
    if not generators:
        raise InvalidInput("need at least one generator")
    dims = {g.dim for g in generators}
    if len(dims) != 1:
        raise InvalidInput(f"generators have mixed dimensions: {dims}")
    for i, g in enumerate(generators):
        if not independent(generators[:i], g):
            raise InvalidInput(f"generator {i} is linearly dependent on earlier ones")
    return dims.pop()


def close_by_brackets(generators: Sequence[AlgebraElement]) -> BasisCatalog:
    """Bracket closure, breadth-first in depth.

    Level k+1 candidates are [D, A_j] with D of depth k; candidates are
    enumerated with the generator index outer and D inner, first-come
    first-kept, which reproduces hand derivations that bracket generators
    from the left.  Terminates when a level adds nothing (dimension is
    bounded by dim^2).
    """
    dim = _validate_generators(generators)
    entries = [
        CatalogEntry(g, 0, Generator(i)) for i, g in enumerate(generators)
    ]
    kept = [e.element for e in entries]
    level = list(range(len(entries)))  # catalog indices at the current depth
    depth = 0
    while level:
        depth += 1
        new_level = []
        for j in range(len(generators)):
            for d_idx in level:
                cand = bracket(entries[d_idx].element, generators[j])
                if independent(kept, cand):
                    entries.append(CatalogEntry(cand, depth, Bracket(d_idx, j)))
                    kept.append(cand)
                    new_level.append(len(entries) - 1)
        level = new_level
    return BasisCatalog(entries, dim)


def similarity_conjugate(
    conjugator: AlgebraElement, conjugated: AlgebraElement, t: float
) -> AlgebraElement:
    """exp(L t) K exp(-L t); shares the conjugated element's spectrum."""
    u = expm(conjugator, t)
    return AlgebraElement(u @ conjugated.mat @ u.conj().T)


def _first_open_pair(entries: Sequence[CatalogEntry]) -> Optional[Tuple[int, int]]:
    kept = [e.element for e in entries]
    for l in range(len(entries)):
        for k in range(len(entries)):
            if l == k:
                continue
            if independent(kept, bracket(entries[l].element, entries[k].element)):
                return l, k
    return None


def close_by_similarity(
    generators: Sequence[AlgebraElement],
    t_candidates: Optional[Sequence[float]] = None,
    seed: int = 0,
) -> BasisCatalog:
    """Similarity-transform closure.

    While some pair (l, k) has a commutator outside the current span, scan
    conjugation times for one that makes exp(A_l t) A_k exp(-A_l t) newly
    independent and add it.  Pairs are tried in catalog order; the time scan
    runs the given candidates, then RANDOM_T_DRAWS seeded uniform draws in
    (-pi, pi].
    """
    dim = _validate_generators(generators)
    if t_candidates is None:
        t_candidates = DEFAULT_T_CANDIDATES
    rng = np.random.default_rng(seed)
    entries = [
        CatalogEntry(g, 0, Generator(i)) for i, g in enumerate(generators)
    ]
    max_dim = 2 * dim * dim  # real dimension of gl(n, C); closure must stop by then
    while len(entries) <= max_dim:
        pair = _first_open_pair(entries)
        if pair is None:
            return BasisCatalog(entries, dim)
        l, k = pair
        kept = [e.element for e in entries]
        found = None
        draws = list(t_candidates) + [
            float(rng.uniform(-math.pi, math.pi)) for _ in range(RANDOM_T_DRAWS)
        ]
        for t in draws:
            cand = similarity_conjugate(entries[l].element, entries[k].element, t)
            if independent(kept, cand):
                found = (t, cand)
                break
        if found is None:
            raise ExhaustedCandidates(
                f"no conjugation time for pair ({l}, {k}) after {len(draws)} draws"
            )
        t, cand = found
        depth = 1 + max(entries[l].depth, entries[k].depth)
        entries.append(CatalogEntry(cand, depth, Similarity(l, k, t)))
    raise ExhaustedCandidates("similarity closure failed to terminate")


@dataclass
class Decomposition:
    """Real coefficients over a catalog, with the least-squares residual."""

    coefficients: np.ndarray
    residual_norm: float


def decompose(h: AlgebraElement, catalog: BasisCatalog) -> Decomposition:
    """Least squares for H over the catalog (real coefficients).

    Residual below DECOMPOSE_EXACT_TOL means H is in the algebra; above
    DECOMPOSE_FAIL_TOL the target is unreachable and ResidualTooLarge is
    raised.
    """
    if h.dim != catalog.dim_group:
        raise InvalidInput(f"dimension mismatch: {h.dim} vs {catalog.dim_group}")
    basis = vectorize_real(catalog.elements).T
    rhs = vectorize_real([h])[0]
    coeffs, _, _, _ = np.linalg.lstsq(basis, rhs, rcond=None)
    recon = sum(c * e.mat for c, e in zip(coeffs, catalog.elements))
    residual = frob_norm(h.mat - recon)
    if residual > DECOMPOSE_FAIL_TOL:
        raise ResidualTooLarge(
            f"residual {residual:.3e} exceeds {DECOMPOSE_FAIL_TOL:.0e}: "
            "target is outside the dynamical Lie algebra",
            residual=residual,
        )
    return Decomposition(coefficients=coeffs, residual_norm=residual)


def expansion_steps(
    catalog: BasisCatalog, index: int, duration: float
) -> List[Tuple[int, float]]:
    """Unroll exp(catalog[index] * duration) into (generator, duration) steps.

    Similarity provenance expands recursively as the conjugation word
    exp(L tbar) exp(K duration) exp(-L tbar); bracket-produced elements have
    no exact word and are rejected.
    """
    entry = catalog[index]
    prov = entry.provenance
    if isinstance(prov, Generator):
        return [(prov.index, duration)]
    if isinstance(prov, Similarity):
        return (
            expansion_steps(catalog, prov.conjugator, prov.time)
            + expansion_steps(catalog, prov.conjugated, duration)
            + expansion_steps(catalog, prov.conjugator, -prov.time)
        )
    raise InvalidInput(
        "bracket-produced elements have no exact generator word; "
        "use a similarity catalog"
    )


def catalog_to_dict(catalog: BasisCatalog) -> dict:
    """JSON-ready description of a catalog (matrices as [re, im] pairs)."""

    def prov_dict(p: Provenance) -> dict:
        if isinstance(p, Generator):
            return {"kind": "generator", "index": p.index}
        if isinstance(p, Bracket):
            return {"kind": "bracket", "left": p.left, "right": p.right}
        return {
            "kind": "similarity",
            "conjugator": p.conjugator,
            "conjugated": p.conjugated,
            "time": p.time,
        }

    return {
        "dim_group": catalog.dim_group,
        "algebra_dim": catalog.algebra_dim,
        "elements": [
            {
                "label": e.element.label,
                "depth": e.depth,
                "provenance": prov_dict(e.provenance),
                "matrix": matrix_to_pairs(e.element.mat),
            }
            for e in catalog.entries
        ],
    }


def matrix_to_pairs(m) -> list:
    a = np.asarray(m, dtype=complex)
    return [[[float(x.real), float(x.imag)] for x in row] for row in a]


def matrix_from_pairs(rows) -> np.ndarray:
    try:
        return np.array(
            [[complex(entry[0], entry[1]) for entry in row] for row in rows]
        )
    except (TypeError, IndexError, ValueError) as exc:
        raise InvalidInput(f"malformed [re, im] matrix: {exc}") from exc
