"""Dense small-matrix kernel: exponentials, principal logs, brackets, norms.

Everything in scope is normal (anti-Hermitian generators, unitary group
elements), so exponentials and logarithms go through eigendecompositions
rather than Pade/scaling-and-squaring.  That keeps the eigenfrequencies --
which the negative-time repair needs anyway -- exact by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import scipy.linalg

from .errors import BranchPoint, InvalidInput

ANTIHERMITIAN_TOL = 1e-10
UNITARY_TOL = 1e-8
BRANCH_TOL = 1e-8
INDEPENDENCE_TOL = 1e-8


def as_matrix(m) -> np.ndarray:
    """Coerce to a square complex matrix with finite entries."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise InvalidInput(f"expected a nonempty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInput("matrix has non-finite entries")
    return a


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """An anti-Hermitian matrix, the carrier for generators, brackets and logs.

    The eigendecomposition is computed lazily and cached: the eigenvalues are
    i*omega_j with real frequencies omega_j, and exponentials are assembled
    from the unitary eigenbasis, so exp(A t) is unitary to rounding.
    """

    mat: np.ndarray
    label: Optional[str] = None
    _eig: tuple = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        a = as_matrix(self.mat)
        defect = frob_norm(a + a.conj().T)
        if defect > ANTIHERMITIAN_TOL * max(1.0, frob_norm(a)):
            raise InvalidInput(
                f"matrix is not anti-Hermitian (defect {defect:.3e}); "
                "inputs are rejected rather than symmetrized"
            )
        a.setflags(write=False)
        object.__setattr__(self, "mat", a)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def _eigdata(self):
        if self._eig is None:
            herm = self.mat / 1j
            herm = (herm + herm.conj().T) / 2.0
            omegas, vecs = np.linalg.eigh(herm)
            object.__setattr__(self, "_eig", (omegas, vecs))
        return self._eig

    @property
    def omegas(self) -> np.ndarray:
        """Real frequencies omega_j such that the eigenvalues are i*omega_j."""
        return self._eigdata()[0]

    def expm(self, t: float) -> np.ndarray:
        if not np.isfinite(t):
            raise InvalidInput(f"non-finite time {t!r}")
        omegas, vecs = self._eigdata()
        phases = np.exp(1j * omegas * t)
        return (vecs * phases) @ vecs.conj().T

    def __repr__(self):
        name = self.label or "AlgebraElement"
        return f"<{name} dim={self.dim}>"


def expm(a: AlgebraElement, t: float) -> np.ndarray:
    """exp(A t), unitary to rounding for anti-Hermitian A."""
    return a.expm(t)


def frob_norm(m) -> float:
    """Frobenius norm sqrt(Trace(M M^dagger)), the working norm throughout."""
    return float(np.linalg.norm(np.asarray(m), "fro"))


def unitarity_defect(u) -> float:
    u = as_matrix(u)
    return frob_norm(u.conj().T @ u - np.eye(u.shape[0]))


def _unitary_eig(u: np.ndarray):
    """Eigenvalues and unitary eigenbasis of a (near-)unitary matrix.

    Complex Schur form of a normal matrix is diagonal, which gives an
    orthonormal eigenbasis even for clustered eigenvalues; numpy's generic
    eig does not guarantee that.
    """
    t, q = scipy.linalg.schur(u, output="complex")
    return np.diag(t), q


def logm_principal(u) -> AlgebraElement:
    """Principal logarithm of a unitary matrix, as an anti-Hermitian element.

    Eigenvalue phases land in (-pi, pi); an eigenvalue within BRANCH_TOL of
    -1 sits on the branch cut and raises BranchPoint (take a matrix root
    first).
    """
    u = as_matrix(u)
    if unitarity_defect(u) > UNITARY_TOL:
        raise InvalidInput("matrix is not unitary within 1e-8")
    eigs, basis = _unitary_eig(u)
    if np.any(np.abs(eigs + 1.0) < BRANCH_TOL):
        raise BranchPoint("eigenvalue at -1: principal log undefined")
    phases = np.angle(eigs)
    a = (basis * (1j * phases)) @ basis.conj().T
    a = (a - a.conj().T) / 2.0
    return AlgebraElement(a)


def principal_sqrt(u) -> np.ndarray:
    """Principal square root of a unitary matrix (eigenphases halved)."""
    u = as_matrix(u)
    if unitarity_defect(u) > UNITARY_TOL:
        raise InvalidInput("matrix is not unitary within 1e-8")
    eigs, basis = _unitary_eig(u)
    half = np.exp(1j * np.angle(eigs) / 2.0)
    return (basis * half) @ basis.conj().T


def bracket(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Commutator [A, B] = AB - BA."""
    if a.dim != b.dim:
        raise InvalidInput(f"dimension mismatch: {a.dim} vs {b.dim}")
    m = a.mat @ b.mat - b.mat @ a.mat
    return AlgebraElement(m)


def matrix_power(m, n: int) -> np.ndarray:
    """M^n by repeated squaring, O(log n) multiplications."""
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidInput(f"power must be a positive integer, got {n!r}")
    return np.linalg.matrix_power(as_matrix(m), int(n))


def vectorize_real(mats: Sequence) -> np.ndarray:
    """Stack matrices as real row vectors (re and im parts concatenated).

    Linear independence in the algebra is over the reals, so the real and
    imaginary parts enter as separate coordinates.
    """
    rows = []
    for m in mats:
        a = np.asarray(getattr(m, "mat", m), dtype=complex).ravel()
        rows.append(np.concatenate([a.real, a.imag]))
    return np.array(rows)


def independent(elements: Sequence, candidate, tol: float = INDEPENDENCE_TOL) -> bool:
    """True iff candidate lies outside the real span of the given elements.

    The stacked, row-normalized system must keep a relative singular-value
    gap: smallest singular value > tol * largest.  Floating-point spans are
    fuzzy, so a relative gap replaces an exact rank test.
    """
    cand = np.asarray(getattr(candidate, "mat", candidate), dtype=complex)
    if cand.size == 0:
        raise InvalidInput("empty candidate")
    dims = {np.asarray(getattr(e, "mat", e)).shape for e in elements}
    dims.add(cand.shape)
    if len(dims) > 1:
        raise InvalidInput(f"mixed matrix shapes in independence test: {dims}")

    rows = vectorize_real(list(elements) + [candidate])
    norms = np.linalg.norm(rows, axis=1)
    if norms[-1] == 0.0:
        return False
    if np.any(norms[:-1] == 0.0):
        raise InvalidInput("zero element in the spanning set")
    rows = rows / norms[:, None]
    svals = np.linalg.svd(rows, compute_uv=False)
    return bool(svals[-1] > tol * svals[0])
