"""Lindblad generator as a vectorized superoperator and as a matrix-free map.

The master equation used throughout is

    drho/dt = -i [H, rho] + sum_k ( 2 L_k rho L_k^dag - {L_k^dag L_k, rho} )

with the factor 2 on the jump term and no 1/2 on the anticommutator. This
differs from the 1/2-normalized form common elsewhere by a rescaling of the
rates; since rates are folded into the ``L_k``, the dissipator scales as
``gamma**2``.

Vectorization is column-stacking: ``vec(A X B) = (B^T kron A) vec(X)``, so

    S = -i (1 kron H - H^T kron 1)
        + sum_k [ 2 conj(L_k) kron L_k - 1 kron (L_k^dag L_k)
                  - (L_k^dag L_k)^T kron 1 ].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp

from .models import LindbladSet
from .operators import HilbertSpace, SparseOperator

__all__ = [
    "MATRIX_DIM_CAP",
    "Superoperator",
    "assemble_superoperator",
    "apply_lindbladian",
    "vec",
    "unvec",
]

# Explicit (sparse) superoperator matrices are built for d <= this cap;
# beyond it only the matrix-free path is available.
MATRIX_DIM_CAP = 256


def vec(rho: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization of a square matrix."""
    rho = np.asarray(rho)
    return rho.reshape(-1, order="F")


def unvec(v: np.ndarray, dim: Optional[int] = None) -> np.ndarray:
    """Inverse of :func:`vec`."""
    v = np.asarray(v)
    if dim is None:
        dim = int(round(np.sqrt(v.size)))
    if dim * dim != v.size:
        raise ValueError(f"vector of length {v.size} is not a vectorized square matrix")
    return v.reshape((dim, dim), order="F")


def apply_lindbladian(
    h: SparseOperator, lindblads: LindbladSet, rho: np.ndarray
) -> np.ndarray:
    """Apply the generator to a density-matrix-shaped array, matrix-free."""
    rho = np.asarray(rho, dtype=complex)
    d = h.space.dim
    if rho.shape != (d, d):
        raise ValueError(f"rho shape {rho.shape} does not match dim {d}")
    hm = h.mat
    out = -1j * (hm @ rho - rho @ hm)
    for L in lindblads:
        lm = L.mat
        ldag = lm.conjugate().transpose().tocsr()
        ldag_l = (ldag @ lm).tocsr()
        out = out + 2.0 * ((lm @ rho) @ ldag)
        out = out - ldag_l @ rho - rho @ ldag_l
    return out


@dataclass(frozen=True)
class Superoperator:
    """The generator on vectorized density matrices.

    ``matrix`` is the explicit sparse d^2 x d^2 form when the dimension is
    within :data:`MATRIX_DIM_CAP`, otherwise ``None``; the Hamiltonian and
    jump operators are always retained for matrix-free application.
    """

    space: HilbertSpace
    h: SparseOperator
    lindblads: LindbladSet
    matrix: Optional[sp.csr_matrix]

    @property
    def dim(self) -> int:
        """Hilbert-space dimension d (the matrix acts on length d^2)."""
        return self.space.dim

    def apply_matrix_free(self, rho: np.ndarray) -> np.ndarray:
        return apply_lindbladian(self.h, self.lindblads, rho)

    def apply_vec(self, v: np.ndarray) -> np.ndarray:
        """Apply to a vectorized density matrix (uses the matrix if present)."""
        v = np.asarray(v, dtype=complex)
        if v.shape != (self.dim**2,):
            raise ValueError(f"vector length {v.shape} does not match d^2 = {self.dim**2}")
        if self.matrix is not None:
            return self.matrix @ v
        return vec(self.apply_matrix_free(unvec(v, self.dim)))


def assemble_superoperator(
    h: SparseOperator,
    lindblads: LindbladSet,
    matrix_cap: int = MATRIX_DIM_CAP,
) -> Superoperator:
    """Build the generator; the explicit matrix is included when d <= cap."""
    space = h.space
    d = space.dim
    for L in lindblads:
        if L.space.dim != d:
            raise ValueError("Hamiltonian and jump operators must share one space")

    matrix = None
    if d <= matrix_cap:
        eye = sp.identity(d, dtype=complex, format="csr")
        hm = h.mat
        m = -1j * (sp.kron(eye, hm) - sp.kron(hm.transpose(), eye))
        for L in lindblads:
            lm = L.mat
            ldag_l = (lm.conjugate().transpose() @ lm).tocsr()
            m = m + 2.0 * sp.kron(lm.conjugate(), lm)
            m = m - sp.kron(eye, ldag_l) - sp.kron(ldag_l.transpose(), eye)
        matrix = m.tocsr()
        matrix.eliminate_zeros()
    return Superoperator(space=space, h=h, lindblads=lindblads, matrix=matrix)
