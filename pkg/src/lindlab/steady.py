"""Stationary states: the numerical null space of the generator and the
grand-canonical family built from conserved symmetry operators.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .liouville import Superoperator, unvec, vec
from .models import SymmetrySet
__all__ = [
    "StationaryBasis",
    "stationary_states",
    "grand_canonical_state",
]

BETA_CLAMP = 50.0


@dataclass(frozen=True)
class StationaryBasis:
    """Orthonormal basis of the generator's null space.

    ``modes`` are Hilbert-Schmidt orthonormal d x d matrices;
    ``canonical`` is the positive, trace-1 representative obtained by
    spectrally projecting the maximally mixed state onto the null space
    (the infinite-time average of the flow started from 1/d, which is the
    natural maximum-entropy pick and is deterministic).
    """

    modes: tuple[np.ndarray, ...]
    canonical: np.ndarray

    @property
    def dims(self) -> int:
        return len(self.modes)


def stationary_states(s: Superoperator, tol: float = 1e-9) -> StationaryBasis:
    """Null space of the generator via SVD, plus a canonical density matrix.

    Singular values at or below ``tol * s_max`` count as zero. If the
    singular values do not separate cleanly at the threshold (gap smaller
    than a factor 10), the numerical rank is ambiguous and a ``ValueError``
    with diagnostics is raised.
    """
    if s.matrix is None:
        raise ValueError("stationary_states needs the explicit superoperator matrix")
    d = s.dim
    dense = s.matrix.toarray()
    u, sv, vh = scipy.linalg.svd(dense)
    cutoff = tol * float(sv[0])
    null_mask = sv <= cutoff
    k = int(np.sum(null_mask))
    if k == 0:
        raise ValueError(
            "no null vector found below the threshold; a stationary state "
            f"always exists (smallest singular value {sv[-1]:.3e}, cutoff {cutoff:.3e})"
        )
    smallest_kept = float(sv[~null_mask][-1]) if k < sv.size else np.inf
    largest_null = float(sv[null_mask][0])
    if largest_null > 0 and smallest_kept / max(largest_null, np.finfo(float).tiny) < 10.0:
        raise ValueError(
            "numerical rank of the generator is ambiguous: singular values "
            f"{smallest_kept:.3e} (kept) vs {largest_null:.3e} (dropped) "
            f"around cutoff {cutoff:.3e}"
        )

    right_null = vh[sv.size - k :].conj().T  # d^2 x k
    left_null = u[:, sv.size - k :]  # d^2 x k

    # Spectral projector onto the null space applied to vec(1/d).
    overlap = left_null.conj().T @ right_null
    target = left_null.conj().T @ vec(np.eye(d, dtype=complex) / d)
    coeffs = scipy.linalg.solve(overlap, target)
    canonical = unvec(right_null @ coeffs, d)
    canonical = 0.5 * (canonical + canonical.conj().T)
    canonical = canonical / np.trace(canonical).real

    modes = tuple(unvec(right_null[:, i], d) for i in range(k))
    return StationaryBasis(modes=modes, canonical=canonical)


def grand_canonical_state(
    betas: tuple[float, float, float],
    sym: SymmetrySet,
) -> np.ndarray:
    """Gibbs-like state ``exp(b0 eta_z + b1 eta+ eta- + b2 Sz) / Z``.

    The exponent is Hermitian, so the result is positive definite with unit
    trace by construction. ``|beta| > 50`` is rejected to keep the
    exponential in range.
    """
    b0, b1, b2 = betas
    for b in (b0, b1, b2):
        if abs(b) > BETA_CLAMP:
            raise ValueError(f"beta {b} exceeds the clamp {BETA_CLAMP}")
    exponent = (
        b0 * sym.eta_z + b1 * (sym.eta_plus @ sym.eta_minus) + b2 * sym.s_z
    )
    x = exponent.dense()
    w, v = scipy.linalg.eigh(0.5 * (x + x.conj().T))
    weights = np.exp(w - np.max(w))
    rho = (v * weights[None, :]) @ v.conj().T
    return rho / np.sum(weights)
