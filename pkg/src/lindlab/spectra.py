"""Full and targeted eigendecomposition of the generator, and classification
of eigenvalues into stationary / oscillating / decaying classes.

Eigenvalues are always reported in canonical order: ascending by real part,
then by imaginary part. Because the generator of a trace-preserving
dissipative map has its spectrum in the closed left half-plane and closed
under conjugation, both properties are asserted here as cheap sanity
checks wherever spectra are produced.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
import scipy.linalg
import scipy.sparse.linalg

from .liouville import Superoperator, assemble_superoperator
from .models import XxzRingParams, build_xxz_ring

__all__ = [
    "DENSE_EIG_DIM_CAP",
    "VECTOR_RETENTION_DIM",
    "SpectrumResult",
    "ClassifiedSpectrum",
    "full_spectrum",
    "targeted_spectrum",
    "classify_eigenvalues",
    "distinct_oscillation_frequencies",
    "imaginary_count_scan",
    "ScanEntry",
    "spectrum_to_csv",
]

# Dense eigendecomposition of the d^2 x d^2 matrix is allowed up to d = 64
# (a 4096 x 4096 dense solve); larger problems need the targeted path.
DENSE_EIG_DIM_CAP = 64
# Right eigenvectors are retained automatically up to this d; above it the
# caller must opt in (memory: d^2 x d^2 complex).
VECTOR_RETENTION_DIM = 16


@dataclass(frozen=True)
class SpectrumResult:
    """Eigenvalues in canonical order, optionally with right eigenvectors.

    ``right_eigenvectors[:, i]`` is the vectorized eigenmode of
    ``eigenvalues[i]``; ``residuals[i]`` is ``|S v - lambda v| / |v|``.
    Both are ``None`` when vectors were not retained.
    """

    eigenvalues: np.ndarray
    right_eigenvectors: Optional[np.ndarray]
    residuals: Optional[np.ndarray]

    def __len__(self) -> int:
        return self.eigenvalues.size


@dataclass(frozen=True)
class ClassifiedSpectrum:
    """Index partition of a spectrum.

    stationary:  |lambda| <= tol_zero
    oscillating: |Re lambda| <= tol_re and |Im lambda| > tol_zero
    decaying:    everything else
    """

    stationary: np.ndarray
    oscillating: np.ndarray
    decaying: np.ndarray
    tol_zero: float
    tol_re: float

    def labels(self, n: int) -> list[str]:
        out = ["decaying"] * n
        for i in self.stationary:
            out[i] = "stationary"
        for i in self.oscillating:
            out[i] = "oscillating"
        return out


def _canonical_order(eigenvalues: np.ndarray) -> np.ndarray:
    return np.lexsort((eigenvalues.imag, eigenvalues.real))


def conjugation_pairing_error(eigenvalues: np.ndarray) -> float:
    """Largest distance from an eigenvalue to the conjugated multiset.

    Zero (up to solver noise) for a spectrum closed under conjugation.
    Nearest-neighbor matching is used: sorted elementwise comparison is
    brittle when conjugate partners carry noise in their real parts.
    """
    if eigenvalues.size == 0:
        return 0.0
    from scipy.spatial import cKDTree

    pts = np.column_stack((eigenvalues.real, eigenvalues.imag))
    conj_pts = np.column_stack((eigenvalues.real, -eigenvalues.imag))
    dist, _ = cKDTree(conj_pts).query(pts, k=1)
    return float(np.max(dist))


def _check_halfplane_and_conjugation(
    eigenvalues: np.ndarray, tol: float
) -> None:
    scale = float(np.max(np.abs(eigenvalues))) if eigenvalues.size else 1.0
    scale = max(scale, 1.0)
    max_re = float(np.max(eigenvalues.real)) if eigenvalues.size else 0.0
    if max_re > tol * scale:
        raise ValueError(
            f"eigenvalue with positive real part {max_re:.3e} exceeds "
            f"contractivity tolerance {tol * scale:.3e}"
        )
    err = conjugation_pairing_error(eigenvalues)
    if err > tol * scale:
        raise ValueError(
            f"spectrum is not conjugation-symmetric (pairing error {err:.3e})"
        )


def full_spectrum(
    s: Superoperator,
    keep_vectors: Optional[bool] = None,
    dense_cap: int = DENSE_EIG_DIM_CAP,
    residual_tol: float = 1e-8,
    symmetry_tol: float = 1e-8,
) -> SpectrumResult:
    """Complete eigenvalue multiset of the explicit d^2 x d^2 matrix.

    Requires the explicit matrix and d <= ``dense_cap``. Vectors are kept
    for d <= :data:`VECTOR_RETENTION_DIM` unless overridden; retained pairs
    are validated against ``residual_tol`` (relative to the matrix scale).

    Raises
    ------
    ValueError
        If the matrix is absent, the cap is exceeded, or the eigensolver
        output fails the residual / half-plane / conjugation checks.
    """
    if s.matrix is None:
        raise ValueError(
            "superoperator has no explicit matrix; assemble within the cap "
            "or use targeted_spectrum"
        )
    d = s.dim
    if d > dense_cap:
        raise ValueError(
            f"d = {d} exceeds the dense eigensolver cap {dense_cap}; "
            "use targeted_spectrum for large systems"
        )
    if keep_vectors is None:
        keep_vectors = d <= VECTOR_RETENTION_DIM

    dense = s.matrix.toarray()
    if keep_vectors:
        w, v = scipy.linalg.eig(dense)
        order = _canonical_order(w)
        w = w[order]
        v = v[:, order]
        norms = np.linalg.norm(v, axis=0)
        res = np.linalg.norm(dense @ v - v * w[None, :], axis=0) / norms
        scale = max(float(np.max(np.abs(w))), 1.0)
        worst = float(np.max(res))
        if worst > residual_tol * scale:
            raise ValueError(
                f"eigensolver residual {worst:.3e} exceeds "
                f"{residual_tol * scale:.3e}"
            )
    else:
        w = scipy.linalg.eigvals(dense)
        order = _canonical_order(w)
        w = w[order]
        v = None
        res = None
    _check_halfplane_and_conjugation(w, symmetry_tol)
    return SpectrumResult(eigenvalues=w, right_eigenvectors=v, residuals=res)


def targeted_spectrum(
    s: Superoperator,
    shifts: Sequence[complex],
    k_per_shift: int = 8,
    tol: float = 1e-9,
    dedup_tol: float = 1e-7,
) -> SpectrumResult:
    """Shift-invert Arnoldi eigenvalues near the given complex shifts.

    Intended for systems beyond the dense cap (e.g. probing the imaginary
    axis with shifts ``1j * omega``). Returns the deduplicated union of the
    converged eigenvalues, without vectors. The result is a *partial*
    spectrum: no half-plane or conjugation checks are applied.
    """
    if s.matrix is None:
        raise ValueError("targeted_spectrum needs the explicit sparse matrix")
    found: list[complex] = []
    for sigma in shifts:
        w = scipy.sparse.linalg.eigs(
            s.matrix.tocsc(),
            k=k_per_shift,
            sigma=complex(sigma),
            which="LM",
            tol=tol,
            return_eigenvectors=False,
        )
        found.extend(complex(x) for x in w)
    vals = np.array(sorted(found, key=lambda z: (z.real, z.imag)), dtype=complex)
    keep: list[complex] = []
    for z in vals:
        if not keep or abs(z - keep[-1]) > dedup_tol:
            keep.append(z)
    w = np.asarray(keep, dtype=complex)
    return SpectrumResult(eigenvalues=w, right_eigenvectors=None, residuals=None)


def classify_eigenvalues(
    spec: SpectrumResult,
    tol_zero: Optional[float] = None,
    tol_re: Optional[float] = None,
) -> ClassifiedSpectrum:
    """Partition eigenvalues into stationary / oscillating / decaying.

    Default tolerances are ``1e-8 * scale`` with ``scale = max |lambda|``
    (or 1 for an all-zero spectrum).
    """
    w = spec.eigenvalues
    scale = float(np.max(np.abs(w))) if w.size else 0.0
    if scale == 0.0:
        scale = 1.0
    if tol_zero is None:
        tol_zero = 1e-8 * scale
    if tol_re is None:
        tol_re = 1e-8 * scale
    stationary = np.flatnonzero(np.abs(w) <= tol_zero)
    osc_mask = (np.abs(w.real) <= tol_re) & (np.abs(w.imag) > tol_zero)
    oscillating = np.flatnonzero(osc_mask)
    rest = np.setdiff1d(
        np.arange(w.size), np.union1d(stationary, oscillating), assume_unique=False
    )
    return ClassifiedSpectrum(
        stationary=stationary,
        oscillating=oscillating,
        decaying=rest,
        tol_zero=float(tol_zero),
        tol_re=float(tol_re),
    )


def distinct_oscillation_frequencies(
    spec: SpectrumResult,
    classified: ClassifiedSpectrum,
    dedup_rel_tol: float = 1e-6,
) -> np.ndarray:
    """Distinct |Im lambda| values over the oscillating class.

    Two values closer than ``dedup_rel_tol * scale`` count as one.
    """
    w = spec.eigenvalues
    if classified.oscillating.size == 0:
        return np.array([], dtype=float)
    scale = max(float(np.max(np.abs(w))), 1.0)
    freqs = np.sort(np.abs(w.imag[classified.oscillating]))
    out = [freqs[0]]
    for f in freqs[1:]:
        if f - out[-1] > dedup_rel_tol * scale:
            out.append(f)
    return np.asarray(out)


@dataclass(frozen=True)
class ScanEntry:
    n: int
    count: Optional[int]
    status: str  # "ok" or "skipped"


def imaginary_count_scan(
    n_list: Sequence[int],
    delta: float,
    gamma: float,
    loss_site: int = 1,
    dense_cap: int = DENSE_EIG_DIM_CAP,
) -> list[ScanEntry]:
    """Count distinct oscillation frequencies of the lossy XXZ ring vs n.

    Rings whose dimension exceeds the dense cap are marked "skipped".
    """
    entries: list[ScanEntry] = []
    for n in n_list:
        if 2**n > dense_cap:
            entries.append(ScanEntry(n=n, count=None, status="skipped"))
            continue
        h, ls = build_xxz_ring(
            XxzRingParams(n=n, delta=delta, loss_sites=(loss_site,), gammas=(gamma,))
        )
        s = assemble_superoperator(h, ls)
        spec = full_spectrum(s, keep_vectors=False, dense_cap=dense_cap)
        cls = classify_eigenvalues(spec)
        freqs = distinct_oscillation_frequencies(spec, cls)
        entries.append(ScanEntry(n=n, count=int(freqs.size), status="ok"))
    return entries


def spectrum_to_csv(
    path: Union[str, Path],
    spec: SpectrumResult,
    classified: ClassifiedSpectrum,
    comments: Sequence[str] = (),
) -> None:
    """Write "re,im,class,residual" rows in canonical order.

    The residual column is ``nan`` when vectors were not retained. Leading
    ``#`` comment lines carry run metadata and are excluded from digesting
    by convention.
    """
    labels = classified.labels(len(spec))
    lines = [f"# {c}" for c in comments]
    lines.append("re,im,class,residual")
    for i, lam in enumerate(spec.eigenvalues):
        r = float(spec.residuals[i]) if spec.residuals is not None else float("nan")
        lines.append(f"{float(lam.real)!r},{float(lam.imag)!r},{labels[i]},{r!r}")
    Path(path).write_text("\n".join(lines) + "\n")
