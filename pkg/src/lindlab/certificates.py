"""Numerical certificates for the asymptotic coherent structure of a
Lindblad generator.

The checks come in three families, named theorem1/theorem2/theorem3 (and
corollary1) in reports and in the CLI:

* ``theorem1``: a set of mutually orthogonal pure states whose outer
  products are joint eigenmodes of the generator with purely imaginary
  eigenvalues. Conditions (a)-(c) below are necessary and sufficient; the
  predicted mode frequencies are cross-checked by applying the generator.
* ``theorem2``: conversely, every purely oscillating eigenmode must be a
  rank-1 outer product of dark states, provided no jump-invariant subspace
  orthogonal to the dark space exists. Both the factorization check and a
  randomized search for such a subspace are provided.
* ``theorem3`` / ``corollary1``: an operator that acts as an eigenoperator
  of the Hamiltonian on (or around) a stationary state generates purely
  oscillating eigenmodes ``A^n rho_inf A^dag^m``.

Sign convention: the scalar ``lam`` attached to an eigenoperator ``A`` is
its precession rate, ``[A, H] rho = lam A rho``, so that ``A`` evolves as
``exp(i lam t) A`` in the Heisenberg picture and ``A rho_inf`` is an
eigenmode with eigenvalue ``+ i lam``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import scipy.linalg

from .liouville import apply_lindbladian, unvec
from .models import LindbladSet, SymmetrySet
from .operators import SparseOperator, fro_norm
from .spectra import ClassifiedSpectrum, SpectrumResult

__all__ = [
    "DarkState",
    "ConditionCheck",
    "TheoremReport",
    "CorollaryMode",
    "BlockSupportReport",
    "SubspaceSearchResult",
    "find_dark_states",
    "check_theorem1",
    "check_theorem3",
    "build_corollary1_modes",
    "corollary1_report",
    "verify_multiblock",
    "verify_theorem2_conclusion",
    "search_invariant_subspace",
]

DEFAULT_TOL = 1e-8


@dataclass(frozen=True)
class DarkState:
    """A unit vector annihilated by every jump operator and an eigenvector
    of the Hamiltonian with energy ``energy``."""

    vector: np.ndarray
    energy: float
    residual_h: float
    residual_l: float


@dataclass(frozen=True)
class ConditionCheck:
    name: str
    residual: float
    passed: bool

    def to_dict(self) -> dict:
        return {"name": self.name, "residual": self.residual, "pass": self.passed}


@dataclass
class TheoremReport:
    """Outcome of one certificate run, serializable to the report JSON."""

    theorem: str
    conditions: list[ConditionCheck]
    predictions: list[dict]
    tolerance: float
    seed: Optional[int] = None
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions)

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "conditions": [c.to_dict() for c in self.conditions],
            "predictions": self.predictions,
            "tolerance": self.tolerance,
            "seed": self.seed,
            "notes": self.notes,
            "pass": self.passed,
        }


def _dark_matrix(darks: Sequence[DarkState]) -> np.ndarray:
    return np.column_stack([d.vector for d in darks])


def _phase_fix(v: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the largest-magnitude entry is real positive."""
    i = int(np.argmax(np.abs(v)))
    ph = v[i]
    if abs(ph) == 0.0:
        return v
    return v * (abs(ph) / ph)


def find_dark_states(
    h: SparseOperator,
    lindblads: LindbladSet,
    tol: float = DEFAULT_TOL,
) -> list[DarkState]:
    """Joint numerical kernel of the jump operators, restricted to
    Hamiltonian eigenvectors.

    The kernel is found by an SVD of the stacked jump operators (singular
    values below ``tol * max(s_max, 1)`` count as zero); the Hamiltonian is
    then diagonalized inside the kernel and eigenvectors that leak out of
    it by more than ``tol`` are discarded. The returned states are
    orthonormal, sorted by ascending energy, with a deterministic phase.

    An empty kernel is a valid outcome and yields an empty list.
    """
    d = h.space.dim
    if len(lindblads) == 0:
        kernel = np.eye(d, dtype=complex)
    else:
        stacked = np.vstack([L.dense() for L in lindblads])
        u, s, vh = scipy.linalg.svd(stacked)
        cutoff = tol * max(float(s[0]) if s.size else 0.0, 1.0)
        rank = int(np.sum(s > cutoff))
        kernel = vh[rank:].conj().T  # d x r, orthonormal columns
    if kernel.shape[1] == 0:
        return []

    hd = h.dense()
    h_in = kernel.conj().T @ hd @ kernel
    energies, u = scipy.linalg.eigh(h_in)
    states: list[DarkState] = []
    for i in range(energies.size):
        v = kernel @ u[:, i]
        hv = hd @ v
        leak = float(np.linalg.norm(hv - kernel @ (kernel.conj().T @ hv)))
        if leak >= tol:
            continue
        v = _phase_fix(v / np.linalg.norm(v))
        res_h = float(np.linalg.norm(hd @ v - energies[i] * v))
        res_l = max(
            (float(np.linalg.norm(L.mat @ v)) for L in lindblads), default=0.0
        )
        states.append(
            DarkState(
                vector=v,
                energy=float(energies[i]),
                residual_h=res_h,
                residual_l=res_l,
            )
        )
    states.sort(key=lambda s: s.energy)
    return states


def check_theorem1(
    states: Sequence[DarkState],
    h: SparseOperator,
    lindblads: LindbladSet,
    tol: float = DEFAULT_TOL,
) -> TheoremReport:
    """Certify that the given states generate purely oscillating coherences.

    Conditions checked (all residuals reported):

    a. each state is an eigenvector of ``i H + sum_k L_k^dag L_k``;
    b. each state is an eigenvector of every jump operator, with
       ``sum_k |lam_{k,n}|^2 = Re lam_n``;
    c. ``Re sum_k (2 lam_{k,n} lam*_{k,m} - |lam_{k,n}|^2 - |lam_{k,m}|^2)``
       vanishes for every pair.

    For every ordered pair (n, m) the generator is applied to the outer
    product ``|phi_n><phi_m|`` and the eigen-relation with the predicted
    (purely imaginary) eigenvalue is verified; predictions carry the signed
    mode frequency ``nu`` with eigenvalue ``i nu``.

    Raises ``ValueError`` when the input set is not orthonormal within tol.
    """
    if len(states) == 0:
        return TheoremReport(
            theorem="theorem1",
            conditions=[],
            predictions=[],
            tolerance=tol,
            notes=["no states supplied"],
        )
    v = _dark_matrix(states)
    gram_err = float(np.max(np.abs(v.conj().T @ v - np.eye(v.shape[1]))))
    if gram_err > tol:
        raise ValueError(f"input states are not orthonormal (error {gram_err:.3e})")

    hd = h.dense()
    k_eff = hd * 1j
    for L in lindblads:
        ld = L.dense()
        k_eff = k_eff + ld.conj().T @ ld

    n_states = v.shape[1]
    lam = np.zeros(n_states, dtype=complex)
    res_a = np.zeros(n_states)
    for n in range(n_states):
        x = k_eff @ v[:, n]
        lam[n] = np.vdot(v[:, n], x)
        res_a[n] = float(np.linalg.norm(x - lam[n] * v[:, n]))

    lam_kn = np.zeros((len(lindblads), n_states), dtype=complex)
    res_b1 = 0.0
    for k, L in enumerate(lindblads):
        ld = L.dense()
        for n in range(n_states):
            y = ld @ v[:, n]
            lam_kn[k, n] = np.vdot(v[:, n], y)
            res_b1 = max(res_b1, float(np.linalg.norm(y - lam_kn[k, n] * v[:, n])))
    res_b2 = float(
        np.max(np.abs(np.sum(np.abs(lam_kn) ** 2, axis=0) - lam.real))
    )

    res_c = 0.0
    for n in range(n_states):
        for m in range(n_states):
            c_nm = np.sum(
                2.0 * lam_kn[:, n] * lam_kn[:, m].conj()
                - np.abs(lam_kn[:, n]) ** 2
                - np.abs(lam_kn[:, m]) ** 2
            )
            res_c = max(res_c, abs(float(c_nm.real)))

    conditions = [
        ConditionCheck("orthonormal", gram_err, bool(gram_err <= tol)),
        ConditionCheck("a_joint_eigenvector", float(np.max(res_a)), bool(np.max(res_a) <= tol)),
        ConditionCheck("b_jump_eigenvector", res_b1, bool(res_b1 <= tol)),
        ConditionCheck("b_rate_balance", res_b2, bool(res_b2 <= tol)),
        ConditionCheck("c_vanishing_real_part", res_c, bool(res_c <= tol)),
    ]

    predictions: list[dict] = []
    worst_mode = 0.0
    for n in range(n_states):
        for m in range(n_states):
            mu = (
                2.0 * np.sum(lam_kn[:, n] * lam_kn[:, m].conj())
                - lam[n]
                - lam[m].conj()
            )
            freq = float(mu.imag)
            mode = np.outer(v[:, n], v[:, m].conj())
            image = apply_lindbladian(h, lindblads, mode)
            res_mode = float(np.linalg.norm(image - 1j * freq * mode))
            worst_mode = max(worst_mode, res_mode)
            predictions.append(
                {"n": n, "m": m, "frequency": freq, "eigen_residual": res_mode}
            )
    conditions.append(
        ConditionCheck("mode_eigen_relation", worst_mode, worst_mode <= tol)
    )

    notes = []
    if float(np.max(np.abs(lam_kn))) <= tol:
        notes.append("condition (c) vacuous: all jump eigenvalues are zero")
    return TheoremReport(
        theorem="theorem1",
        conditions=conditions,
        predictions=predictions,
        tolerance=tol,
        notes=notes,
    )


def check_theorem3(
    a: SparseOperator,
    rho_inf: np.ndarray,
    h: SparseOperator,
    lindblads: LindbladSet,
    tol: float = DEFAULT_TOL,
) -> TheoremReport:
    """Certify that ``A rho_inf`` is a purely oscillating eigenmode.

    Requires a verified stationary state; fits the precession rate
    ``lam = <A rho, [A, H] rho> / |A rho|^2`` and checks

    * ``[A, H] rho_inf = lam A rho_inf``,
    * ``[L_k, A] rho_inf = 0`` and ``[L_k^dag, A] L_k rho_inf = 0``,
    * the eigen-relation ``L(A rho_inf) = i lam A rho_inf`` (residual
      relative to ``|A rho_inf|``),
    * realness of the fitted ``lam``.

    ``A rho_inf = 0`` is reported as vacuous rather than failed.
    """
    rho_inf = np.asarray(rho_inf, dtype=complex)
    stat_res = float(np.linalg.norm(apply_lindbladian(h, lindblads, rho_inf)))
    if stat_res >= tol:
        raise ValueError(
            f"rho_inf is not stationary (residual {stat_res:.3e} >= {tol:.1e})"
        )

    am = a.mat
    hm = h.mat
    x = am @ rho_inf
    x_norm = float(np.linalg.norm(x))
    if x_norm <= tol * max(np.linalg.norm(rho_inf), 1.0):
        return TheoremReport(
            theorem="theorem3",
            conditions=[ConditionCheck("stationarity", stat_res, True)],
            predictions=[],
            tolerance=tol,
            notes=["vacuous: A annihilates the stationary state"],
        )

    com_h = (am @ hm - hm @ am) @ rho_inf
    lam = complex(np.vdot(x, com_h) / (x_norm**2))
    res_h = float(np.linalg.norm(com_h - lam * x))

    res_jump = 0.0
    res_jump_dag = 0.0
    for L in lindblads:
        lm = L.mat
        ldag = lm.conjugate().transpose().tocsr()
        res_jump = max(
            res_jump, float(np.linalg.norm((lm @ am - am @ lm) @ rho_inf))
        )
        res_jump_dag = max(
            res_jump_dag,
            float(np.linalg.norm((ldag @ am - am @ ldag) @ (lm @ rho_inf))),
        )

    image = apply_lindbladian(h, lindblads, x)
    res_eig = float(np.linalg.norm(image - 1j * lam.real * x)) / x_norm
    res_imag = abs(lam.imag)

    conditions = [
        ConditionCheck("stationarity", stat_res, True),
        ConditionCheck("h_eigenoperator_on_state", res_h, res_h <= tol),
        ConditionCheck("jump_commutant_on_state", res_jump, res_jump <= tol),
        ConditionCheck("jump_adjoint_commutant", res_jump_dag, res_jump_dag <= tol),
        ConditionCheck("eigen_relation", res_eig, res_eig <= tol),
        ConditionCheck("lambda_real", res_imag, res_imag <= tol),
    ]
    predictions = [{"lambda": lam.real, "eigenvalue_im": lam.real}]
    return TheoremReport(
        theorem="theorem3",
        conditions=conditions,
        predictions=predictions,
        tolerance=tol,
    )


@dataclass(frozen=True)
class CorollaryMode:
    """One symmetry-generated eigenmode ``A^n rho_inf A^dag^m``."""

    rho: Optional[np.ndarray]
    eigenvalue: complex
    residual: float
    status: str  # "ok" or "annihilated"

    def to_dict(self) -> dict:
        return {
            "eigenvalue_re": self.eigenvalue.real,
            "eigenvalue_im": self.eigenvalue.imag,
            "residual": self.residual,
            "status": self.status,
        }


def corollary1_premise_residuals(
    a: SparseOperator,
    h: SparseOperator,
    lindblads: LindbladSet,
) -> tuple[float, float, float]:
    """Relative residuals of the full operator identities
    ``[A, H] = lam A`` and ``[L_k, A] = [L_k^dag, A] = 0``.

    Returns ``(lam, res_h, res_jumps)`` with ``lam`` the fitted real rate.
    """
    am, hm = a.mat, h.mat
    a_norm = max(fro_norm(am), np.finfo(float).tiny)
    com = am @ hm - hm @ am
    lam = complex((am.conjugate().multiply(com)).sum()) / a_norm**2
    res_h = fro_norm(com - lam * am) / a_norm
    res_jumps = 0.0
    for L in lindblads:
        lm = L.mat
        ldag = lm.conjugate().transpose().tocsr()
        l_norm = max(fro_norm(lm), np.finfo(float).tiny)
        res_jumps = max(res_jumps, fro_norm(lm @ am - am @ lm) / (l_norm * a_norm))
        res_jumps = max(
            res_jumps, fro_norm(ldag @ am - am @ ldag) / (l_norm * a_norm)
        )
    return lam, res_h, res_jumps


def build_corollary1_modes(
    a: SparseOperator,
    rho_inf: np.ndarray,
    n: int,
    m: int,
    h: SparseOperator,
    lindblads: LindbladSet,
    premise_tol: float = 1e-12,
) -> CorollaryMode:
    """Construct ``rho_nm = A^n rho_inf A^dag^m`` and verify
    ``L(rho_nm) = i lam (n - m) rho_nm``.

    The premise is checked as full operator identities before any mode is
    built; a failing premise raises ``ValueError``. A numerically vanishing
    ``rho_nm`` (e.g. raising past the top of a multiplet) is returned with
    status "annihilated".
    """
    if n < 0 or m < 0:
        raise ValueError("powers n, m must be nonnegative")
    lam, res_h, res_jumps = corollary1_premise_residuals(a, h, lindblads)
    if res_h > premise_tol or res_jumps > premise_tol:
        raise ValueError(
            f"premise violated: eigenoperator residual {res_h:.3e}, "
            f"jump commutant residual {res_jumps:.3e} (tol {premise_tol:.1e})"
        )

    rho_inf = np.asarray(rho_inf, dtype=complex)
    am = a.mat
    adag = am.conjugate().transpose().tocsr()
    rho = rho_inf.copy()
    for _ in range(n):
        rho = am @ rho
    for _ in range(m):
        rho = rho @ adag

    # Scale reference for the "annihilated" decision.
    op_scale = max(fro_norm(am), 1.0) ** (n + m) * max(
        float(np.linalg.norm(rho_inf)), np.finfo(float).tiny
    )
    rho_norm = float(np.linalg.norm(rho))
    eigenvalue = 1j * lam.real * (n - m)
    if rho_norm <= 1e-12 * op_scale:
        return CorollaryMode(
            rho=None, eigenvalue=eigenvalue, residual=0.0, status="annihilated"
        )
    image = apply_lindbladian(h, lindblads, rho)
    residual = float(np.linalg.norm(image - eigenvalue * rho)) / rho_norm
    return CorollaryMode(
        rho=rho, eigenvalue=eigenvalue, residual=residual, status="ok"
    )


def corollary1_report(
    a: SparseOperator,
    rho_inf: np.ndarray,
    n_max: int,
    m_max: int,
    h: SparseOperator,
    lindblads: LindbladSet,
    tol: float = 1e-9,
    premise_tol: float = 1e-12,
    conjugacy_tol: float = 1e-10,
) -> TheoremReport:
    """Build and verify the whole mode ladder ``rho_nm`` for n <= n_max,
    m <= m_max.

    Conditions: the operator-identity premise, the worst eigen-relation
    residual over nonzero modes, and conjugacy of the (n, m) / (m, n)
    eigenvalue pairs. Annihilated modes are recorded but do not fail.
    """
    lam, res_h, res_jumps = corollary1_premise_residuals(a, h, lindblads)
    conditions = [
        ConditionCheck("premise_h_eigenoperator", res_h, res_h <= premise_tol),
        ConditionCheck("premise_jump_commutant", res_jumps, res_jumps <= premise_tol),
    ]
    predictions: list[dict] = []
    eigs: dict[tuple[int, int], complex] = {}
    worst = 0.0
    notes: list[str] = []
    if res_h <= premise_tol and res_jumps <= premise_tol:
        for n in range(n_max + 1):
            for m in range(m_max + 1):
                mode = build_corollary1_modes(
                    a, rho_inf, n, m, h, lindblads, premise_tol=premise_tol
                )
                predictions.append({"n": n, "m": m, **mode.to_dict()})
                if mode.status == "ok":
                    worst = max(worst, mode.residual)
                    eigs[(n, m)] = mode.eigenvalue
                else:
                    notes.append(f"mode ({n},{m}) annihilated")
        conj_err = 0.0
        for (n, m), ev in eigs.items():
            if (m, n) in eigs:
                conj_err = max(conj_err, abs(ev - np.conj(eigs[(m, n)])))
        conditions.append(
            ConditionCheck("mode_eigen_relation", worst, worst <= tol)
        )
        conditions.append(
            ConditionCheck(
                "conjugate_pair_symmetry", conj_err, conj_err <= conjugacy_tol
            )
        )
    else:
        notes.append("premise failed; no modes built")
    return TheoremReport(
        theorem="corollary1",
        conditions=conditions,
        predictions=predictions,
        tolerance=tol,
        notes=notes,
    )


# -- block structure -------------------------------------------------------


@dataclass(frozen=True)
class BlockSupportReport:
    """Support of a mode on the joint eigenspaces of ``S+ S-`` and ``N``.

    ``diagonal_blocks`` lists ``(mu, nu, weight)`` for two-sided support on
    a single sector; ``off_diagonal`` lists coherences between different
    sectors as ``((mu, nu), (mu', nu'), weight)``. Weights are relative to
    the mode norm.
    """

    sector_values_spin: tuple[float, ...]
    sector_values_number: tuple[float, ...]
    diagonal_blocks: list[tuple[int, int, float]]
    off_diagonal: list[tuple[tuple[int, int], tuple[int, int], float]]
    single_block: bool
    tolerance: float

    def to_dict(self) -> dict:
        return {
            "sector_values_spin": list(self.sector_values_spin),
            "sector_values_number": list(self.sector_values_number),
            "diagonal_blocks": [
                {"mu": mu, "nu": nu, "weight": w}
                for mu, nu, w in self.diagonal_blocks
            ],
            "off_diagonal": [
                {"left": list(a_), "right": list(b_), "weight": w}
                for a_, b_, w in self.off_diagonal
            ],
            "single_block": self.single_block,
            "tolerance": self.tolerance,
        }


def spectral_projectors(
    op: SparseOperator, cluster_tol: float = 1e-8
) -> tuple[np.ndarray, list[np.ndarray]]:
    """Eigenvalue clusters and projectors of a Hermitian operator.

    Returns ``(values, projectors)`` where ``values[i]`` is the cluster
    mean and ``projectors[i]`` the orthogonal projector onto its eigenspace.
    """
    dense = op.dense()
    herm_err = float(np.max(np.abs(dense - dense.conj().T)))
    if herm_err > 1e-10 * max(1.0, float(np.max(np.abs(dense)))):
        raise ValueError(f"operator is not Hermitian (asymmetry {herm_err:.3e})")
    w, v = scipy.linalg.eigh(dense)
    scale = max(float(np.max(np.abs(w))), 1.0)
    values: list[float] = []
    projs: list[np.ndarray] = []
    start = 0
    for i in range(1, w.size + 1):
        if i == w.size or w[i] - w[start] > cluster_tol * scale:
            block = v[:, start:i]
            values.append(float(np.mean(w[start:i])))
            projs.append(block @ block.conj().T)
            start = i
    return np.asarray(values), projs


def verify_multiblock(
    mode: np.ndarray,
    sym: SymmetrySet,
    tol: float = DEFAULT_TOL,
) -> BlockSupportReport:
    """Resolve a mode onto the joint ``(S+ S-, N)`` sector decomposition.

    Diagonal support means the mode lives inside one sector; off-diagonal
    entries expose coherences between different sectors (e.g. pair-raising
    modes that connect particle-number sectors).
    """
    mode = np.asarray(mode, dtype=complex)
    sp_sm = sym.s_plus @ sym.s_minus
    vals_spin, p_spin = spectral_projectors(sp_sm)
    vals_num, p_num = spectral_projectors(sym.n_total)

    d = mode.shape[0]
    eye_res = np.linalg.norm(sum(p_spin) - np.eye(d)) + np.linalg.norm(
        sum(p_num) - np.eye(d)
    )
    if eye_res > 1e-10 * d:
        raise ValueError(f"projector completeness violated ({eye_res:.3e})")

    joint = [
        (mu, nu, p_spin[mu] @ p_num[nu])
        for mu in range(len(p_spin))
        for nu in range(len(p_num))
    ]
    mode_norm = max(float(np.linalg.norm(mode)), np.finfo(float).tiny)
    diagonal: list[tuple[int, int, float]] = []
    off_diag: list[tuple[tuple[int, int], tuple[int, int], float]] = []
    for mu, nu, p in joint:
        w = float(np.linalg.norm(p @ mode @ p)) / mode_norm
        if w > tol:
            diagonal.append((mu, nu, w))
    for mu, nu, p_left in joint:
        for mu2, nu2, p_right in joint:
            if (mu, nu) == (mu2, nu2):
                continue
            w = float(np.linalg.norm(p_left @ mode @ p_right)) / mode_norm
            if w > tol:
                off_diag.append(((mu, nu), (mu2, nu2), w))

    return BlockSupportReport(
        sector_values_spin=tuple(float(x) for x in vals_spin),
        sector_values_number=tuple(float(x) for x in vals_num),
        diagonal_blocks=diagonal,
        off_diagonal=off_diag,
        single_block=(len(diagonal) == 1 and len(off_diag) == 0),
        tolerance=tol,
    )


def verify_theorem2_conclusion(
    spec: SpectrumResult,
    classified: ClassifiedSpectrum,
    darks: Sequence[DarkState],
    tol: float = 1e-7,
    indices: Optional[Sequence[int]] = None,
) -> TheoremReport:
    """Check that oscillating eigenmodes factor over the dark space.

    Each selected eigenmode is devectorized and must be numerically rank 1
    (second singular value below ``tol`` times the first) with both
    singular factors inside the span of the dark states. ``indices``
    defaults to the oscillating class.
    """
    if spec.right_eigenvectors is None:
        raise ValueError("spectrum was computed without eigenvectors")
    if indices is None:
        indices = [int(i) for i in classified.oscillating]
    if len(darks) > 0:
        dmat = _dark_matrix(darks)
    else:
        dmat = None

    conditions: list[ConditionCheck] = []
    predictions: list[dict] = []
    for i in indices:
        lam = spec.eigenvalues[i]
        mode = unvec(spec.right_eigenvectors[:, i])
        u, s, vh = scipy.linalg.svd(mode)
        rank1 = float(s[1] / s[0]) if s.size > 1 else 0.0
        left, right = u[:, 0], vh[0].conj()
        if dmat is None:
            dark_res = 1.0
        else:
            dark_res = max(
                float(np.linalg.norm(left - dmat @ (dmat.conj().T @ left))),
                float(np.linalg.norm(right - dmat @ (dmat.conj().T @ right))),
            )
        conditions.append(ConditionCheck(f"mode_{i}_rank1", rank1, rank1 <= tol))
        conditions.append(
            ConditionCheck(f"mode_{i}_dark_span", dark_res, dark_res <= tol)
        )
        predictions.append(
            {"index": int(i), "im_lambda": float(lam.imag), "rank1_ratio": rank1}
        )
    return TheoremReport(
        theorem="theorem2",
        conditions=conditions,
        predictions=predictions,
        tolerance=tol,
    )


@dataclass(frozen=True)
class SubspaceSearchResult:
    """Outcome of the randomized jump-invariant-subspace search.

    ``found=False`` means "not falsified": no certified subspace showed up
    within the trial budget, which is evidence, not proof, of nonexistence.
    """

    found: bool
    basis: Optional[np.ndarray]
    trials_run: int
    seed: int
    note: str

    def to_dict(self) -> dict:
        return {
            "found": self.found,
            "dimension": None if self.basis is None else int(self.basis.shape[1]),
            "trials_run": self.trials_run,
            "seed": self.seed,
            "note": self.note,
        }


def search_invariant_subspace(
    lindblads: LindbladSet,
    darks: Sequence[DarkState],
    trials: int = 32,
    seed: int = 0,
    tol: float = 1e-10,
    h: Optional[SparseOperator] = None,
) -> SubspaceSearchResult:
    """Randomized search for an invariant subspace orthogonal to the dark
    space.

    Each trial draws a random complex combination of the jump operators
    (plus, when ``h`` is given, the effective drift ``i H + sum L^dag L``),
    compresses it to the orthocomplement of the dark span, and reads
    candidate subspaces off the leading columns of its Schur form. A
    candidate ``S`` is certified when the relative leakage
    ``|(1 - P_S) X P_S| / |X|`` stays below ``tol`` for every jump
    operator ``X`` (and for the drift, when given). The first certified
    subspace is returned; exhausting the budget yields ``found=False``.

    Without ``h`` the test is jump-invariance only. Note that for pure-loss
    models the jump kernel itself then provides trivial certificates:
    passing ``h`` tightens the test to full enclosures, which is the
    condition under which non-dark asymptotics could actually survive.
    """
    if len(lindblads) == 0:
        raise ValueError("no jump operators to search against")
    d = lindblads.ops[0].space.dim
    if len(darks) > 0:
        dmat = _dark_matrix(darks)
        u, s, _ = scipy.linalg.svd(dmat, full_matrices=True)
        rank = int(np.sum(s > 1e-12))
        q = u[:, rank:]  # orthonormal basis of the orthocomplement
    else:
        q = np.eye(d, dtype=complex)
    r = q.shape[1]
    if r == 0:
        return SubspaceSearchResult(
            found=False, basis=None, trials_run=0, seed=seed,
            note="dark space exhausts the Hilbert space",
        )

    gens = [L.dense() for L in lindblads]
    if h is not None:
        drift = 1j * h.dense()
        for g in gens:
            drift = drift + g.conj().T @ g
        gens = gens + [drift]
    scales = [max(float(np.linalg.norm(g)), 1.0) for g in gens]

    rng = np.random.default_rng(seed)
    # S must be a proper subspace of the Hilbert space: the full
    # orthocomplement is only admissible when the dark space is nonempty.
    k_max = r if len(darks) > 0 else r - 1
    for trial in range(trials):
        c = rng.standard_normal(len(gens)) + 1j * rng.standard_normal(len(gens))
        m = sum(ci * gi for ci, gi in zip(c, gens))
        m_compressed = q.conj().T @ m @ q
        _, z = scipy.linalg.schur(m_compressed, output="complex")
        for k in range(1, k_max + 1):
            basis = q @ z[:, :k]
            leak = max(
                float(
                    np.linalg.norm(g @ basis - basis @ (basis.conj().T @ g @ basis))
                )
                / sc
                for g, sc in zip(gens, scales)
            )
            if leak < tol:
                return SubspaceSearchResult(
                    found=True,
                    basis=basis,
                    trials_run=trial + 1,
                    seed=seed,
                    note=f"certified with leak {leak:.3e}",
                )
    return SubspaceSearchResult(
        found=False,
        basis=None,
        trials_run=trials,
        seed=seed,
        note="not falsified: no invariant subspace found within the trial budget",
    )
