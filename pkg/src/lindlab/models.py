"""Concrete lattice models: XXZ spin ring with local loss, Hubbard chain
with dephasing or doublon drive, and the global symmetry algebra of the
Hubbard chain.

Jump-operator rates are folded into the operators themselves: a loss term
with rate ``gamma`` is stored as ``gamma * sm`` (not ``sqrt(gamma)``), so
the dissipator scales as ``gamma**2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp

from .operators import (
    DEFAULT_DIM_CAP,
    HilbertSpace,
    SparseOperator,
    site_operator,
)

__all__ = [
    "XxzRingParams",
    "HubbardChainParams",
    "LindbladSet",
    "SymmetrySet",
    "spin_space",
    "hubbard_space",
    "build_xxz_ring",
    "build_hubbard_chain",
    "fermion_annihilation",
    "site_number",
    "site_spin_z",
    "doublon_density",
    "doublon_flow",
    "symmetry_operators",
]


@dataclass(frozen=True)
class XxzRingParams:
    """Periodic spin-1/2 ring with anisotropy ``delta`` and local losses.

    ``loss_sites`` are 1-based and must be distinct; ``gammas`` holds one
    nonnegative rate per loss site. ``nnn_delta`` adds a next-nearest
    ``sz_j sz_{j+2}`` coupling as an integrability-breaking knob for
    exploration (for n < 5 the wrap makes those bonds overlap the nearest
    neighbors).
    """

    n: int
    delta: float
    loss_sites: tuple[int, ...] = (1,)
    gammas: tuple[float, ...] = (1.0,)
    nnn_delta: float = 0.0

    def __post_init__(self):
        if self.n < 3:
            # n = 2 would double-count the wrap-around bond.
            raise ValueError(f"XXZ ring needs n >= 3, got n={self.n}")
        if len(self.loss_sites) != len(self.gammas):
            raise ValueError("loss_sites and gammas must have equal length")
        if len(set(self.loss_sites)) != len(self.loss_sites):
            raise ValueError("loss sites must be distinct")
        for s in self.loss_sites:
            if not (1 <= s <= self.n):
                raise ValueError(f"loss site {s} out of range 1..{self.n}")
        for g in self.gammas:
            if g < 0:
                raise ValueError("rates must be nonnegative")


@dataclass(frozen=True)
class HubbardChainParams:
    """Open Hubbard chain.

    ``H = -tau * sum_{j,s} (c^dag_{j,s} c_{j+1,s} + h.c.)
         + u * sum_j n_{j,up} n_{j,down}
         + sum_j (epsilon_j - mu) * n_j``

    ``dephasing_kind`` selects the jump-operator family: ``"spin"`` gives
    ``gamma_k * Sz_k``, ``"charge"`` gives ``gamma_k * n_k``, ``"none"``
    gives no dephasing. ``doublon_drive = (g1, g2)`` additionally injects
    pairs at site 1 and extracts them at the last site.
    """

    l_sites: int
    tau: float = 1.0
    u: float = 0.0
    mu: float = 0.0
    epsilon: Optional[tuple[float, ...]] = None
    dephasing_kind: str = "none"
    dephasing_gammas: tuple[float, ...] = ()
    doublon_drive: Optional[tuple[float, float]] = None

    def __post_init__(self):
        if self.l_sites < 1:
            raise ValueError("l_sites must be >= 1")
        if self.dephasing_kind not in ("spin", "charge", "none"):
            raise ValueError(f"unknown dephasing_kind {self.dephasing_kind!r}")
        eps = self.epsilon
        if eps is None:
            object.__setattr__(self, "epsilon", tuple(0.0 for _ in range(self.l_sites)))
        elif len(eps) != self.l_sites:
            raise ValueError("epsilon must have one value per site")
        if self.dephasing_kind != "none":
            if len(self.dephasing_gammas) != self.l_sites:
                raise ValueError("dephasing_gammas must have one rate per site")
            if any(g < 0 for g in self.dephasing_gammas):
                raise ValueError("rates must be nonnegative")
        if self.doublon_drive is not None and any(g < 0 for g in self.doublon_drive):
            raise ValueError("rates must be nonnegative")


@dataclass(frozen=True)
class LindbladSet:
    """Jump operators with rates already folded in."""

    ops: tuple[SparseOperator, ...]

    def __post_init__(self):
        dims = {op.space.dim for op in self.ops}
        if len(dims) > 1:
            raise ValueError("all jump operators must share one Hilbert space")

    def __iter__(self):
        return iter(self.ops)

    def __len__(self):
        return len(self.ops)


@dataclass(frozen=True)
class SymmetrySet:
    """Global spin and pair (eta) su(2) algebras plus total particle number."""

    s_plus: SparseOperator
    s_minus: SparseOperator
    s_z: SparseOperator
    eta_plus: SparseOperator
    eta_minus: SparseOperator
    eta_z: SparseOperator
    n_total: SparseOperator


def spin_space(n: int, max_dim: int = DEFAULT_DIM_CAP) -> HilbertSpace:
    return HilbertSpace(n, 2, max_dim=max_dim)


def hubbard_space(l_sites: int, max_dim: int = DEFAULT_DIM_CAP) -> HilbertSpace:
    return HilbertSpace(l_sites, 4, max_dim=max_dim)


# -- XXZ spin ring -------------------------------------------------------


def build_xxz_ring(p: XxzRingParams) -> tuple[SparseOperator, LindbladSet]:
    """Hamiltonian and loss set of the periodic XXZ ring.

    ``H = sum_j sp_j sm_{j+1} + sm_j sp_{j+1} + delta * sz_j sz_{j+1}``
    with the wrap bond ``j = n -> 1``. Each loss site contributes the
    jump operator ``gamma * sm`` at that site.
    """
    space = spin_space(p.n)
    h = SparseOperator.zero(space)
    for j in range(1, p.n + 1):
        k = j % p.n + 1
        h = h + site_operator("sp", j, space) @ site_operator("sm", k, space)
        h = h + site_operator("sm", j, space) @ site_operator("sp", k, space)
        h = h + p.delta * (site_operator("sz", j, space) @ site_operator("sz", k, space))
    if p.nnn_delta != 0.0:
        for j in range(1, p.n + 1):
            k2 = (j + 1) % p.n + 1
            h = h + p.nnn_delta * (
                site_operator("sz", j, space) @ site_operator("sz", k2, space)
            )
    losses = tuple(
        g * site_operator("sm", s, space) for s, g in zip(p.loss_sites, p.gammas)
    )
    return h, LindbladSet(losses)


# -- Hubbard chain (Jordan-Wigner) ----------------------------------------
#
# Local basis per site: 0 = empty, 1 = up, 2 = down, 3 = up+down.
# Fermionic mode order for the strings: (1,up), (1,down), (2,up), ...

# Annihilators inside one site; the down mode picks up the up-mode parity.
_C_UP_LOCAL = np.zeros((4, 4), dtype=complex)
_C_UP_LOCAL[0, 1] = 1.0
_C_UP_LOCAL[2, 3] = 1.0
_C_DN_LOCAL = np.zeros((4, 4), dtype=complex)
_C_DN_LOCAL[0, 2] = 1.0
_C_DN_LOCAL[1, 3] = -1.0
# Site parity (-1)^(n_up + n_down), the per-site string factor.
_PARITY_LOCAL = np.diag([1.0, -1.0, -1.0, 1.0]).astype(complex)


def fermion_annihilation(space: HilbertSpace, site: int, spin: str) -> SparseOperator:
    """Annihilation operator ``c_{site,spin}`` with its Jordan-Wigner string.

    ``site`` is 1-based, ``spin`` is ``"up"`` or ``"down"``.
    """
    if space.local_dim != 4:
        raise ValueError("fermion operators need a local_dim-4 space")
    if spin not in ("up", "down"):
        raise ValueError(f"spin must be 'up' or 'down', got {spin!r}")
    if not (1 <= site <= space.n_sites):
        raise ValueError(f"site {site} out of range 1..{space.n_sites}")
    loc = _C_UP_LOCAL if spin == "up" else _C_DN_LOCAL
    mat = sp.identity(1, dtype=complex, format="csr")
    for j in range(1, space.n_sites + 1):
        if j < site:
            factor = _PARITY_LOCAL
        elif j == site:
            factor = loc
        else:
            factor = np.eye(4, dtype=complex)
        mat = sp.kron(mat, sp.csr_matrix(factor), format="csr")
    return SparseOperator(space, mat)


def site_number(space: HilbertSpace, site: int, spin: Optional[str] = None) -> SparseOperator:
    """Occupation ``n_{site,spin}``; both spins summed when ``spin`` is None."""
    if spin is None:
        return site_number(space, site, "up") + site_number(space, site, "down")
    c = fermion_annihilation(space, site, spin)
    return c.adjoint() @ c


def site_spin_z(space: HilbertSpace, site: int) -> SparseOperator:
    """Local spin-z ``(n_up - n_down) / 2`` at ``site``."""
    return 0.5 * (site_number(space, site, "up") - site_number(space, site, "down"))


def doublon_density(space: HilbertSpace, site: int) -> SparseOperator:
    """Double-occupancy projector ``n_up n_down`` at ``site``."""
    return site_number(space, site, "up") @ site_number(space, site, "down")


def doublon_flow(h: SparseOperator, space: HilbertSpace, site: int) -> SparseOperator:
    """Coherent flow observable ``i [H, n_up n_down]`` at ``site``.

    Its expectation in a stationary state measures the doublon current
    balanced by the dissipative injection/extraction terms.
    """
    d = doublon_density(space, site)
    return 1j * (h @ d - d @ h)


def _pair_creation(space: HilbertSpace, site: int) -> SparseOperator:
    """Staggered pair creation ``(-1)^site c^dag_up c^dag_down`` at ``site``."""
    up = fermion_annihilation(space, site, "up").adjoint()
    dn = fermion_annihilation(space, site, "down").adjoint()
    return float((-1) ** site) * (up @ dn)


def build_hubbard_chain(
    p: HubbardChainParams,
) -> tuple[SparseOperator, LindbladSet, SymmetrySet]:
    """Hamiltonian, jump operators, and symmetry algebra of the open chain."""
    space = hubbard_space(p.l_sites)
    h = SparseOperator.zero(space)
    for j in range(1, p.l_sites):
        for spin in ("up", "down"):
            cj = fermion_annihilation(space, j, spin)
            ck = fermion_annihilation(space, j + 1, spin)
            hop = cj.adjoint() @ ck
            h = h + (-p.tau) * (hop + hop.adjoint())
    for j in range(1, p.l_sites + 1):
        h = h + p.u * doublon_density(space, j)
        h = h + (p.epsilon[j - 1] - p.mu) * site_number(space, j)

    jumps: list[SparseOperator] = []
    if p.dephasing_kind == "spin":
        for k in range(1, p.l_sites + 1):
            jumps.append(p.dephasing_gammas[k - 1] * site_spin_z(space, k))
    elif p.dephasing_kind == "charge":
        for k in range(1, p.l_sites + 1):
            jumps.append(p.dephasing_gammas[k - 1] * site_number(space, k))
    if p.doublon_drive is not None:
        g1, g2 = p.doublon_drive
        jumps.append(g1 * _pair_creation(space, 1))
        jumps.append(g2 * _pair_creation(space, p.l_sites).adjoint())

    return h, LindbladSet(tuple(jumps)), symmetry_operators(space)


def symmetry_operators(space: HilbertSpace) -> SymmetrySet:
    """Total spin and eta (staggered pair) su(2) generators plus ``N``.

    ``S+ = sum_j c^dag_{j,up} c_{j,down}``, ``Sz = sum_j (n_up - n_down)/2``,
    ``eta+ = sum_j (-1)^j c^dag_{j,up} c^dag_{j,down}`` and
    ``eta_z = (N - L)/2``.
    """
    if space.local_dim != 4:
        raise ValueError("symmetry operators need a local_dim-4 space")
    l_sites = space.n_sites
    s_plus = SparseOperator.zero(space)
    eta_plus = SparseOperator.zero(space)
    s_z = SparseOperator.zero(space)
    n_total = SparseOperator.zero(space)
    for j in range(1, l_sites + 1):
        up = fermion_annihilation(space, j, "up")
        dn = fermion_annihilation(space, j, "down")
        s_plus = s_plus + up.adjoint() @ dn
        eta_plus = eta_plus + _pair_creation(space, j)
        s_z = s_z + site_spin_z(space, j)
        n_total = n_total + site_number(space, j)
    eta_z = 0.5 * (n_total - float(l_sites) * SparseOperator.identity(space))
    return SymmetrySet(
        s_plus=s_plus,
        s_minus=s_plus.adjoint(),
        s_z=s_z,
        eta_plus=eta_plus,
        eta_minus=eta_plus.adjoint(),
        eta_z=eta_z,
        n_total=n_total,
    )
