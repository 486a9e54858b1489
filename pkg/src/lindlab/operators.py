"""Tensor-product Hilbert spaces and sparse complex operator algebra.

Everything downstream (model builders, superoperators, certificates) is
expressed in terms of :class:`HilbertSpace` and :class:`SparseOperator`.
Operators are immutable wrappers around ``scipy.sparse`` CSR matrices, so
arithmetic (``+``, scalar ``*``, ``@``, ``.adjoint()``, :func:`kron`)
composes freely and deterministically.

Conventions
-----------
* Site 1 is the most significant tensor factor: the basis index of
  ``|s_1 s_2 ... s_n>`` is ``sum_j s_j * q**(n-j)`` for local dimension ``q``.
* Spin-1/2 local basis: index 0 is up (``sz`` eigenvalue +1), index 1 is
  down, so ``sm @ up = down``.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Union

import numpy as np
import scipy.sparse as sp

__all__ = [
    "DEFAULT_DIM_CAP",
    "HilbertSpace",
    "SparseOperator",
    "site_operator",
    "kron",
    "commutator",
    "anticommutator",
    "fro_norm",
    "save_coordinate_text",
    "load_coordinate_text",
]

# Densifying beyond this dimension is rejected; larger problems must stay
# matrix-free (see liouville module).
DEFAULT_DIM_CAP = 4096


@dataclass(frozen=True)
class HilbertSpace:
    """A homogeneous tensor-product space of ``n_sites`` factors.

    Parameters
    ----------
    n_sites : int
        Number of lattice sites (tensor factors), at least 1.
    local_dim : int
        Dimension of a single factor (2 for spin-1/2, 4 for a
        Hubbard-type site).
    max_dim : int
        Largest admissible total dimension; configurations beyond it are
        rejected at construction time.
    """

    n_sites: int
    local_dim: int
    max_dim: int = DEFAULT_DIM_CAP

    def __post_init__(self) -> None:
        if self.n_sites < 1:
            raise ValueError(f"n_sites must be positive, got {self.n_sites}")
        if self.local_dim < 1:
            raise ValueError(f"local_dim must be positive, got {self.local_dim}")
        # Python ints do not overflow, so the cap check is exact.
        if self.local_dim**self.n_sites > self.max_dim:
            raise ValueError(
                f"dim = {self.local_dim}**{self.n_sites} exceeds the cap "
                f"{self.max_dim}; use matrix-free paths or raise max_dim"
            )

    @property
    def dim(self) -> int:
        return self.local_dim**self.n_sites


# Local spin-1/2 operators in the (up, down) basis.
SPIN_OPS: dict[str, np.ndarray] = {
    "identity": np.eye(2, dtype=complex),
    "sx": np.array([[0, 1], [1, 0]], dtype=complex),
    "sy": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "sz": np.array([[1, 0], [0, -1]], dtype=complex),
    "sp": np.array([[0, 1], [0, 0]], dtype=complex),
    "sm": np.array([[0, 0], [1, 0]], dtype=complex),
}


class SparseOperator:
    """An immutable complex sparse operator attached to a :class:`HilbertSpace`.

    Entries with magnitude at or below the drop tolerance (default 0:
    exact zeros only) are never stored.
    """

    __slots__ = ("space", "mat")

    def __init__(self, space: HilbertSpace, mat, drop_tol: float = 0.0):
        m = sp.csr_matrix(mat, dtype=complex, copy=True)
        if m.shape != (space.dim, space.dim):
            raise ValueError(
                f"matrix shape {m.shape} does not match space dim {space.dim}"
            )
        if drop_tol > 0.0:
            m.data[np.abs(m.data) <= drop_tol] = 0.0
        m.eliminate_zeros()
        m.sort_indices()
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "mat", m)

    def __setattr__(self, name, value):  # immutability after construction
        raise AttributeError("SparseOperator is immutable")

    # -- basic queries -------------------------------------------------

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def nnz(self) -> int:
        return self.mat.nnz

    def dense(self) -> np.ndarray:
        return self.mat.toarray()

    def triples(self) -> list[tuple[int, int, complex]]:
        """Stored entries as (row, col, value), sorted by (row, col)."""
        coo = self.mat.tocoo()
        order = np.lexsort((coo.col, coo.row))
        return [
            (int(coo.row[i]), int(coo.col[i]), complex(coo.data[i])) for i in order
        ]

    # -- algebra -------------------------------------------------------

    def _check_same_space(self, other: "SparseOperator") -> None:
        if self.space.dim != other.space.dim:
            raise ValueError(
                f"dimension mismatch: {self.space.dim} vs {other.space.dim}"
            )

    def __add__(self, other: "SparseOperator") -> "SparseOperator":
        self._check_same_space(other)
        return SparseOperator(self.space, self.mat + other.mat)

    def __sub__(self, other: "SparseOperator") -> "SparseOperator":
        self._check_same_space(other)
        return SparseOperator(self.space, self.mat - other.mat)

    def __neg__(self) -> "SparseOperator":
        return SparseOperator(self.space, -self.mat)

    def __mul__(self, scalar: complex) -> "SparseOperator":
        return SparseOperator(self.space, self.mat * complex(scalar))

    __rmul__ = __mul__

    def __matmul__(self, other: "SparseOperator") -> "SparseOperator":
        self._check_same_space(other)
        return SparseOperator(self.space, self.mat @ other.mat)

    def adjoint(self) -> "SparseOperator":
        return SparseOperator(self.space, self.mat.conjugate().transpose())

    @property
    def H(self) -> "SparseOperator":
        return self.adjoint()

    def apply(self, v: np.ndarray) -> np.ndarray:
        """Sparse matrix-vector product ``self @ v``."""
        v = np.asarray(v, dtype=complex)
        if v.shape != (self.dim,):
            raise ValueError(f"vector length {v.shape} does not match dim {self.dim}")
        return self.mat @ v

    # -- constructors ----------------------------------------------------

    @classmethod
    def identity(cls, space: HilbertSpace) -> "SparseOperator":
        return cls(space, sp.identity(space.dim, dtype=complex, format="csr"))

    @classmethod
    def zero(cls, space: HilbertSpace) -> "SparseOperator":
        return cls(space, sp.csr_matrix((space.dim, space.dim), dtype=complex))

    @classmethod
    def from_triples(
        cls,
        space: HilbertSpace,
        triples: Iterable[tuple[int, int, complex]],
    ) -> "SparseOperator":
        rows, cols, vals = [], [], []
        for r, c, v in triples:
            if not (0 <= r < space.dim and 0 <= c < space.dim):
                raise ValueError(f"entry ({r},{c}) outside dim {space.dim}")
            rows.append(r)
            cols.append(c)
            vals.append(v)
        m = sp.coo_matrix(
            (np.asarray(vals, dtype=complex), (rows, cols)),
            shape=(space.dim, space.dim),
        )
        return cls(space, m)

    def __repr__(self) -> str:
        return f"SparseOperator(dim={self.dim}, nnz={self.nnz})"


def site_operator(
    local: Union[str, np.ndarray],
    site: int,
    space: HilbertSpace,
) -> SparseOperator:
    """Embed a single-site operator at a 1-based ``site``.

    ``local`` is either one of the spin-1/2 names ``sx, sy, sz, sp, sm,
    identity`` or an explicit ``local_dim x local_dim`` array (e.g. a 4x4
    Hubbard on-site operator).

    Returns the Kronecker sandwich ``1 (x) ... (x) local (x) ... (x) 1``
    with ``local`` in position ``site`` (site 1 most significant).
    """
    if isinstance(local, str):
        try:
            loc = SPIN_OPS[local]
        except KeyError:
            raise ValueError(f"unknown local operator {local!r}") from None
    else:
        loc = np.asarray(local, dtype=complex)
    q = space.local_dim
    if loc.shape != (q, q):
        raise ValueError(f"local operator shape {loc.shape} does not match local_dim {q}")
    if not (1 <= site <= space.n_sites):
        raise ValueError(f"site {site} out of range 1..{space.n_sites}")
    left = sp.identity(q ** (site - 1), dtype=complex, format="csr")
    right = sp.identity(q ** (space.n_sites - site), dtype=complex, format="csr")
    m = sp.kron(sp.kron(left, sp.csr_matrix(loc)), right, format="csr")
    return SparseOperator(space, m)


def kron(a: SparseOperator, b: SparseOperator) -> SparseOperator:
    """Kronecker product; factors must share the local dimension."""
    if a.space.local_dim != b.space.local_dim:
        raise ValueError(
            f"local_dim mismatch: {a.space.local_dim} vs {b.space.local_dim}"
        )
    space = HilbertSpace(
        a.space.n_sites + b.space.n_sites,
        a.space.local_dim,
        max_dim=max(a.space.max_dim, b.space.max_dim, a.dim * b.dim),
    )
    return SparseOperator(space, sp.kron(a.mat, b.mat, format="csr"))


def commutator(a: SparseOperator, b: SparseOperator) -> SparseOperator:
    return a @ b - b @ a


def anticommutator(a: SparseOperator, b: SparseOperator) -> SparseOperator:
    return a @ b + b @ a


def fro_norm(x) -> float:
    """Frobenius norm of a SparseOperator, sparse matrix, or ndarray."""
    if isinstance(x, SparseOperator):
        x = x.mat
    if sp.issparse(x):
        return float(np.sqrt(np.sum(np.abs(x.data) ** 2)))
    return float(np.linalg.norm(np.asarray(x)))


# -- plain-text coordinate format --------------------------------------
#
#   dim <d>
#   <row> <col> <re> <im>        (0-based indices, one stored entry per line)
#
# Floats are written with repr so a load/save cycle is bit-exact.


def save_coordinate_text(path: Union[str, Path], mat, dim: int | None = None) -> None:
    """Write a matrix (sparse, dense, or SparseOperator) in coordinate text form."""
    if isinstance(mat, SparseOperator):
        mat = mat.mat
    m = sp.coo_matrix(mat)
    if dim is None:
        dim = m.shape[0]
    if m.shape != (dim, dim):
        raise ValueError(f"matrix shape {m.shape} is not ({dim},{dim})")
    order = np.lexsort((m.col, m.row))
    lines = [f"dim {dim}"]
    for i in order:
        v = complex(m.data[i])
        if v == 0:
            continue
        lines.append(f"{int(m.row[i])} {int(m.col[i])} {v.real!r} {v.imag!r}")
    Path(path).write_text("\n".join(lines) + "\n")


def load_coordinate_text(path: Union[str, Path]) -> tuple[int, sp.csr_matrix]:
    """Read a coordinate text file; returns ``(dim, csr_matrix)``."""
    text = Path(path).read_text()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("dim "):
        raise ValueError(f"{path}: missing 'dim <d>' header")
    dim = int(lines[0].split()[1])
    rows, cols, vals = [], [], []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 4:
            raise ValueError(f"{path}: malformed line {ln!r}")
        r, c = int(parts[0]), int(parts[1])
        if not (0 <= r < dim and 0 <= c < dim):
            raise ValueError(f"{path}: index ({r},{c}) outside dim {dim}")
        rows.append(r)
        cols.append(c)
        vals.append(complex(float(parts[2]), float(parts[3])))
    m = sp.coo_matrix(
        (np.asarray(vals, dtype=complex), (rows, cols)), shape=(dim, dim)
    )
    return dim, m.tocsr()
