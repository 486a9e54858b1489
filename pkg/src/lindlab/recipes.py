"""Bundled job configurations.

One annotated config per job type; the fig* recipes reproduce the standard
spectrum and dynamics figures at desk scale. Emit any of them with
``lindlab recipes emit <name>`` and run with ``lindlab run <file>``.
"""

from __future__ import annotations

__all__ = ["RECIPES", "figure_recipes"]

_FIG1A = """\
# Full Liouvillian spectrum of the lossy XXZ ring, n = 4 panel.
schema = 1

[job]
type = "spectrum"
name = "fig1a"

[model]
kind = "xxz"
n = 4
delta = 2.0
loss_sites = [1]    # single loss site
gammas = [1.0]      # rate folded into the jump operator

[run]
keep_vectors = true   # d = 16: retaining eigenvectors is cheap
"""

_FIG1B = """\
# Full Liouvillian spectrum of the lossy XXZ ring, n = 6 panel.
# Dense 4096 x 4096 eigenvalue solve: takes a few minutes.
schema = 1

[job]
type = "spectrum"
name = "fig1b"

[model]
kind = "xxz"
n = 6
delta = 2.0
loss_sites = [1]
gammas = [1.0]

[run]
keep_vectors = false  # eigenvalues only; residual column becomes nan
"""

_FIG1C = """\
# n = 8 panel: beyond the dense cap, probed by shift-invert Arnoldi along
# the imaginary axis. OPTIONAL and slow; the spectrum is partial by design.
schema = 1

[job]
type = "spectrum"
name = "fig1c"

[model]
kind = "xxz"
n = 8
delta = 2.0
loss_sites = [1]
gammas = [1.0]

[run]
mode = "targeted"
shift_imag = [2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0]
k_per_shift = 8
"""

_FIG2A = """\
# Relaxation: two loss sites destroy the protected subspace.
schema = 1

[job]
type = "evolve"
name = "fig2a"

[model]
kind = "xxz"
n = 4
delta = 1.1
loss_sites = [1, 2]
gammas = [1.0, 1.0]

[run]
seed = 15            # Ginibre initial state (same state as fig2b)
t_start = 0.0
t_stop = 200.0
dt = 0.25
observable = "sx"
observable_site = 2
rel_tol = 1e-9
"""

_FIG2B = """\
# Persistent oscillations: a single loss site leaves the protected
# subspace intact; same initial state and parameters as fig2a.
schema = 1

[job]
type = "evolve"
name = "fig2b"

[model]
kind = "xxz"
n = 4
delta = 1.1
loss_sites = [1]
gammas = [1.0]

[run]
seed = 15
t_start = 0.0
t_stop = 200.0
dt = 0.25
observable = "sx"
observable_site = 2
rel_tol = 1e-9
"""

_TH1 = """\
# Dark-state certificate: find the jointly dark states of the lossy XXZ
# ring and verify that every ordered pair generates a purely oscillating
# eigenmode at the predicted frequency.
schema = 1

[job]
type = "verify-theorem1"
name = "th1-xxz4"

[model]
kind = "xxz"
n = 4
delta = 2.0
loss_sites = [1]
gammas = [1.0]

[run]
tol = 1e-8
"""

_TH3 = """\
# Eigenoperator certificate on the spin-dephased Hubbard chain:
# A = eta+ precesses at a fixed rate on the stationary state, so
# A rho_inf is a purely oscillating eigenmode.
schema = 1

[job]
type = "verify-theorem3"
name = "th3-hubbard2"

[model]
kind = "hubbard"
l_sites = 2
tau = 1.0
u = 4.0
mu = 1.0
dephasing_kind = "spin"
dephasing_gammas = [1.0, 1.0]

[run]
a_operator = "eta_plus"    # eta_plus | s_plus | custom-file
# a_file = "my_operator.txt"   # used only with a_operator = "custom-file"
rho_source = "grand-canonical" # canonical | grand-canonical
betas = [0.3, -0.2, 0.5]
tol = 1e-8
"""

_COR1 = """\
# Symmetry-generated mode ladder: rho_nm = A^n rho_inf A^dag^m for all
# n, m up to the given powers, with eigenvalue i*lambda*(n - m).
schema = 1

[job]
type = "verify-corollary1"
name = "cor1-hubbard2"

[model]
kind = "hubbard"
l_sites = 2
tau = 1.0
u = 4.0
mu = 1.0
dephasing_kind = "spin"
dephasing_gammas = [1.0, 1.0]

[run]
a_operator = "eta_plus"
rho_source = "canonical"   # canonical stationary state of the generator
n_max = 2
m_max = 2
tol = 1e-9
premise_tol = 1e-12
"""

_MULTIBLOCK = """\
# Sector support of a symmetry-generated mode: which joint (S+S-, N)
# blocks carry it, and whether it is a coherence between N sectors.
schema = 1

[job]
type = "verify-multiblock"
name = "multiblock-hubbard2"

[model]
kind = "hubbard"
l_sites = 2
tau = 1.0
u = 4.0
mu = 1.0
dephasing_kind = "spin"
dephasing_gammas = [1.0, 1.0]

[run]
a_operator = "eta_plus"
rho_source = "canonical"
n = 1
m = 0
tol = 1e-8
"""

_STATIONARY = """\
# Null space of the generator plus the canonical stationary state
# (exported in coordinate text format).
schema = 1

[job]
type = "stationary"
name = "stationary-xxz4"

[model]
kind = "xxz"
n = 4
delta = 1.1
loss_sites = [1, 2]
gammas = [1.0, 1.0]

[run]
tol = 1e-9
"""

_SCAN = """\
# Count distinct oscillation frequencies of the lossy XXZ ring vs ring
# size; rings beyond the dense cap are reported as skipped.
schema = 1

[job]
type = "scan"
name = "scan-xxz"

[model]
kind = "xxz"
n = 4            # placeholder; the scan sweeps n_list below
delta = 2.0
loss_sites = [1]
gammas = [1.0]

[run]
n_list = [3, 4, 5, 6]
"""

RECIPES: dict[str, str] = {
    "fig1a": _FIG1A,
    "fig1b": _FIG1B,
    "fig1c": _FIG1C,
    "fig2a": _FIG2A,
    "fig2b": _FIG2B,
    "th1-xxz4": _TH1,
    "th3-hubbard2": _TH3,
    "cor1-hubbard2": _COR1,
    "multiblock-hubbard2": _MULTIBLOCK,
    "stationary-xxz4": _STATIONARY,
    "scan-xxz": _SCAN,
}


def figure_recipes() -> dict[str, str]:
    """The figure-reproduction subset of :data:`RECIPES`."""
    return {k: v for k, v in RECIPES.items() if k.startswith("fig")}
